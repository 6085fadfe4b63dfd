"""
Sweep harness: parallel evaluation of per-point functions and tabular results

Point functions are module-level so that they can be shipped to worker
processes through functools.partial. A point that raises a DispersionError
becomes a row of undefined entries and is logged, the sweep carries on.
"""

import logging
import math
from concurrent.futures import Executor, ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from core.config import get_settings
from core.dependencies import get_sweep_executor
from dispersion import dg, fd, temporal
from dispersion.medium import exact_wavenumber_hat
from dispersion.models import FluxParams, LorentzMedium, SchemeSpec
from dispersion.omega_solver import omega_quartic_roots, pair_branches
from dispersion.quantities import SchemeWavenumber, quantity_row
from schemas.common import FluxKind, ModeClass, SpatialKind, TemporalKind
from utils.errors import DispersionError

logger = logging.getLogger(__name__)

UNDEF = "undef"


def parallel_map(
    fn: Callable[[Any], Any],
    items: Iterable[Any],
    workers: Optional[int] = None,
    executor: Optional[Executor] = None,
) -> List[Any]:
    """
    Map fn over items, results in input order

    Args:
        fn: Picklable callable
        items: Sweep points
        workers: Process count; None uses the shared executor or PARALLEL_WORKERS
        executor: Explicit executor, overrides workers

    Returns:
        List of results aligned with items
    """
    items = list(items)
    if executor is None and workers is None:
        executor = get_sweep_executor()
        workers = get_settings().PARALLEL_WORKERS
    if executor is not None:
        return list(executor.map(fn, items))
    if workers is None or workers <= 1 or len(items) < 2:
        return [fn(item) for item in items]
    chunksize = max(1, len(items) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=chunksize))


@dataclass
class SweepTable:
    """
    Named table of sweep rows

    Columns listed in complex_columns are split into <name>_re and <name>_im on
    output; None marks an undefined entry.
    """

    name: str
    columns: List[str]
    rows: List[Dict[str, Any]] = field(default_factory=list)
    complex_columns: Tuple[str, ...] = ()

    def add_row(self, row: Dict[str, Any]) -> None:
        unknown = set(row) - set(self.columns)
        if unknown:
            raise KeyError(f"unknown columns for table {self.name}: {sorted(unknown)}")
        self.rows.append(row)

    def extend(self, rows: Iterable[Dict[str, Any]]) -> None:
        for row in rows:
            self.add_row(row)

    @property
    def header(self) -> List[str]:
        names = []
        for column in self.columns:
            if column in self.complex_columns:
                names.extend([f"{column}_re", f"{column}_im"])
            else:
                names.append(column)
        return names

    def column(self, name: str) -> np.ndarray:
        """
        Float values of a column, undefined entries as nan

        <name>_re and <name>_im select a part of a complex column; a bare complex
        column gives its real part.
        """
        part = np.real
        base, _, suffix = name.rpartition("_")
        if base in self.complex_columns and suffix in ("re", "im"):
            name, part = base, (np.real if suffix == "re" else np.imag)
        values = []
        for row in self.rows:
            value = row.get(name)
            values.append(math.nan if value is None or isinstance(value, str) else float(part(value)))
        return np.array(values)

    def to_rows(self) -> List[Dict[str, Any]]:
        """Flat rows for CSV/JSON output"""
        flat = []
        for row in self.rows:
            out: Dict[str, Any] = {}
            for column in self.columns:
                value = row.get(column)
                if column in self.complex_columns:
                    if value is None:
                        out[f"{column}_re"] = out[f"{column}_im"] = UNDEF
                    else:
                        value = complex(value)
                        out[f"{column}_re"], out[f"{column}_im"] = value.real, value.imag
                else:
                    out[column] = _scalar(value)
            flat.append(out)
        return flat


def _scalar(value: Any) -> Any:
    if value is None:
        return UNDEF
    if isinstance(value, (bool, str, int, Fraction)):
        return str(value) if isinstance(value, Fraction) else value
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, np.integer):
        return int(value)
    return value


def _attempt(label: str, fn: Callable[..., Any], *args, **kwargs) -> Any:
    """fn(*args) or None when the analysis flags the point"""
    try:
        return fn(*args, **kwargs)
    except DispersionError as e:
        logger.warning(f"⚠️ {label}: {e.error_type} ({e.message})")
        return None


@dataclass(frozen=True)
class SchemeCase:
    """A scheme on a fixed mesh, labelled for table columns"""

    label: str
    spec: SchemeSpec
    w1: Optional[float] = None
    omega1_h: Optional[float] = None

    def wavenumber(self, medium: LorentzMedium) -> SchemeWavenumber:
        return SchemeWavenumber(self.spec, medium, self.w1, self.omega1_h)

    def mesh_k_hat(self, medium: LorentzMedium, w_hat: float) -> complex:
        """|k_ex| h at this mesh"""
        return exact_wavenumber_hat(medium, w_hat) * self.omega1_h / medium.omega_1


def scheme_psi(case: SchemeCase, medium: LorentzMedium, w_hat: float) -> float:
    k_exact = exact_wavenumber_hat(medium, w_hat)
    return temporal.relative_error(case.wavenumber(medium)(w_hat), k_exact, f"psi[{case.label}]")


# Point functions


def psi_point(w_hat: float, *, cases: Sequence[SchemeCase], medium: LorentzMedium) -> Dict[str, Any]:
    """Relative phase errors of several schemes at one frequency"""
    row: Dict[str, Any] = {"w_hat": float(w_hat)}
    for case in cases:
        row[f"psi_{case.label}"] = _attempt(f"w_hat={w_hat} {case.label}", scheme_psi, case, medium, w_hat)
    return row


def temporal_point(w_hat: float, *, medium: LorentzMedium, W1: float) -> Dict[str, Any]:
    """w_hat, psi_lf, psi_tp"""
    label = f"w_hat={w_hat} W1={W1}"
    return {
        "w_hat": float(w_hat),
        "psi_lf": _attempt(label, temporal.relative_phase_error, TemporalKind.LEAPFROG, medium, w_hat, W1),
        "psi_tp": _attempt(label, temporal.relative_phase_error, TemporalKind.TRAPEZOIDAL, medium, w_hat, W1),
    }


def physical_point(w_hat: float, *, case: SchemeCase, medium: LorentzMedium) -> Dict[str, Any]:
    """w_hat, k (complex, 1/length), psi of the physical mode"""
    k = _attempt(f"w_hat={w_hat} {case.label}", case.wavenumber(medium), w_hat)
    psi = None
    if k is not None:
        psi = _attempt(f"w_hat={w_hat}", temporal.relative_error, k, exact_wavenumber_hat(medium, w_hat))
    return {"w_hat": float(w_hat), "k_phys": k, "psi": psi}


def _mode_set(case: SchemeCase, medium: LorentzMedium, w_hat: float):
    spec = case.spec
    if spec.spatial == SpatialKind.FD:
        if spec.temporal == TemporalKind.NONE:
            return fd.solve_semidiscrete_modes(spec.order, medium, w_hat, case.omega1_h)
        nu = case.w1 / (math.sqrt(medium.eps_inf) * case.omega1_h)
        return fd.solve_fullydiscrete_modes(spec.temporal, spec.order, medium, w_hat, case.w1, nu)
    flux = FluxParams.from_kind(spec.flux, medium.eps_inf)
    w1 = None if spec.temporal == TemporalKind.NONE else case.w1
    return dg.solve_dg_modes(spec.order, flux, medium, w_hat, case.omega1_h, spec.temporal, w1)


MODE_COLUMNS = ["w_hat", "mode", "mode_class", "family", "k_hat", "residual", "psi"]


def modes_point(w_hat: float, *, case: SchemeCase, medium: LorentzMedium) -> List[Dict[str, Any]]:
    """One row per discrete mode: w_hat, mode, mode_class, family, k_hat, residual, psi (physical only)"""
    modes = _attempt(f"w_hat={w_hat} {case.label}", _mode_set, case, medium, w_hat)
    if modes is None:
        return [{"w_hat": float(w_hat), "mode": None, "mode_class": None, "family": None,
                 "k_hat": None, "residual": None, "psi": None}]
    k_exact = exact_wavenumber_hat(medium, w_hat) * case.omega1_h / medium.omega_1
    rows = []
    for index, mode in enumerate(modes.modes):
        psi = None
        if mode.mode_class == ModeClass.PHYSICAL and mode.family > 0:
            psi = _attempt(f"w_hat={w_hat}", temporal.relative_error, mode.k_hat, k_exact)
        rows.append(
            {
                "w_hat": float(w_hat),
                "mode": index,
                "mode_class": mode.mode_class.value,
                "family": mode.family,
                "k_hat": mode.k_hat,
                "residual": mode.residual,
                "psi": psi,
            }
        )
    return rows


QUANTITY_NAMES = ("npv", "nac", "nev", "ngv")


def quantities_point(w_hat: float, *, cases: Sequence[SchemeCase], medium: LorentzMedium) -> Dict[str, Any]:
    """Normalized phase velocity, attenuation, energy and group velocity per scheme"""
    row: Dict[str, Any] = {"w_hat": float(w_hat)}
    for case in cases:
        values = _attempt(f"w_hat={w_hat} {case.label}", quantity_row, case.wavenumber(medium), medium, w_hat)
        suffix = f"_{case.label}" if len(cases) > 1 else ""
        if values is None:
            for name in QUANTITY_NAMES:
                row[name + suffix] = None
            continue
        row["npv" + suffix] = values.norm_phase_velocity
        row["nac" + suffix] = values.norm_attenuation
        row["nev" + suffix] = values.norm_energy_velocity
        row["ngv" + suffix] = values.norm_group_velocity
    return row


def coefficient_point(
    w_hat: float, *, scheme: TemporalKind, medium: LorentzMedium, nu: float
) -> Dict[str, Any]:
    """|C| of the fully discrete leading error for M = 1 and M >= 2"""
    label = f"w_hat={w_hat} nu={nu}"
    c1 = _attempt(label, fd.fd_leading_coefficient, scheme, 1, medium, w_hat, nu)
    c2 = _attempt(label, fd.fd_leading_coefficient, scheme, 2, medium, w_hat, nu)
    return {
        "w_hat": float(w_hat),
        "c_m1": None if c1 is None else abs(c1),
        "c_m2": None if c2 is None else abs(c2),
    }


def contour_point(
    mesh: Tuple[float, float], *, spec: SchemeSpec, medium: LorentzMedium, w_hat: float
) -> Dict[str, Any]:
    """psi at one (W1, omega1_h) mesh; K = |k_ex| h and W = w_hat W1 for the axes"""
    w1, omega1_h = mesh
    case = SchemeCase(spec.label, spec, w1, omega1_h)
    return {
        "W1": float(w1),
        "omega1_h": float(omega1_h),
        "K_abs": float(abs(case.mesh_k_hat(medium, w_hat))),
        "W": float(w_hat * w1),
        "psi": _attempt(f"W1={w1} omega1_h={omega1_h}", scheme_psi, case, medium, w_hat),
    }


BRANCHES = (1, 2, 3, 4)


def _omega_branches(medium: LorentzMedium, k_hat: float, omega1_h: float, M: int):
    exact = omega_quartic_roots(medium, k_hat, omega1_h)
    discrete = omega_quartic_roots(medium, k_hat, omega1_h, M)
    return exact, discrete[pair_branches(exact, discrete)]


def omega_point(k_hat: float, *, M: int, medium: LorentzMedium, omega1_h: float) -> Dict[str, Any]:
    """k_hat, then per branch the exact root, the FD2M root and their relative error"""
    row: Dict[str, Any] = {"k_hat": float(k_hat)}
    paired = _attempt(f"k_hat={k_hat} M={M}", _omega_branches, medium, k_hat, omega1_h, M)
    for i in BRANCHES:
        if paired is None:
            row[f"ex_{i}"] = row[f"fd_{i}"] = row[f"err_{i}"] = None
            continue
        exact, discrete = paired[0][i - 1], paired[1][i - 1]
        row[f"ex_{i}"] = complex(exact)
        row[f"fd_{i}"] = complex(discrete)
        row[f"err_{i}"] = abs(exact - discrete) / abs(exact) if abs(exact) > 0 else None
    return row


def omega_columns() -> Tuple[List[str], Tuple[str, ...]]:
    roots = [f"{kind}_{i}" for i in BRANCHES for kind in ("ex", "fd")]
    columns = ["k_hat"] + roots + [f"err_{i}" for i in BRANCHES]
    return columns, tuple(roots)


CFL_COLUMNS = ["kind", "order", "flux", "exact", "value", "energy"]


def cfl_row(entry: Tuple[str, int, Optional[str]]) -> Dict[str, Any]:
    """
    One line of the CFL table

    entry is ("fd", M, None), ("fd", 0, "inf") for the M -> infinity bound,
    or ("dg", p, flux)
    """
    kind, order, flux = entry
    if kind == "fd":
        if flux == "inf":
            return {"kind": "fd", "order": "inf", "flux": None, "exact": "2/pi",
                    "value": fd.CFL_LIMIT_FD, "energy": None}
        return {
            "kind": "fd",
            "order": 2 * order,
            "flux": None,
            "exact": fd.cfl_max_fd_exact(order),
            "value": fd.cfl_max_fd(order),
            "energy": None,
        }
    flux_kind = FluxKind(flux)
    return {
        "kind": "dg",
        "order": order,
        "flux": flux_kind.value,
        "exact": None,
        "value": _attempt(f"dg p={order} {flux_kind.value}", dg.cfl_max_dg, order, flux_kind),
        "energy": dg.energy_cfl_dg(order, flux_kind),
    }


def cfl_entries(fd_orders: Iterable[int] = range(1, 11), dg_degrees: Iterable[int] = range(0, 4)):
    entries: List[Tuple[str, int, Optional[str]]] = [("fd", M, None) for M in fd_orders]
    entries.append(("fd", 0, "inf"))
    for flux in (FluxKind.CENTRAL, FluxKind.ALTERNATING_PLUS, FluxKind.UPWIND):
        entries.extend(("dg", p, flux.value) for p in dg_degrees)
    return entries


def run_sweep(
    name: str,
    point: Callable[[Any], Any],
    items: Iterable[Any],
    columns: List[str],
    complex_columns: Tuple[str, ...] = (),
    workers: Optional[int] = None,
) -> SweepTable:
    """Evaluate point over items and collect the rows (a point may return a list of rows)"""
    items = list(items)
    logger.info(f"Sweep {name}: {len(items)} points")
    results = parallel_map(point, items, workers)
    table = SweepTable(name=name, columns=columns, complex_columns=complex_columns)
    for result in results:
        table.extend(result if isinstance(result, list) else [result])
    return table


def mesh_psi_point(
    omega1_h: float,
    *,
    specs: Sequence[Tuple[str, SchemeSpec]],
    medium: LorentzMedium,
    w_hat: float,
    nu: Optional[float] = None,
) -> Dict[str, Any]:
    """
    psi of several schemes on one mesh, for convergence tables

    With nu given the time step follows the mesh, W1 = nu sqrt(eps_inf) omega1_h.
    """
    w1 = None if nu is None else nu * math.sqrt(medium.eps_inf) * omega1_h
    cases = [SchemeCase(label, spec, w1, omega1_h) for label, spec in specs]
    row = psi_point(w_hat, cases=cases, medium=medium)
    del row["w_hat"]
    row["omega1_h"] = float(omega1_h)
    row["K_abs"] = float(abs(exact_wavenumber_hat(medium, w_hat))) * omega1_h / medium.omega_1
    return row
