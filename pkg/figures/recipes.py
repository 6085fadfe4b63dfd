"""
Figure recipes

Each recipe pins the parameters of one dispersion plot, runs the sweeps behind
it and returns the tables plus plot descriptions.
"""

import logging
import math
from dataclasses import dataclass, field
from functools import partial
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from core.config import get_settings
from core.dependencies import get_default_medium
from dispersion.dg import energy_cfl_dg
from dispersion.fd import cfl_max_fd, semidiscrete_error_coefficient
from dispersion.models import LorentzMedium, SchemeSpec
from figures.plotting import PlotSpec, render_plot
from figures.sweeps import (
    CFL_COLUMNS,
    QUANTITY_NAMES,
    SchemeCase,
    SweepTable,
    cfl_entries,
    cfl_row,
    coefficient_point,
    contour_point,
    mesh_psi_point,
    omega_columns,
    omega_point,
    psi_point,
    quantities_point,
    run_sweep,
    temporal_point,
)
from schemas.common import FluxKind, SpatialKind, TemporalKind
from utils.errors import FitFailed, UnknownFigure
from utils.responses import write_table

logger = logging.getLogger(__name__)

# Frequency windows
FREQUENCY_GRID = np.linspace(0.0, 3.0, 151)
TEMPORAL_GRID = np.linspace(0.0, 3.0, 301)
QUANTITY_GRID = np.concatenate([np.linspace(0.05, 3.0, 60), np.linspace(3.2, 16.0, 65)])
WAVENUMBER_GRID = np.linspace(0.0, 2.0 * math.pi, 201)

# Mesh sequences
W1_TEMPORAL = (("pi15", math.pi / 15), ("pi30", math.pi / 30), ("pi60", math.pi / 60))
OMEGA1_H_REFINEMENT = (math.pi / 30, math.pi / 60, math.pi / 120, math.pi / 240)
CONTOUR_W1 = np.linspace(0.05, 0.3, 11)
CONTOUR_OMEGA1_H = np.linspace(0.01, 0.1, 10)

FD_ORDERS = (1, 2, 3, 4, 5)
DG_DEGREES = (0, 1, 2, 3)
DG_FLUXES = (FluxKind.CENTRAL, FluxKind.ALTERNATING_PLUS, FluxKind.UPWIND)
COEFFICIENT_GAMMAS = (0.0, 0.01, 0.1, 1.0)

FLUX_TAGS = {
    FluxKind.CENTRAL: "ce",
    FluxKind.ALTERNATING_PLUS: "al",
    FluxKind.ALTERNATING_MINUS: "alm",
    FluxKind.UPWIND: "up",
}


@dataclass
class FigureResult:
    """Tables, plots and headline numbers of one figure"""

    figure_id: str
    tables: Dict[str, SweepTable] = field(default_factory=dict)
    plots: List[PlotSpec] = field(default_factory=list)
    summary: Dict[str, Any] = field(default_factory=dict)

    def add(self, table: SweepTable, *plots: PlotSpec) -> SweepTable:
        self.tables[table.name] = table
        self.plots.extend(plots)
        return table

    def write(self, out_dir: Path, fmt: str = "csv", plots: bool = True) -> List[Path]:
        """Write one data file per table and one SVG per plot"""
        out_dir = Path(out_dir)
        written = []
        extension = "json" if fmt == "json" else "csv"
        for name, table in self.tables.items():
            written.append(write_table(table, out_dir / f"{name}.{extension}", extension))
        if plots:
            for spec in self.plots:
                written.append(render_plot(spec, self.tables[spec.table], out_dir / f"{spec.name}.svg"))
        logger.info(f"✅ {self.figure_id}: wrote {len(written)} files to {out_dir}")
        return written


# Helpers


def find_local_maxima(
    x: np.ndarray, y: np.ndarray, window: Optional[Tuple[float, float]] = None
) -> List[float]:
    """
    Abscissae of strict interior local maxima of y, nan entries skipped

    Args:
        x: Sample positions, increasing
        y: Sample values
        window: Open interval (lo, hi) the maxima must lie in

    Returns:
        Positions in increasing order
    """
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    keep = np.isfinite(y)
    x, y = x[keep], y[keep]
    peaks = []
    for i in range(1, len(y) - 1):
        if y[i] > y[i - 1] and y[i] >= y[i + 1]:
            if window is None or window[0] < x[i] < window[1]:
                peaks.append(float(x[i]))
    return peaks


def fit_order(h: Sequence[float], err: Sequence[float]) -> Tuple[float, float]:
    """
    Least-squares fit err = C h^q in log-log coordinates

    Returns:
        (q, C)

    Raises:
        FitFailed: fewer than two positive error samples
    """
    h, err = np.asarray(h, dtype=float), np.asarray(err, dtype=float)
    keep = np.isfinite(err) & (err > 0) & (h > 0)
    if keep.sum() < 2:
        raise FitFailed("need at least two positive errors to fit an order", operation="fit_order")
    slope, intercept = np.polyfit(np.log(h[keep]), np.log(err[keep]), 1)
    return float(slope), float(math.exp(intercept))


def _cfl_fraction() -> float:
    return get_settings().CFL_FRACTION


def _omega1_h(medium: LorentzMedium, w1: float, nu: float) -> float:
    return w1 / (math.sqrt(medium.eps_inf) * nu)


def fd_spec(temporal: TemporalKind, M: int) -> SchemeSpec:
    return SchemeSpec(temporal=temporal, spatial=SpatialKind.FD, order=M)


def dg_spec(temporal: TemporalKind, p: int, flux: FluxKind) -> SchemeSpec:
    return SchemeSpec(temporal=temporal, spatial=SpatialKind.DG, order=p, flux=flux)


def _psi_table(
    name: str, cases: Sequence[SchemeCase], medium: LorentzMedium, grid: Iterable[float], workers: Optional[int]
) -> SweepTable:
    columns = ["w_hat"] + [f"psi_{case.label}" for case in cases]
    return run_sweep(name, partial(psi_point, cases=tuple(cases), medium=medium), grid, columns, workers=workers)


def _psi_plot(table: SweepTable, title: str) -> PlotSpec:
    ys = [c for c in table.columns if c.startswith("psi")]
    return PlotSpec(name=table.name, table=table.name, x="w_hat", ys=ys, logy=True,
                    xlabel="w_hat", ylabel="relative phase error", title=title)


def _record_peaks(result: FigureResult, table: SweepTable, window: Tuple[float, float] = (0.5, 2.0)) -> None:
    x = table.column("w_hat")
    for column in table.columns:
        if column.startswith("psi"):
            result.summary[f"{table.name}.{column}.peaks"] = find_local_maxima(x, table.column(column), window)


def _convergence(
    result: FigureResult,
    name: str,
    specs: Sequence[Tuple[str, SchemeSpec]],
    medium: LorentzMedium,
    workers: Optional[int],
    w_hat: float = 1.0,
    nu: Optional[float] = None,
) -> SweepTable:
    """psi at w_hat over the refinement sequence, with fitted orders in the summary"""
    columns = ["omega1_h", "K_abs"] + [f"psi_{label}" for label, _ in specs]
    point = partial(mesh_psi_point, specs=tuple(specs), medium=medium, w_hat=w_hat, nu=nu)
    table = run_sweep(name, point, OMEGA1_H_REFINEMENT, columns, workers=workers)
    K = table.column("K_abs")
    for label, _ in specs:
        try:
            slope, coefficient = fit_order(K, table.column(f"psi_{label}"))
        except FitFailed as e:
            logger.warning(f"⚠️ {name}.{label}: {e.message}")
            continue
        result.summary[f"{name}.{label}.order"] = slope
        result.summary[f"{name}.{label}.coefficient"] = coefficient
    plot = PlotSpec(name=name, table=name, x="K_abs", ys=columns[2:], logx=True, logy=True,
                    xlabel="|K|", ylabel="relative phase error", title=f"{name} (w_hat={w_hat})")
    result.add(table, plot)
    return table


# Recipes


def fig1(medium: LorentzMedium, workers: Optional[int] = None) -> FigureResult:
    """Leap-frog and trapezoidal time discretizations; W1 in {pi/15, pi/30, pi/60}"""
    result = FigureResult("fig1")
    for tag, w1 in W1_TEMPORAL:
        point = partial(temporal_point, medium=medium, W1=w1)
        table = run_sweep(f"fig1_w1_{tag}", point, TEMPORAL_GRID, ["w_hat", "psi_lf", "psi_tp"], workers=workers)
        result.add(table, _psi_plot(table, f"LF and TP, W1 = {tag.replace('pi', 'pi/')}"))
        _record_peaks(result, table)

    # Refinement at w_hat = 1 and at the upper band edge, leap-frog
    edge = math.sqrt(medium.eps_s / medium.eps_inf)
    table = SweepTable("fig1_convergence", ["W1", "psi_resonance", "psi_band_edge"])
    for _, w1 in W1_TEMPORAL:
        at_one = temporal_point(1.0, medium=medium, W1=w1)["psi_lf"]
        at_edge = temporal_point(edge, medium=medium, W1=w1)["psi_lf"]
        table.add_row({"W1": w1, "psi_resonance": at_one, "psi_band_edge": at_edge})
    result.add(table, PlotSpec(name="fig1_convergence", table="fig1_convergence", x="W1",
                               ys=["psi_resonance", "psi_band_edge"], logx=True, logy=True))
    result.summary["fig1_convergence.order"] = fit_order(table.column("W1"), table.column("psi_resonance"))[0]
    return result


def fig2(medium: LorentzMedium, workers: Optional[int] = None) -> FigureResult:
    """Semi-discrete FD2M, omega1_h = pi/30 over w_hat in [0, 3]; refinement at w_hat = 1"""
    result = FigureResult("fig2")
    omega1_h = math.pi / 30
    cases = [SchemeCase(f"fd{2 * M}", fd_spec(TemporalKind.NONE, M), None, omega1_h) for M in FD_ORDERS]
    table = _psi_table("fig2_semidiscrete", cases, medium, FREQUENCY_GRID, workers)
    result.add(table, _psi_plot(table, "semi-discrete FD2M, omega1 h = pi/30"))
    specs = [(f"fd{2 * M}", fd_spec(TemporalKind.NONE, M)) for M in FD_ORDERS]
    _convergence(result, "fig2_convergence", specs, medium, workers)
    for M in FD_ORDERS:
        result.summary[f"fig2_convergence.fd{2 * M}.expected_coefficient"] = semidiscrete_error_coefficient(M)
    return result


def _coefficient_figure(figure_id: str, scheme: TemporalKind, medium: LorentzMedium, workers) -> FigureResult:
    # nu = 0.6 with eps = (5.25, 2.25) (text accompanying the plots)
    result = FigureResult(figure_id)
    nu = 0.6
    for gamma_hat in COEFFICIENT_GAMMAS:
        lossy = medium.model_copy(update={"gamma_hat": gamma_hat})
        name = f"{figure_id}_gamma_{gamma_hat:g}"
        point = partial(coefficient_point, scheme=scheme, medium=lossy, nu=nu)
        table = run_sweep(name, point, FREQUENCY_GRID, ["w_hat", "c_m1", "c_m2"], workers=workers)
        result.add(table, PlotSpec(name=name, table=name, x="w_hat", ys=["c_m1", "c_m2"], logy=True,
                                   ylabel="|C|", title=f"{scheme.value.upper()} leading coefficient, gamma_hat={gamma_hat:g}"))
        c1, c2 = table.column("c_m1"), table.column("c_m2")
        defined = np.isfinite(c1) & np.isfinite(c2)
        result.summary[f"{name}.high_order_wins"] = bool(np.all(c2[defined] <= c1[defined]))
    return result


def fig3(medium: LorentzMedium, workers: Optional[int] = None) -> FigureResult:
    """|C| of the leap-frog FD2M leading error, M = 1 against M >= 2"""
    return _coefficient_figure("fig3", TemporalKind.LEAPFROG, medium, workers)


def fig6(medium: LorentzMedium, workers: Optional[int] = None) -> FigureResult:
    """|C| of the trapezoidal FD2M leading error, M = 1 against M >= 2"""
    return _coefficient_figure("fig6", TemporalKind.TRAPEZOIDAL, medium, workers)


def fig4(medium: LorentzMedium, workers: Optional[int] = None) -> FigureResult:
    """Fully discrete FD2M, nu/nu_max = 0.7 and W1 = pi/30; both integrators"""
    result = FigureResult("fig4")
    w1 = math.pi / 30
    for temporal in (TemporalKind.LEAPFROG, TemporalKind.TRAPEZOIDAL):
        cases = []
        for M in FD_ORDERS:
            # the trapezoidal panel reuses the leap-frog CFL numbers
            nu = _cfl_fraction() * cfl_max_fd(M)
            cases.append(SchemeCase(f"fd{2 * M}", fd_spec(temporal, M), w1, _omega1_h(medium, w1, nu)))
        table = _psi_table(f"fig4_{temporal.value}", cases, medium, FREQUENCY_GRID, workers)
        result.add(table, _psi_plot(table, f"{temporal.value.upper()}-FD2M, nu/nu_max = 0.7, W1 = pi/30"))
        _record_peaks(result, table)
    return result


def _contour_tables(
    result: FigureResult, name: str, spec: SchemeSpec, medium: LorentzMedium, workers, w_hat: float = 1.0
) -> SweepTable:
    meshes = [(float(w1), float(h)) for w1 in CONTOUR_W1 for h in CONTOUR_OMEGA1_H]
    point = partial(contour_point, spec=spec, medium=medium, w_hat=w_hat)
    table = run_sweep(name, point, meshes, ["W1", "omega1_h", "K_abs", "W", "psi"], workers=workers)
    shape = (len(CONTOUR_W1), len(CONTOUR_OMEGA1_H))
    result.add(table, PlotSpec(name=name, table=name, kind="contour", x="K_abs", y="W", z="psi", shape=shape,
                               xlabel="|K|", ylabel="W", title=f"{spec.label}, w_hat = {w_hat:g}"))
    return table


def fig5(medium: LorentzMedium, workers: Optional[int] = None) -> FigureResult:
    """TP-FD2M contours at w_hat = 1, W1 in [0.05, 0.3], omega1_h in [0.01, 0.1]"""
    result = FigureResult("fig5")
    for M in (1, 2, 3):
        _contour_tables(result, f"fig5_fd{2 * M}", fd_spec(TemporalKind.TRAPEZOIDAL, M), medium, workers)
    return result


def fig7(medium: LorentzMedium, workers: Optional[int] = None) -> FigureResult:
    """Semi-discrete DG, omega1_h = pi/30; refinement at w_hat = 1"""
    result = FigureResult("fig7")
    omega1_h = math.pi / 30
    for flux in DG_FLUXES:
        tag = FLUX_TAGS[flux]
        cases = [SchemeCase(f"p{p}", dg_spec(TemporalKind.NONE, p, flux), None, omega1_h) for p in DG_DEGREES]
        table = _psi_table(f"fig7_{tag}", cases, medium, FREQUENCY_GRID, workers)
        result.add(table, _psi_plot(table, f"semi-discrete DG-{tag.upper()}, omega1 h = pi/30"))
        specs = [(f"p{p}", dg_spec(TemporalKind.NONE, p, flux)) for p in DG_DEGREES]
        _convergence(result, f"fig7_{tag}_convergence", specs, medium, workers)
    return result


def fig8(medium: LorentzMedium, workers: Optional[int] = None) -> FigureResult:
    """Leap-frog DG, nu/nu_max^p = 0.7, W1 in {pi/30, pi/300}"""
    result = FigureResult("fig8")
    for w1_tag, w1 in (("pi30", math.pi / 30), ("pi300", math.pi / 300)):
        for flux in DG_FLUXES:
            tag = FLUX_TAGS[flux]
            cases = []
            for p in DG_DEGREES:
                nu = _cfl_fraction() * energy_cfl_dg(p, flux)
                cases.append(SchemeCase(f"p{p}", dg_spec(TemporalKind.LEAPFROG, p, flux), w1, _omega1_h(medium, w1, nu)))
            table = _psi_table(f"fig8_{tag}_w1_{w1_tag}", cases, medium, FREQUENCY_GRID, workers)
            result.add(table, _psi_plot(table, f"LF-DG-{tag.upper()}, W1 = {w1_tag.replace('pi', 'pi/')}"))
            _record_peaks(result, table)
    return result


def fig9(medium: LorentzMedium, workers: Optional[int] = None) -> FigureResult:
    """TP-DG contours at w_hat = 1 for AL, CE and UP; degrees 1..3"""
    result = FigureResult("fig9")
    for flux in (FluxKind.ALTERNATING_PLUS, FluxKind.CENTRAL, FluxKind.UPWIND):
        for p in (1, 2, 3):
            name = f"fig9_{FLUX_TAGS[flux]}_p{p}"
            _contour_tables(result, name, dg_spec(TemporalKind.TRAPEZOIDAL, p, flux), medium, workers)
    return result


def _quantity_figure(result: FigureResult, name: str, cases: Sequence[SchemeCase], medium, workers) -> SweepTable:
    columns = ["w_hat"] + [f"{q}_{case.label}" for q in QUANTITY_NAMES for case in cases]
    point = partial(quantities_point, cases=tuple(cases), medium=medium)
    table = run_sweep(name, point, QUANTITY_GRID, columns, workers=workers)
    plots = []
    for q in QUANTITY_NAMES:
        ys = [f"{q}_{case.label}" for case in cases]
        plots.append(PlotSpec(name=f"{name}_{q}", table=name, x="w_hat", ys=ys, ylabel=q, title=f"{name}: {q}"))
    result.add(table, *plots)
    return table


def _fd_quantity_cases(temporal: TemporalKind, medium: LorentzMedium) -> List[SchemeCase]:
    # same W1 as the phase-error figures
    w1 = math.pi / 30
    cases = []
    for M in (1, 2, 3):
        nu = _cfl_fraction() * cfl_max_fd(M)
        cases.append(SchemeCase(f"fd{2 * M}", fd_spec(temporal, M), w1, _omega1_h(medium, w1, nu)))
    return cases


def fig10(medium: LorentzMedium, workers: Optional[int] = None) -> FigureResult:
    """Normalized quantities, leap-frog FD2M at nu/nu_max = 0.7"""
    result = FigureResult("fig10")
    _quantity_figure(result, "fig10", _fd_quantity_cases(TemporalKind.LEAPFROG, medium), medium, workers)
    return result


def fig11(medium: LorentzMedium, workers: Optional[int] = None) -> FigureResult:
    """Normalized quantities, trapezoidal FD2M at nu/nu_max = 0.7"""
    result = FigureResult("fig11")
    _quantity_figure(result, "fig11", _fd_quantity_cases(TemporalKind.TRAPEZOIDAL, medium), medium, workers)
    return result


def fig12(medium: LorentzMedium, workers: Optional[int] = None) -> FigureResult:
    """Normalized quantities, trapezoidal DG-AL at nu = 0.7 and DG-CE at nu/nu_max = 0.7"""
    result = FigureResult("fig12")
    w1 = math.pi / 30
    al = [
        SchemeCase(f"p{p}", dg_spec(TemporalKind.TRAPEZOIDAL, p, FluxKind.ALTERNATING_PLUS), w1, _omega1_h(medium, w1, 0.7))
        for p in DG_DEGREES
    ]
    ce = []
    for p in DG_DEGREES:
        nu = _cfl_fraction() * energy_cfl_dg(p, FluxKind.CENTRAL)
        ce.append(SchemeCase(f"p{p}", dg_spec(TemporalKind.TRAPEZOIDAL, p, FluxKind.CENTRAL), w1, _omega1_h(medium, w1, nu)))
    _quantity_figure(result, "fig12_al", al, medium, workers)
    _quantity_figure(result, "fig12_ce", ce, medium, workers)
    return result


def _omega_table(name: str, M: int, medium: LorentzMedium, omega1_h: float, workers) -> SweepTable:
    columns, complex_columns = omega_columns()
    point = partial(omega_point, M=M, medium=medium, omega1_h=omega1_h)
    return run_sweep(name, point, WAVENUMBER_GRID, columns, complex_columns=complex_columns, workers=workers)


def fig13(medium: LorentzMedium, workers: Optional[int] = None) -> FigureResult:
    """omega(k) relative errors of FD2M, gamma_hat = 0, omega1_h = pi/30, k_hat in [0, 2 pi]"""
    result = FigureResult("fig13")
    lossless = medium.lossless()
    for M in (1, 2, 3):
        name = f"fig13_fd{2 * M}"
        table = _omega_table(name, M, lossless, math.pi / 30, workers)
        result.add(
            table,
            PlotSpec(name=f"{name}_inner", table=name, x="k_hat", ys=["err_2", "err_3"], logy=True, ylabel="relative error"),
            PlotSpec(name=f"{name}_outer", table=name, x="k_hat", ys=["err_1", "err_4"], logy=True, ylabel="relative error"),
        )
    return result


def fig14(medium: LorentzMedium, workers: Optional[int] = None) -> FigureResult:
    """Real and imaginary parts of the four omega(k) branches, exact against FD2, gamma_hat = 0.01"""
    result = FigureResult("fig14")
    lossy = medium.model_copy(update={"gamma_hat": 0.01})
    table = _omega_table("fig14", 1, lossy, math.pi / 30, workers)
    branches = [f"{kind}_{i}" for i in range(1, 5) for kind in ("ex", "fd")]
    result.add(
        table,
        PlotSpec(name="fig14_re", table="fig14", x="k_hat", ys=[f"{b}_re" for b in branches], ylabel="Re w_hat"),
        PlotSpec(name="fig14_im", table="fig14", x="k_hat", ys=[f"{b}_im" for b in branches], ylabel="Im w_hat"),
    )
    return result


FIGURES: Dict[str, Callable[..., FigureResult]] = {
    "fig1": fig1,
    "fig2": fig2,
    "fig3": fig3,
    "fig4": fig4,
    "fig5": fig5,
    "fig6": fig6,
    "fig7": fig7,
    "fig8": fig8,
    "fig9": fig9,
    "fig10": fig10,
    "fig11": fig11,
    "fig12": fig12,
    "fig13": fig13,
    "fig14": fig14,
}


def run_figure(
    figure_id: str, medium: Optional[LorentzMedium] = None, workers: Optional[int] = None
) -> FigureResult:
    """
    Run one figure recipe

    Raises:
        UnknownFigure: figure_id is not a known recipe
    """
    recipe = FIGURES.get(figure_id)
    if recipe is None:
        raise UnknownFigure(
            f"unknown figure '{figure_id}'",
            operation="run_figure",
            details={"known": sorted(FIGURES, key=lambda f: int(f[3:]))},
        )
    medium = medium or get_default_medium()
    logger.info(f"🚀 Running {figure_id}")
    return recipe(medium, workers)


def cfl_table(workers: Optional[int] = None) -> SweepTable:
    """FD exact and float limits, the M -> infinity bound, DG spectral and energy-method values"""
    return run_sweep("cfl_table", cfl_row, cfl_entries(), CFL_COLUMNS, workers=workers)
