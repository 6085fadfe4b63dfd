"""
Command handlers and the argument parser

Every handler takes the parsed arguments and a RunContext and returns an exit
code. Tables go to --out when given, otherwise to stdout; logs go to stderr.
"""

import argparse
import json
import logging
import math
import sys
from dataclasses import dataclass
from functools import partial
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
from pydantic import ValidationError

from core import get_default_medium, get_settings
from dispersion import dg, fd
from dispersion.medium import exact_wavenumber_hat
from dispersion.models import FluxParams, LorentzMedium, SchemeSpec
from figures.plotting import PlotSpec, render_plot
from figures.recipes import cfl_table, run_figure
from figures.sweeps import (
    MODE_COLUMNS,
    QUANTITY_NAMES,
    SchemeCase,
    SweepTable,
    modes_point,
    omega_columns,
    omega_point,
    physical_point,
    quantities_point,
    run_sweep,
    temporal_point,
)
from schemas.common import FluxKind, LogLevel, ModeClass, OutputFormat, SpatialKind, TemporalKind
from schemas.requests import MeshBody, RunConfig, SchemeBody
from stepper.validation import (
    build_stepper,
    grid_for,
    kernel_residual,
    measure_phase_error,
    noise_state,
    run_stability,
)
from utils import add_system_log, write_table
from utils.errors import (
    EXIT_OK,
    EXIT_VALIDATION_FAILED,
    ConfigError,
    DispersionError,
    exit_code_for,
)
from utils.responses import rows_to_csv, rows_to_json
from utils.validation import check_cfl, load_run_config, parse_range, resolve_mesh, to_medium, to_scheme

logger = logging.getLogger(__name__)

SCHEMES = {
    "semi": TemporalKind.NONE,
    "lf": TemporalKind.LEAPFROG,
    "tp": TemporalKind.TRAPEZOIDAL,
}
DEFAULT_W1 = math.pi / 30
DEFAULT_OMEGA1_H = math.pi / 30
TWO_PI = 2.0 * math.pi

# Default sweep ranges a:b:n
TEMPORAL_RANGE = "0:3:301"
SCHEME_RANGE = "0.02:3:150"
QUANTITY_RANGE = "0.05:3:60"
WAVENUMBER_RANGE = f"0:{TWO_PI!r}:201"

# validate
KERNEL_TOLERANCE = 1e-10
PHASE_TOLERANCE = 0.01
STABILITY_MARGIN = 0.02
TP_STABILITY_NU = 5.0
WAVELENGTHS = 8


class CommandParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors are config errors (exit 3, not argparse's 2)"""

    def error(self, message):
        raise ConfigError(message, operation="parse_args")


@dataclass
class RunContext:
    """Options shared by every command, merged from --config and the flags"""

    command: str
    medium: LorentzMedium
    config: Optional[RunConfig]
    out: Optional[Path]
    fmt: OutputFormat
    allow_unstable: bool
    workers: Optional[int]

    @property
    def mesh(self) -> MeshBody:
        return self.config.mesh if self.config is not None else MeshBody()

    @property
    def scheme(self) -> SchemeBody:
        return self.config.scheme if self.config is not None else SchemeBody()


def build_context(args: argparse.Namespace) -> RunContext:
    config = load_run_config(args.config) if args.config else None
    medium = to_medium(config.medium) if config is not None else get_default_medium()
    if args.format is not None:
        fmt = OutputFormat(args.format)
    else:
        fmt = config.format if config is not None else OutputFormat.CSV
    out = args.out or (config.output if config is not None else None)
    if args.parallel is not None and args.parallel < 1:
        raise ConfigError("--parallel needs at least one worker", operation="build_context")
    return RunContext(
        command=args.command,
        medium=medium,
        config=config,
        out=Path(out) if out else None,
        fmt=fmt,
        allow_unstable=args.allow_unstable or (config.allow_unstable if config is not None else False),
        workers=args.parallel,
    )


# Shared helpers


def _sweep_range(args: argparse.Namespace, ctx: RunContext, default: str) -> np.ndarray:
    text = args.range
    if text is None and ctx.config is not None:
        text = ctx.config.range
    return parse_range(text or default)


def _temporal(args: argparse.Namespace, ctx: RunContext) -> TemporalKind:
    if args.scheme is not None:
        return SCHEMES[args.scheme]
    return ctx.scheme.temporal


def _order(value: Optional[int], ctx: RunContext, spatial: SpatialKind, default: int) -> int:
    if value is not None:
        return value
    if ctx.scheme.spatial == spatial:
        return ctx.scheme.order
    return default


def _scheme_spec(temporal: TemporalKind, spatial: SpatialKind, order: int, flux: Optional[FluxKind]) -> SchemeSpec:
    try:
        body = SchemeBody(temporal=temporal, spatial=spatial, order=order, flux=flux)
    except ValidationError as e:
        raise ConfigError(
            "invalid scheme", operation="cli.scheme", details={"errors": [err["msg"] for err in e.errors()]}
        )
    return to_scheme(body)


def leapfrog_limit(spec: SchemeSpec, medium: LorentzMedium) -> Optional[float]:
    """Sharp leap-frog CFL limit of the spatial scheme; None without one"""
    if spec.spatial == SpatialKind.FD:
        return fd.cfl_max_fd(spec.order)
    if spec.spatial == SpatialKind.DG:
        return dg.cfl_max_dg(spec.order, spec.flux, medium.eps_inf)
    return None


def _default_mesh(spec: SchemeSpec, medium: LorentzMedium) -> Dict[str, Optional[float]]:
    if spec.temporal == TemporalKind.NONE:
        return {"w1": None, "omega1_h": DEFAULT_OMEGA1_H, "nu": None}
    if spec.spatial == SpatialKind.NONE:
        return {"w1": DEFAULT_W1, "omega1_h": None, "nu": None}
    # trapezoidal runs borrow the leap-frog limit of the same spatial scheme
    nu = get_settings().CFL_FRACTION * leapfrog_limit(spec, medium)
    return {"w1": DEFAULT_W1, "omega1_h": None, "nu": nu}


def _mesh(
    args: argparse.Namespace, ctx: RunContext, spec: SchemeSpec
) -> Tuple[Optional[float], Optional[float], Optional[float]]:
    """(w1, omega1_h, nu) from the flags, then --config, then the defaults; LF runs are CFL-checked"""
    base = ctx.mesh
    values = {
        "w1": args.w1 if args.w1 is not None else base.w1,
        "omega1_h": args.omega1_h if args.omega1_h is not None else base.omega1_h,
        "nu": args.nu if args.nu is not None else base.nu,
    }
    given = [name for name, value in values.items() if value is not None]
    if not given:
        values = _default_mesh(spec, ctx.medium)
    elif len(given) == 3:
        raise ConfigError("give at most two of w1, omega1_h and nu", operation="cli.mesh")
    try:
        body = MeshBody(**values)
    except ValidationError as e:
        raise ConfigError(
            "invalid mesh", operation="cli.mesh", details={"errors": [err["msg"] for err in e.errors()]}
        )
    w1, omega1_h, nu = resolve_mesh(body, ctx.medium, spec.temporal)
    if spec.spatial != SpatialKind.NONE and omega1_h is None:
        raise ConfigError("the spatial mesh needs omega1_h, or w1 together with nu", operation="cli.mesh")
    if spec.temporal == TemporalKind.LEAPFROG:
        check_cfl(nu, leapfrog_limit(spec, ctx.medium), ctx.allow_unstable, spec.label)
    return w1, omega1_h, nu


def _emit(table: SweepTable, ctx: RunContext, plot: Optional[PlotSpec] = None) -> None:
    """Write a table to --out (or stdout); svg renders the plot and keeps the CSV beside it"""
    if ctx.fmt == OutputFormat.SVG:
        if ctx.out is None:
            raise ConfigError("--format svg needs --out", operation="emit")
        if plot is None:
            raise ConfigError(f"no plot is defined for {table.name}; use csv or json", operation="emit")
        render_plot(plot, table, ctx.out)
        write_table(table, ctx.out.with_suffix(".csv"), "csv")
        logger.info(f"✅ Wrote {ctx.out} and its data table")
        return
    if ctx.out is not None:
        write_table(table, ctx.out, ctx.fmt.value)
        logger.info(f"✅ Wrote {len(table.rows)} rows to {ctx.out}")
        return
    if ctx.fmt == OutputFormat.JSON:
        sys.stdout.write(rows_to_json(table.name, table.header, table.to_rows()))
    else:
        sys.stdout.write(rows_to_csv(table.header, table.to_rows()))


def _psi_plot(table: SweepTable, ys: List[str]) -> PlotSpec:
    return PlotSpec(name=table.name, table=table.name, x="w_hat", ys=ys, logy=True,
                    ylabel="relative phase error", title=table.name)


# Commands


def cmd_temporal_sweep(args: argparse.Namespace, ctx: RunContext) -> int:
    """Leap-frog and trapezoidal phase errors of the time discretization alone"""
    w1 = args.w1 if args.w1 is not None else (ctx.mesh.w1 or DEFAULT_W1)
    if not w1 > 0:
        raise ConfigError("--w1 must be positive", operation="temporal_sweep")
    grid = _sweep_range(args, ctx, TEMPORAL_RANGE)
    table = run_sweep(
        "temporal",
        partial(temporal_point, medium=ctx.medium, W1=w1),
        grid,
        ["w_hat", "psi_lf", "psi_tp"],
        workers=ctx.workers,
    )
    _emit(table, ctx, _psi_plot(table, ["psi_lf", "psi_tp"]))
    return EXIT_OK


def _scheme_sweep(args: argparse.Namespace, ctx: RunContext, spec: SchemeSpec) -> int:
    w1, omega1_h, _ = _mesh(args, ctx, spec)
    case = SchemeCase(spec.label, spec, w1, omega1_h)
    grid = _sweep_range(args, ctx, SCHEME_RANGE)
    if args.all_modes:
        table = run_sweep(
            f"{spec.label}_modes",
            partial(modes_point, case=case, medium=ctx.medium),
            grid,
            MODE_COLUMNS,
            ("k_hat",),
            workers=ctx.workers,
        )
        _emit(table, ctx)
    else:
        table = run_sweep(
            spec.label,
            partial(physical_point, case=case, medium=ctx.medium),
            grid,
            ["w_hat", "k_phys", "psi"],
            ("k_phys",),
            workers=ctx.workers,
        )
        _emit(table, ctx, _psi_plot(table, ["psi"]))
    return EXIT_OK


def cmd_fd_sweep(args: argparse.Namespace, ctx: RunContext) -> int:
    """Physical (or every) wavenumber of the FD2M scheme over a frequency range"""
    M = _order(args.M, ctx, SpatialKind.FD, 1)
    spec = _scheme_spec(_temporal(args, ctx), SpatialKind.FD, M, None)
    return _scheme_sweep(args, ctx, spec)


def cmd_dg_sweep(args: argparse.Namespace, ctx: RunContext) -> int:
    """Physical (or every) wavenumber of a DG scheme over a frequency range"""
    p = _order(args.p, ctx, SpatialKind.DG, 0)
    flux = FluxKind(args.flux) if args.flux else (ctx.scheme.flux or FluxKind.CENTRAL)
    spec = _scheme_spec(_temporal(args, ctx), SpatialKind.DG, p, flux)
    return _scheme_sweep(args, ctx, spec)


def cmd_quantities(args: argparse.Namespace, ctx: RunContext) -> int:
    """Normalized phase velocity, attenuation, energy velocity and group velocity"""
    spatial = SpatialKind(args.spatial) if args.spatial else ctx.scheme.spatial
    default_order = 0 if spatial == SpatialKind.DG else 1
    order = _order(args.order, ctx, spatial, default_order)
    flux = None
    if spatial == SpatialKind.DG:
        flux = FluxKind(args.flux) if args.flux else (ctx.scheme.flux or FluxKind.CENTRAL)
    spec = _scheme_spec(_temporal(args, ctx), spatial, order, flux)
    w1, omega1_h, _ = _mesh(args, ctx, spec)
    case = SchemeCase(spec.label, spec, w1, omega1_h)
    grid = _sweep_range(args, ctx, QUANTITY_RANGE)
    table = run_sweep(
        f"quantities_{spec.label}",
        partial(quantities_point, cases=(case,), medium=ctx.medium),
        grid,
        ["w_hat", *QUANTITY_NAMES],
        workers=ctx.workers,
    )
    plot = PlotSpec(name=table.name, table=table.name, x="w_hat", ys=list(QUANTITY_NAMES),
                    ylabel="normalized quantity", title=table.name)
    _emit(table, ctx, plot)
    return EXIT_OK


def cmd_omega_of_k(args: argparse.Namespace, ctx: RunContext) -> int:
    """Exact and FD2M frequency branches over real wavenumbers"""
    omega1_h = args.omega1_h if args.omega1_h is not None else (ctx.mesh.omega1_h or DEFAULT_OMEGA1_H)
    if not omega1_h > 0:
        raise ConfigError("--omega1-h must be positive", operation="omega_of_k")
    M = _order(args.M, ctx, SpatialKind.FD, 1)
    if M < 1:
        raise ConfigError("--M must be at least 1", operation="omega_of_k")
    grid = _sweep_range(args, ctx, WAVENUMBER_RANGE)
    columns, complex_columns = omega_columns()
    table = run_sweep(
        f"omega_fd{2 * M}",
        partial(omega_point, M=M, medium=ctx.medium, omega1_h=omega1_h),
        grid,
        columns,
        complex_columns,
        workers=ctx.workers,
    )
    plot = PlotSpec(name=table.name, table=table.name, x="k_hat", ys=[c for c in columns if c.startswith("err_")],
                    logy=True, ylabel="relative frequency error", title=table.name)
    _emit(table, ctx, plot)
    return EXIT_OK


def cmd_cfl_table(args: argparse.Namespace, ctx: RunContext) -> int:
    """FD and DG leap-frog CFL limits"""
    _emit(cfl_table(ctx.workers), ctx)
    return EXIT_OK


def cmd_figure(args: argparse.Namespace, ctx: RunContext) -> int:
    """Data tables and SVG plots of one figure recipe"""
    result = run_figure(args.figure_id, ctx.medium, ctx.workers)
    out_dir = ctx.out if ctx.out is not None else Path(get_settings().OUTPUT_DIR) / args.figure_id
    fmt = "json" if ctx.fmt == OutputFormat.JSON else "csv"
    result.write(out_dir, fmt, plots=True)
    sys.stdout.write(json.dumps(result.summary, sort_keys=True, indent=2, default=float) + "\n")
    return EXIT_OK


# validate


VALIDATE_COLUMNS = ["check", "value", "limit", "passed", "note"]


def _check(name: str, fn: Callable[[], float], limit: float, below: bool = True) -> Dict[str, Any]:
    """One pass/fail row; an analysis error fails the check and is noted"""
    try:
        value = fn()
    except DispersionError as e:
        logger.warning(f"⚠️ {name}: {e.error_type} ({e.message})")
        return {"check": name, "value": None, "limit": limit, "passed": False, "note": e.error_type}
    passed = value <= limit if below else value > limit
    return {"check": name, "value": value, "limit": limit, "passed": bool(passed), "note": ""}


def _physical_modes(spec: SchemeSpec, medium: LorentzMedium, w_hat: float, w1: float, omega1_h: float, nu: float):
    if spec.spatial == SpatialKind.FD:
        modes = fd.solve_fullydiscrete_modes(spec.temporal, spec.order, medium, w_hat, w1, nu)
    else:
        flux = FluxParams.from_kind(spec.flux, medium.eps_inf)
        modes = dg.solve_dg_modes(spec.order, flux, medium, w_hat, omega1_h, spec.temporal, w1)
    return [mode for mode in modes.modes if mode.mode_class == ModeClass.PHYSICAL]


def _stability_rows(spec: SchemeSpec, medium: LorentzMedium, cells: int, steps: int) -> List[Dict[str, Any]]:
    """Lossless noise runs: bounded below the leap-frog limit, blown up above it"""
    lossless = medium.lossless()
    h = DEFAULT_OMEGA1_H / lossless.omega_1
    grid = grid_for(spec, cells, h)
    root = math.sqrt(lossless.eps_inf)

    def growth(nu: float) -> float:
        stepper = build_stepper(spec, lossless, grid, nu * h * root, allow_unstable=True)
        return run_stability(stepper, noise_state(stepper), steps).max_amplitude_ratio

    threshold = 10.0
    limit = leapfrog_limit(spec, lossless)
    if limit is None:
        return [_check(f"stable at nu={TP_STABILITY_NU:g}", lambda: growth(TP_STABILITY_NU), threshold)]
    below, above = (1.0 - STABILITY_MARGIN) * limit, (1.0 + STABILITY_MARGIN) * limit
    return [
        _check(f"stable at nu={below:.6f}", lambda: growth(below), threshold),
        _check(f"blows up at nu={above:.6f}", lambda: growth(above), threshold, below=False),
    ]


def cmd_validate(args: argparse.Namespace, ctx: RunContext) -> int:
    """Cross-check the analysis against time-domain runs of the scheme"""
    temporal = _temporal(args, ctx)
    if temporal == TemporalKind.NONE:
        raise ConfigError("validate needs a fully discrete scheme (--scheme lf or tp)", operation="validate")
    spatial = SpatialKind(args.spatial) if args.spatial else (ctx.scheme.spatial or SpatialKind.FD)
    if spatial == SpatialKind.NONE:
        spatial = SpatialKind.FD
    order = _order(args.order, ctx, spatial, 0 if spatial == SpatialKind.DG else 1)
    flux = None
    if spatial == SpatialKind.DG:
        flux = FluxKind(args.flux) if args.flux else (ctx.scheme.flux or FluxKind.CENTRAL)
    spec = _scheme_spec(temporal, spatial, order, flux)
    medium = ctx.medium
    if args.cells < 4 * WAVELENGTHS or args.steps < 1:
        raise ConfigError(
            f"validate needs --cells >= {4 * WAVELENGTHS} and --steps >= 1", operation="validate"
        )

    limit = leapfrog_limit(spec, medium)
    nu = args.nu if args.nu is not None else get_settings().CFL_FRACTION * (limit or 1.0)
    if temporal == TemporalKind.LEAPFROG:
        check_cfl(nu, limit, ctx.allow_unstable, spec.label)

    # the grid holds a fixed number of exact wavelengths
    k_exact = exact_wavenumber_hat(medium, args.w)
    omega1_h = (TWO_PI * WAVELENGTHS / args.cells) * medium.omega_1 / abs(k_exact)
    h = omega1_h / medium.omega_1
    w1 = nu * math.sqrt(medium.eps_inf) * omega1_h
    stepper = build_stepper(spec, medium, grid_for(spec, args.cells, h), w1 / medium.omega_1, allow_unstable=True)
    logger.info(f"🚀 Validating {spec.label}: w_hat={args.w}, nu={nu:.6f}, cells={args.cells}")

    rows: List[Dict[str, Any]] = []
    try:
        physical = _physical_modes(spec, medium, args.w, w1, omega1_h, nu)
    except DispersionError as e:
        rows.append({"check": "physical modes", "value": None, "limit": None, "passed": False, "note": e.error_type})
        physical = []
    for mode in physical:
        sign = "+" if mode.family > 0 else "-"
        rows.append(
            _check(f"kernel residual ({sign})", lambda k=mode.k_hat: kernel_residual(stepper, k, args.w),
                   KERNEL_TOLERANCE)
        )
    rows.append(
        _check(
            "measured vs analytic psi",
            lambda: measure_phase_error(spec, medium, args.w, cells=args.cells, nu=nu).relative_gap,
            PHASE_TOLERANCE,
        )
    )
    rows.extend(_stability_rows(spec, medium, args.cells, args.steps))

    table = SweepTable(name=f"validate_{spec.label}", columns=VALIDATE_COLUMNS)
    table.extend(rows)
    print(f"{'check':<32} {'value':>14} {'limit':>12}  result")
    for row in table.to_rows():
        value = row["value"] if isinstance(row["value"], str) else f"{row['value']:.4e}"
        limit_text = row["limit"] if isinstance(row["limit"], str) else f"{row['limit']:.2e}"
        verdict = "PASS" if row["passed"] else f"FAIL {row['note']}".rstrip()
        print(f"{row['check']:<32} {value:>14} {limit_text:>12}  {verdict}")
    if ctx.out is not None:
        write_table(table, ctx.out, "json" if ctx.fmt == OutputFormat.JSON else "csv")

    failed = [row["check"] for row in rows if not row["passed"]]
    if failed:
        logger.error(f"❌ {spec.label}: {len(failed)} check(s) failed: {', '.join(failed)}")
        return EXIT_VALIDATION_FAILED
    logger.info(f"✅ {spec.label}: all {len(rows)} checks passed")
    return EXIT_OK


COMMANDS: Dict[str, Callable[[argparse.Namespace, RunContext], int]] = {
    "temporal-sweep": cmd_temporal_sweep,
    "fd-sweep": cmd_fd_sweep,
    "dg-sweep": cmd_dg_sweep,
    "quantities": cmd_quantities,
    "omega-of-k": cmd_omega_of_k,
    "cfl-table": cmd_cfl_table,
    "figure": cmd_figure,
    "validate": cmd_validate,
}


def build_parser() -> argparse.ArgumentParser:
    """Parser with one subcommand per analysis, plus serve"""
    common = CommandParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration (medium, scheme, mesh, range, output)")
    common.add_argument("--out", help="Output file (directory for figure)")
    common.add_argument("--format", choices=[f.value for f in OutputFormat], help="Output format")
    common.add_argument("--parallel", type=int, help="Worker processes for sweeps")
    common.add_argument("--allow-unstable", action="store_true", help="Permit leap-frog runs above the CFL limit")

    scheme_choices = list(SCHEMES)
    flux_choices = [f.value for f in FluxKind]

    parser = CommandParser(description="Dispersion analysis of FD and DG schemes for Maxwell-Lorentz media")
    commands = parser.add_subparsers(dest="command", required=True)

    temporal_cmd = commands.add_parser("temporal-sweep", parents=[common], help="LF/TP phase errors")
    temporal_cmd.add_argument("--w1", type=float, help="omega_1 * dt")
    temporal_cmd.add_argument("--range", help="w_hat range a:b:n")

    def mesh_flags(sub):
        sub.add_argument("--w1", type=float, help="omega_1 * dt")
        sub.add_argument("--nu", type=float, help="CFL number")
        sub.add_argument("--omega1-h", dest="omega1_h", type=float, help="omega_1 * h")
        sub.add_argument("--range", help="w_hat range a:b:n")

    fd_cmd = commands.add_parser("fd-sweep", parents=[common], help="FD2M wavenumbers over w_hat")
    fd_cmd.add_argument("--scheme", choices=scheme_choices)
    fd_cmd.add_argument("--M", type=int, help="Order parameter (order 2M)")
    fd_cmd.add_argument("--all-modes", action="store_true", help="One row per discrete mode")
    mesh_flags(fd_cmd)

    dg_cmd = commands.add_parser("dg-sweep", parents=[common], help="DG wavenumbers over w_hat")
    dg_cmd.add_argument("--scheme", choices=scheme_choices)
    dg_cmd.add_argument("--p", type=int, help="Polynomial degree")
    dg_cmd.add_argument("--flux", choices=flux_choices)
    dg_cmd.add_argument("--all-modes", action="store_true", help="One row per discrete mode")
    mesh_flags(dg_cmd)

    quantities_cmd = commands.add_parser("quantities", parents=[common], help="Normalized physical quantities")
    quantities_cmd.add_argument("--scheme", choices=scheme_choices)
    quantities_cmd.add_argument("--spatial", choices=[s.value for s in SpatialKind])
    quantities_cmd.add_argument("--order", type=int, help="M for FD, p for DG")
    quantities_cmd.add_argument("--flux", choices=flux_choices)
    mesh_flags(quantities_cmd)

    omega_cmd = commands.add_parser("omega-of-k", parents=[common], help="omega(k) branches, exact and FD2M")
    omega_cmd.add_argument("--M", type=int, help="Order parameter")
    omega_cmd.add_argument("--omega1-h", dest="omega1_h", type=float, help="omega_1 * h")
    omega_cmd.add_argument("--range", help="k_hat range a:b:n")

    commands.add_parser("cfl-table", parents=[common], help="Leap-frog CFL limits")

    figure_cmd = commands.add_parser("figure", parents=[common], help="Run a figure recipe")
    figure_cmd.add_argument("figure_id", help="fig1 .. fig14")

    validate_cmd = commands.add_parser("validate", parents=[common], help="Time-domain cross-checks")
    validate_cmd.add_argument("--scheme", choices=["lf", "tp"])
    validate_cmd.add_argument("--spatial", choices=["fd", "dg"])
    validate_cmd.add_argument("--order", type=int, help="M for FD, p for DG")
    validate_cmd.add_argument("--flux", choices=flux_choices)
    validate_cmd.add_argument("--nu", type=float, help="CFL number of the phase and kernel checks")
    validate_cmd.add_argument("--w", type=float, default=0.5, help="w_hat of the plane wave")
    validate_cmd.add_argument("--cells", type=int, default=256, help="Periodic grid size")
    validate_cmd.add_argument("--steps", type=int, default=2000, help="Steps of each stability run")

    serve_cmd = commands.add_parser("serve", help="Run the HTTP API")
    serve_cmd.add_argument("--host", default="127.0.0.1", help="Host to bind to")
    serve_cmd.add_argument("--port", type=int, default=6789, help="Port to bind to")
    serve_cmd.add_argument("--reload", action="store_true", help="Enable auto-reload")
    serve_cmd.add_argument("--out", help="Output directory for figure requests")

    return parser


def run_command(args: argparse.Namespace) -> int:
    """
    Run a parsed non-serve command

    Returns:
        Exit code: 0 success, 2 failed validation check, 3 config error, 1 other analysis error
    """
    handler = COMMANDS[args.command]
    try:
        ctx = build_context(args)
        code = handler(args, ctx)
    except DispersionError as e:
        code = exit_code_for(e)
        add_system_log(
            LogLevel.ERROR.value,
            e.component,
            e.message,
            {"command": args.command, "error_type": e.error_type, "operation": e.operation},
        )
        logger.error(f"❌ {e.error_type} in {e.operation}: {e.message}")
        print(f"error: {e.message}", file=sys.stderr)
        return code
    add_system_log(LogLevel.INFO.value, "cli", f"{args.command} finished", {"exit_code": code})
    return code
