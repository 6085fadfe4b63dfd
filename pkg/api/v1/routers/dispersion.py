"""
Dispersion analysis endpoints
Phase errors, discrete mode sets, physical quantities, omega(k) branches and CFL limits
"""

import logging
from typing import Any, Dict, List, Optional

from fastapi import APIRouter, Query
from fastapi.concurrency import run_in_threadpool

from core import get_default_medium
from dispersion import dg, fd
from dispersion.models import FluxParams, LorentzMedium, ModeSet
from figures.sweeps import (
    SchemeCase,
    SweepTable,
    cfl_entries,
    cfl_row,
    omega_columns,
    omega_point,
    quantities_point,
    temporal_point,
    CFL_COLUMNS,
    QUANTITY_NAMES,
)
from schemas.common import FluxKind, LogLevel, TemporalKind
from schemas.requests import DGModesRequest, FDModesRequest, OmegaRequest, QuantitiesRequest, TemporalRequest
from utils import add_system_log, create_success_response
from utils.errors import ConfigError, DispersionError, InvalidMedium, error_response_from
from utils.responses import complex_pair
from utils.validation import resolve_mesh, to_medium, to_scheme

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/dispersion", tags=["dispersion"])


def _medium(body) -> LorentzMedium:
    return to_medium(body, get_default_medium())


def _failure(error: DispersionError):
    add_system_log(
        LogLevel.ERROR.value,
        error.component,
        error.message,
        {"error_type": error.error_type, "operation": error.operation},
    )
    logger.warning(f"⚠️ {error.error_type} in {error.operation}: {error.message}")
    return error_response_from(error)


def _mode_payload(modes: ModeSet) -> Dict[str, Any]:
    return {
        "w_hat": modes.w_hat,
        "omega1_h": modes.omega1_h,
        "count": len(modes.modes),
        "count_expected": modes.count_expected,
        "max_residual": modes.max_residual,
        "modes": [
            {
                "k_hat": complex_pair(mode.k_hat),
                "mode_class": mode.mode_class.value,
                "family": mode.family,
                "residual": mode.residual,
            }
            for mode in modes.modes
        ],
    }


def _table(name: str, columns: List[str], rows: List[Dict[str, Any]], complex_columns=()) -> List[Dict[str, Any]]:
    table = SweepTable(name=name, columns=columns, complex_columns=tuple(complex_columns))
    table.extend(rows)
    return table.to_rows()


@router.post("/temporal")
async def temporal_phase_error(request: TemporalRequest):
    """Leap-frog and trapezoidal relative phase errors over a frequency list"""
    try:
        medium = _medium(request.medium)
        rows = [temporal_point(w, medium=medium, W1=request.w1) for w in request.w_hat]
        return create_success_response(
            {"w1": request.w1, "rows": _table("temporal", ["w_hat", "psi_lf", "psi_tp"], rows)}
        )
    except DispersionError as e:
        return _failure(e)


@router.post("/fd/modes")
async def fd_modes(request: FDModesRequest):
    """All 4M-2 wavenumbers of the FD2M scheme at one frequency"""
    try:
        medium = _medium(request.medium)
        w1, omega1_h, nu = resolve_mesh(request.mesh, medium, request.scheme)
        if omega1_h is None:
            raise ConfigError("FD modes need omega1_h (or w1 and nu)", operation="fd_modes")
        if request.scheme == TemporalKind.NONE:
            modes = await run_in_threadpool(fd.solve_semidiscrete_modes, request.M, medium, request.w_hat, omega1_h)
        else:
            modes = await run_in_threadpool(
                fd.solve_fullydiscrete_modes, request.scheme, request.M, medium, request.w_hat, w1, nu
            )
        return create_success_response(_mode_payload(modes))
    except DispersionError as e:
        return _failure(e)


@router.post("/dg/modes")
async def dg_modes(request: DGModesRequest):
    """Every DG wavenumber at one frequency, physical pair tagged"""
    try:
        medium = _medium(request.medium)
        w1, omega1_h, _ = resolve_mesh(request.mesh, medium, request.scheme)
        if omega1_h is None:
            raise ConfigError("DG modes need omega1_h (or w1 and nu)", operation="dg_modes")
        flux = FluxParams.from_kind(request.flux, medium.eps_inf)
        modes = await run_in_threadpool(
            dg.solve_dg_modes, request.p, flux, medium, request.w_hat, omega1_h, request.scheme, w1
        )
        return create_success_response(_mode_payload(modes))
    except DispersionError as e:
        return _failure(e)


@router.post("/quantities")
async def physical_quantities(request: QuantitiesRequest):
    """Normalized phase velocity, attenuation, energy velocity and group velocity"""
    try:
        medium = _medium(request.medium)
        spec = to_scheme(request.scheme)
        w1, omega1_h, _ = resolve_mesh(request.mesh, medium, spec.temporal)
        case = SchemeCase(spec.label, spec, w1, omega1_h)
        rows = await run_in_threadpool(
            lambda: [quantities_point(w, cases=(case,), medium=medium) for w in request.w_hat]
        )
        return create_success_response(
            {"scheme": spec.label, "rows": _table("quantities", ["w_hat", *QUANTITY_NAMES], rows)}
        )
    except DispersionError as e:
        return _failure(e)


@router.post("/omega")
async def omega_of_k(request: OmegaRequest):
    """Exact and FD2M frequency branches for real wavenumbers"""
    try:
        medium = _medium(request.medium)
        rows = [omega_point(k, M=request.M, medium=medium, omega1_h=request.omega1_h) for k in request.k_hat]
        columns, complex_columns = omega_columns()
        return create_success_response({"M": request.M, "rows": _table("omega", columns, rows, complex_columns)})
    except DispersionError as e:
        return _failure(e)


@router.get("/cfl")
async def cfl_limits(
    kind: Optional[str] = Query(None, description="fd or dg; the full table when omitted"),
    order: Optional[int] = Query(None, ge=0, description="FD order parameter M or DG degree p"),
    flux: Optional[FluxKind] = Query(None, description="DG flux"),
):
    """CFL limits of the leap-frog schemes"""
    try:
        if kind is None:
            rows = await run_in_threadpool(lambda: [cfl_row(entry) for entry in cfl_entries()])
        elif kind == "fd" and order is not None and order >= 1:
            rows = [cfl_row(("fd", order, None))]
        elif kind == "dg" and order is not None and flux is not None:
            rows = [await run_in_threadpool(cfl_row, ("dg", order, flux.value))]
        else:
            raise ConfigError("give kind=fd with order >= 1, or kind=dg with order and flux", operation="cfl_limits")
        return create_success_response({"rows": _table("cfl", CFL_COLUMNS, rows)})
    except DispersionError as e:
        return _failure(e)


@router.get("/comparison-region")
async def comparison_region(
    nu: float = Query(..., gt=0, description="CFL number"),
    eps_s: Optional[float] = Query(None, description="Static permittivity; default medium when omitted"),
    eps_inf: Optional[float] = Query(None, description="Infinite-frequency permittivity"),
):
    """Frequencies where leap-frog FD2M with M >= 2 has the smaller leading error"""
    try:
        medium = get_default_medium()
        eps_s = medium.eps_s if eps_s is None else eps_s
        eps_inf = medium.eps_inf if eps_inf is None else eps_inf
        if not eps_s > eps_inf > 0:
            raise InvalidMedium("need eps_s > eps_inf > 0", operation="comparison_region")
        ratio = (eps_s - eps_inf) / eps_inf
        region = fd.fd_lf_comparison_region(nu, ratio)
        return create_success_response(
            {
                "nu": nu,
                "eps_ratio": ratio,
                "kind": region.kind,
                "lo": region.lo,
                "hi": None if region.hi == float("inf") else region.hi,
            }
        )
    except DispersionError as e:
        return _failure(e)
