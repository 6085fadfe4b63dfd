"""
Time-discretized dispersion for the leap-frog and trapezoidal integrators.

Both schemes see the medium through a modified frequency w_hat * r_omega and a
rescaled permittivity; the leading errors are second order in W = omega * dt.
"""

import logging
import math

import numpy as np

from core.config import get_settings
from dispersion.medium import (
    delta,
    exact_wavenumber_hat,
    lorentz_permittivity,
    principal_root,
    relative_permittivity,
)
from dispersion.models import ComplexWavenumber, LorentzMedium, ModifiedParams
from schemas.common import TemporalKind
from utils.errors import PoleAtResonance, TanPole, ZeroExactWavenumber

logger = logging.getLogger(__name__)


def s_omega(W: float) -> float:
    """sin(W/2)/(W/2), equal to 1 at W = 0"""
    return float(np.sinc(W / (2.0 * math.pi)))


def r_omega(W: float) -> float:
    """
    tan(W/2)/(W/2), equal to 1 at W = 0

    Raises:
        TanPole: W within 1e-12 of an odd multiple of pi
    """
    if abs(math.remainder(W - math.pi, 2.0 * math.pi)) < get_settings().TAN_POLE_RADIUS:
        raise TanPole(f"tan(W/2) has a pole at W = {W!r}", operation="r_omega", details={"W": W})
    if W == 0:
        return 1.0
    half = W / 2.0
    return math.tan(half) / half


def modified_params(
    scheme: TemporalKind, medium: LorentzMedium, w_hat: float, W1: float
) -> ModifiedParams:
    """Frequency and permittivity parameters seen through the time discretization"""
    scheme = TemporalKind(scheme)
    W = w_hat * W1
    s, r = s_omega(W), r_omega(W)
    scale = s * s if scheme == TemporalKind.LEAPFROG else r * r
    return ModifiedParams(
        w_hat_mod=w_hat * r,
        eps_s_mod=medium.eps_s * scale,
        eps_inf_mod=medium.eps_inf * scale,
        gamma_hat_mod=medium.gamma_hat,
    )


def _modified_permittivity(params: ModifiedParams, operation: str) -> complex:
    if params.gamma_hat_mod == 0 and abs(params.w_hat_mod - 1.0) < get_settings().POLE_RADIUS:
        raise PoleAtResonance(
            "modified frequency w_hat * r_omega sits on the resonance",
            operation=operation,
            details={"w_hat_mod": params.w_hat_mod},
        )
    return lorentz_permittivity(
        params.eps_s_mod, params.eps_inf_mod, params.gamma_hat_mod, params.w_hat_mod
    )


def semidiscrete_wavenumber(
    scheme: TemporalKind, medium: LorentzMedium, w_hat: float, W1: float
) -> ComplexWavenumber:
    """
    Wavenumber of the time-discretized (space-continuous) system

    Args:
        scheme: LeapFrog or Trapezoidal
        medium: Lorentz medium
        w_hat: Relative frequency
        W1: omega_1 * dt

    Returns:
        k^LF = omega sqrt(eps(w r; s^2 p)) or k^TP = omega sqrt(eps(w r; r^2 p))

    Raises:
        TanPole: w_hat * W1 at an odd multiple of pi
        PoleAtResonance: w_hat * r_omega = 1 for a lossless medium
    """
    scheme = TemporalKind(scheme)
    if scheme == TemporalKind.NONE:
        return ComplexWavenumber(exact_wavenumber_hat(medium, w_hat))
    params = modified_params(scheme, medium, w_hat, W1)
    eps_mod = _modified_permittivity(params, "semidiscrete_wavenumber")
    omega = w_hat * medium.omega_1
    return ComplexWavenumber(value=omega * principal_root(eps_mod), branch=1)


def scheme_wavenumber(scheme: TemporalKind, medium: LorentzMedium, w_hat: float, W1: float) -> complex:
    return semidiscrete_wavenumber(scheme, medium, w_hat, W1).value


def relative_phase_error(
    scheme: TemporalKind, medium: LorentzMedium, w_hat: float, W1: float
) -> float:
    """|k* - k_ex| / |k_ex| on the principal branches"""
    k_exact = exact_wavenumber_hat(medium, w_hat)
    if abs(k_exact) < 1e-14:
        raise ZeroExactWavenumber(
            "exact wavenumber vanishes; the relative error is undefined",
            operation="relative_phase_error",
            details={"w_hat": w_hat},
        )
    k_scheme = scheme_wavenumber(scheme, medium, w_hat, W1)
    return abs(k_scheme - k_exact) / abs(k_exact)


def leading_error_coefficient(scheme: TemporalKind, medium: LorentzMedium, w_hat: float) -> complex:
    """W^2 coefficient of k*/k_ex - 1: (delta/eps - 1/2)/12 (LF), (delta/eps + 1)/12 (TP)"""
    scheme = TemporalKind(scheme)
    ratio = delta(medium, w_hat) / relative_permittivity(medium, w_hat)
    shift = -0.5 if scheme == TemporalKind.LEAPFROG else 1.0
    return (ratio + shift) / 12.0


def relative_error(k_scheme: complex, k_exact: complex, operation: str = "relative_error") -> float:
    """|k_scheme - k_exact| / |k_exact|"""
    if abs(k_exact) < 1e-14:
        raise ZeroExactWavenumber(
            "exact wavenumber vanishes; the relative error is undefined", operation=operation
        )
    return abs(k_scheme - k_exact) / abs(k_exact)
