"""Lorentz permittivity, exact dispersion relation and the delta quantity"""

import logging
import math

import numpy as np

from core.config import get_settings
from dispersion.models import ComplexWavenumber, LorentzMedium
from utils.errors import PoleAtResonance

logger = logging.getLogger(__name__)


def _check_pole(medium: LorentzMedium, w_hat: float, operation: str) -> None:
    radius = get_settings().POLE_RADIUS
    if medium.gamma_hat == 0 and abs(w_hat - 1.0) < radius:
        raise PoleAtResonance(
            f"lossless permittivity has a pole at w_hat = 1 (got {w_hat!r})",
            operation=operation,
            details={"w_hat": float(w_hat)},
        )


def lorentz_permittivity(eps_s: float, eps_inf: float, gamma_hat: float, w_hat) -> complex:
    """eps_inf - eps_d / (w^2 + 2i gamma w - 1) without pole checks"""
    w = complex(w_hat)
    return complex(eps_inf - (eps_s - eps_inf) / (w * w + 2j * gamma_hat * w - 1.0))


def relative_permittivity(medium: LorentzMedium, w_hat: float) -> complex:
    """
    Complex relative permittivity of the medium

    Args:
        medium: Lorentz medium
        w_hat: Frequency relative to the resonance

    Returns:
        eps(w_hat)

    Raises:
        PoleAtResonance: gamma_hat = 0 and w_hat within the pole radius of 1
    """
    _check_pole(medium, w_hat, "relative_permittivity")
    return lorentz_permittivity(medium.eps_s, medium.eps_inf, medium.gamma_hat, w_hat)


def delta(medium: LorentzMedium, w_hat: float) -> complex:
    """eps_d w (w + i gamma) / (w^2 + 2i gamma w - 1)^2, equal to w eps'(w) / 2"""
    _check_pole(medium, w_hat, "delta")
    w = complex(w_hat)
    g = medium.gamma_hat
    denominator = w * w + 2j * g * w - 1.0
    return complex(medium.eps_d * w * (w + 1j * g) / denominator**2)


def principal_root(value: complex) -> complex:
    """sqrt with Re >= 0 and, on the imaginary axis, Im >= 0"""
    root = complex(np.sqrt(complex(value)))
    if root.real < 0 or (root.real == 0 and root.imag < 0):
        root = -root
    # -0.0 parts print as negative zeros in the CSV output
    return complex(root.real + 0.0, root.imag + 0.0)


def exact_wavenumber(medium: LorentzMedium, omega: float) -> ComplexWavenumber:
    """
    Exact wavenumber k = omega sqrt(eps) on the principal branch

    Args:
        medium: Lorentz medium
        omega: Angular frequency (>= 0, scaled units)

    Returns:
        ComplexWavenumber with Re >= 0 and Im >= 0 for lossy media
    """
    if omega < 0:
        raise ValueError("negative frequencies are not supported")
    w_hat = omega / medium.omega_1
    eps = relative_permittivity(medium, w_hat)
    return ComplexWavenumber(value=omega * principal_root(eps), branch=1)


def exact_wavenumber_hat(medium: LorentzMedium, w_hat: float) -> complex:
    """Exact wavenumber at relative frequency w_hat"""
    return exact_wavenumber(medium, w_hat * medium.omega_1).value


def exact_group_slowness(medium: LorentzMedium, w_hat: float) -> complex:
    """Analytic dk/domega = sqrt(eps) (1 + delta/eps)"""
    eps = relative_permittivity(medium, w_hat)
    return principal_root(eps) * (1.0 + delta(medium, w_hat) / eps)


def absorption_band(medium: LorentzMedium) -> tuple:
    """Nominal absorption band [1, sqrt(eps_s/eps_inf)] in w_hat units"""
    return 1.0, math.sqrt(medium.eps_s / medium.eps_inf)
