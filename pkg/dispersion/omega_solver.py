"""
Discrete angular frequency as a function of a real wavenumber

For a given k the exact relation and the semi-discrete FD2M scheme both reduce to
a quartic in w_hat. Its four roots are the branches of omega(k); the FD scheme
has no spurious branches in this description.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import linear_sum_assignment

from dispersion.fd import fd_symbol, semidiscrete_error_coefficient
from dispersion.models import LorentzMedium
from utils.errors import BranchMismatch, EigenFailed

logger = logging.getLogger(__name__)

PAIRING_TOLERANCE = 1e-12


@dataclass(frozen=True)
class QuarticCoefficients:
    """c4..c0 of w^4 + 2i g w^3 - (eps_s + X^2)/eps_inf w^2 - 2i g X^2/eps_inf w + X^2/eps_inf"""

    c4: complex
    c3: complex
    c2: complex
    c1: complex
    c0: complex
    x: float

    def as_array(self) -> np.ndarray:
        return np.array([self.c4, self.c3, self.c2, self.c1, self.c0], dtype=complex)

    def __call__(self, w_hat: complex) -> complex:
        return complex(np.polyval(self.as_array(), w_hat))


def scaled_wavenumber(k_hat: float, omega1_h: float, M: Optional[int] = None) -> float:
    """X = k/omega_1: k_hat/(omega_1 h) exactly, 2 F(k_hat)/(omega_1 h) for FD2M"""
    if omega1_h <= 0:
        raise ValueError("omega1_h must be positive")
    if M is None:
        return k_hat / omega1_h
    return 2.0 * fd_symbol(M, k_hat).real / omega1_h


def quartic_coefficients(
    medium: LorentzMedium, k_hat: float, omega1_h: float, M: Optional[int] = None
) -> QuarticCoefficients:
    x = scaled_wavenumber(k_hat, omega1_h, M)
    g, eps_inf, x2 = medium.gamma_hat, medium.eps_inf, x * x
    return QuarticCoefficients(
        c4=1.0 + 0j,
        c3=2j * g,
        c2=-(medium.eps_s + x2) / eps_inf + 0j,
        c1=-2j * g * x2 / eps_inf,
        c0=x2 / eps_inf + 0j,
        x=x,
    )


def omega_quartic_roots(
    medium: LorentzMedium, k_hat: float, omega1_h: float, M: Optional[int] = None
) -> np.ndarray:
    """
    The four w_hat roots, ordered by increasing real part

    Args:
        medium: Lorentz medium
        k_hat: Real k*h
        omega1_h: omega_1 * h
        M: FD order parameter; None for the exact relation

    Raises:
        EigenFailed: companion eigensolve failed or a root misses the residual bound
    """
    quartic = quartic_coefficients(medium, k_hat, omega1_h, M)
    coefficients = quartic.as_array()
    try:
        roots = np.roots(coefficients)
    except np.linalg.LinAlgError as e:
        raise EigenFailed(f"companion eigensolve failed: {e}", operation="omega_quartic_roots")
    scale = np.max(np.abs(coefficients)) * max(1.0, float(np.max(np.abs(roots))) ** 4)
    residual = max(abs(quartic(r)) for r in roots)
    if len(roots) != 4 or residual > 1e-10 * scale:
        raise EigenFailed(
            "quartic roots fail the residual check",
            operation="omega_quartic_roots",
            details={"residual": residual, "k_hat": k_hat},
        )
    order = np.lexsort((roots.imag, roots.real))
    return roots[order]


def lossless_roots(medium: LorentzMedium, x: float) -> np.ndarray:
    """Closed form for gamma_hat = 0: w^2 = [(eps_s + X^2) +- sqrt((eps_s + X^2)^2 - 4 eps_inf X^2)]/(2 eps_inf)"""
    a = medium.eps_s + x * x
    root = math.sqrt(a * a - 4.0 * medium.eps_inf * x * x)
    lower = math.sqrt((a - root) / (2.0 * medium.eps_inf))
    upper = math.sqrt((a + root) / (2.0 * medium.eps_inf))
    return np.array([-upper, -lower, lower, upper], dtype=complex)


def pair_branches(exact: np.ndarray, discrete: np.ndarray) -> np.ndarray:
    """
    Permutation matching each exact root to a discrete one (minimum total distance)

    Raises:
        BranchMismatch: some exact root has two discrete roots equally close
    """
    cost = np.abs(exact[:, None] - discrete[None, :])
    for i, row in enumerate(cost):
        nearest = np.sort(row)
        if nearest[1] - nearest[0] < PAIRING_TOLERANCE:
            raise BranchMismatch(
                "ambiguous branch pairing",
                operation="pair_branches",
                details={"branch": i + 1, "distances": nearest[:2].tolist()},
            )
    _, columns = linear_sum_assignment(cost)
    return columns


def omega_relative_error(M: int, medium: LorentzMedium, k_hat: float, omega1_h: float, branch: int) -> float:
    """
    |w_ex_i - w_FD_i| / |w_ex_i| for branch i in 1..4

    Branches follow the ordering of the exact roots by real part; the
    FD roots are paired with them by minimum-distance matching.
    """
    if branch not in (1, 2, 3, 4):
        raise ValueError("branch index must be 1..4")
    exact = omega_quartic_roots(medium, k_hat, omega1_h)
    discrete = omega_quartic_roots(medium, k_hat, omega1_h, M)
    matched = discrete[pair_branches(exact, discrete)]
    i = branch - 1
    return abs(exact[i] - matched[i]) / abs(exact[i])


def omega_leading_error(M: int, medium: LorentzMedium, k_hat: float, omega1_h: float, branch: int) -> float:
    """Asymptotic relative error: c_M k^2M on the inner branches (2, 3), times (eps_d/eps_s^2) X^2 on the outer ones"""
    leading = semidiscrete_error_coefficient(M) * k_hat ** (2 * M)
    if branch in (2, 3):
        return leading
    x = k_hat / omega1_h
    return leading * medium.eps_d / medium.eps_s**2 * x * x
