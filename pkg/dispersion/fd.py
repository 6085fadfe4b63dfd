"""
Staggered finite differences of order 2M: stencils, symbols, mode solves, CFL limits
and the leading-error comparison between M = 1 and M >= 2.
"""

import logging
import math
from fractions import Fraction
from functools import lru_cache
from typing import Callable, List

import numpy as np
from scipy.optimize import newton

from core.config import get_settings
from dispersion.medium import delta, exact_wavenumber_hat, relative_permittivity
from dispersion.models import ComparisonRegion, FDStencil, LorentzMedium, Mode, ModeSet
from dispersion.modes import continue_physical
from dispersion.temporal import relative_error, scheme_wavenumber
from schemas.common import ModeClass, TemporalKind
from utils.errors import InvalidCFL, OrderTooLarge, RootSolveFailed

logger = logging.getLogger(__name__)

MAX_ORDER = 16
CFL_LIMIT_FD = 2.0 / math.pi


def double_factorial(n: int) -> int:
    """n!! for odd n >= -1 ((-1)!! = 1)"""
    result = 1
    while n > 1:
        result *= n
        n -= 2
    return result


@lru_cache(maxsize=None)
def lambda_coeffs(M: int) -> FDStencil:
    """
    Exact staggered FD2M coefficients

    lambda_{2p-1} = (-1)^{p+1} [(2M-1)!!]^2 / (2^{2M-2} (M+p-1)! (M-p)! (2p-1)),
    so that the difference weights are lambda_{2p-1}/(2p-1).

    Raises:
        OrderTooLarge: M outside 1..16
    """
    if not 1 <= M <= MAX_ORDER:
        raise OrderTooLarge(f"M must be in 1..{MAX_ORDER}, got {M}", operation="lambda_coeffs")
    top = double_factorial(2 * M - 1) ** 2
    lambdas = []
    taylor = []
    for p in range(1, M + 1):
        denominator = 2 ** (2 * M - 2) * math.factorial(M + p - 1) * math.factorial(M - p) * (2 * p - 1)
        lambdas.append(Fraction((-1) ** (p + 1) * top, denominator))
        taylor.append(Fraction(double_factorial(2 * p - 3) ** 2, math.factorial(2 * p - 1)))
    return FDStencil(M=M, lambdas=tuple(lambdas), taylor=tuple(taylor))


def difference_weights(M: int) -> np.ndarray:
    """Weights w_p of (1/h) sum_p w_p (u_{j+p-1/2} - u_{j-p+1/2})"""
    stencil = lambda_coeffs(M)
    return np.array([float(lam / (2 * p - 1)) for p, lam in enumerate(stencil.lambdas, start=1)])


def stencil_identities(stencil: FDStencil) -> List[Fraction]:
    """Moments sum_p lambda_p (2p-1)^{2l} for l = 0..M"""
    return [
        sum((lam * (2 * p - 1) ** (2 * ell) for p, lam in enumerate(stencil.lambdas, start=1)), Fraction(0))
        for ell in range(stencil.M + 1)
    ]


def fd_symbol(M: int, k_hat: complex) -> complex:
    """F(k) = sum_p [(2p-3)!!]^2/(2p-1)! sin^{2p-1}(k/2); F = K/2 on the physical mode"""
    s = np.sin(np.asarray(k_hat, dtype=complex) / 2.0)
    coefficients = lambda_coeffs(M).taylor_float
    total = np.zeros_like(s)
    for p, c in enumerate(coefficients, start=1):
        total = total + c * s ** (2 * p - 1)
    return complex(total) if total.ndim == 0 else total


def fd_symbol_lambda(M: int, k_hat: complex) -> complex:
    """Same symbol from the stencil: sum_p lambda_p/(2p-1) sin((2p-1)k/2)"""
    k = np.asarray(k_hat, dtype=complex)
    total = np.zeros_like(k)
    for p, weight in enumerate(difference_weights(M), start=1):
        total = total + weight * np.sin((2 * p - 1) * k / 2.0)
    return complex(total) if total.ndim == 0 else total


def _fd_symbol_derivative(M: int, k_hat: complex) -> complex:
    s = np.sin(k_hat / 2.0)
    c = np.cos(k_hat / 2.0)
    total = 0j
    for p, coefficient in enumerate(lambda_coeffs(M).taylor_float, start=1):
        total += coefficient * (2 * p - 1) * s ** (2 * p - 2) * c / 2.0
    return complex(total)


def cfl_max_fd_exact(M: int) -> Fraction:
    return 1 / sum(lambda_coeffs(M).taylor, Fraction(0))


def cfl_max_fd(M: int) -> float:
    """Largest stable leap-frog CFL number, 1 / sum_p [(2p-3)!!]^2/(2p-1)!"""
    return float(cfl_max_fd_exact(M))


def _sin_roots(M: int, half_rhs: complex) -> np.ndarray:
    coefficients = lambda_coeffs(M).taylor_float
    degree = 2 * M - 1
    poly = np.zeros(degree + 1, dtype=complex)
    for p, c in enumerate(coefficients, start=1):
        poly[degree - (2 * p - 1)] = c
    poly[degree] = -half_rhs
    try:
        return np.roots(poly)
    except np.linalg.LinAlgError as e:
        raise RootSolveFailed(f"companion eigensolve failed: {e}", operation="fd_roots")


def _polish(M: int, k0: complex, half_rhs: complex) -> complex:
    def residual(k):
        return fd_symbol(M, k) - half_rhs

    tol = get_settings().ROOT_TOLERANCE
    try:
        polished = complex(
            newton(residual, k0, fprime=lambda k: _fd_symbol_derivative(M, k), tol=tol, maxiter=50, disp=False)
        )
    except (RuntimeError, ZeroDivisionError, OverflowError):
        return k0
    if not np.isfinite(polished) or abs(residual(polished)) > abs(residual(k0)):
        logger.debug(f"Newton polish rejected for k0={k0}")
        return k0
    return polished


def fd_wavenumber_roots(M: int, K: complex) -> np.ndarray:
    """All 2M-1 roots k of F(k) = K/2 (the + family)"""
    s_roots = _sin_roots(M, K / 2.0)
    return np.array([_polish(M, complex(2.0 * np.arcsin(s)), K / 2.0) for s in s_roots])


def _mode_set(M: int, K: complex, roots_at: Callable[[float], np.ndarray], w_hat: float, omega1_h: float) -> ModeSet:
    roots = roots_at(1.0)
    physical = continue_physical(roots_at, K, roots=roots)
    scale = max(abs(K) / 2.0, 1e-300)
    modes = []
    for index, k in enumerate(roots):
        mode_class = ModeClass.PHYSICAL if index == physical else ModeClass.SPURIOUS
        residual = abs(fd_symbol(M, k) - K / 2.0) / scale
        modes.append(Mode(k_hat=complex(k), mode_class=mode_class, residual=residual, family=1))
        modes.append(Mode(k_hat=-complex(k), mode_class=mode_class, residual=residual, family=-1))
    modes.sort(key=lambda m: (m.mode_class != ModeClass.PHYSICAL, abs(m.k_hat.real), abs(m.k_hat.imag), -m.family))
    return ModeSet(modes=modes, w_hat=w_hat, omega1_h=omega1_h, count_expected=4 * M - 2, reference=K)


def solve_semidiscrete_modes(M: int, medium: LorentzMedium, w_hat: float, omega1_h: float) -> ModeSet:
    """
    All 4M-2 wavenumbers of the semi-discrete FD2M scheme

    Args:
        M: Order parameter
        medium: Lorentz medium
        w_hat: Relative frequency
        omega1_h: omega_1 * h

    Returns:
        ModeSet with k*h values, the physical pair tagged
    """
    K = exact_wavenumber_hat(medium, w_hat) * omega1_h / medium.omega_1
    return _mode_set(M, K, lambda t: fd_wavenumber_roots(M, K * t), w_hat, omega1_h)


def solve_fullydiscrete_modes(
    scheme: TemporalKind, M: int, medium: LorentzMedium, w_hat: float, W1: float, nu: float
) -> ModeSet:
    """Fully discrete (2, 2M) modes: K replaced by k* h of the time integrator"""
    omega1_h = W1 / (math.sqrt(medium.eps_inf) * nu)
    K = scheme_wavenumber(scheme, medium, w_hat, W1) * omega1_h / medium.omega_1
    return _mode_set(M, K, lambda t: fd_wavenumber_roots(M, K * t), w_hat, omega1_h)


def physical_wavenumber(
    scheme: TemporalKind, M: int, medium: LorentzMedium, w_hat: float, W1: float, omega1_h: float
) -> complex:
    """Physical k (1/length) of the (2, 2M) scheme; TemporalKind.NONE gives the semi-discrete one"""
    scheme = TemporalKind(scheme)
    if scheme == TemporalKind.NONE:
        modes = solve_semidiscrete_modes(M, medium, w_hat, omega1_h)
    else:
        nu = W1 / (math.sqrt(medium.eps_inf) * omega1_h)
        modes = solve_fullydiscrete_modes(scheme, M, medium, w_hat, W1, nu)
    return modes.physical.k_hat * medium.omega_1 / omega1_h


def relative_phase_error(
    scheme: TemporalKind, M: int, medium: LorentzMedium, w_hat: float, W1: float, omega1_h: float
) -> float:
    k_exact = exact_wavenumber_hat(medium, w_hat)
    k_scheme = physical_wavenumber(scheme, M, medium, w_hat, W1, omega1_h)
    return relative_error(k_scheme, k_exact, "fd.relative_phase_error")


def semidiscrete_error_coefficient(M: int) -> float:
    """[(2M-1)!!]^2 / (2^{2M} (2M+1)!), the K^{2M} coefficient of k/k_ex - 1"""
    return double_factorial(2 * M - 1) ** 2 / (2 ** (2 * M) * math.factorial(2 * M + 1))


def fd_leading_coefficient(
    scheme: TemporalKind, M: int, medium: LorentzMedium, w_hat: float, nu: float
) -> complex:
    """
    W^2 coefficient of k*_{FD,2M}/k_ex - 1

    LF: (delta/eps - 1/2 [+ eps/(2 eps_inf nu^2) when M = 1])/12
    TP: (delta/eps + 1 [+ eps/(2 eps_inf nu^2) when M = 1])/12
    """
    scheme = TemporalKind(scheme)
    eps = relative_permittivity(medium, w_hat)
    value = delta(medium, w_hat) / eps + (-0.5 if scheme == TemporalKind.LEAPFROG else 1.0)
    if M == 1:
        value += eps / (2.0 * medium.eps_inf * nu**2)
    return value / 12.0


def high_order_wins(scheme: TemporalKind, medium: LorentzMedium, w_hat: float, nu: float) -> bool:
    """True where |C_{M>=2}| <= |C_{M=1}|"""
    return abs(fd_leading_coefficient(scheme, 2, medium, w_hat, nu)) <= abs(
        fd_leading_coefficient(scheme, 1, medium, w_hat, nu)
    )


def fd_lf_comparison_region(nu: float, eps_ratio: float) -> ComparisonRegion:
    """
    Frequencies (gamma_hat = 0, outside the absorption band) where leap-frog FD2M
    with M >= 2 has the smaller leading error

    Args:
        nu: CFL number in (0, 1]
        eps_ratio: eps_d / eps_inf

    Returns:
        ComparisonRegion "always", "band" [w_L, w_R] or "lower" [0, w_R]

    Raises:
        InvalidCFL: nu outside (0, 1]
    """
    if not 0 < nu <= 1:
        raise InvalidCFL(f"nu must lie in (0, 1], got {nu}", operation="fd_lf_comparison_region")
    if eps_ratio <= 0:
        raise ValueError("eps_ratio must be positive")
    if nu <= 1 / math.sqrt(2.0):
        return ComparisonRegion(kind="always")
    r, n2 = eps_ratio, nu * nu
    root = math.sqrt(-4 * r - 4 * r * r + 8 * r * n2 + 9 * r * r * n2)
    base = -1 - r + 2 * n2 + 3 * r * n2
    w_right = math.sqrt((base + nu * root) / (2 * n2 - 1))
    if r >= 2 * n2 - 1:
        return ComparisonRegion(kind="lower", lo=0.0, hi=w_right)
    w_left = math.sqrt((base - nu * root) / (2 * n2 - 1))
    return ComparisonRegion(kind="band", lo=w_left, hi=w_right)


def comparison_residual(medium: LorentzMedium, w_hat: float, nu: float) -> float:
    """2 delta/eps - 1 + eps/(2 eps_inf nu^2); zero on the region boundary"""
    eps = relative_permittivity(medium, w_hat)
    value = 2 * delta(medium, w_hat) / eps - 1 + eps / (2 * medium.eps_inf * nu**2)
    return float(value.real)
