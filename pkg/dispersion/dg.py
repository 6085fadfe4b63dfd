"""
Nodal discontinuous Galerkin symbols for the Maxwell-Lorentz system

The semi-discrete, leap-frog and trapezoidal DG schemes are written as a
4(p+1) matrix A(xi) acting on the cell unknowns (H, E, P, J) of a plane wave
with xi = exp(i k h). det A(xi) is a Laurent polynomial of degree two in xi;
its roots give every discrete wavenumber at a frequency.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Tuple

import numpy as np
from scipy.linalg import eigh

from core.config import get_settings
from dispersion.medium import exact_wavenumber_hat, relative_permittivity
from dispersion.models import DGLocalMatrices, FluxParams, LorentzMedium, Mode, ModeSet
from dispersion.modes import continue_physical
from dispersion.temporal import relative_error, scheme_wavenumber
from schemas.common import FluxKind, ModeClass, TemporalKind
from utils.errors import (
    BisectionFailed,
    DegreeTooLarge,
    IllConditionedExtraction,
    ModeCountMismatch,
    RootSolveFailed,
)

logger = logging.getLogger(__name__)

MAX_DEGREE = 8


def lagrange_nodes(p: int) -> np.ndarray:
    """Equispaced nodes n/p - 1/2 on the reference cell; [0] for p = 0"""
    if p < 0:
        raise ValueError("p must be non-negative")
    if p == 0:
        return np.array([0.0])
    return np.arange(p + 1) / p - 0.5


def _basis(nodes: np.ndarray, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Lagrange basis values and derivatives, shape (len(nodes), len(x))"""
    n = len(nodes)
    values = np.ones((n, len(x)))
    derivatives = np.zeros((n, len(x)))
    for m in range(n):
        others = [nodes[j] for j in range(n) if j != m]
        denominator = np.prod([nodes[m] - o for o in others]) if others else 1.0
        values[m] = np.prod([x - o for o in others], axis=0) / denominator if others else 1.0
        for skip in range(len(others)):
            rest = [o for i, o in enumerate(others) if i != skip]
            term = np.prod([x - o for o in rest], axis=0) if rest else np.ones_like(x)
            derivatives[m] += term / denominator
    return values, derivatives


@lru_cache(maxsize=None)
def assemble_local(p: int) -> DGLocalMatrices:
    """
    Reference-cell mass, stiffness and boundary matrices (cell width 1)

    mass[m, n] = int phi_m phi_n, stiffness[m, n] = int phi_m' phi_n, both by
    (p+1)-point Gauss-Legendre quadrature.

    Raises:
        DegreeTooLarge: p > 8
    """
    if p > MAX_DEGREE:
        raise DegreeTooLarge(f"DG degree must be <= {MAX_DEGREE}, got {p}", operation="assemble_local")
    nodes = lagrange_nodes(p)
    points, weights = np.polynomial.legendre.leggauss(p + 1)
    points, weights = points / 2.0, weights / 2.0
    values, derivatives = _basis(nodes, points)
    mass = (values * weights) @ values.T
    stiffness = (derivatives * weights) @ values.T
    right, _ = _basis(nodes, np.array([0.5]))
    left, _ = _basis(nodes, np.array([-0.5]))
    boundary = right @ right.T - left @ left.T
    return DGLocalMatrices(p=p, nodes=nodes, mass=mass, stiffness=stiffness, boundary=boundary)


@dataclass
class DGSymbol:
    """Evaluator of the 4(p+1) symbol matrix A(xi)"""

    p: int
    flux: FluxParams
    medium: LorentzMedium
    w_hat: float
    omega1_h: float
    scheme: TemporalKind
    W1: Optional[float] = None

    def __post_init__(self):
        self.scheme = TemporalKind(self.scheme)
        if self.scheme != TemporalKind.NONE and self.W1 is None:
            raise ValueError("fully discrete DG symbols need W1")
        local = assemble_local(self.p)
        self._local = local
        self._q = local.flux_q(self.flux.alpha)
        self._q_tilde = local.flux_q(-self.flux.alpha)
        self._s1 = local.flux_s(self.flux.beta1)
        self._s2 = local.flux_s(self.flux.beta2)

    @property
    def h(self) -> float:
        return self.omega1_h / self.medium.omega_1

    @property
    def dt(self) -> float:
        return (self.W1 or 0.0) / self.medium.omega_1

    @staticmethod
    def _combine(blocks, xi: complex) -> np.ndarray:
        minus, zero, plus = blocks
        return minus / xi + zero + plus * xi

    def operators(self, xi: complex) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """P, P~, R, R~ at xi"""
        V = self._local.stiffness
        P = V + self._combine(self._q, xi)
        P_tilde = V + self._combine(self._q_tilde, xi)
        R = self._combine(self._s1, xi)
        R_tilde = self._combine(self._s2, xi)
        return P, P_tilde, R, R_tilde

    def __call__(self, xi: complex) -> np.ndarray:
        n = self.p + 1
        P, P_tilde, R, R_tilde = self.operators(complex(xi))
        M = self.h * self._local.mass
        I = np.eye(n)
        Z = np.zeros((n, n))
        med = self.medium
        omega = self.w_hat * med.omega_1
        eps_inf, omega_p2, omega_12, gamma = med.eps_inf, med.omega_p2, med.omega_1**2, med.gamma

        if self.scheme == TemporalKind.NONE:
            rows = [
                [-1j * omega * M + R, P, Z, Z],
                [P_tilde, -1j * omega * eps_inf * M + R_tilde, -1j * omega * M, Z],
                [Z, Z, -1j * omega * I, -I],
                [Z, -omega_p2 * I, omega_12 * I, (-1j * omega + 2 * gamma) * I],
            ]
            return np.block(rows).astype(complex)

        W = self.w_hat * self.W1
        sin, cos = math.sin(W / 2.0), math.cos(W / 2.0)
        half = self.dt / 2.0
        if self.scheme == TemporalKind.LEAPFROG:
            rows = [
                [-1j * sin * M + half * cos * R, half * P, Z, Z],
                [half * P_tilde, -1j * eps_inf * sin * M + half * cos * R_tilde, -1j * sin * M, Z],
                [Z, Z, 1j * sin * I, half * cos * I],
                [Z, omega_p2 * half * cos * I, -omega_12 * half * cos * I, (1j * sin - gamma * self.dt * cos) * I],
            ]
        else:
            # Field rows carry mass matrices
            rows = [
                [-1j * sin * M + half * cos * R, half * cos * P, Z, Z],
                [half * cos * P_tilde, -1j * eps_inf * sin * M + half * cos * R_tilde, -1j * sin * M, Z],
                [Z, Z, 1j * sin * I, half * cos * I],
                [Z, omega_p2 * half * cos * I, -omega_12 * half * cos * I, (1j * sin - gamma * self.dt * cos) * I],
            ]
        return np.block(rows).astype(complex)

    def determinant(self, xi: complex) -> complex:
        return complex(np.linalg.det(self(xi)))


def assemble_symbol(
    p: int,
    flux: FluxParams,
    medium: LorentzMedium,
    w_hat: float,
    omega1_h: float,
    scheme: TemporalKind = TemporalKind.NONE,
    W1: Optional[float] = None,
) -> DGSymbol:
    """
    Symbol matrix of the semi-discrete (scheme NONE), leap-frog or trapezoidal DG scheme

    Args:
        p: Polynomial degree
        flux: Numerical flux parameters
        medium: Lorentz medium
        w_hat: Relative frequency
        omega1_h: omega_1 * h
        scheme: Time integrator
        W1: omega_1 * dt, required for LF and TP

    Returns:
        DGSymbol, callable on xi
    """
    return DGSymbol(p=p, flux=flux, medium=medium, w_hat=w_hat, omega1_h=omega1_h, scheme=scheme, W1=W1)


def dispersion_polynomial(symbol: DGSymbol, radius: float = 1.0) -> np.ndarray:
    """
    Laurent coefficients C_{-2}, ..., C_2 of det A(xi)

    The determinant is sampled at radius * exp(2 pi i j / 5) and the coefficients
    recovered from the Vandermonde system of xi^2 det A(xi).

    Raises:
        IllConditionedExtraction: Vandermonde condition number above the configured limit
    """
    points = radius * np.exp(2j * np.pi * np.arange(5) / 5)
    vandermonde = np.vander(points, 5, increasing=True)
    condition = np.linalg.cond(vandermonde)
    if condition > get_settings().EXTRACTION_CONDITION_LIMIT:
        raise IllConditionedExtraction(
            f"Vandermonde condition number {condition:.3e} too large",
            operation="dispersion_polynomial",
            details={"radius": radius},
        )
    values = np.array([xi**2 * symbol.determinant(xi) for xi in points])
    return np.linalg.solve(vandermonde, values)


def laurent_value(coefficients: np.ndarray, xi: complex) -> complex:
    return complex(sum(c * xi ** (n - 2) for n, c in enumerate(coefficients)))


def expects_quadratic(flux: FluxParams, scheme: TemporalKind) -> bool:
    """Quadratic (two modes) vs quartic (four modes) determinant"""
    if TemporalKind(scheme) == TemporalKind.LEAPFROG:
        return flux.is_alternating
    return flux.quadratic_case


def _log_wavenumber(xi: complex) -> complex:
    """k = -i log xi with Re k in (-pi, pi]"""
    xi = complex(xi)
    if xi.imag == 0 and xi.real < 0:
        xi = complex(xi.real, 0.0)
    return complex(-1j * np.log(xi))


def dg_wavenumber_roots(symbol: DGSymbol) -> Tuple[np.ndarray, np.ndarray]:
    """k*h roots of the symbol and the Laurent coefficients"""
    coefficients = dispersion_polynomial(symbol)
    scale = np.max(np.abs(coefficients))
    outer_small = max(abs(coefficients[0]), abs(coefficients[4])) <= 1e-10 * scale
    quadratic = expects_quadratic(symbol.flux, symbol.scheme)
    if quadratic != outer_small:
        raise ModeCountMismatch(
            f"determinant degree does not match the {'quadratic' if quadratic else 'quartic'} case",
            operation="dg_wavenumber_roots",
            details={"coefficients": [abs(c) for c in coefficients], "p": symbol.p},
        )
    poly = coefficients[::-1][1:4] if quadratic else coefficients[::-1]
    try:
        xis = np.roots(poly)
    except np.linalg.LinAlgError as e:
        raise RootSolveFailed(f"companion eigensolve failed: {e}", operation="dg_wavenumber_roots")
    expected = 2 if quadratic else 4
    if len(xis) != expected:
        raise ModeCountMismatch(
            f"expected {expected} roots, found {len(xis)}", operation="dg_wavenumber_roots"
        )
    return np.array([_log_wavenumber(xi) for xi in xis]), coefficients


def reference_wavenumber(
    medium: LorentzMedium, w_hat: float, omega1_h: float, scheme: TemporalKind, W1: Optional[float]
) -> complex:
    """Continuous k*h the physical mode converges to"""
    scheme = TemporalKind(scheme)
    if scheme == TemporalKind.NONE:
        k = exact_wavenumber_hat(medium, w_hat)
    else:
        k = scheme_wavenumber(scheme, medium, w_hat, W1)
    return k * omega1_h / medium.omega_1


def solve_dg_modes(
    p: int,
    flux: FluxParams,
    medium: LorentzMedium,
    w_hat: float,
    omega1_h: float,
    scheme: TemporalKind = TemporalKind.NONE,
    W1: Optional[float] = None,
) -> ModeSet:
    """
    Every DG wavenumber at one frequency, the physical pair tagged

    Returns:
        ModeSet of k*h values; 2 modes in the quadratic case, 4 otherwise

    Raises:
        ModeCountMismatch: determinant degree disagrees with the flux/scheme case
        RootSolveFailed: companion eigensolve failed
    """
    symbol = assemble_symbol(p, flux, medium, w_hat, omega1_h, scheme, W1)
    roots, coefficients = dg_wavenumber_roots(symbol)
    reference = reference_wavenumber(medium, w_hat, omega1_h, scheme, W1)

    def roots_at(t: float) -> np.ndarray:
        if t == 1.0:
            return roots
        scaled = assemble_symbol(p, flux, medium, w_hat, omega1_h * t, scheme, W1)
        return dg_wavenumber_roots(scaled)[0]

    forward = continue_physical(roots_at, reference, roots=roots)
    backward = continue_physical(roots_at, -reference, roots=roots)
    if forward == backward:
        raise ModeCountMismatch(
            "forward and backward physical modes coincide", operation="solve_dg_modes", details={"w_hat": w_hat}
        )

    magnitudes = np.abs(coefficients)
    modes: List[Mode] = []
    for index, k in enumerate(roots):
        xi = np.exp(1j * k)
        size = sum(m * abs(xi) ** (n - 2) for n, m in enumerate(magnitudes))
        residual = abs(laurent_value(coefficients, xi)) / size
        if index == forward:
            mode = Mode(k_hat=complex(k), mode_class=ModeClass.PHYSICAL, residual=residual, family=1)
        elif index == backward:
            mode = Mode(k_hat=complex(k), mode_class=ModeClass.PHYSICAL, residual=residual, family=-1)
        else:
            family = 1 if k.real >= 0 else -1
            mode = Mode(k_hat=complex(k), mode_class=ModeClass.SPURIOUS, residual=residual, family=family)
        modes.append(mode)
    modes.sort(key=lambda m: (m.mode_class != ModeClass.PHYSICAL, abs(m.k_hat.real), abs(m.k_hat.imag), -m.family))
    return ModeSet(modes=modes, w_hat=w_hat, omega1_h=omega1_h, count_expected=len(roots), reference=reference)


def physical_wavenumber(
    p: int,
    flux: FluxParams,
    medium: LorentzMedium,
    w_hat: float,
    omega1_h: float,
    scheme: TemporalKind = TemporalKind.NONE,
    W1: Optional[float] = None,
) -> complex:
    """Physical k (1/length) of the DG scheme"""
    modes = solve_dg_modes(p, flux, medium, w_hat, omega1_h, scheme, W1)
    return modes.physical.k_hat * medium.omega_1 / omega1_h


def relative_phase_error(
    p: int,
    flux: FluxParams,
    medium: LorentzMedium,
    w_hat: float,
    omega1_h: float,
    scheme: TemporalKind = TemporalKind.NONE,
    W1: Optional[float] = None,
) -> float:
    k_exact = exact_wavenumber_hat(medium, w_hat)
    k_scheme = physical_wavenumber(p, flux, medium, w_hat, omega1_h, scheme, W1)
    return relative_error(k_scheme, k_exact, "dg.relative_phase_error")


def b_quantity(
    flux: FluxParams, medium: LorentzMedium, w_hat: float, omega: Optional[float] = None, h: float = 1.0
) -> Tuple[complex, complex]:
    """
    b = omega (beta1 eps + beta2) and B = b h

    Returns:
        (b, B); both vanish identically for central and alternating fluxes
    """
    if omega is None:
        omega = w_hat * medium.omega_1
    if flux.beta1 == 0 and flux.beta2 == 0:
        return 0j, 0j
    eps = relative_permittivity(medium, w_hat)
    b = complex(omega * (flux.beta1 * eps + flux.beta2))
    return b, b * h


def upwind_b_zero(medium: LorentzMedium) -> float:
    """Frequency where the upwind B vanishes (gamma_hat = 0): sqrt(1 + eps_d/(2 eps_inf))"""
    return math.sqrt(1.0 + medium.eps_d / (2.0 * medium.eps_inf))


def free_space_amplification(p: int, flux: FluxParams, eps_inf: float, nu: float, thetas) -> np.ndarray:
    """
    One leap-frog DG step on (H^{n-1/2}, E^n) for Fourier angles theta, eps_d = 0

    tau = dt/h = nu sqrt(eps_inf); the mass matrices are the reference ones.

    Returns:
        Stacked amplification matrices, shape (len(thetas), 2(p+1), 2(p+1))
    """
    local = assemble_local(p)
    xi = np.exp(1j * np.atleast_1d(np.asarray(thetas, dtype=float)))[:, None, None]

    def combine(blocks):
        minus, zero, plus = blocks
        return minus[None] / xi + zero[None] + plus[None] * xi

    V = local.stiffness[None]
    P = V + combine(local.flux_q(flux.alpha))
    P_tilde = V + combine(local.flux_q(-flux.alpha))
    R = combine(local.flux_s(flux.beta1))
    R_tilde = combine(local.flux_s(flux.beta2))

    tau = nu * math.sqrt(eps_inf)
    m = local.mass[None]
    A1 = np.linalg.solve(m + tau * R / 2.0, m - tau * R / 2.0)
    A2 = -tau * np.linalg.solve(m + tau * R / 2.0, P)
    B1 = np.linalg.solve(eps_inf * m + tau * R_tilde / 2.0, eps_inf * m - tau * R_tilde / 2.0)
    B2 = -tau * np.linalg.solve(eps_inf * m + tau * R_tilde / 2.0, P_tilde)
    top = np.concatenate([A1, A2], axis=2)
    bottom = np.concatenate([B2 @ A1, B1 + B2 @ A2], axis=2)
    return np.concatenate([top, bottom], axis=1)


def _spectral_radius(p: int, flux: FluxParams, eps_inf: float, nu: float, thetas: np.ndarray) -> float:
    return float(np.max(np.abs(np.linalg.eigvals(free_space_amplification(p, flux, eps_inf, nu, thetas)))))


@lru_cache(maxsize=None)
def cfl_max_dg(p: int, flux: FluxKind, eps_inf: Optional[float] = None) -> float:
    """
    Largest CFL number with a free-space leap-frog DG spectral radius <= 1

    Bisection on nu over the configured number of Fourier angles in [0, pi].

    Raises:
        BisectionFailed: no unstable upper bracket below nu = 64
    """
    settings = get_settings()
    if eps_inf is None:
        eps_inf = settings.DEFAULT_EPS_INF
    params = FluxParams.from_kind(flux, eps_inf)
    thetas = np.linspace(0.0, math.pi, settings.CFL_SAMPLES)
    limit = 1.0 + settings.CFL_SPECTRAL_SLACK

    def stable(nu: float) -> bool:
        return _spectral_radius(p, params, eps_inf, nu, thetas) <= limit

    lo, hi = 0.0, 4.0
    while stable(hi):
        lo, hi = hi, 2.0 * hi
        if hi > 64.0:
            raise BisectionFailed(
                "no unstable CFL number found below 64", operation="cfl_max_dg", details={"p": p, "flux": str(flux)}
            )
    while hi - lo > settings.CFL_BISECTION_TOL:
        middle = 0.5 * (lo + hi)
        if stable(middle):
            lo = middle
        else:
            hi = middle
    logger.debug(f"DG CFL p={p} flux={flux}: bracket [{lo:.7f}, {hi:.7f}]")
    return lo


@lru_cache(maxsize=None)
def energy_cfl_dg(p: int, flux: FluxKind) -> float:
    """
    Energy-method CFL bound of the leap-frog DG scheme

    The discrete energy stays positive while nu * C <= 2, where C bounds the
    curl form on the reference cell: the volume part by the inverse constant
    ||M^{-1/2} S M^{-1/2}||, the face part by trace constants of the mass
    matrix. Central and upwind fluxes average both traces of every face
    (two-face constant T); alternating fluxes take one trace (C_tr) against
    the jump.

    Raises:
        DegreeTooLarge: p > 8
    """
    local = assemble_local(p)
    right, _ = _basis(local.nodes, np.array([0.5]))
    left, _ = _basis(local.nodes, np.array([-0.5]))
    weights, vectors = eigh(local.mass)
    root_inverse = (vectors / np.sqrt(weights)) @ vectors.T
    inverse = np.linalg.norm(root_inverse @ local.stiffness @ root_inverse, 2)
    two_face = eigh(right @ right.T + left @ left.T, local.mass, eigvals_only=True).max()
    if FluxKind(flux) in (FluxKind.ALTERNATING_PLUS, FluxKind.ALTERNATING_MINUS):
        one_face = float((right.T @ np.linalg.solve(local.mass, right))[0, 0])
        face = math.sqrt(2.0 * one_face * two_face)
    else:
        face = two_face
    return 2.0 / (inverse + face)
