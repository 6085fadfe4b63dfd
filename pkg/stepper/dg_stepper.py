"""
Leap-frog nodal DG stepper on a periodic grid

Fields are arrays of shape (N, p+1). Cell operators act as
(P u)_j = (V + Q_0) u_j + Q_{-1} u_{j-1} + Q_1 u_{j+1}. Without penalty terms the
implicit stages only involve the cell mass matrix; with an upwind flux they are
solved per discrete Fourier mode.
"""

import logging
from typing import List, Optional, Tuple

import numpy as np

from dispersion.dg import assemble_local, cfl_max_dg
from dispersion.models import FluxParams, LorentzMedium
from schemas.common import FluxKind, TemporalKind
from stepper.base import Stepper
from stepper.models import FieldState, PeriodicGrid

logger = logging.getLogger(__name__)

Blocks = Tuple[np.ndarray, np.ndarray, np.ndarray]


class DGLeapFrogStepper(Stepper):
    """
    (M + dt/2 R) H^{n+1/2} = M H^n - dt/2 P E^n
    M (D^{n+1} - D^n) + dt P~ H^{n+1/2} + dt/2 R~ (E^{n+1} + E^n) = 0
    M H^{n+1} = M H^{n+1/2} - dt/2 (P E^{n+1} + R H^{n+1/2})
    """

    scheme = TemporalKind.LEAPFROG

    def __init__(
        self,
        p: int,
        flux: FluxKind,
        medium: LorentzMedium,
        grid: PeriodicGrid,
        dt: float,
        allow_unstable: bool = False,
        cfl_limit: Optional[float] = None,
    ):
        super().__init__(medium, grid, dt, allow_unstable)
        if grid.p != p:
            raise ValueError(f"grid carries degree {grid.p}, stepper needs {p}")
        self.p = p
        self.flux_kind = FluxKind(flux)
        self.flux = FluxParams.from_kind(flux, medium.eps_inf)
        local = assemble_local(p)
        self.mass = grid.h * local.mass
        self._mass_inv = np.linalg.inv(self.mass)

        stiffness = local.stiffness
        q_minus, q_zero, q_plus = local.flux_q(self.flux.alpha)
        self._P: Blocks = (q_minus, stiffness + q_zero, q_plus)
        q_minus, q_zero, q_plus = local.flux_q(-self.flux.alpha)
        self._P_tilde: Blocks = (q_minus, stiffness + q_zero, q_plus)
        self._R: Blocks = local.flux_s(self.flux.beta1)
        self._R_tilde: Blocks = local.flux_s(self.flux.beta2)

        if cfl_limit is None:
            cfl_limit = cfl_max_dg(p, self.flux_kind, medium.eps_inf)
        self._check_cfl(cfl_limit, f"LF-DG{p} {self.flux_kind.value}")

        self._local_solves = not self.flux.dissipative
        if not self._local_solves:
            half = self._half
            self._h_solver = self._fourier_inverse(self.mass, self._R, half)
            self._e_solver = self._fourier_inverse(
                (medium.eps_inf + self.coupling) * self.mass, self._R_tilde, half
            )
        else:
            self._e_inv = np.linalg.inv((medium.eps_inf + self.coupling) * self.mass)

    @property
    def nodes_per_cell(self) -> int:
        return self.p + 1

    @staticmethod
    def apply(blocks: Blocks, u: np.ndarray) -> np.ndarray:
        minus, zero, plus = blocks
        return u @ zero.T + np.roll(u, 1, axis=0) @ minus.T + np.roll(u, -1, axis=0) @ plus.T

    def _fourier_inverse(self, base: np.ndarray, blocks: Blocks, scale: float) -> np.ndarray:
        """Inverses of base + scale * K(xi_m) for xi_m = exp(2 pi i m / N)"""
        minus, zero, plus = blocks
        xi = np.exp(2j * np.pi * np.arange(self.grid.N) / self.grid.N)[:, None, None]
        matrices = base[None] + scale * (minus[None] / xi + zero[None] + plus[None] * xi)
        return np.linalg.inv(matrices)

    def _fourier_solve(self, inverses: np.ndarray, rhs: np.ndarray) -> np.ndarray:
        spectrum = np.fft.fft(rhs, axis=0)
        solved = np.fft.ifft(np.einsum("mij,mj->mi", inverses, spectrum), axis=0)
        return solved.real if np.isrealobj(rhs) else solved

    def _mass(self, u: np.ndarray) -> np.ndarray:
        return u @ self.mass.T

    def _mass_solve(self, u: np.ndarray) -> np.ndarray:
        return u @ self._mass_inv.T

    def half_field(self, state: FieldState) -> np.ndarray:
        """H^{n+1/2}"""
        rhs = self._mass(state.H) - self._half * self.apply(self._P, state.E)
        if self._local_solves:
            return self._mass_solve(rhs)
        return self._fourier_solve(self._h_solver, rhs)

    def step(self, state: FieldState) -> FieldState:
        half, dt = self._half, self.dt
        H_half = self.half_field(state)
        a, r1 = self.polarization_predict(state.E, state.P, state.J)
        rhs = self._mass(state.D - a) - dt * self.apply(self._P_tilde, H_half)
        if self._local_solves:
            E1 = rhs @ self._e_inv.T
        else:
            rhs = rhs - half * self.apply(self._R_tilde, state.E)
            E1 = self._fourier_solve(self._e_solver, rhs)
        P1, J1 = self.polarization_correct(E1, a, r1)
        H_rhs = self._mass(H_half) - half * (self.apply(self._P, E1) + self.apply(self._R, H_half))
        H1 = self._mass_solve(H_rhs)
        return FieldState(H=H1, E=E1, D=self.medium.eps_inf * E1 + P1, P=P1, J=J1, n=state.n + 1)

    def update_residual(self, old: FieldState, new: FieldState) -> List[np.ndarray]:
        half, dt = self._half, self.dt
        H_half = 0.5 * (old.H + new.H) + 0.5 * half * self._mass_solve(self.apply(self._P, new.E - old.E))
        res_h = (
            self._mass(H_half)
            + half * self.apply(self._R, H_half)
            - self._mass(old.H)
            + half * self.apply(self._P, old.E)
        )
        res_d = (
            self._mass(new.D - old.D)
            + dt * self.apply(self._P_tilde, H_half)
            + half * self.apply(self._R_tilde, new.E + old.E)
        )
        return [res_h, res_d] + self.polarization_residual(old, new)

    def _inner(self, u: np.ndarray, v: np.ndarray) -> float:
        return float(np.real(np.vdot(u, self._mass(v))))

    def energy(self, state: FieldState) -> float:
        med = self.medium
        H_plus = self.half_field(state)
        # (M - dt/2 R) H^{n-1/2} = M H^n + dt/2 P E^n
        rhs = self._mass(state.H) + self._half * self.apply(self._P, state.E)
        if self._local_solves:
            H_minus = self._mass_solve(rhs)
        else:
            H_minus = self._fourier_solve(self._fourier_inverse(self.mass, self._R, -self._half), rhs)
        return (
            med.eps_inf * self._inner(state.E, state.E)
            + self._inner(H_minus, H_plus)
            + (self._inner(state.J, state.J) + med.omega_1**2 * self._inner(state.P, state.P)) / med.omega_p2
        )
