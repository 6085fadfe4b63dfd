"""
Staggered FD2M steppers on periodic grids: explicit leap-frog and implicit trapezoidal

H lives on the dual nodes (j+1/2)h, the other fields on the primal nodes jh.
"""

import logging
from typing import List

import numpy as np

from dispersion.fd import cfl_max_fd, difference_weights
from dispersion.models import LorentzMedium
from schemas.common import TemporalKind
from stepper.base import Stepper
from stepper.models import FieldState, PeriodicGrid
from utils.errors import SingularImplicitSystem

logger = logging.getLogger(__name__)


class FDStepper(Stepper):
    """Common FD2M operators"""

    def __init__(self, M: int, medium: LorentzMedium, grid: PeriodicGrid, dt: float, allow_unstable: bool = False):
        super().__init__(medium, grid, dt, allow_unstable)
        if grid.p is not None:
            raise ValueError("FD steppers need a grid without DG nodes")
        if grid.N < 2 * M + 2:
            raise ValueError(f"grid of {grid.N} cells too small for FD{2 * M}")
        self.M = M
        self._weights = difference_weights(M)

    def diff_e(self, E: np.ndarray) -> np.ndarray:
        """(D E)_{j+1/2} = (1/h) sum_p w_p (E_{j+p} - E_{j-p+1})"""
        out = np.zeros_like(E)
        for p, w in enumerate(self._weights, start=1):
            out = out + w * (np.roll(E, -p) - np.roll(E, p - 1))
        return out / self.grid.h

    def diff_h(self, H: np.ndarray) -> np.ndarray:
        """(D~ H)_j = (1/h) sum_p w_p (H_{j+p-1} - H_{j-p})"""
        out = np.zeros_like(H)
        for p, w in enumerate(self._weights, start=1):
            out = out + w * (np.roll(H, -(p - 1)) - np.roll(H, p))
        return out / self.grid.h

    def symbol(self, xi: np.ndarray) -> np.ndarray:
        """d(xi) = (1/h) sum_p w_p (xi^p - xi^{1-p}); D~ has symbol d(xi)/xi"""
        xi = np.asarray(xi, dtype=complex)
        total = np.zeros_like(xi)
        for p, w in enumerate(self._weights, start=1):
            total = total + w * (xi**p - xi ** (1 - p))
        return total / self.grid.h

    def _norm2(self, u: np.ndarray, v: np.ndarray) -> float:
        return float(np.real(np.vdot(u, v))) * self.grid.h


class FDLeapFrogStepper(FDStepper):
    """
    Leap-frog FD2M with H at integer times:

    H^{n+1/2} = H^n + dt/2 D E^n, D^{n+1} = D^n + dt D~ H^{n+1/2},
    E^{n+1} from D and the trapezoidal polarization, H^{n+1} = H^{n+1/2} + dt/2 D E^{n+1}.
    """

    scheme = TemporalKind.LEAPFROG

    def __init__(self, M: int, medium: LorentzMedium, grid: PeriodicGrid, dt: float, allow_unstable: bool = False):
        super().__init__(M, medium, grid, dt, allow_unstable)
        self._check_cfl(cfl_max_fd(M), f"LF-FD{2 * M}")

    def step(self, state: FieldState) -> FieldState:
        half = self._half
        H_half = state.H + half * self.diff_e(state.E)
        D1 = state.D + self.dt * self.diff_h(H_half)
        a, r1 = self.polarization_predict(state.E, state.P, state.J)
        E1 = (D1 - a) / (self.medium.eps_inf + self.coupling)
        P1, J1 = self.polarization_correct(E1, a, r1)
        H1 = H_half + half * self.diff_e(E1)
        # D is rebuilt from the constitutive law
        return FieldState(H=H1, E=E1, D=self.medium.eps_inf * E1 + P1, P=P1, J=J1, n=state.n + 1)

    def half_step_fields(self, state: FieldState):
        """(H^{n-1/2}, H^{n+1/2}) for the lossless energy"""
        update = self._half * self.diff_e(state.E)
        return state.H - update, state.H + update

    def update_residual(self, old: FieldState, new: FieldState) -> List[np.ndarray]:
        half = self._half
        H_half = old.H + half * self.diff_e(old.E)
        res_h = new.H - H_half - half * self.diff_e(new.E)
        res_d = new.D - old.D - self.dt * self.diff_h(H_half)
        return [res_h, res_d] + self.polarization_residual(old, new)

    def energy(self, state: FieldState) -> float:
        med = self.medium
        H_minus, H_plus = self.half_step_fields(state)
        return (
            med.eps_inf * self._norm2(state.E, state.E)
            + self._norm2(H_minus, H_plus)
            + (self._norm2(state.J, state.J) + med.omega_1**2 * self._norm2(state.P, state.P)) / med.omega_p2
        )


class FDTrapezoidalStepper(FDStepper):
    """
    Trapezoidal FD2M; the implicit system is diagonalized by the discrete Fourier
    transform and solved as one 4x4 system per wavenumber
    """

    scheme = TemporalKind.TRAPEZOIDAL

    def __init__(self, M: int, medium: LorentzMedium, grid: PeriodicGrid, dt: float, allow_unstable: bool = False):
        super().__init__(M, medium, grid, dt, allow_unstable)
        self._amplification = self._build_amplification()

    def _build_amplification(self) -> np.ndarray:
        med, half = self.medium, self._half
        xi = np.exp(2j * np.pi * np.arange(self.grid.N) / self.grid.N)
        d = self.symbol(xi)
        d_tilde = d / xi
        n = len(xi)
        left = np.zeros((n, 4, 4), dtype=complex)
        right = np.zeros((n, 4, 4), dtype=complex)
        # Unknown order (H, E, P, J)
        left[:, 0, 0], left[:, 0, 1] = 1.0, -half * d
        right[:, 0, 0], right[:, 0, 1] = 1.0, half * d
        left[:, 1, 0], left[:, 1, 1], left[:, 1, 2] = -half * d_tilde, med.eps_inf, 1.0
        right[:, 1, 0], right[:, 1, 1], right[:, 1, 2] = half * d_tilde, med.eps_inf, 1.0
        left[:, 2, 2], left[:, 2, 3] = 1.0, -half
        right[:, 2, 2], right[:, 2, 3] = 1.0, half
        left[:, 3, 1], left[:, 3, 2], left[:, 3, 3] = (
            -half * med.omega_p2,
            half * med.omega_1**2,
            1.0 + med.gamma * self.dt,
        )
        right[:, 3, 1], right[:, 3, 2], right[:, 3, 3] = (
            half * med.omega_p2,
            -half * med.omega_1**2,
            1.0 - med.gamma * self.dt,
        )
        try:
            conditions = np.linalg.cond(left)
            if np.any(~np.isfinite(conditions)) or np.max(conditions) > 1e14:
                raise np.linalg.LinAlgError("near-singular trapezoidal system")
            return np.linalg.solve(left, right)
        except np.linalg.LinAlgError as e:
            raise SingularImplicitSystem(
                f"trapezoidal system is singular: {e}", operation="FDTrapezoidalStepper", details={"W1": self.W1}
            )

    def step(self, state: FieldState) -> FieldState:
        stacked = np.stack([state.H, state.E, state.P, state.J], axis=1)
        spectrum = np.fft.fft(stacked, axis=0)
        advanced = np.einsum("mij,mj->mi", self._amplification, spectrum)
        fields = np.fft.ifft(advanced, axis=0)
        if all(np.isrealobj(a) for a in (state.H, state.E, state.P, state.J)):
            fields = fields.real
        H1, E1, P1, J1 = (fields[:, i] for i in range(4))
        return FieldState(H=H1, E=E1, D=self.medium.eps_inf * E1 + P1, P=P1, J=J1, n=state.n + 1)

    def update_residual(self, old: FieldState, new: FieldState) -> List[np.ndarray]:
        half = self._half
        res_h = new.H - old.H - half * self.diff_e(new.E + old.E)
        res_d = new.D - old.D - half * self.diff_h(new.H + old.H)
        return [res_h, res_d] + self.polarization_residual(old, new)

    def energy(self, state: FieldState) -> float:
        med = self.medium
        return (
            med.eps_inf * self._norm2(state.E, state.E)
            + self._norm2(state.H, state.H)
            + (self._norm2(state.J, state.J) + med.omega_1**2 * self._norm2(state.P, state.P)) / med.omega_p2
        )
