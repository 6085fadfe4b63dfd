"""
Shared machinery of the periodic Maxwell-Lorentz steppers

Every stepper advances (H, E, D, P, J) by one step and can report the residual of
its own update equations for a pair of consecutive states. The polarization pair
(P, J) is advanced with the trapezoidal rule at each node.
"""

import logging
from abc import ABC, abstractmethod
from typing import List, Optional

import numpy as np

from dispersion.models import LorentzMedium
from schemas.common import TemporalKind
from stepper.models import FieldState, PeriodicGrid
from utils.errors import CFLViolation

logger = logging.getLogger(__name__)

CFL_SLACK = 1e-12


class Stepper(ABC):
    """Base class of the FD and DG steppers"""

    scheme: TemporalKind = TemporalKind.LEAPFROG

    def __init__(self, medium: LorentzMedium, grid: PeriodicGrid, dt: float, allow_unstable: bool = False):
        if dt <= 0:
            raise ValueError("time step must be positive")
        self.medium = medium
        self.grid = grid
        self.dt = dt
        self.allow_unstable = allow_unstable

        half = dt / 2.0
        gamma = medium.gamma
        self._half = half
        self._damping = 2.0 * (1.0 + gamma * dt) / dt
        self._denominator = medium.omega_1**2 * half + self._damping
        self._coupling = medium.omega_p2 * half / self._denominator

    @property
    def nu(self) -> float:
        """dt / (h sqrt(eps_inf))"""
        return self.dt / (self.grid.h * np.sqrt(self.medium.eps_inf))

    @property
    def W1(self) -> float:
        return self.medium.omega_1 * self.dt

    @property
    def nodes_per_cell(self) -> int:
        return 1

    def _check_cfl(self, limit: Optional[float], label: str) -> None:
        if limit is None:
            return
        if self.nu > limit * (1.0 + CFL_SLACK):
            if self.allow_unstable:
                logger.warning(f"⚠️ {label} running above its CFL limit (nu={self.nu:.6f} > {limit:.6f})")
                return
            raise CFLViolation(
                f"nu = {self.nu:.6f} exceeds the {label} limit {limit:.6f}",
                operation="step",
                details={"nu": self.nu, "limit": limit},
            )

    # Polarization, trapezoidal at every node

    def polarization_predict(self, E0, P0, J0):
        """Affine map P^{n+1} = a + c E^{n+1}; returns (a, r1) with r1 = P0 + dt/2 J0"""
        med, half = self.medium, self._half
        r1 = P0 + half * J0
        r2 = J0 * (1.0 - med.gamma * self.dt) - med.omega_1**2 * half * P0 + med.omega_p2 * half * E0
        a = (r2 + self._damping * r1) / self._denominator
        return a, r1

    def polarization_correct(self, E1, a, r1):
        P1 = a + self._coupling * E1
        J1 = (P1 - r1) / self._half
        return P1, J1

    def polarization_residual(self, old: FieldState, new: FieldState) -> List[np.ndarray]:
        med, half = self.medium, self._half
        res_p = new.P - old.P - half * (new.J + old.J)
        res_j = new.J - old.J - half * (
            -2.0 * med.gamma * (new.J + old.J)
            - med.omega_1**2 * (new.P + old.P)
            + med.omega_p2 * (new.E + old.E)
        )
        return [res_p, res_j]

    @property
    def coupling(self) -> float:
        """c in P^{n+1} = a + c E^{n+1}"""
        return self._coupling

    # Stepping

    @abstractmethod
    def step(self, state: FieldState) -> FieldState:
        """Advance one time step"""

    @abstractmethod
    def update_residual(self, old: FieldState, new: FieldState) -> List[np.ndarray]:
        """Residuals of the H, D, P and J update equations"""

    @abstractmethod
    def energy(self, state: FieldState) -> float:
        """Discrete energy, conserved for lossless media and non-dissipative fluxes"""

    def run(self, state: FieldState, steps: int) -> FieldState:
        for _ in range(steps):
            state = self.step(state)
        return state

    def plane_wave(self, amplitudes: np.ndarray, k_hat: complex, origin: int = 0) -> FieldState:
        """
        Plane wave with amplitudes (H, E, P, J) per cell node times exp(i k_hat (j - origin))

        Args:
            amplitudes: shape (4, nodes_per_cell) or (4,)
            k_hat: k*h
            origin: Cell index with unit phase
        """
        amplitudes = np.asarray(amplitudes, dtype=complex).reshape(4, self.nodes_per_cell)
        phase = np.exp(1j * k_hat * (np.arange(self.grid.N) - origin))
        fields = [np.outer(phase, amplitudes[f]).reshape(self.grid.field_shape) for f in range(4)]
        H, E, P, J = fields
        return FieldState.from_fields(H, E, P, J, self.medium.eps_inf)
