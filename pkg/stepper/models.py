"""Grid, field state and run results of the time-domain steppers"""

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np


@dataclass(frozen=True)
class PeriodicGrid:
    """
    Uniform periodic grid of N cells of width h

    FD unknowns: E, D, P, J at primal nodes jh, H at dual nodes (j+1/2)h.
    DG unknowns: p+1 Lagrange values per cell.
    """

    N: int
    h: float
    p: Optional[int] = None

    def __post_init__(self):
        if self.N < 8:
            raise ValueError(f"periodic grids need at least 8 cells, got {self.N}")
        if self.h <= 0:
            raise ValueError("cell width must be positive")

    @property
    def length(self) -> float:
        return self.N * self.h

    @property
    def primal_nodes(self) -> np.ndarray:
        return np.arange(self.N) * self.h

    @property
    def dual_nodes(self) -> np.ndarray:
        return (np.arange(self.N) + 0.5) * self.h

    @property
    def field_shape(self) -> Tuple[int, ...]:
        return (self.N,) if self.p is None else (self.N, self.p + 1)

    def is_commensurate(self, k_hat: float, tolerance: float = 1e-9) -> bool:
        """True when exp(i k_hat N) = 1"""
        turns = k_hat * self.N / (2.0 * np.pi)
        return abs(turns - round(turns)) < tolerance


@dataclass
class FieldState:
    """H, E, D, P, J at time level n"""

    H: np.ndarray
    E: np.ndarray
    D: np.ndarray
    P: np.ndarray
    J: np.ndarray
    n: int = 0

    @classmethod
    def from_fields(cls, H, E, P, J, eps_inf: float, n: int = 0) -> "FieldState":
        """Build a state with D from the constitutive law"""
        H, E, P, J = (np.array(a) for a in (H, E, P, J))
        return cls(H=H, E=E, D=eps_inf * E + P, P=P, J=J, n=n)

    def copy(self) -> "FieldState":
        return FieldState(self.H.copy(), self.E.copy(), self.D.copy(), self.P.copy(), self.J.copy(), self.n)

    def constitutive_residual(self, eps_inf: float) -> float:
        """max |D - eps_inf E - P|"""
        return float(np.max(np.abs(self.D - eps_inf * self.E - self.P)))

    def max_amplitude(self) -> float:
        return float(max(np.max(np.abs(a)) for a in (self.H, self.E, self.P, self.J)))


@dataclass
class StabilityRun:
    steps: int
    max_energy_ratio: float
    max_amplitude_ratio: float
    blew_up: bool
    energy: np.ndarray = field(repr=False, default_factory=lambda: np.zeros(0))


@dataclass
class PhaseMeasurement:
    """Measured vs analytic relative phase error of one time-domain run"""

    w_hat: float
    w_hat_measured: float
    measured: float
    analytic: float
    steps: int
    periods: float

    @property
    def relative_gap(self) -> float:
        return abs(self.measured - self.analytic) / abs(self.analytic)
