"""Data models for the dispersion analysis"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from schemas.common import FluxKind, ModeClass, SpatialKind, TemporalKind


class LorentzMedium(BaseModel):
    """Scaled single-pole Lorentz medium"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    eps_s: float = Field(5.25, description="Relative permittivity at zero frequency")
    eps_inf: float = Field(2.25, description="Relative permittivity at infinite frequency")
    gamma_hat: float = Field(0.01, description="Damping relative to the resonance, gamma/omega_1")
    omega_1: float = Field(1.0, description="Resonance angular frequency")

    @model_validator(mode="after")
    def _check_parameters(self) -> "LorentzMedium":
        if self.eps_s <= 0 or self.eps_inf <= 0:
            raise ValueError("eps_s and eps_inf must be positive")
        if self.eps_s - self.eps_inf <= 0:
            raise ValueError("eps_d = eps_s - eps_inf must be positive")
        if self.gamma_hat < 0:
            raise ValueError("gamma_hat must be non-negative")
        if self.omega_1 <= 0:
            raise ValueError("omega_1 must be positive")
        return self

    @property
    def eps_d(self) -> float:
        return self.eps_s - self.eps_inf

    @property
    def gamma(self) -> float:
        return self.gamma_hat * self.omega_1

    @property
    def omega_p2(self) -> float:
        """Squared plasma frequency, eps_d * omega_1**2"""
        return self.eps_d * self.omega_1**2

    def lossless(self) -> "LorentzMedium":
        return self.model_copy(update={"gamma_hat": 0.0})


class FluxParams(BaseModel):
    """DG numerical flux parameters (alpha, beta1, beta2)"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    alpha: float = 0.0
    beta1: float = Field(0.0, ge=0.0)
    beta2: float = Field(0.0, ge=0.0)

    @classmethod
    def central(cls) -> "FluxParams":
        return cls(alpha=0.0, beta1=0.0, beta2=0.0)

    @classmethod
    def alternating(cls, sign: int = 1) -> "FluxParams":
        return cls(alpha=0.5 if sign >= 0 else -0.5, beta1=0.0, beta2=0.0)

    @classmethod
    def upwind(cls, eps_inf: float) -> "FluxParams":
        root = math.sqrt(eps_inf)
        return cls(alpha=0.0, beta1=1.0 / (2.0 * root), beta2=root / 2.0)

    @classmethod
    def from_kind(cls, kind: FluxKind, eps_inf: float) -> "FluxParams":
        kind = FluxKind(kind)
        if kind == FluxKind.CENTRAL:
            return cls.central()
        if kind == FluxKind.ALTERNATING_PLUS:
            return cls.alternating(1)
        if kind == FluxKind.ALTERNATING_MINUS:
            return cls.alternating(-1)
        return cls.upwind(eps_inf)

    @property
    def quadratic_case(self) -> bool:
        return abs(self.alpha**2 + self.beta1 * self.beta2 - 0.25) < 1e-12

    @property
    def is_alternating(self) -> bool:
        return abs(abs(self.alpha) - 0.5) < 1e-12 and self.beta1 == 0 and self.beta2 == 0

    @property
    def dissipative(self) -> bool:
        return self.beta1 > 0 or self.beta2 > 0


class Mesh(BaseModel):
    """Mesh parameters; any two of (W1, omega1_h, nu) determine the third"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    w1: Optional[float] = Field(None, gt=0, description="omega_1 * dt")
    omega1_h: Optional[float] = Field(None, gt=0, description="omega_1 * h")
    nu: Optional[float] = Field(None, gt=0, description="CFL number dt / (h sqrt(eps_inf))")

    def resolve(self, eps_inf: float) -> Tuple[Optional[float], Optional[float], Optional[float]]:
        """Return (w1, omega1_h, nu) with the missing member derived"""
        w1, omega1_h, nu = self.w1, self.omega1_h, self.nu
        root = math.sqrt(eps_inf)
        if w1 is not None and nu is not None and omega1_h is None:
            omega1_h = w1 / (root * nu)
        elif w1 is not None and omega1_h is not None and nu is None:
            nu = w1 / (root * omega1_h)
        elif omega1_h is not None and nu is not None and w1 is None:
            w1 = nu * root * omega1_h
        return w1, omega1_h, nu


class SchemeSpec(BaseModel):
    """Which discretization is analyzed"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    temporal: TemporalKind = TemporalKind.NONE
    spatial: SpatialKind = SpatialKind.NONE
    order: int = Field(1, ge=0, description="FD order parameter M or DG degree p")
    flux: Optional[FluxKind] = None

    @model_validator(mode="after")
    def _check_order(self) -> "SchemeSpec":
        if self.spatial == SpatialKind.FD and self.order < 1:
            raise ValueError("FD order parameter M must be >= 1")
        if self.spatial == SpatialKind.DG and self.flux is None:
            raise ValueError("DG schemes need a flux")
        return self

    @property
    def label(self) -> str:
        parts = [self.temporal.value]
        if self.spatial == SpatialKind.FD:
            parts.append(f"fd{2 * self.order}")
        elif self.spatial == SpatialKind.DG:
            parts.append(f"dg{self.order}-{self.flux.value}")
        return "-".join(parts)


@dataclass(frozen=True)
class ComplexWavenumber:
    """Wavenumber with the sign tag of its branch"""

    value: complex
    branch: int = 1  # +1 principal, -1 reflected


@dataclass(frozen=True)
class ModifiedParams:
    """Frequency and medium seen by a time-discretized system"""

    w_hat_mod: float
    eps_s_mod: float
    eps_inf_mod: float
    gamma_hat_mod: float


@dataclass(frozen=True)
class FDStencil:
    """Staggered FD2M coefficients in exact arithmetic"""

    M: int
    lambdas: Tuple[Fraction, ...]
    taylor: Tuple[Fraction, ...]  # [(2p-3)!!]^2/(2p-1)!, the sin-power form

    @property
    def lambdas_float(self) -> np.ndarray:
        return np.array([float(v) for v in self.lambdas])

    @property
    def taylor_float(self) -> np.ndarray:
        return np.array([float(v) for v in self.taylor])


@dataclass
class Mode:
    k_hat: complex
    mode_class: ModeClass
    residual: float
    family: int = 1  # sign of the right-hand side family (FD), +1 for DG


@dataclass
class ModeSet:
    """Every discrete wavenumber at one frequency"""

    modes: List[Mode]
    w_hat: float
    omega1_h: float
    count_expected: int
    reference: complex = 0j  # the continuous k*h the physical mode tracks

    @property
    def physical(self) -> Mode:
        for mode in self.modes:
            if mode.mode_class == ModeClass.PHYSICAL and mode.family > 0:
                return mode
        raise LookupError("mode set has no physical mode")

    @property
    def spurious(self) -> List[Mode]:
        return [m for m in self.modes if m.mode_class == ModeClass.SPURIOUS]

    @property
    def max_residual(self) -> float:
        return max((m.residual for m in self.modes), default=0.0)


@dataclass(frozen=True)
class ComparisonRegion:
    """Frequencies where the leap-frog FD2M (M >= 2) coefficient beats M = 1"""

    kind: str  # "always", "band" ([lo, hi]) or "lower" ([0, hi])
    lo: float = 0.0
    hi: float = math.inf

    def contains(self, w_hat: float) -> bool:
        if self.kind == "always":
            return True
        return self.lo <= w_hat <= self.hi


@dataclass
class DGLocalMatrices:
    """Reference-element matrices of the nodal DG scheme (width 1, no h)"""

    p: int
    nodes: np.ndarray
    mass: np.ndarray
    stiffness: np.ndarray
    boundary: np.ndarray = field(repr=False)

    def flux_q(self, z: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Q_{-1}(z), Q_0(z), Q_1(z)"""
        n, p = self.p + 1, self.p
        q_minus, q_zero, q_plus = (np.zeros((n, n)) for _ in range(3))
        q_minus[0, p] = 0.5 - z
        q_plus[p, 0] = -0.5 - z
        # Overlapping corners add up when p = 0
        q_zero[0, 0] += 0.5 + z
        q_zero[p, p] += -0.5 + z
        return q_minus, q_zero, q_plus

    def flux_s(self, z: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """S_{-1}(z), S_0(z), S_1(z)"""
        n, p = self.p + 1, self.p
        s_minus, s_zero, s_plus = (np.zeros((n, n)) for _ in range(3))
        s_minus[0, p] = -z
        s_plus[p, 0] = -z
        s_zero[0, 0] += z
        s_zero[p, p] += z
        return s_minus, s_zero, s_plus


@dataclass(frozen=True)
class RefractionData:
    """Complex index of refraction k/omega and the wavenumber it came from"""

    psi: complex
    source: str = "exact"  # "exact" or a scheme label


@dataclass
class QuantityRow:
    w_hat: float
    norm_phase_velocity: float
    norm_attenuation: Optional[float]  # None when the exact attenuation vanishes
    norm_energy_velocity: float
    norm_group_velocity: float
