"""
Normalized physical quantities of a scheme's physical mode: phase velocity,
attenuation, energy velocity and group velocity, each divided by its exact value.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

from core.config import get_settings
from dispersion import dg, fd
from dispersion.medium import exact_wavenumber_hat, principal_root, relative_permittivity
from dispersion.models import ComplexWavenumber, FluxParams, LorentzMedium, QuantityRow, RefractionData, SchemeSpec
from dispersion.temporal import scheme_wavenumber
from schemas.common import SpatialKind, TemporalKind
from utils.errors import DegenerateExact, DegeneratePsi, ZeroFrequency

logger = logging.getLogger(__name__)

DEGENERATE_RADIUS = 1e-14


def psi(k: Union[ComplexWavenumber, complex], omega: float) -> complex:
    """Complex index of refraction k/omega"""
    if omega <= 0:
        raise ZeroFrequency("psi needs a positive frequency", operation="psi", details={"omega": omega})
    value = k.value if isinstance(k, ComplexWavenumber) else k
    return complex(value) / omega


def exact_psi(medium: LorentzMedium, w_hat: float) -> complex:
    """sqrt(eps(w_hat)) on the principal branch"""
    return principal_root(relative_permittivity(medium, w_hat))


def normalized_phase_velocity(psi_n: complex, psi_e: complex) -> float:
    """Re(1/psi_N) / Re(1/psi_E)"""
    denominator = (1.0 / psi_e).real
    if abs(denominator) < DEGENERATE_RADIUS:
        raise DegenerateExact(
            "exact phase velocity vanishes", operation="normalized_phase_velocity", details={"psi_e": psi_e}
        )
    return (1.0 / psi_n).real / denominator


def normalized_attenuation(psi_n: complex, psi_e: complex) -> Optional[float]:
    """Im(psi_N) / Im(psi_E); None when the exact attenuation vanishes"""
    if abs(psi_e.imag) < DEGENERATE_RADIUS:
        return None
    return psi_n.imag / psi_e.imag


def energy_velocity(psi_value: complex, medium: LorentzMedium) -> float:
    """
    Velocity of energy transport for a plane wave with index psi

    Raises:
        DegeneratePsi: Re(psi) = 0
    """
    re_psi = psi_value.real
    if abs(re_psi) < DEGENERATE_RADIUS:
        raise DegeneratePsi("energy velocity needs Re(psi) != 0", operation="energy_velocity")
    square = psi_value * psi_value
    bracket = (square.real - medium.eps_s) * (square.real - medium.eps_inf) + square.imag**2
    return 1.0 / (re_psi + bracket / (medium.eps_d * re_psi))


def normalized_energy_velocity(psi_n: complex, psi_e: complex, medium: LorentzMedium) -> float:
    return energy_velocity(psi_n, medium) / energy_velocity(psi_e, medium)


def group_slowness(k_of: Callable[[float], complex], medium: LorentzMedium, w_hat: float) -> complex:
    """Forward-difference dk/domega with the configured step in w_hat"""
    step = get_settings().GROUP_VELOCITY_STEP
    return (k_of(w_hat + step) - k_of(w_hat)) / (step * medium.omega_1)


def normalized_group_velocity(k_of: Callable[[float], complex], medium: LorentzMedium, w_hat: float) -> float:
    """Re(v_g^N / v_g^E), both slownesses by the same forward difference"""
    exact = ExactWavenumber(medium)
    return (group_slowness(exact, medium, w_hat) / group_slowness(k_of, medium, w_hat)).real


@dataclass(frozen=True)
class ExactWavenumber:
    medium: LorentzMedium
    source = "exact"

    def __call__(self, w_hat: float) -> complex:
        return exact_wavenumber_hat(self.medium, w_hat)


@dataclass(frozen=True)
class SchemeWavenumber:
    """Physical-mode k (1/length) of a scheme as a function of w_hat"""

    spec: SchemeSpec
    medium: LorentzMedium
    w1: Optional[float] = None
    omega1_h: Optional[float] = None

    def __call__(self, w_hat: float) -> complex:
        spec, medium = self.spec, self.medium
        if spec.spatial == SpatialKind.NONE:
            if spec.temporal == TemporalKind.NONE:
                return exact_wavenumber_hat(medium, w_hat)
            return scheme_wavenumber(spec.temporal, medium, w_hat, self.w1)
        if spec.spatial == SpatialKind.FD:
            return fd.physical_wavenumber(spec.temporal, spec.order, medium, w_hat, self.w1 or 0.0, self.omega1_h)
        flux = FluxParams.from_kind(spec.flux, medium.eps_inf)
        w1 = None if spec.temporal == TemporalKind.NONE else self.w1
        return dg.physical_wavenumber(spec.order, flux, medium, w_hat, self.omega1_h, spec.temporal, w1)

    @property
    def source(self) -> str:
        return self.spec.label


def refraction(k_of: Callable[[float], complex], medium: LorentzMedium, w_hat: float) -> RefractionData:
    """psi of k_of at w_hat, tagged with the source of the wavenumber"""
    return RefractionData(psi=psi(k_of(w_hat), w_hat * medium.omega_1), source=getattr(k_of, "source", "scheme"))


def quantity_row(k_of: Callable[[float], complex], medium: LorentzMedium, w_hat: float) -> QuantityRow:
    """
    All four normalized quantities at one frequency

    Args:
        k_of: Physical-mode wavenumber of the scheme as a function of w_hat
        medium: Lorentz medium
        w_hat: Relative frequency (> 0)

    Returns:
        QuantityRow; norm_attenuation is None where the exact attenuation vanishes
    """
    psi_e = exact_psi(medium, w_hat)
    psi_n = refraction(k_of, medium, w_hat).psi
    return QuantityRow(
        w_hat=w_hat,
        norm_phase_velocity=normalized_phase_velocity(psi_n, psi_e),
        norm_attenuation=normalized_attenuation(psi_n, psi_e),
        norm_energy_velocity=normalized_energy_velocity(psi_n, psi_e, medium),
        norm_group_velocity=normalized_group_velocity(k_of, medium, w_hat),
    )


def scheme_quantity_row(
    spec: SchemeSpec, medium: LorentzMedium, w_hat: float, w1: Optional[float], omega1_h: Optional[float]
) -> QuantityRow:
    return quantity_row(SchemeWavenumber(spec, medium, w1, omega1_h), medium, w_hat)


def refinement_ratio(spec: SchemeSpec, medium: LorentzMedium, w_hat: float, w1: float, omega1_h: float) -> float:
    """|NPV - 1| on a mesh over |NPV - 1| on the mesh with W1 and omega1_h halved"""
    coarse = scheme_quantity_row(spec, medium, w_hat, w1, omega1_h)
    fine = scheme_quantity_row(spec, medium, w_hat, w1 / 2.0, omega1_h / 2.0)
    deviation = abs(fine.norm_phase_velocity - 1.0)
    if deviation == 0:
        return math.inf
    return abs(coarse.norm_phase_velocity - 1.0) / deviation
