import math

import pytest

from dispersion.medium import exact_group_slowness
from dispersion.models import SchemeSpec
from dispersion.quantities import (
    ExactWavenumber,
    SchemeWavenumber,
    energy_velocity,
    exact_psi,
    normalized_attenuation,
    psi,
    quantity_row,
    refinement_ratio,
    refraction,
)
from schemas.common import SpatialKind, TemporalKind
from utils.errors import DegeneratePsi, ZeroFrequency


def test_exact_scheme_has_unit_quantities(medium):
    row = quantity_row(ExactWavenumber(medium), medium, 0.5)
    assert row.norm_phase_velocity == pytest.approx(1.0)
    assert row.norm_attenuation == pytest.approx(1.0)
    assert row.norm_energy_velocity == pytest.approx(1.0)
    assert row.norm_group_velocity == pytest.approx(1.0)


def test_lossless_attenuation_is_undefined(lossless):
    row = quantity_row(ExactWavenumber(lossless), lossless, 0.5)
    assert row.norm_attenuation is None
    assert normalized_attenuation(1.5 + 0.1j, 1.5 + 0j) is None


def test_psi_needs_positive_frequency():
    with pytest.raises(ZeroFrequency):
        psi(1.0 + 0j, 0.0)


def test_energy_velocity_needs_propagating_psi(medium):
    with pytest.raises(DegeneratePsi):
        energy_velocity(2.0j, medium)


def test_energy_velocity_equals_group_velocity_without_loss(lossless):
    w_hat = 0.5
    expected = 1.0 / exact_group_slowness(lossless, w_hat).real
    assert energy_velocity(exact_psi(lossless, w_hat), lossless) == pytest.approx(expected, rel=1e-10)


def test_scheme_wavenumber_exact_case(medium):
    spec = SchemeSpec()
    assert SchemeWavenumber(spec, medium)(0.7) == ExactWavenumber(medium)(0.7)


def test_second_order_refinement_ratio(medium):
    spec = SchemeSpec(temporal=TemporalKind.LEAPFROG, spatial=SpatialKind.FD, order=2)
    w1 = math.pi / 30
    omega1_h = w1 / (math.sqrt(medium.eps_inf) * 0.6)
    ratio = refinement_ratio(spec, medium, 0.5, w1, omega1_h)
    assert 3.6 <= ratio <= 4.4


def test_fd_quantities_close_to_one(medium):
    spec = SchemeSpec(spatial=SpatialKind.FD, order=2)
    row = quantity_row(SchemeWavenumber(spec, medium, None, math.pi / 60), medium, 0.5)
    assert row.norm_phase_velocity == pytest.approx(1.0, abs=1e-4)
    assert row.norm_energy_velocity == pytest.approx(1.0, abs=1e-3)
    assert row.norm_group_velocity == pytest.approx(1.0, abs=1e-3)


def test_refraction_is_tagged_with_its_source(medium):
    exact = refraction(ExactWavenumber(medium), medium, 0.5)
    assert exact.source == "exact"
    assert exact.psi == pytest.approx(exact_psi(medium, 0.5))
    assert exact.psi.imag > 0

    spec = SchemeSpec(spatial=SpatialKind.FD, order=2)
    scheme = refraction(SchemeWavenumber(spec, medium, None, math.pi / 60), medium, 0.5)
    assert scheme.source == spec.label
    assert scheme.psi == pytest.approx(exact.psi, rel=1e-4)
