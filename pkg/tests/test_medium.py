import math

import pytest
from pydantic import ValidationError

from dispersion.medium import (
    absorption_band,
    delta,
    exact_group_slowness,
    exact_wavenumber,
    exact_wavenumber_hat,
    principal_root,
    relative_permittivity,
)
from dispersion.models import LorentzMedium
from utils.errors import PoleAtResonance


def test_permittivity_limits(medium):
    assert relative_permittivity(medium, 0.0) == pytest.approx(5.25)
    assert relative_permittivity(medium, 1e6).real == pytest.approx(2.25, rel=1e-9)


def test_lossy_permittivity_at_resonance(medium):
    assert relative_permittivity(medium, 1.0) == pytest.approx(2.25 + 150j)


def test_lossless_pole_raises(lossless):
    with pytest.raises(PoleAtResonance):
        relative_permittivity(lossless, 1.0)


def test_principal_branch(medium):
    for w_hat in (0.2, 0.9, 1.0, 1.3, 2.5):
        k = exact_wavenumber_hat(medium, w_hat)
        assert k.real >= 0
        assert k.imag >= 0


def test_in_band_wavenumber_is_imaginary(lossless):
    k = exact_wavenumber_hat(lossless, 1.2)
    assert k.real == 0
    assert k.imag > 0


def test_wavenumber_carries_principal_tag(medium):
    assert exact_wavenumber(medium, 0.5).branch == 1


def test_negative_frequency_rejected(medium):
    with pytest.raises(ValueError):
        exact_wavenumber(medium, -0.1)


def test_principal_root():
    assert principal_root(-4.0) == 2j
    assert principal_root(4.0) == 2.0
    root = principal_root(-3.0 - 4.0j)
    assert root.real >= 0
    assert root * root == pytest.approx(-3.0 - 4.0j)


def test_delta_is_half_frequency_times_slope(medium):
    w_hat, step = 0.7, 1e-6
    slope = (relative_permittivity(medium, w_hat + step) - relative_permittivity(medium, w_hat - step)) / (2 * step)
    assert delta(medium, w_hat) == pytest.approx(w_hat * slope / 2, rel=1e-7)


def test_group_slowness_matches_difference_quotient(medium):
    w_hat, step = 0.5, 1e-6
    quotient = (exact_wavenumber_hat(medium, w_hat + step) - exact_wavenumber_hat(medium, w_hat - step)) / (2 * step)
    assert exact_group_slowness(medium, w_hat) == pytest.approx(quotient, rel=1e-7)


def test_absorption_band(medium):
    lo, hi = absorption_band(medium)
    assert lo == 1.0
    assert hi == pytest.approx(math.sqrt(7 / 3), rel=1e-12)
    assert hi == pytest.approx(1.527525, abs=1e-6)


@pytest.mark.parametrize(
    "params",
    [
        {"eps_s": 2.0, "eps_inf": 2.25},
        {"eps_inf": -1.0},
        {"gamma_hat": -0.1},
        {"omega_1": 0.0},
    ],
)
def test_invalid_medium_parameters(params):
    with pytest.raises(ValidationError):
        LorentzMedium(**params)


def test_lossless_copy_keeps_permittivities(medium):
    twin = medium.lossless()
    assert twin.gamma_hat == 0.0
    assert (twin.eps_s, twin.eps_inf, twin.omega_1) == (medium.eps_s, medium.eps_inf, medium.omega_1)
    assert medium.eps_d == pytest.approx(3.0)
