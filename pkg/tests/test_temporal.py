import math

import numpy as np
import pytest

from dispersion.temporal import (
    leading_error_coefficient,
    modified_params,
    r_omega,
    relative_phase_error,
    s_omega,
    scheme_wavenumber,
)
from dispersion.medium import exact_wavenumber_hat
from schemas.common import TemporalKind
from utils.errors import TanPole, ZeroExactWavenumber

LF, TP = TemporalKind.LEAPFROG, TemporalKind.TRAPEZOIDAL


def test_factor_values():
    assert s_omega(0.0) == 1.0
    assert r_omega(0.0) == 1.0
    assert s_omega(math.pi) == pytest.approx(2 / math.pi, rel=1e-14)
    assert r_omega(math.pi / 2) == pytest.approx(4 / math.pi, rel=1e-14)


def test_tan_pole():
    with pytest.raises(TanPole):
        r_omega(math.pi)
    with pytest.raises(TanPole):
        r_omega(3 * math.pi)


def test_modified_params_scale_permittivities(medium):
    W1, w_hat = 0.2, 0.8
    W = W1 * w_hat
    lf = modified_params(LF, medium, w_hat, W1)
    tp = modified_params(TP, medium, w_hat, W1)
    assert lf.w_hat_mod == tp.w_hat_mod == pytest.approx(w_hat * r_omega(W))
    assert lf.eps_inf_mod == pytest.approx(medium.eps_inf * s_omega(W) ** 2)
    assert tp.eps_s_mod == pytest.approx(medium.eps_s * r_omega(W) ** 2)
    assert lf.gamma_hat_mod == medium.gamma_hat


@pytest.mark.parametrize("w_hat", [0.3, 0.9, 1.0, 1.2, 2.0, 2.8])
def test_trapezoidal_and_leapfrog_wavenumbers_are_proportional(medium, w_hat):
    W1 = math.pi / 15
    W = w_hat * W1
    k_lf = scheme_wavenumber(LF, medium, w_hat, W1)
    k_tp = scheme_wavenumber(TP, medium, w_hat, W1)
    assert k_tp * s_omega(W) == pytest.approx(k_lf * r_omega(W), rel=1e-13)


def test_semidiscrete_in_time_is_exact(medium):
    assert scheme_wavenumber(TemporalKind.NONE, medium, 0.7, 0.1) == exact_wavenumber_hat(medium, 0.7)


@pytest.mark.parametrize("scheme", [LF, TP])
def test_second_order_at_resonance(medium, scheme):
    w1s = np.array([math.pi / 60, math.pi / 120, math.pi / 240])
    errors = [relative_phase_error(scheme, medium, 1.0, w1) for w1 in w1s]
    slope = np.polyfit(np.log(w1s), np.log(errors), 1)[0]
    assert slope == pytest.approx(2.0, abs=0.1)


def test_leapfrog_worse_inside_band(lossless):
    W1 = math.pi / 60
    for w_hat in (1.1, 1.2, 1.3, 1.4):
        assert relative_phase_error(LF, lossless, w_hat, W1) > relative_phase_error(TP, lossless, w_hat, W1)


def test_trapezoidal_worse_outside_band(lossless):
    W1 = math.pi / 60
    for w_hat in (0.3, 0.6, 2.0, 2.5):
        assert relative_phase_error(TP, lossless, w_hat, W1) > relative_phase_error(LF, lossless, w_hat, W1)


def test_zero_frequency_error_undefined(medium):
    with pytest.raises(ZeroExactWavenumber):
        relative_phase_error(LF, medium, 0.0, 0.1)


@pytest.mark.parametrize("scheme", [LF, TP])
def test_leading_coefficient(medium, scheme):
    W1, w_hat = 1e-3, 0.5
    W = W1 * w_hat
    ratio = scheme_wavenumber(scheme, medium, w_hat, W1) / exact_wavenumber_hat(medium, w_hat) - 1
    assert ratio / W**2 == pytest.approx(leading_error_coefficient(scheme, medium, w_hat), rel=1e-4)
