import math

import numpy as np
import pytest

from dispersion.omega_solver import (
    lossless_roots,
    omega_leading_error,
    omega_quartic_roots,
    omega_relative_error,
    pair_branches,
    quartic_coefficients,
    scaled_wavenumber,
)
from utils.errors import BranchMismatch

OMEGA1_H = math.pi / 30


@pytest.mark.parametrize("k_hat", [0.1, 0.5, 1.5, 3.0])
def test_lossless_roots_match_closed_form(lossless, k_hat):
    roots = omega_quartic_roots(lossless, k_hat, OMEGA1_H)
    expected = lossless_roots(lossless, scaled_wavenumber(k_hat, OMEGA1_H))
    np.testing.assert_allclose(roots, expected, atol=1e-10)


def test_roots_solve_the_quartic(medium):
    quartic = quartic_coefficients(medium, 0.7, OMEGA1_H, M=2)
    for root in omega_quartic_roots(medium, 0.7, OMEGA1_H, M=2):
        assert abs(quartic(root)) < 1e-9


def test_branches_mirror(medium):
    roots = omega_quartic_roots(medium, 0.8, OMEGA1_H)
    np.testing.assert_allclose(-np.conj(roots[::-1]), roots, atol=1e-10)
    assert np.all(roots.imag < 0)


def test_pair_branches():
    values = np.array([-2.0, -1.0, 1.0, 2.0], dtype=complex)
    np.testing.assert_array_equal(pair_branches(values, values[::-1]), [3, 2, 1, 0])
    with pytest.raises(BranchMismatch):
        pair_branches(np.array([1.0, 5.0]), np.array([0.0, 2.0]))


def test_relative_errors_symmetric(medium):
    errors = [omega_relative_error(2, medium, 0.6, OMEGA1_H, branch) for branch in (1, 2, 3, 4)]
    assert errors[0] == pytest.approx(errors[3], rel=1e-9)
    assert errors[1] == pytest.approx(errors[2], rel=1e-9)
    assert all(e > 0 for e in errors)


def test_inner_branch_error_follows_leading_term(lossless):
    # X = k_hat / omega1_h small keeps the branch linear in X
    k_hat, omega1_h = 0.05, 1.0
    error = omega_relative_error(1, lossless, k_hat, omega1_h, 2)
    assert error == pytest.approx(omega_leading_error(1, lossless, k_hat, omega1_h, 2), rel=0.05)


def test_scaled_wavenumber():
    assert scaled_wavenumber(0.3, 0.1) == pytest.approx(3.0)
    assert scaled_wavenumber(0.3, 0.1, M=1) == pytest.approx(2 * math.sin(0.15) / 0.1)
    with pytest.raises(ValueError):
        scaled_wavenumber(0.3, 0.0)
    with pytest.raises(ValueError):
        omega_relative_error(1, None, 0.3, 0.1, 5)
