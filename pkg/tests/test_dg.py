import math

import numpy as np
import pytest

from dispersion import dg, fd, temporal
from dispersion.medium import exact_wavenumber_hat
from dispersion.models import FluxParams
from schemas.common import FluxKind, ModeClass, TemporalKind
from utils.errors import DegreeTooLarge

CENTRAL = FluxParams.central()
ALTERNATING = FluxParams.alternating(1)


def test_lagrange_nodes():
    np.testing.assert_allclose(dg.lagrange_nodes(0), [0.0])
    np.testing.assert_allclose(dg.lagrange_nodes(2), [-0.5, 0.0, 0.5])


@pytest.mark.parametrize("p", range(0, 5))
def test_local_matrices(p):
    local = dg.assemble_local(p)
    assert local.mass.sum() == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(local.mass, local.mass.T, atol=1e-14)
    assert np.all(np.linalg.eigvalsh(local.mass) > 0)
    np.testing.assert_allclose(local.stiffness + local.stiffness.T, local.boundary, atol=1e-12)


def test_degree_too_large():
    with pytest.raises(DegreeTooLarge):
        dg.assemble_local(9)


def test_flux_parameters(medium):
    upwind = FluxParams.from_kind(FluxKind.UPWIND, medium.eps_inf)
    assert upwind.beta1 == pytest.approx(1 / 3)
    assert upwind.beta2 == pytest.approx(0.75)
    assert upwind.quadratic_case and upwind.dissipative
    assert ALTERNATING.quadratic_case and ALTERNATING.is_alternating
    assert not CENTRAL.quadratic_case


def test_lowest_order_alternating_is_yee(medium):
    omega1_h = math.pi / 30
    k_dg = dg.physical_wavenumber(0, ALTERNATING, medium, 0.5, omega1_h)
    k_fd = fd.physical_wavenumber(TemporalKind.NONE, 1, medium, 0.5, 0.0, omega1_h)
    assert k_dg == pytest.approx(k_fd, rel=1e-9)


SEMIDISCRETE_ORDERS = {
    FluxKind.CENTRAL: (2, 2, 6, 6),
    FluxKind.ALTERNATING_PLUS: (2, 4, 6, 8),
    FluxKind.UPWIND: (1, 3, 5, 7),
}
# Coarsest K = |k_ex| h per degree; each fit spans a factor two in K
COARSE_K = (0.2, 0.4, 0.8, 1.4)


@pytest.mark.parametrize("flux_kind", list(SEMIDISCRETE_ORDERS))
@pytest.mark.parametrize("p", range(4))
def test_semidiscrete_convergence(medium, p, flux_kind):
    flux = FluxParams.from_kind(flux_kind, medium.eps_inf)
    K = COARSE_K[p] * 2.0 ** (-np.arange(4) / 3)
    meshes = K / abs(exact_wavenumber_hat(medium, 0.5))
    errors = [dg.relative_phase_error(p, flux, medium, 0.5, h) for h in meshes]
    slope = np.polyfit(np.log(K), np.log(errors), 1)[0]
    assert slope == pytest.approx(SEMIDISCRETE_ORDERS[flux_kind][p], abs=0.2)


@pytest.mark.parametrize(
    "p, flux, limit",
    [
        (0, FluxKind.CENTRAL, 2.0),
        (0, FluxKind.ALTERNATING_PLUS, 1.0),
        (1, FluxKind.CENTRAL, 0.5),
        (1, FluxKind.ALTERNATING_PLUS, 1 / 3),
    ],
)
def test_sharp_cfl(p, flux, limit):
    assert dg.cfl_max_dg(p, flux, 2.25) == pytest.approx(limit, abs=1e-5)


@pytest.mark.parametrize("p", [1, 2, 3])
@pytest.mark.parametrize("flux", [FluxKind.CENTRAL, FluxKind.ALTERNATING_PLUS])
def test_sharp_cfl_above_energy_bound(p, flux):
    assert dg.cfl_max_dg(p, flux, 2.25) >= dg.energy_cfl_dg(p, flux)


def test_sharp_cfl_independent_of_permittivity():
    assert dg.cfl_max_dg(1, FluxKind.CENTRAL, 1.0) == pytest.approx(dg.cfl_max_dg(1, FluxKind.CENTRAL, 4.0), abs=1e-5)


ENERGY_BOUNDS = {
    FluxKind.CENTRAL: (1.0, 0.211325, 0.101287, 0.0605268),
    FluxKind.UPWIND: (1.0, 0.211325, 0.101287, 0.0605268),
    FluxKind.ALTERNATING_PLUS: (1.0, 0.192450, 0.089115, 0.0521629),
    FluxKind.ALTERNATING_MINUS: (1.0, 0.192450, 0.089115, 0.0521629),
}


@pytest.mark.parametrize("flux", list(ENERGY_BOUNDS))
@pytest.mark.parametrize("p", range(4))
def test_energy_bound_table(p, flux):
    assert dg.energy_cfl_dg(p, flux) == pytest.approx(ENERGY_BOUNDS[flux][p], rel=1e-5)


def test_energy_bound_closed_forms():
    assert dg.energy_cfl_dg(1, FluxKind.CENTRAL) == pytest.approx((3 - math.sqrt(3)) / 6, rel=1e-12)
    assert dg.energy_cfl_dg(1, FluxKind.ALTERNATING_PLUS) == pytest.approx(1 / (3 * math.sqrt(3)), rel=1e-12)
    assert dg.energy_cfl_dg(4, FluxKind.CENTRAL) < dg.energy_cfl_dg(3, FluxKind.CENTRAL)
    with pytest.raises(DegreeTooLarge):
        dg.energy_cfl_dg(9, FluxKind.CENTRAL)


# Quadratic determinants: alternating always; upwind only without leap-frog
MODE_COUNTS = {
    (FluxKind.CENTRAL, TemporalKind.NONE): 4,
    (FluxKind.CENTRAL, TemporalKind.LEAPFROG): 4,
    (FluxKind.CENTRAL, TemporalKind.TRAPEZOIDAL): 4,
    (FluxKind.ALTERNATING_PLUS, TemporalKind.NONE): 2,
    (FluxKind.ALTERNATING_PLUS, TemporalKind.LEAPFROG): 2,
    (FluxKind.ALTERNATING_PLUS, TemporalKind.TRAPEZOIDAL): 2,
    (FluxKind.ALTERNATING_MINUS, TemporalKind.NONE): 2,
    (FluxKind.ALTERNATING_MINUS, TemporalKind.LEAPFROG): 2,
    (FluxKind.ALTERNATING_MINUS, TemporalKind.TRAPEZOIDAL): 2,
    (FluxKind.UPWIND, TemporalKind.NONE): 2,
    (FluxKind.UPWIND, TemporalKind.LEAPFROG): 4,
    (FluxKind.UPWIND, TemporalKind.TRAPEZOIDAL): 2,
}


@pytest.mark.parametrize("flux_kind, scheme", list(MODE_COUNTS))
@pytest.mark.parametrize("p", range(4))
def test_mode_counts(medium, p, flux_kind, scheme):
    h = math.pi / 30
    flux = FluxParams.from_kind(flux_kind, medium.eps_inf)
    W1 = None
    if scheme != TemporalKind.NONE:
        W1 = 0.5 * dg.cfl_max_dg(p, flux_kind, medium.eps_inf) * math.sqrt(medium.eps_inf) * h
    modes = dg.solve_dg_modes(p, flux, medium, 0.5, h, scheme, W1)
    assert len(modes.modes) == MODE_COUNTS[flux_kind, scheme]
    physical = [m for m in modes.modes if m.mode_class == ModeClass.PHYSICAL]
    assert sorted(m.family for m in physical) == [-1, 1]
    assert modes.physical.k_hat == pytest.approx(modes.reference, rel=1e-2)
    assert modes.max_residual < 1e-6


def test_leapfrog_mode_set(medium):
    W1 = 0.3 * math.sqrt(medium.eps_inf) * math.pi / 30
    modes = dg.solve_dg_modes(1, ALTERNATING, medium, 0.5, math.pi / 30, TemporalKind.LEAPFROG, W1)
    assert len(modes.modes) == 2
    assert modes.physical.k_hat == pytest.approx(modes.reference, rel=1e-2)


def test_dispersion_polynomial_reproduces_determinant(medium):
    symbol = dg.assemble_symbol(1, CENTRAL, medium, 0.5, math.pi / 30)
    coefficients = dg.dispersion_polynomial(symbol)
    xi = 0.8 * np.exp(0.7j)
    assert dg.laurent_value(coefficients, xi) == pytest.approx(symbol.determinant(xi), rel=1e-8)


def test_upwind_b_zero(medium, lossless):
    w_zero = dg.upwind_b_zero(medium)
    assert w_zero == pytest.approx(1.290994, abs=1e-6)
    b, B = dg.b_quantity(FluxParams.upwind(lossless.eps_inf), lossless, w_zero, h=0.1)
    assert abs(b) < 1e-12
    assert abs(B) < 1e-13
    assert dg.b_quantity(CENTRAL, medium, 0.5) == (0j, 0j)


def test_free_space_amplification_shape():
    matrices = dg.free_space_amplification(1, ALTERNATING, 2.25, 0.2, [0.5, 1.0, math.pi])
    assert matrices.shape == (3, 4, 4)
    radii = np.abs(np.linalg.eigvals(matrices)).max(axis=1)
    np.testing.assert_allclose(radii, 1.0, atol=1e-9)



def test_lowest_order_central_determinant_closed_form(medium, rng):
    h = math.pi / 30
    symbol = dg.assemble_symbol(0, CENTRAL, medium, 0.5, h)
    omega = 0.5 * medium.omega_1
    lorentz = medium.omega_1**2 - omega**2 - 2j * medium.gamma * omega
    for xi in np.exp(1j * rng.uniform(-math.pi, math.pi, 20)):
        flux = (1 / xi - xi) / 2
        expected = -(omega * h) ** 2 * (medium.eps_inf * lorentz + medium.omega_p2) - lorentz * flux**2
        assert symbol.determinant(xi) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("p", range(4))
def test_alternating_sign_does_not_change_dispersion(medium, p):
    h = math.pi / 15
    plus = dg.physical_wavenumber(p, FluxParams.alternating(1), medium, 0.5, h)
    minus = dg.physical_wavenumber(p, FluxParams.alternating(-1), medium, 0.5, h)
    assert minus == pytest.approx(plus, rel=1e-10)


@pytest.mark.parametrize("radius", [1.0, 0.7])
def test_dispersion_polynomial_recovers_laurent_coefficients(rng, radius):
    coefficients = rng.standard_normal(5) + 1j * rng.standard_normal(5)

    class LaurentSymbol:
        def determinant(self, xi):
            return dg.laurent_value(coefficients, xi)

    recovered = dg.dispersion_polynomial(LaurentSymbol(), radius)
    np.testing.assert_allclose(recovered, coefficients, rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize(
    "p, flux_kind, scheme",
    [
        (1, FluxKind.ALTERNATING_PLUS, TemporalKind.LEAPFROG),
        (1, FluxKind.ALTERNATING_PLUS, TemporalKind.TRAPEZOIDAL),
        (2, FluxKind.CENTRAL, TemporalKind.LEAPFROG),
        (2, FluxKind.CENTRAL, TemporalKind.TRAPEZOIDAL),
    ],
)
def test_fully_discrete_leading_error_is_temporal(medium, p, flux_kind, scheme):
    # Halving W1 on a fixed mesh removes the spatial part of k/k_ex - 1
    h, W1, w_hat = math.pi / 15, 0.04, 0.5
    flux = FluxParams.from_kind(flux_kind, medium.eps_inf)
    k_exact = exact_wavenumber_hat(medium, w_hat)
    coarse, fine = (
        dg.physical_wavenumber(p, flux, medium, w_hat, h, scheme, w1) / k_exact - 1 for w1 in (W1, W1 / 2)
    )
    fitted = (coarse - fine) / (0.75 * (w_hat * W1) ** 2)
    expected = temporal.leading_error_coefficient(scheme, medium, w_hat)
    assert abs(fitted - expected) <= 0.05 * abs(expected)
