import math

import numpy as np
import pytest

from dispersion import dg, fd
from dispersion.models import FluxParams, SchemeSpec
from schemas.common import FluxKind, ModeClass, SpatialKind, TemporalKind
from stepper import FDLeapFrogStepper, FDTrapezoidalStepper, FieldState, PeriodicGrid
from stepper.validation import (
    build_stepper,
    discrete_energy,
    grid_for,
    kernel_residual,
    measure_phase_error,
    noise_state,
    run_stability,
    step_amplification_matrix,
)
from utils.errors import CFLViolation, ConfigError

H = math.pi / 30
W_HAT = 0.5


def _physical(modes):
    return [m.k_hat for m in modes.modes if m.mode_class == ModeClass.PHYSICAL]


def test_grid_needs_enough_cells():
    with pytest.raises(ValueError):
        PeriodicGrid(N=4, h=0.1)
    grid = PeriodicGrid(N=16, h=0.5)
    assert grid.length == 8.0
    assert grid.is_commensurate(2 * math.pi * 3 / 16)
    assert not grid.is_commensurate(0.3)


def test_state_satisfies_constitutive_law(medium, rng):
    grid = PeriodicGrid(N=32, h=H)
    stepper = FDLeapFrogStepper(2, medium, grid, 0.5 * H * math.sqrt(medium.eps_inf))
    state = FieldState.from_fields(*(rng.standard_normal(32) for _ in range(4)), medium.eps_inf)
    assert state.constitutive_residual(medium.eps_inf) < 1e-14
    advanced = stepper.run(state, 5)
    assert advanced.n == 5
    assert advanced.constitutive_residual(medium.eps_inf) < 1e-12


@pytest.mark.parametrize("M", [1, 2, 3])
@pytest.mark.parametrize("temporal", [TemporalKind.LEAPFROG, TemporalKind.TRAPEZOIDAL])
def test_fd_kernel_matches_analysis(medium, temporal, M):
    nu = 0.7 * fd.cfl_max_fd(M)
    W1 = nu * math.sqrt(medium.eps_inf) * H
    spec = SchemeSpec(temporal=temporal, spatial=SpatialKind.FD, order=M)
    stepper = build_stepper(spec, medium, grid_for(spec, 64, H), W1)
    modes = fd.solve_fullydiscrete_modes(temporal, M, medium, W_HAT, W1, nu)
    for k_hat in _physical(modes):
        assert kernel_residual(stepper, k_hat, W_HAT) < 1e-9


@pytest.mark.parametrize("p", [0, 1, 2])
@pytest.mark.parametrize("flux", [FluxKind.ALTERNATING_PLUS, FluxKind.CENTRAL, FluxKind.UPWIND])
def test_dg_kernel_matches_analysis(medium, flux, p):
    nu = 0.7 * dg.cfl_max_dg(p, flux, medium.eps_inf)
    W1 = nu * math.sqrt(medium.eps_inf) * H
    spec = SchemeSpec(temporal=TemporalKind.LEAPFROG, spatial=SpatialKind.DG, order=p, flux=flux)
    stepper = build_stepper(spec, medium, grid_for(spec, 64, H), W1)
    modes = dg.solve_dg_modes(
        p, FluxParams.from_kind(flux, medium.eps_inf), medium, W_HAT, H, TemporalKind.LEAPFROG, W1
    )
    for k_hat in _physical(modes):
        assert kernel_residual(stepper, k_hat, W_HAT) < 1e-8


def test_lowest_order_alternating_dg_steps_like_yee(medium):
    dt = 0.9 * H * math.sqrt(medium.eps_inf)
    fd_spec = SchemeSpec(temporal=TemporalKind.LEAPFROG, spatial=SpatialKind.FD, order=1)
    dg_spec = SchemeSpec(
        temporal=TemporalKind.LEAPFROG, spatial=SpatialKind.DG, order=0, flux=FluxKind.ALTERNATING_PLUS
    )
    fd_stepper = build_stepper(fd_spec, medium, grid_for(fd_spec, 64, H), dt)
    dg_stepper = build_stepper(dg_spec, medium, grid_for(dg_spec, 64, H), dt)
    fd_state = noise_state(fd_stepper, seed=5)
    dg_state = FieldState.from_fields(
        *(u[:, None] for u in (fd_state.H, fd_state.E, fd_state.P, fd_state.J)), medium.eps_inf
    )
    fd_state, dg_state = fd_stepper.run(fd_state, 200), dg_stepper.run(dg_state, 200)
    for name in ("H", "E", "P", "J"):
        np.testing.assert_allclose(getattr(dg_state, name)[:, 0], getattr(fd_state, name), rtol=1e-10, atol=1e-12)


def test_kernel_rejects_wrong_wavenumber(medium):
    nu = 0.5
    W1 = nu * math.sqrt(medium.eps_inf) * H
    spec = SchemeSpec(temporal=TemporalKind.LEAPFROG, spatial=SpatialKind.FD, order=1)
    stepper = build_stepper(spec, medium, grid_for(spec, 64, H), W1)
    physical = _physical(fd.solve_fullydiscrete_modes(TemporalKind.LEAPFROG, 1, medium, W_HAT, W1, nu))[0]
    assert kernel_residual(stepper, 1.1 * physical, W_HAT) > 1e-6


def test_leapfrog_conserves_lossless_energy(lossless):
    grid = PeriodicGrid(N=64, h=H)
    stepper = FDLeapFrogStepper(2, lossless, grid, 0.5 * fd.cfl_max_fd(2) * H * math.sqrt(lossless.eps_inf))
    run = run_stability(stepper, noise_state(stepper, seed=3), 500)
    assert not run.blew_up
    np.testing.assert_allclose(run.energy, run.energy[0], rtol=1e-10)


def test_lossy_energy_decays(medium):
    grid = PeriodicGrid(N=64, h=H)
    stepper = FDLeapFrogStepper(1, medium, grid, 0.5 * H * math.sqrt(medium.eps_inf))
    run = run_stability(stepper, noise_state(stepper, seed=4), 300)
    assert run.energy[-1] < run.energy[0]


def test_trapezoidal_stable_beyond_leapfrog_limit(lossless):
    grid = PeriodicGrid(N=64, h=H)
    stepper = FDTrapezoidalStepper(1, lossless, grid, 5.0 * H * math.sqrt(lossless.eps_inf))
    run = run_stability(stepper, noise_state(stepper), 300)
    assert not run.blew_up
    np.testing.assert_allclose(run.energy, run.energy[0], rtol=1e-9)


@pytest.mark.slow
def test_trapezoidal_long_run_at_large_cfl(lossless):
    grid = PeriodicGrid(N=64, h=H)
    stepper = FDTrapezoidalStepper(2, lossless, grid, 5.0 * H * math.sqrt(lossless.eps_inf))
    state = noise_state(stepper, seed=6)
    run = run_stability(stepper, state, 10_000)
    assert not run.blew_up
    assert run.max_energy_ratio <= 1 + 1e-8
    assert discrete_energy(stepper, stepper.run(state, 10)) == pytest.approx(run.energy[0], rel=1e-12)


@pytest.mark.slow
@pytest.mark.parametrize("flux", [FluxKind.CENTRAL, FluxKind.ALTERNATING_PLUS])
def test_dg_leapfrog_long_run_near_cfl_limit(lossless, flux):
    spec = SchemeSpec(temporal=TemporalKind.LEAPFROG, spatial=SpatialKind.DG, order=1, flux=flux)
    dt = 0.99 * dg.cfl_max_dg(1, flux, lossless.eps_inf) * H * math.sqrt(lossless.eps_inf)
    stepper = build_stepper(spec, lossless, grid_for(spec, 64, H), dt)
    run = run_stability(stepper, noise_state(stepper, seed=7), 10_000)
    assert not run.blew_up
    assert run.max_energy_ratio <= 1 + 1e-8


@pytest.mark.parametrize("M", [1, 2, 3])
def test_leapfrog_stability_bracket(lossless, M):
    grid = PeriodicGrid(N=64, h=H)
    limit = fd.cfl_max_fd(M)
    root = math.sqrt(lossless.eps_inf)
    below = FDLeapFrogStepper(M, lossless, grid, 0.9 * limit * H * root)
    above = FDLeapFrogStepper(M, lossless, grid, 1.1 * limit * H * root, allow_unstable=True)
    assert not run_stability(below, noise_state(below), 500).blew_up
    assert run_stability(above, noise_state(above), 500).blew_up


def test_cfl_violation_without_override(medium):
    grid = PeriodicGrid(N=32, h=H)
    with pytest.raises(CFLViolation):
        FDLeapFrogStepper(1, medium, grid, 1.1 * H * math.sqrt(medium.eps_inf))


def test_amplification_is_unitary_without_loss(lossless):
    grid = PeriodicGrid(N=32, h=H)
    stepper = FDLeapFrogStepper(2, lossless, grid, 0.5 * fd.cfl_max_fd(2) * H * math.sqrt(lossless.eps_inf))
    matrix = step_amplification_matrix(stepper, 2 * math.pi * 3 / 32)
    np.testing.assert_allclose(np.abs(np.linalg.eigvals(matrix)), 1.0, atol=1e-10)
    with pytest.raises(ValueError):
        step_amplification_matrix(stepper, 0.3)


def test_no_stepper_for_trapezoidal_dg(medium):
    spec = SchemeSpec(temporal=TemporalKind.TRAPEZOIDAL, spatial=SpatialKind.DG, order=1, flux=FluxKind.CENTRAL)
    with pytest.raises(ConfigError):
        build_stepper(spec, medium, grid_for(spec, 32, H), 0.01)


@pytest.mark.slow
def test_measured_phase_error_matches_analysis(lossless):
    spec = SchemeSpec(temporal=TemporalKind.LEAPFROG, spatial=SpatialKind.FD, order=1)
    measurement = measure_phase_error(spec, lossless, W_HAT, cells=256)
    assert measurement.relative_gap < 0.01
    assert measurement.periods >= 10.0
