"""
Cross-checks between the dispersion analysis and the time-domain steppers:
kernel residuals of plane waves, one-step amplification matrices, discrete-energy
stability runs and end-to-end phase-error measurements.
"""

import logging
import math
from typing import Optional

import numpy as np

from dispersion.dg import energy_cfl_dg
from dispersion.fd import cfl_max_fd
from dispersion.medium import exact_wavenumber_hat
from dispersion.models import LorentzMedium, SchemeSpec
from dispersion.quantities import SchemeWavenumber
from schemas.common import SpatialKind, TemporalKind
from stepper.base import Stepper
from stepper.dg_stepper import DGLeapFrogStepper
from stepper.fd_stepper import FDLeapFrogStepper, FDTrapezoidalStepper
from stepper.models import FieldState, PeriodicGrid, PhaseMeasurement, StabilityRun
from utils.errors import ConfigError, FitFailed

logger = logging.getLogger(__name__)


def build_stepper(
    spec: SchemeSpec, medium: LorentzMedium, grid: PeriodicGrid, dt: float, allow_unstable: bool = False
) -> Stepper:
    """Stepper for LF-FD, TP-FD or LF-DG schemes"""
    if spec.spatial == SpatialKind.FD and spec.temporal == TemporalKind.LEAPFROG:
        return FDLeapFrogStepper(spec.order, medium, grid, dt, allow_unstable)
    if spec.spatial == SpatialKind.FD and spec.temporal == TemporalKind.TRAPEZOIDAL:
        return FDTrapezoidalStepper(spec.order, medium, grid, dt, allow_unstable)
    if spec.spatial == SpatialKind.DG and spec.temporal == TemporalKind.LEAPFROG:
        return DGLeapFrogStepper(spec.order, spec.flux, medium, grid, dt, allow_unstable)
    raise ConfigError(f"no time-domain stepper for scheme {spec.label}", operation="build_stepper")


def grid_for(spec: SchemeSpec, cells: int, h: float) -> PeriodicGrid:
    return PeriodicGrid(N=cells, h=h, p=spec.order if spec.spatial == SpatialKind.DG else None)


def default_cfl(spec: SchemeSpec) -> Optional[float]:
    """Reference CFL number of a leap-frog scheme; None for the trapezoidal rule"""
    if spec.temporal != TemporalKind.LEAPFROG:
        return None
    if spec.spatial == SpatialKind.FD:
        return cfl_max_fd(spec.order)
    return energy_cfl_dg(spec.order, spec.flux)


def _stack(state: FieldState) -> np.ndarray:
    return np.stack([state.H, state.E, state.P, state.J])


def step_amplification_matrix(stepper: Stepper, k_hat: float) -> np.ndarray:
    """
    One-step amplification matrix of a grid Fourier mode

    Each unknown (H, E, P, J per cell node) is set to a unit plane wave, stepped
    once and projected back onto the mode.

    Raises:
        ValueError: k_hat not commensurate with the grid
    """
    grid = stepper.grid
    if not grid.is_commensurate(k_hat):
        raise ValueError(f"k_hat = {k_hat} is not a Fourier mode of a {grid.N}-cell grid")
    size = 4 * stepper.nodes_per_cell
    phase = np.exp(1j * k_hat * np.arange(grid.N))
    matrix = np.zeros((size, size), dtype=complex)
    for column in range(size):
        amplitudes = np.zeros(size, dtype=complex)
        amplitudes[column] = 1.0
        advanced = _stack(stepper.step(stepper.plane_wave(amplitudes, k_hat)))
        advanced = advanced.reshape(4, grid.N, stepper.nodes_per_cell)
        matrix[:, column] = np.mean(advanced * np.conj(phase)[None, :, None], axis=1).reshape(size)
    return matrix


def kernel_residual(stepper: Stepper, k_hat: complex, w_hat: float) -> float:
    """
    Smallest over largest singular value of the update-residual matrix of a plane
    wave exp(i(k_hat j - w_hat W1 n)); near zero when the pair solves the scheme's
    dispersion relation
    """
    grid = stepper.grid
    origin = grid.N // 2
    decay = np.exp(-1j * w_hat * stepper.W1)
    size = 4 * stepper.nodes_per_cell
    matrix = np.zeros((size, size), dtype=complex)
    for column in range(size):
        amplitudes = np.zeros(size, dtype=complex)
        amplitudes[column] = 1.0
        old = stepper.plane_wave(amplitudes, k_hat, origin=origin)
        new = FieldState.from_fields(
            decay * old.H, decay * old.E, decay * old.P, decay * old.J, stepper.medium.eps_inf, n=1
        )
        residuals = stepper.update_residual(old, new)
        matrix[:, column] = np.concatenate([np.atleast_1d(r[origin]) for r in residuals])

    for scaled in (matrix, matrix.T):
        norms = np.linalg.norm(scaled, axis=1)
        norms[norms == 0] = 1.0
        scaled /= norms[:, None]
    singular = np.linalg.svd(matrix, compute_uv=False)
    return float(singular[-1] / singular[0])


def discrete_energy(stepper: Stepper, state: FieldState) -> float:
    """Energy the stepper conserves for lossless media; the stability monitor"""
    return abs(stepper.energy(state))


def noise_state(stepper: Stepper, seed: int = 0) -> FieldState:
    """Real random fields on the stepper's grid"""
    rng = np.random.default_rng(seed)
    shape = stepper.grid.field_shape
    H, E, P, J = (rng.standard_normal(shape) for _ in range(4))
    return FieldState.from_fields(H, E, P, J, stepper.medium.eps_inf)


def run_stability(stepper: Stepper, state: FieldState, steps: int, threshold: float = 10.0) -> StabilityRun:
    """
    Advance and monitor the discrete energy and the field amplitude

    Returns:
        StabilityRun; blew_up once the amplitude grows past threshold times its start value
    """
    energy0 = discrete_energy(stepper, state)
    amplitude0 = state.max_amplitude()
    energies = [energy0]
    max_energy, max_amplitude = 1.0, 1.0
    for n in range(1, steps + 1):
        state = stepper.step(state)
        energy = discrete_energy(stepper, state)
        energies.append(energy)
        max_energy = max(max_energy, energy / energy0)
        max_amplitude = max(max_amplitude, state.max_amplitude() / amplitude0)
        if not math.isfinite(max_amplitude) or max_amplitude > threshold:
            logger.info(f"Run blew up after {n} steps (amplitude x{max_amplitude:.3g})")
            return StabilityRun(n, max_energy, max_amplitude, True, np.array(energies))
    return StabilityRun(steps, max_energy, max_amplitude, False, np.array(energies))


def measure_phase_error(
    spec: SchemeSpec,
    medium: LorentzMedium,
    w_hat: float,
    cells: int = 256,
    wavelengths: int = 8,
    periods: float = 10.0,
    nu: Optional[float] = None,
    cfl_fraction: float = 0.5,
) -> PhaseMeasurement:
    """
    Time-domain relative phase error of a scheme

    The grid carries `wavelengths` exact wavelengths at w_hat. The run starts from
    the discrete eigenmode of that grid wavenumber closest to exp(-i omega dt);
    the frequency it actually carries comes from a least-squares fit of the
    unwrapped phase drift against the exact-frequency reference.

    Raises:
        FitFailed: the exact wave is evanescent or the run under-resolves the wave
    """
    k_exact = exact_wavenumber_hat(medium, w_hat)
    if k_exact.real <= 0 or abs(k_exact.imag) > abs(k_exact.real):
        raise FitFailed("exact wave is evanescent at this frequency", operation="measure_phase_error")
    k_hat_grid = 2.0 * math.pi * wavelengths / cells
    if k_hat_grid > math.pi / 2:
        raise FitFailed("fewer than four cells per wavelength", operation="measure_phase_error")
    h = k_hat_grid / k_exact.real
    if nu is None:
        limit = default_cfl(spec)
        nu = cfl_fraction * (limit if limit is not None else 1.0)
    dt = nu * h * math.sqrt(medium.eps_inf)
    omega = w_hat * medium.omega_1
    if omega * dt >= math.pi / 2:
        raise FitFailed("fewer than four steps per period", operation="measure_phase_error")

    stepper = build_stepper(spec, medium, grid_for(spec, cells, h), dt)
    amplification = step_amplification_matrix(stepper, k_hat_grid)
    values, vectors = np.linalg.eig(amplification)
    chosen = int(np.argmin(np.abs(values - np.exp(-1j * omega * dt))))
    state = stepper.plane_wave(vectors[:, chosen], k_hat_grid)

    E0 = state.E.reshape(-1)
    weights = np.abs(E0)
    mask = weights >= np.quantile(weights, 0.1)
    steps = int(math.ceil(periods * 2.0 * math.pi / (omega * dt)))
    phases = np.zeros(steps + 1)
    for n in range(1, steps + 1):
        state = stepper.step(state)
        overlap = np.mean(state.E.reshape(-1)[mask] * np.conj(E0[mask]))
        if abs(overlap) < 1e-8 * np.mean(weights[mask] ** 2):
            raise FitFailed("wave amplitude collapsed", operation="measure_phase_error", details={"step": n})
        phases[n] = np.angle(overlap)
    phases = np.unwrap(phases)
    times = dt * np.arange(steps + 1)
    slope, _ = np.polyfit(times, phases, 1)
    w_hat_measured = -slope / medium.omega_1

    k_grid = k_hat_grid / h
    k_at_measured = exact_wavenumber_hat(medium, w_hat_measured)
    measured = abs(k_grid - k_at_measured) / abs(k_at_measured)
    k_scheme = SchemeWavenumber(spec, medium, medium.omega_1 * dt, medium.omega_1 * h)(w_hat_measured)
    analytic = abs(k_scheme - k_at_measured) / abs(k_at_measured)
    logger.debug(f"{spec.label}: w_hat={w_hat} measured={w_hat_measured:.10f} psi={measured:.4e}/{analytic:.4e}")
    return PhaseMeasurement(
        w_hat=w_hat,
        w_hat_measured=w_hat_measured,
        measured=measured,
        analytic=analytic,
        steps=steps,
        periods=steps * omega * dt / (2.0 * math.pi),
    )
