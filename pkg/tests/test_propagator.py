import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.linalg import expm

from kapitza.commands.evolve import initial_state
from kapitza.errors import DivergedNorm, EigenvalueAtZero, InvalidParameter
from kapitza.models import FloquetProblem, Grid1D, Monodromy, PotentialKind, PotentialSpec
from kapitza.models.schemas import EvolveSection
from kapitza.services import propagator
from kapitza.services.effective import bound_states_static, gauge_transform, veff_square_wave
from kapitza.services.floquet import bound_entries, solve_spectrum
from kapitza.services.numerics import build_laplacian, eig_arrays
from kapitza.services.propagator import (
    closest_state,
    drive_factor,
    evolve,
    half_period_propagator,
    monodromy_sinusoidal,
    monodromy_square_wave,
    quasi_energies_from_monodromy,
)


def _gaussian(grid: Grid1D, width: float = 2.0) -> np.ndarray:
    return np.exp(-grid.nodes ** 2 / (2 * width ** 2)).astype(complex)


def _unitarity_defect(u: np.ndarray) -> float:
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))


# =============================================================================
# Drive and Half-Period Steps
# =============================================================================

def test_drive_factor_shapes():
    sin = PotentialSpec(v0=1.0, beta=0.1, omega=2.0)
    assert drive_factor(sin, 0.0) == 1.0
    assert drive_factor(sin, math.pi / 2) == pytest.approx(-1.0)

    square = PotentialSpec.square_wave(1.0, 0.1, PotentialKind.REAL, period=2.0)
    assert drive_factor(square, 0.5) == 1.0
    assert drive_factor(square, 1.5) == -1.0
    assert drive_factor(square, 2.5) == 1.0
    assert drive_factor(square, -0.5) == -1.0


def test_half_period_propagator_of_zero_is_identity():
    assert_allclose(half_period_propagator(np.zeros((4, 4)), 1.3), np.eye(4), atol=1e-14)


def test_half_period_propagator_of_diagonal():
    u = half_period_propagator(np.diag([1.0, 2.0]), math.pi)
    assert_allclose(u, np.diag([-1j, -1.0]), atol=1e-12)


def test_half_period_propagator_is_unitary_for_hermitian_input():
    rng = np.random.default_rng(5)
    b = rng.standard_normal((20, 20)) + 1j * rng.standard_normal((20, 20))
    u = half_period_propagator(0.5 * (b + b.conj().T), 0.7)
    assert _unitarity_defect(u) <= 1e-12


def test_half_period_propagator_rejects_bad_period():
    with pytest.raises(InvalidParameter):
        half_period_propagator(np.eye(2), 0.0)


# =============================================================================
# Square-Wave Monodromy
# =============================================================================

def test_undriven_monodromy_is_free_propagator(tiny_grid):
    spec = PotentialSpec.square_wave(0.0, 0.02, PotentialKind.IMAGINARY, period=0.6)
    m = monodromy_square_wave(spec, tiny_grid)
    assert m.period == pytest.approx(0.6)
    assert_allclose(m.matrix, expm(-1j * 0.6 * build_laplacian(tiny_grid)), atol=1e-10)


def test_real_square_wave_monodromy_is_unitary(tiny_grid):
    spec = PotentialSpec.square_wave(9.0, 0.02, PotentialKind.REAL, period=0.6)
    assert _unitarity_defect(monodromy_square_wave(spec, tiny_grid).matrix) <= 1e-10


def test_imaginary_square_wave_monodromy_has_unit_determinant(tiny_grid):
    spec = PotentialSpec.square_wave(9.0, 0.02, PotentialKind.IMAGINARY, period=0.6)
    m = monodromy_square_wave(spec, tiny_grid).matrix
    _, logabsdet = np.linalg.slogdet(m)
    assert abs(logabsdet) <= 1e-8
    assert _unitarity_defect(m) > 1e-3


def test_square_wave_monodromy_needs_square_wave(imaginary_spec, tiny_grid):
    with pytest.raises(InvalidParameter):
        monodromy_square_wave(imaginary_spec, tiny_grid)


# =============================================================================
# Quasi-Energies
# =============================================================================

@pytest.fixture
def three_point_grid() -> Grid1D:
    return Grid1D(half_width=1.0, point_count=3)


def test_quasi_energies_of_known_monodromy(three_point_grid):
    lam = np.array([np.exp(-0.3j), 0.5, np.exp(-5j)])
    states = quasi_energies_from_monodromy(Monodromy(np.diag(lam), 1.0, three_point_grid))
    eps = [s.epsilon for s in states]
    assert eps[0] == pytest.approx(5.0 - 2 * math.pi)
    assert eps[1] == pytest.approx(-1j * math.log(2.0))
    assert eps[2] == pytest.approx(0.3)
    for s in states:
        assert three_point_grid.spacing * np.sum(np.abs(s.vector) ** 2) == pytest.approx(1.0)


def test_quasi_energy_with_longer_period(three_point_grid):
    period = 2 * math.pi / 10
    lam = np.exp(-0.3j)
    states = quasi_energies_from_monodromy(Monodromy(np.diag([lam, lam, lam]), period, three_point_grid))
    assert states[0].epsilon == pytest.approx(0.3 / period)
    assert states[0].epsilon.real == pytest.approx(0.47746, abs=1e-4)


def test_eigenvalue_at_zero_is_rejected(three_point_grid):
    with pytest.raises(EigenvalueAtZero):
        quasi_energies_from_monodromy(Monodromy(np.diag([1.0, 1e-14, 1.0]), 1.0, three_point_grid))


def test_closest_state_picks_largest_overlap(three_point_grid):
    lam = np.array([np.exp(-0.1j), np.exp(-0.2j), np.exp(-0.3j)])
    states = quasi_energies_from_monodromy(Monodromy(np.diag(lam), 1.0, three_point_grid))
    picked = closest_state(states, np.array([0.1, 1.0, 0.2]))
    assert picked.epsilon == pytest.approx(0.2)
    with pytest.raises(InvalidParameter):
        closest_state([], np.ones(3))


def test_square_wave_bound_state_matches_effective_well(coarse_grid):
    spec = PotentialSpec.square_wave(9.0, 0.02, PotentialKind.IMAGINARY, period=2 * math.pi / 10)
    states = quasi_energies_from_monodromy(monodromy_square_wave(spec, coarse_grid))

    static = bound_states_static(veff_square_wave(spec, coarse_grid))[0]
    reference = gauge_transform(static.wavefunction, spec, coarse_grid, "inverse")
    match = closest_state(states, reference)

    assert abs(match.epsilon.imag) <= 1e-6 * spec.omega
    assert match.epsilon.real < 0
    assert abs(match.epsilon.real - static.energy) <= 0.5 * abs(static.energy)

    bound = [s for s in states if s.is_bound]
    assert len(bound) == 1
    assert bound[0] is match


def test_band_edge_monodromy_states_are_not_bound(full_grid):
    # 2/h^2 = 5 omega: top-of-band states fold to just below zero
    spec = PotentialSpec.square_wave(0.0, 0.02, PotentialKind.REAL, period=2 * math.pi / 10)
    states = quasi_energies_from_monodromy(monodromy_square_wave(spec, full_grid))
    edge = [s for s in states if -0.01 < s.epsilon.real < 0 and s.localization > 0.6]
    assert edge
    assert not any(s.is_bound for s in states)


# =============================================================================
# Crank-Nicolson Evolution
# =============================================================================

def test_free_evolution_conserves_norm(tiny_grid):
    spec = PotentialSpec(v0=0.0, beta=0.02, omega=10.0)
    trace = evolve(spec, tiny_grid, _gaussian(tiny_grid), 100 * spec.period, spec.period / 200)
    assert len(trace.times) == 101
    assert trace.times[-1] == pytest.approx(100 * spec.period)
    assert np.max(np.abs(trace.norms - 1.0)) <= 1e-8
    assert trace.survival[0] == pytest.approx(1.0)


def test_real_drive_evolution_conserves_norm(real_spec, tiny_grid):
    trace = evolve(real_spec, tiny_grid, _gaussian(tiny_grid), 100 * real_spec.period, real_spec.period / 200)
    assert len(trace.times) == 101
    assert np.max(np.abs(trace.norms - 1.0)) <= 1e-6
    assert np.all(np.abs(trace.survival) <= 1.0 + 1e-9)


def test_evolve_rejects_bad_input(real_spec, tiny_grid):
    psi = _gaussian(tiny_grid)
    with pytest.raises(InvalidParameter):
        evolve(real_spec, tiny_grid, psi, real_spec.period, real_spec.period / 100)
    with pytest.raises(InvalidParameter):
        evolve(real_spec, tiny_grid, np.zeros(tiny_grid.point_count), real_spec.period, real_spec.period / 200)
    with pytest.raises(InvalidParameter):
        evolve(real_spec, tiny_grid, psi[:-1], real_spec.period, real_spec.period / 200)
    with pytest.raises(InvalidParameter):
        evolve(real_spec, tiny_grid, psi * np.nan, real_spec.period, real_spec.period / 200)


def test_non_finite_state_mid_period_is_reported(real_spec, tiny_grid, monkeypatch):
    original = propagator._CrankNicolson.step

    def poisoned(self, psi, t):
        out = original(self, psi, t)
        return out * np.nan if t > 0.502 * real_spec.period else out

    monkeypatch.setattr(propagator._CrankNicolson, "step", poisoned)
    with pytest.raises(DivergedNorm) as info:
        evolve(real_spec, tiny_grid, _gaussian(tiny_grid), 2 * real_spec.period, real_spec.period / 200)
    assert info.value.details["t"] == pytest.approx(0.51 * real_spec.period)


def test_delta_well_survives_imaginary_drive(imaginary_spec, wide_grid):
    psi0 = initial_state(imaginary_spec, wide_grid, EvolveSection(initial="delta_well"))
    trace = evolve(imaginary_spec, wide_grid, psi0, 50 * imaginary_spec.period, imaginary_spec.period / 200)
    assert len(trace.times) == 51
    assert abs(trace.survival[-1]) >= 0.5
    assert np.all(np.abs(trace.survival) >= 0.5)


def test_control_run_starts_from_the_same_state(imaginary_spec, real_spec, wide_grid):
    section = EvolveSection(initial="delta_well")
    control = initial_state(real_spec, wide_grid, section)
    assert_allclose(control, initial_state(imaginary_spec, wide_grid, section))

    trace = evolve(real_spec, wide_grid, control, 50 * real_spec.period, real_spec.period / 200)
    assert np.max(np.abs(trace.norms - 1.0)) <= 1e-6


def test_evolution_matches_square_wave_monodromy(tiny_grid):
    spec = PotentialSpec.square_wave(4.0, 0.02, PotentialKind.REAL, period=2 * math.pi / 10)
    trace = evolve(spec, tiny_grid, _gaussian(tiny_grid), spec.period, spec.period / 200)
    expected = monodromy_square_wave(spec, tiny_grid).matrix @ trace.snapshots[0]
    error = math.sqrt(tiny_grid.spacing) * np.linalg.norm(trace.snapshots[1] - expected)
    assert error <= 1e-4


def test_sinusoidal_monodromy_matches_evolution(imaginary_spec, tiny_grid):
    trace = evolve(imaginary_spec, tiny_grid, _gaussian(tiny_grid), imaginary_spec.period, imaginary_spec.period / 200)
    m = monodromy_sinusoidal(imaginary_spec, tiny_grid, steps=200)
    assert_allclose(m.matrix @ trace.snapshots[0], trace.snapshots[1], atol=1e-10)


@pytest.mark.slow
def test_sinusoidal_monodromy_agrees_with_floquet(imaginary_spec, coarse_grid):
    spectrum = solve_spectrum(FloquetProblem(spec=imaginary_spec, grid=coarse_grid, harmonic_cutoff=3))
    floquet = bound_entries(spectrum)[0]

    states = quasi_energies_from_monodromy(monodromy_sinusoidal(imaginary_spec, coarse_grid, steps=2000))
    match = closest_state(states, floquet.components.sum(axis=0))
    assert abs(match.epsilon.real - floquet.epsilon_folded.real) <= 0.25 * abs(floquet.epsilon_folded.real)


@pytest.mark.slow
def test_square_wave_gap_shrinks_with_period(full_grid):
    # V0 fixed; the lowest level of K + Veff is used since the well gets shallow
    gaps = []
    for period in (2 * math.pi / 10, math.pi / 10, math.pi / 20):
        spec = PotentialSpec.square_wave(9.0, 0.02, PotentialKind.IMAGINARY, period=period)
        veff = veff_square_wave(spec, full_grid)
        values, vectors, _ = eig_arrays(build_laplacian(full_grid) + np.diag(veff.values.astype(complex)))
        reference = gauge_transform(vectors[:, 0], spec, full_grid, "inverse")
        match = closest_state(quasi_energies_from_monodromy(monodromy_square_wave(spec, full_grid)), reference)
        gaps.append(abs(match.epsilon.real - values[0].real))
    assert gaps[1] <= 0.5 * gaps[0]
    assert gaps[2] <= 0.5 * gaps[1]


@pytest.mark.slow
def test_real_drive_control_leaks_away(real_spec):
    # leakage runs on the 1 / mu^2 time scale of the delta profile, thousands of periods
    grid = Grid1D(half_width=400.0, point_count=401)
    psi0 = initial_state(real_spec, grid, EvolveSection(initial="delta_well"))
    psi0 = psi0 / np.sqrt(grid.spacing * np.sum(np.abs(psi0) ** 2))
    u = monodromy_sinusoidal(real_spec, grid, steps=200).matrix

    def survival(periods: int) -> float:
        return abs(grid.spacing * np.vdot(psi0, np.linalg.matrix_power(u, periods) @ psi0))

    assert survival(50) > 0.5
    assert survival(20000) < 0.5
