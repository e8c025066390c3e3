"""
Propagators
===========

Time-domain evolution of the driven Schrodinger equation

    i dpsi/dt = (-1/2 d^2/dx^2 + f(t) W(x)) psi

with f(t) = cos(omega t) or a square wave that is +1 on the first half period
and -1 on the second. Provides the one-period propagator (monodromy) and the
quasi-energies read off its eigenvalues exp(-i eps T).
"""

import math
import time
from typing import List, Optional, Sequence

import numpy as np
import structlog
from scipy.linalg import solve_banded

from kapitza.config import get_settings
from kapitza.errors import DivergedNorm, EigenvalueAtZero, InvalidParameter
from kapitza.models.results import EvolutionTrace, Monodromy, MonodromyState
from kapitza.models.schemas import DriveShape, Grid1D, PotentialSpec
from kapitza.services.effective import drive_profile
from kapitza.services.floquet import fold
from kapitza.services.numerics import (
    build_laplacian,
    eig_arrays,
    expm_checked,
    kinetic_energy,
    laplacian_bands,
    localization,
    normalize_state,
)

logger = structlog.get_logger(__name__)


def drive_factor(spec: PotentialSpec, t: float) -> float:
    """f(t) multiplying W(x) at time t."""
    if spec.drive == DriveShape.SQUARE_WAVE:
        phase = math.fmod(t, spec.period)
        if phase < 0:
            phase += spec.period
        return 1.0 if phase < 0.5 * spec.period else -1.0
    return math.cos(spec.omega * t)


# =============================================================================
# Square-Wave Monodromy
# =============================================================================

def half_period_propagator(h: np.ndarray, period: float) -> np.ndarray:
    """exp(-i h T / 2) with the exponential residual contract."""
    if not period > 0:
        raise InvalidParameter("period must be positive", {"period": period})
    return expm_checked(h, -0.5j * period)


def monodromy_square_wave(spec: PotentialSpec, grid: Grid1D) -> Monodromy:
    """U = exp(-i H2 T/2) exp(-i H1 T/2) with H1,2 = -1/2 d^2/dx^2 +- W."""
    if spec.drive != DriveShape.SQUARE_WAVE:
        raise InvalidParameter("monodromy_square_wave needs a square-wave drive", {"drive": spec.drive.value})
    laplacian = build_laplacian(grid)
    w = np.diag(drive_profile(spec, grid))
    first = half_period_propagator(laplacian + w, spec.period)
    second = half_period_propagator(laplacian - w, spec.period)
    return Monodromy(matrix=second @ first, period=spec.period, grid=grid)


# =============================================================================
# Crank-Nicolson Stepping
# =============================================================================

class _CrankNicolson:
    """
    Tridiagonal Crank-Nicolson stepper for H(t) = K + f(t) W, with the
    potential sampled at the midpoint of each step.
    """

    def __init__(self, spec: PotentialSpec, grid: Grid1D, dt: float):
        self.spec = spec
        self.dt = dt
        self.w = drive_profile(spec, grid)
        self.diag, self.off = laplacian_bands(grid)
        self.n = grid.point_count

    def step(self, psi: np.ndarray, t: float) -> np.ndarray:
        """Advance psi (vector or matrix of columns) from t to t + dt."""
        v = self.diag + drive_factor(self.spec, t + 0.5 * self.dt) * self.w
        half = 0.5j * self.dt

        # (1 - i dt/2 H) psi
        scale = 1.0 - half * v
        rhs = scale[:, None] * psi if psi.ndim == 2 else scale * psi
        rhs[:-1] -= half * self.off * psi[1:]
        rhs[1:] -= half * self.off * psi[:-1]

        ab = np.empty((3, self.n), dtype=complex)
        ab[0, :] = half * self.off
        ab[1, :] = 1.0 + half * v
        ab[2, :] = half * self.off
        return solve_banded((1, 1), ab, rhs)


def _steps_per_period(spec: PotentialSpec, dt: float) -> int:
    """Whole, even number of steps per period with step length <= dt."""
    steps = int(math.ceil(spec.period / dt - 1e-9))
    return steps + steps % 2


def monodromy_sinusoidal(spec: PotentialSpec, grid: Grid1D, steps: Optional[int] = None) -> Monodromy:
    """One-period propagator built by composing Crank-Nicolson steps."""
    steps = steps or get_settings().evolve_steps_per_period
    dt = spec.period / steps
    stepper = _CrankNicolson(spec, grid, dt)
    u = np.eye(grid.point_count, dtype=complex)
    for k in range(steps):
        u = stepper.step(u, k * dt)
    return Monodromy(matrix=u, period=spec.period, grid=grid)


# =============================================================================
# Quasi-Energies
# =============================================================================

def quasi_energies_from_monodromy(m: Monodromy) -> List[MonodromyState]:
    """
    eps = i ln(lambda) / T for every eigenvalue lambda of U, principal branch,
    returned in (-omega/2, omega/2] and sorted by (Re eps, Im eps).

    Only the folded value is known, so a bound state must also carry a mean
    kinetic energy below omega/2; lattice states near 2/h^2 fold to just below
    zero otherwise.

    Raises:
        EigenvalueAtZero: if some |lambda| < 1e-12.
    """
    settings = get_settings()
    values, vectors, _ = eig_arrays(m.matrix)
    grid = m.grid
    smallest = float(np.abs(values).min())
    if smallest < 1e-12:
        raise EigenvalueAtZero("propagator eigenvalue too close to zero", {"min_abs_eigenvalue": smallest})

    omega = m.omega
    states = []
    for i, lam in enumerate(values):
        eps = complex(fold(1j * np.log(lam) / m.period, omega))
        vector = normalize_state(vectors[:, i], grid)
        loc = localization(vector, grid)
        is_bound = (
            abs(eps.imag) <= settings.bound_imag_tolerance * omega
            and eps.real < 0
            and float(kinetic_energy(vector, grid)) < 0.5 * omega
            and loc > settings.bound_localization_threshold
        )
        states.append(MonodromyState(epsilon=eps, vector=vector, localization=loc, is_bound=is_bound))
    states.sort(key=lambda s: (round(s.epsilon.real / omega, 10), s.epsilon.imag))
    return states


def closest_state(states: Sequence[MonodromyState], reference: np.ndarray) -> MonodromyState:
    """The state with the largest normalized overlap |<reference|v>|."""
    if not states:
        raise InvalidParameter("no states to compare against")
    ref = np.asarray(reference, dtype=complex)
    ref = ref / np.linalg.norm(ref)

    def overlap(state: MonodromyState) -> float:
        return abs(np.vdot(ref, state.vector)) / np.linalg.norm(state.vector)

    return max(states, key=overlap)


# =============================================================================
# Time Evolution
# =============================================================================

def evolve(
    spec: PotentialSpec,
    grid: Grid1D,
    psi0: np.ndarray,
    t_end: float,
    dt: float,
) -> EvolutionTrace:
    """
    Crank-Nicolson evolution from psi0, sampled once per drive period.

    dt is shortened so that a whole, even number of steps fits one period.
    The survival amplitude is <psi0|psi(t)> with psi0 normalized on the grid.

    Raises:
        InvalidParameter: if dt > T/200 or psi0 is zero or mis-sized.
        DivergedNorm: if the state stops being finite or the norm exceeds the
            configured limit.
    """
    settings = get_settings()
    if not 0 < dt <= spec.period / 200.0 * (1 + 1e-12):
        raise InvalidParameter(
            "time step must not exceed T/200",
            {"dt": dt, "max_dt": spec.period / 200.0},
        )
    psi = np.asarray(psi0, dtype=complex)
    if psi.shape != (grid.point_count,):
        raise InvalidParameter("initial state does not match the grid", {"length": int(psi.size)})
    if not np.any(psi):
        raise InvalidParameter("initial state is zero")
    if not np.all(np.isfinite(psi)):
        raise InvalidParameter("initial state has non-finite entries")

    per_period = _steps_per_period(spec, dt)
    dt = spec.period / per_period
    steps = int(round(t_end / dt))
    stepper = _CrankNicolson(spec, grid, dt)

    psi = psi / np.sqrt(grid.spacing * np.sum(np.abs(psi) ** 2))
    ref = psi.copy()

    def measure(state: np.ndarray):
        return grid.spacing * np.vdot(ref, state), math.sqrt(grid.spacing * np.sum(np.abs(state) ** 2))

    s0, n0 = measure(psi)
    times, snapshots, survival, norms = [0.0], [psi.copy()], [s0], [n0]
    started = time.perf_counter()

    for k in range(steps):
        try:
            psi = stepper.step(psi, k * dt)
        except ValueError as e:
            raise DivergedNorm("wavefunction is no longer finite", {"t": k * dt}) from e
        if not np.all(np.isfinite(psi)):
            raise DivergedNorm("wavefunction is no longer finite", {"t": (k + 1) * dt})
        if (k + 1) % per_period == 0:
            t = (k + 1) * dt
            s, norm = measure(psi)
            if not math.isfinite(norm) or norm > settings.norm_divergence_limit:
                raise DivergedNorm("wavefunction norm diverged", {"t": t, "norm": norm})
            times.append(t)
            snapshots.append(psi.copy())
            survival.append(s)
            norms.append(norm)

    logger.info(
        "evolution finished",
        steps=steps,
        steps_per_period=per_period,
        drive=spec.drive.value,
        final_norm=norms[-1],
        seconds=round(time.perf_counter() - started, 3),
    )
    return EvolutionTrace(
        times=np.array(times),
        snapshots=np.array(snapshots),
        survival=np.array(survival, dtype=complex),
        norms=np.array(norms),
    )
