"""
Effective Potentials
====================

Static potentials that approximate the cycle-averaged dynamics of a rapidly
driven Gaussian W(x) = V0 exp(-beta x^2) (times i for the imaginary kind),
the stationary problem on them, and the delta-well oracle.

Derivatives of W are taken in closed form, never by finite differences.
"""

from typing import List, Literal, Optional

import numpy as np
import structlog

from kapitza.config import get_settings
from kapitza.errors import InvalidParameter, NoBoundState
from kapitza.models.results import DeltaWell, EffectivePotential, StaticBoundState
from kapitza.models.schemas import DriveShape, Grid1D, PotentialSpec, Provenance
from kapitza.services.numerics import (
    build_first_derivative,
    build_laplacian,
    eig_arrays,
    integrate_trapezoid,
    localization,
    normalize_state,
)

logger = structlog.get_logger(__name__)


# =============================================================================
# Drive Profile
# =============================================================================

def drive_profile(spec: PotentialSpec, grid: Grid1D) -> np.ndarray:
    """W(x_j), complex."""
    return spec.amplitude * np.exp(-spec.beta * grid.nodes ** 2)


def drive_gradient(spec: PotentialSpec, grid: Grid1D) -> np.ndarray:
    """dW/dx = -2 beta x W(x)."""
    return -2.0 * spec.beta * grid.nodes * drive_profile(spec, grid)


def drive_curvature(spec: PotentialSpec, grid: Grid1D) -> np.ndarray:
    """d^2W/dx^2 = (4 beta^2 x^2 - 2 beta) W(x)."""
    x = grid.nodes
    return (4.0 * spec.beta ** 2 * x ** 2 - 2.0 * spec.beta) * drive_profile(spec, grid)


def _require_drive(spec: PotentialSpec, drive: DriveShape) -> None:
    if spec.drive != drive:
        raise InvalidParameter(
            f"operation needs a {drive.value} drive",
            {"drive": spec.drive.value},
        )


def _squared_gradient(spec: PotentialSpec, grid: Grid1D) -> np.ndarray:
    # (W')^2 is real for both kinds: positive for real W, negative for imaginary W
    return np.real(drive_gradient(spec, grid) ** 2)


# =============================================================================
# Averaged Potentials
# =============================================================================

def veff_sinusoidal(spec: PotentialSpec, grid: Grid1D) -> EffectivePotential:
    """(1 / (4 omega^2)) (dW/dx)^2 for W(x) cos(omega t)."""
    _require_drive(spec, DriveShape.SINUSOIDAL)
    values = _squared_gradient(spec, grid) / (4.0 * spec.omega ** 2)
    return EffectivePotential(grid=grid, values=values, provenance=Provenance.SINUSOIDAL_AVG)


def veff_square_wave(spec: PotentialSpec, grid: Grid1D) -> EffectivePotential:
    """(T^2 / 96) (dW/dx)^2 for W(x) switching sign every half period."""
    _require_drive(spec, DriveShape.SQUARE_WAVE)
    values = spec.period ** 2 / 96.0 * _squared_gradient(spec, grid)
    return EffectivePotential(grid=grid, values=values, provenance=Provenance.SQUARE_WAVE_AVG)


def effective_potential(spec: PotentialSpec, grid: Grid1D) -> EffectivePotential:
    """Averaged potential for whichever drive shape the spec carries."""
    if spec.drive == DriveShape.SQUARE_WAVE:
        return veff_square_wave(spec, grid)
    return veff_sinusoidal(spec, grid)


# =============================================================================
# Stationary Problem
# =============================================================================

def bound_states_static(
    veff: EffectivePotential,
    threshold: Optional[float] = None,
) -> List[StaticBoundState]:
    """
    Bound eigenstates of -1/2 d^2/dx^2 + V_eff.

    A state counts as bound when its energy is negative and more than
    ``threshold`` of its weight lies inside |x| <= L/2.

    Args:
        veff: Potential on its grid
        threshold: Localization cutoff (defaults to settings)

    Returns:
        Bound states sorted by ascending energy, normalized with the grid
        measure and with the largest component real positive.
    """
    grid = veff.grid
    threshold = get_settings().bound_localization_threshold if threshold is None else threshold

    h = build_laplacian(grid) + np.diag(np.asarray(veff.values, dtype=complex))
    values, vectors, _ = eig_arrays(h)

    states = []
    for i in np.nonzero(values.real < 0)[0]:
        psi = normalize_state(vectors[:, i], grid)
        loc = localization(psi, grid)
        if loc > threshold:
            states.append(StaticBoundState(energy=float(values[i].real), wavefunction=psi, localization=loc))

    logger.info(
        "static bound states",
        provenance=veff.provenance.value,
        count=len(states),
        ground_energy=states[0].energy if states else None,
    )
    return states


# =============================================================================
# Delta-Well Oracle
# =============================================================================

def delta_approximation(veff: EffectivePotential) -> DeltaWell:
    """
    Replace V_eff by alpha * delta(x) with alpha = integral of V_eff.

    Raises:
        NoBoundState: if alpha >= 0.
    """
    alpha = float(np.real(integrate_trapezoid(veff.values, veff.grid)))
    if alpha >= 0:
        raise NoBoundState(
            "potential integral is not negative",
            {"alpha": alpha, "provenance": veff.provenance.value},
        )
    return DeltaWell(alpha=alpha)


def delta_profile(well: DeltaWell, grid: Grid1D) -> np.ndarray:
    """sqrt(mu) exp(-mu |x|) on the grid nodes."""
    return well.profile(grid.nodes)


# =============================================================================
# Square-Wave Gauge
# =============================================================================

def gauge_transform(
    u: np.ndarray,
    spec: PotentialSpec,
    grid: Grid1D,
    direction: Literal["forward", "inverse"] = "forward",
) -> np.ndarray:
    """
    Multiply by exp(-i (T/4) W) (forward, u -> y) or exp(+i (T/4) W)
    (inverse, y -> u).
    """
    _require_drive(spec, DriveShape.SQUARE_WAVE)
    sign = {"forward": -1.0, "inverse": 1.0}[direction]
    factor = np.exp(sign * 1j * spec.period / 4.0 * drive_profile(spec, grid))
    return np.asarray(u, dtype=complex) * factor


def high_frequency_operator(spec: PotentialSpec, grid: Grid1D) -> np.ndarray:
    """
    First-order square-wave eigen-operator acting on the Floquet mode u:

        -1/2 d^2/dx^2 + i (T/8) (W'' + 2 W' d/dx) + (T^2 / 24) W'^2

    gauge_transform maps its eigenproblem onto -1/2 d^2/dx^2 + V_eff.
    """
    _require_drive(spec, DriveShape.SQUARE_WAVE)
    t = spec.period
    grad = drive_gradient(spec, grid)
    drift = np.diag(drive_curvature(spec, grid)) + 2.0 * grad[:, None] * build_first_derivative(grid)
    return build_laplacian(grid) + 1j * t / 8.0 * drift + np.diag(t ** 2 / 24.0 * grad ** 2)
