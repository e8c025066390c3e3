"""
Optical Resonator
=================

Two-mirror cavity in one transverse dimension. A round trip composes the
one-way diffraction operator exp(D), D = i (d / 2k) d^2/dx^2, with the mirror
actions:

- phase mirrors:        exp(D) exp(i W1) exp(D) exp(i W2),   W = k * Delta
- reflectivity mirrors: exp(D) sqrt(R1) exp(D) sqrt(R2) exp(g d)

with R1 R2 = exp(-2 g d) so gain balances loss for a stationary mode. A short
cavity maps onto a Schrodinger problem with energy eps = k mu / (2 d) for a
round-trip eigenvalue exp(-i mu).
"""

import math
from typing import Tuple

import numpy as np
import structlog

from kapitza.config import get_settings
from kapitza.errors import EigenvalueAtZero, InvalidParameter, ReflectanceOutOfRange
from kapitza.models.results import CavityMode, CavityModeSet, EffectivePotential
from kapitza.models.schemas import (
    ModeClass,
    PhaseMirrors,
    Provenance,
    ReflectivityMirrors,
    ResonatorSpec,
)
from kapitza.services.numerics import build_laplacian, eig_arrays, expm_checked, kinetic_energy, localization

logger = structlog.get_logger(__name__)

# |eigenvalue| band around the unit circle for a non-decaying mode
UNIT_CIRCLE_TOLERANCE = 1e-6


def _gaussian(spec: ResonatorSpec) -> np.ndarray:
    return np.exp(-spec.mirrors.beta * spec.grid.nodes ** 2)


def _require(spec: ResonatorSpec, model: type) -> None:
    if not isinstance(spec.mirrors, model):
        raise InvalidParameter(
            f"operation needs {model.__name__}",
            {"mirrors": spec.mirrors.model},
        )


# =============================================================================
# Mirrors
# =============================================================================

def mirror_phase(spec: ResonatorSpec) -> Tuple[np.ndarray, np.ndarray]:
    """(W1, W2) = k * (Delta_1, Delta_2) on the grid."""
    _require(spec, PhaseMirrors)
    mirrors = spec.mirrors
    delta2 = -mirrors.delta_amplitude if mirrors.delta2_amplitude is None else mirrors.delta2_amplitude
    profile = _gaussian(spec)
    k = spec.wavenumber
    return k * mirrors.delta_amplitude * profile, k * delta2 * profile


def log_sqrt_reflectance(spec: ResonatorSpec) -> np.ndarray:
    """ln sqrt(R1) = 1/2 ln R_inf - a exp(-beta x^2)."""
    _require(spec, ReflectivityMirrors)
    mirrors = spec.mirrors
    return 0.5 * np.log(mirrors.r1_background) - mirrors.loss_depth * _gaussian(spec)


def reflectances(spec: ResonatorSpec) -> Tuple[np.ndarray, np.ndarray]:
    """
    (R1, R2) with R2 = exp(-2 g d) / R1.

    Raises:
        ReflectanceOutOfRange: if either leaves (0, 1].
    """
    r1 = np.exp(2.0 * log_sqrt_reflectance(spec))
    r2 = np.exp(-2.0 * spec.mirrors.gain_length) / r1
    for name, r in (("R1", r1), ("R2", r2)):
        worst = float(r.max())
        if worst > 1.0 + 1e-12 or float(r.min()) <= 0.0:
            raise ReflectanceOutOfRange(
                f"{name} leaves (0, 1]",
                {"mirror": name, "max": worst, "min": float(r.min()), "gain_length": spec.mirrors.gain_length},
            )
    return r1, r2


# =============================================================================
# Round-Trip Operators
# =============================================================================

def diffraction_operator(spec: ResonatorSpec) -> np.ndarray:
    """exp(D) = exp(-i (d/k) K) with K the matrix of -1/2 d^2/dx^2."""
    return expm_checked(build_laplacian(spec.grid), -1j * spec.diffraction_length)


def _round_trip(spec: ResonatorSpec, first: np.ndarray, second: np.ndarray) -> np.ndarray:
    """exp(D) diag(first) exp(D) diag(second)."""
    e = diffraction_operator(spec)
    return (e * first[None, :]) @ (e * second[None, :])


def round_trip_phase(spec: ResonatorSpec) -> np.ndarray:
    w1, w2 = mirror_phase(spec)
    return _round_trip(spec, np.exp(1j * w1), np.exp(1j * w2))


def round_trip_reflectivity(spec: ResonatorSpec) -> np.ndarray:
    r1, r2 = reflectances(spec)
    gain = np.exp(spec.mirrors.gain_length)
    return _round_trip(spec, np.sqrt(r1).astype(complex), np.sqrt(r2) * gain)


def equivalent_phase(spec: ResonatorSpec) -> np.ndarray:
    """W = -i ln sqrt(R1), the imaginary phase a reflectivity mirror stands for."""
    return -1j * log_sqrt_reflectance(spec)


def round_trip_equivalent_phase(spec: ResonatorSpec) -> np.ndarray:
    """
    Antisymmetric phase-mirror round trip exp(D) exp(iW) exp(D) exp(-iW)
    evaluated with the equivalent phase of a reflectivity cavity.
    """
    w = equivalent_phase(spec)
    return _round_trip(spec, np.exp(1j * w), np.exp(-1j * w))


def round_trip(spec: ResonatorSpec) -> np.ndarray:
    """Round-trip operator of whichever mirror model the spec carries."""
    if isinstance(spec.mirrors, PhaseMirrors):
        return round_trip_phase(spec)
    return round_trip_reflectivity(spec)


# =============================================================================
# Modes
# =============================================================================

def cavity_modes(rt: np.ndarray, spec: ResonatorSpec) -> CavityModeSet:
    """
    Eigenmodes exp(-i mu) of a round-trip operator, with mu = i ln(eigenvalue)
    on the principal branch and the mapped energy eps = k mu / (2 d).

    A mode is confined when it neither decays nor grows per round trip,
    its mapped energy lies below the continuum (Re eps < 0) and it is
    localized. Its mean kinetic energy must also sit inside the half zone
    pi k / (2 d), since mu is only known modulo 2 pi.

    Raises:
        EigenvalueAtZero: if some |eigenvalue| < 1e-12.
    """
    threshold = get_settings().bound_localization_threshold
    grid = spec.grid
    values, vectors, _ = eig_arrays(rt)
    smallest = float(np.abs(values).min())
    if smallest < 1e-12:
        raise EigenvalueAtZero("round-trip eigenvalue too close to zero", {"min_abs_eigenvalue": smallest})

    scale = spec.wavenumber / (2.0 * spec.spacing)
    modes = []
    for i, lam in enumerate(values):
        mu = complex(1j * np.log(lam))
        energy = scale * mu
        loc = localization(vectors[:, i], grid)
        confined = (
            abs(abs(lam) - 1.0) <= UNIT_CIRCLE_TOLERANCE
            and energy.real < 0
            and float(kinetic_energy(vectors[:, i], grid)) < math.pi * scale
            and loc > threshold
        )
        modes.append(
            CavityMode(
                eigenvalue=complex(lam),
                mu=mu,
                profile=vectors[:, i],
                localization=loc,
                energy=energy,
                classification=ModeClass.CONFINED if confined else ModeClass.LEAKY,
            )
        )
    modes.sort(key=lambda m: (round(m.energy.real / scale, 10), m.energy.imag))
    result = CavityModeSet(modes=modes, diffraction_length=spec.diffraction_length)
    logger.info(
        "cavity modes solved",
        mirrors=spec.mirrors.model,
        modes=len(modes),
        confined=len(result.confined()),
    )
    return result


# =============================================================================
# Short-Cavity Limit
# =============================================================================

def short_cavity_effective_potential(spec: ResonatorSpec) -> EffectivePotential:
    """
    Phase mirrors: +(1/8) (dW1/dx)^2.
    Reflectivity mirrors: -(1/8) (d ln sqrt(R1) / dx)^2.
    """
    x = spec.grid.nodes
    if isinstance(spec.mirrors, PhaseMirrors):
        w1, _ = mirror_phase(spec)
        gradient = -2.0 * spec.mirrors.beta * x * w1
        values = gradient ** 2 / 8.0
        provenance = Provenance.RESONATOR_PHASE
    else:
        profile = log_sqrt_reflectance(spec) - 0.5 * np.log(spec.mirrors.r1_background)
        gradient = -2.0 * spec.mirrors.beta * x * profile
        values = -(gradient ** 2) / 8.0
        provenance = Provenance.RESONATOR_REFLECTIVITY
    return EffectivePotential(grid=spec.grid, values=values, provenance=provenance)


def mode_to_schrodinger(u: np.ndarray, spec: ResonatorSpec) -> np.ndarray:
    """y = u exp(-i W / 2), W the first-mirror phase (or its equivalent)."""
    if isinstance(spec.mirrors, PhaseMirrors):
        w, _ = mirror_phase(spec)
    else:
        w = equivalent_phase(spec)
    return np.asarray(u, dtype=complex) * np.exp(-0.5j * w)


def short_cavity_parameter(u: np.ndarray, spec: ResonatorSpec) -> float:
    """d |u''| / (2 k |u|); small values mean the short-cavity mapping holds."""
    u = np.asarray(u, dtype=complex)
    second = -2.0 * (build_laplacian(spec.grid) @ u)
    return float(spec.spacing * np.linalg.norm(second) / (2.0 * spec.wavenumber * np.linalg.norm(u)))
