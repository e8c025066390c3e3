"""
Result Records
==============

Immutable containers returned by the services. They hold numpy arrays, so
they are plain dataclasses rather than pydantic models.
"""

from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Sequence

import numpy as np

from kapitza.models.schemas import Grid1D, ModeClass, Provenance


# =============================================================================
# Linear Algebra
# =============================================================================

@dataclass(frozen=True)
class EigenPair:
    """Eigenvalue with its unit-norm eigenvector and residual |A v - lambda v|."""

    eigenvalue: complex
    eigenvector: np.ndarray
    residual_norm: float


# =============================================================================
# Classical Pendulum
# =============================================================================

@dataclass(frozen=True)
class ClassicalState:
    """Complex angle and angular velocity at time t."""

    theta: complex
    theta_dot: complex
    t: float = 0.0


@dataclass(frozen=True)
class Trajectory(Sequence[ClassicalState]):
    """Sampled pendulum states, stored column-wise."""

    t: np.ndarray
    theta: np.ndarray
    theta_dot: np.ndarray

    def __len__(self) -> int:
        return len(self.t)

    def __getitem__(self, index):  # type: ignore[override]
        if isinstance(index, slice):
            return Trajectory(self.t[index], self.theta[index], self.theta_dot[index])
        return ClassicalState(
            theta=complex(self.theta[index]),
            theta_dot=complex(self.theta_dot[index]),
            t=float(self.t[index]),
        )

    def __iter__(self) -> Iterator[ClassicalState]:
        for i in range(len(self)):
            yield self[i]


# =============================================================================
# Effective Potentials
# =============================================================================

@dataclass(frozen=True)
class EffectivePotential:
    """Real static potential sampled on a grid."""

    grid: Grid1D
    values: np.ndarray
    provenance: Provenance


@dataclass(frozen=True)
class DeltaWell:
    """alpha * delta(x) well; bound iff alpha < 0, with mu = -alpha and E = -mu^2 / 2."""

    alpha: float

    @property
    def mu(self) -> float:
        return -self.alpha

    @property
    def energy(self) -> float:
        return -0.5 * self.mu ** 2

    def profile(self, x: np.ndarray) -> np.ndarray:
        return np.sqrt(self.mu) * np.exp(-self.mu * np.abs(x))


@dataclass(frozen=True)
class StaticBoundState:
    energy: float
    wavefunction: np.ndarray
    localization: float


# =============================================================================
# Floquet Spectra
# =============================================================================

@dataclass(frozen=True)
class QuasiEnergyEntry:
    """One Floquet eigenpair; components[i] is u_n(x) for n = harmonics[i]."""

    epsilon: complex
    epsilon_folded: complex
    components: np.ndarray
    localization: float
    is_bound: bool

    def zeroth_harmonic(self) -> np.ndarray:
        return self.components[self.components.shape[0] // 2]


@dataclass(frozen=True)
class QuasiEnergySpectrum:
    omega: float
    harmonic_cutoff: int
    grid: Grid1D
    entries: List[QuasiEnergyEntry]
    matrix_norm: float = 0.0

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def epsilons(self) -> np.ndarray:
        return np.array([e.epsilon for e in self.entries])

    @property
    def max_abs_imag(self) -> float:
        return float(np.max(np.abs(self.epsilons.imag))) if self.entries else 0.0

    def bound_entries(self) -> List[QuasiEnergyEntry]:
        return [e for e in self.entries if e.is_bound]


@dataclass(frozen=True)
class TransitionScan:
    """Per-frequency diagnostics of a complex-to-real spectral transition."""

    omegas: np.ndarray
    max_abs_imag: np.ndarray
    bound_counts: np.ndarray
    omega_th: float


# =============================================================================
# Propagators
# =============================================================================

@dataclass(frozen=True)
class Monodromy:
    """One-period propagator U in the position basis."""

    matrix: np.ndarray
    period: float
    grid: Grid1D

    @property
    def omega(self) -> float:
        return 2.0 * np.pi / self.period


@dataclass(frozen=True)
class MonodromyState:
    epsilon: complex
    vector: np.ndarray
    localization: float
    is_bound: bool


@dataclass(frozen=True)
class EvolutionTrace:
    """Snapshots once per drive period, survival amplitude <psi0|psi(t)> and norm."""

    times: np.ndarray
    snapshots: np.ndarray
    survival: np.ndarray
    norms: np.ndarray


# =============================================================================
# Resonator
# =============================================================================

@dataclass(frozen=True)
class CavityMode:
    eigenvalue: complex
    mu: complex
    profile: np.ndarray
    localization: float
    energy: complex
    classification: ModeClass


@dataclass(frozen=True)
class CavityModeSet:
    modes: List[CavityMode] = field(default_factory=list)
    diffraction_length: Optional[float] = None

    def __len__(self) -> int:
        return len(self.modes)

    def confined(self) -> List[CavityMode]:
        return [m for m in self.modes if m.classification == ModeClass.CONFINED]
