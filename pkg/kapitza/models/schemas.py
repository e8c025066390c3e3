"""
Pydantic Schemas for Inputs and Run Configuration
=================================================
"""

import math
from enum import Enum
from typing import Annotated, Any, Dict, List, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from kapitza.config import get_settings


# =============================================================================
# Enums
# =============================================================================

class PotentialKind(str, Enum):
    """Whether the oscillating amplitude is real or purely imaginary."""
    REAL = "real"
    IMAGINARY = "imaginary"


class DriveShape(str, Enum):
    """Temporal modulation of the potential."""
    SINUSOIDAL = "sinusoidal"
    SQUARE_WAVE = "square_wave"


class Provenance(str, Enum):
    """Where an effective potential came from."""
    SINUSOIDAL_AVG = "sinusoidal_avg"
    SQUARE_WAVE_AVG = "square_wave_avg"
    RESONATOR_PHASE = "resonator_phase"
    RESONATOR_REFLECTIVITY = "resonator_reflectivity"
    DELTA_APPROX = "delta_approx"


class ModeClass(str, Enum):
    """Stability class of a cavity mode."""
    CONFINED = "confined"
    LEAKY = "leaky"


class Command(str, Enum):
    """CLI commands."""
    CLASSICAL = "classical"
    VEFF = "veff"
    FLOQUET = "floquet"
    SCAN = "scan"
    EVOLVE = "evolve"
    RESONATOR = "resonator"


class OutputFormat(str, Enum):
    """Artifact file format."""
    CSV = "csv"
    JSON = "json"


_FROZEN = ConfigDict(frozen=True, extra="forbid")


# =============================================================================
# Grid
# =============================================================================

class Grid1D(BaseModel):
    """Uniform grid on [-L, L]; values beyond both ends are taken as zero."""
    model_config = _FROZEN

    half_width: float = Field(
        default_factory=lambda: get_settings().grid_half_width,
        gt=0,
        description="Half width L",
    )
    point_count: int = Field(
        default_factory=lambda: get_settings().grid_points,
        ge=3,
        description="Number of nodes Nx",
    )

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / (self.point_count - 1)

    @property
    def nodes(self) -> np.ndarray:
        x = -self.half_width + self.spacing * np.arange(self.point_count)
        # exact mirror symmetry so parity checks are not spoiled by round-off
        return 0.5 * (x - x[::-1])

    @property
    def box_width(self) -> float:
        """Distance between the two zero ghost nodes."""
        return (self.point_count + 1) * self.spacing


# =============================================================================
# Potentials
# =============================================================================

class PotentialSpec(BaseModel):
    """
    Gaussian profile W(x) = V0 exp(-beta x^2), multiplied by i for the
    imaginary kind, modulated by a sinusoid or a square wave.

    A square wave may be given by its ``period`` instead of ``omega``.
    """
    model_config = _FROZEN

    v0: float = Field(..., ge=0, description="Amplitude V0 (0 switches the drive off)")
    beta: float = Field(..., gt=0, description="Inverse width beta")
    kind: PotentialKind = Field(default=PotentialKind.IMAGINARY)
    drive: DriveShape = Field(default=DriveShape.SINUSOIDAL)
    omega: float = Field(..., gt=0, description="Drive angular frequency")

    @model_validator(mode="before")
    @classmethod
    def _period_to_omega(cls, data: Any) -> Any:
        if isinstance(data, dict) and "period" in data:
            data = dict(data)
            period = data.pop("period")
            if "omega" in data:
                raise ValueError("give either omega or period, not both")
            if not isinstance(period, (int, float)) or period <= 0:
                raise ValueError("period must be positive")
            data["omega"] = 2.0 * math.pi / period
            data.setdefault("drive", DriveShape.SQUARE_WAVE)
        return data

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega

    @property
    def amplitude(self) -> complex:
        """V0 or i*V0 depending on the kind."""
        return complex(self.v0) if self.kind == PotentialKind.REAL else 1j * self.v0

    @classmethod
    def square_wave(cls, v0: float, beta: float, kind: PotentialKind, period: float) -> "PotentialSpec":
        return cls(v0=v0, beta=beta, kind=kind, period=period)


class FloquetProblem(BaseModel):
    """Truncated harmonic expansion of a sinusoidally driven potential."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    spec: PotentialSpec
    grid: Grid1D = Field(default_factory=Grid1D)
    harmonic_cutoff: int = Field(
        default_factory=lambda: get_settings().harmonic_cutoff,
        ge=1,
    )

    @model_validator(mode="after")
    def _check_drive(self) -> "FloquetProblem":
        if self.spec.drive != DriveShape.SINUSOIDAL:
            raise ValueError("the harmonic expansion needs a sinusoidal drive")
        return self

    @property
    def harmonics(self) -> np.ndarray:
        return np.arange(-self.harmonic_cutoff, self.harmonic_cutoff + 1)

    @property
    def dimension(self) -> int:
        return (2 * self.harmonic_cutoff + 1) * self.grid.point_count


# =============================================================================
# Classical Pendulum
# =============================================================================

class PendulumParams(BaseModel):
    """Pendulum with a vibrating pivot; theta = 0 is the inverted position."""
    model_config = _FROZEN

    g: float = Field(default=1.0, gt=0, description="Gravitational acceleration")
    l: float = Field(default=1.0, gt=0, description="Pendulum length")
    amplitude: float = Field(..., ge=0, description="|A|, pivot vibration amplitude")
    kind: PotentialKind = Field(default=PotentialKind.IMAGINARY)
    omega: float = Field(..., gt=0, description="Drive angular frequency")

    @property
    def complex_amplitude(self) -> complex:
        return complex(self.amplitude) if self.kind == PotentialKind.REAL else 1j * self.amplitude

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega

    @classmethod
    def from_ratios(
        cls,
        amplitude_over_l: float,
        stiffness: float,
        kind: PotentialKind,
        g: float = 1.0,
        l: float = 1.0,
    ) -> "PendulumParams":
        """Build from |A|/l and l*omega^2/g, the dimensionless drive numbers."""
        return cls(
            g=g,
            l=l,
            amplitude=amplitude_over_l * l,
            kind=kind,
            omega=math.sqrt(stiffness * g / l),
        )


# =============================================================================
# Resonator
# =============================================================================

class PhaseMirrors(BaseModel):
    """
    Perfectly reflecting aspherical mirrors with Gaussian surface offsets
    Delta_1 = a exp(-beta x^2) and Delta_2 = -Delta_1 unless given.
    """
    model_config = _FROZEN

    model: Literal["phase"] = "phase"
    delta_amplitude: float = Field(..., description="Surface offset amplitude of mirror 1")
    beta: float = Field(..., gt=0)
    delta2_amplitude: Optional[float] = Field(
        default=None,
        description="Surface offset amplitude of mirror 2 (default: minus mirror 1)",
    )


class ReflectivityMirrors(BaseModel):
    """
    Flat mirrors with ln sqrt(R1) = ln sqrt(R_inf) - a exp(-beta x^2) and
    R2 = exp(-2 g d) / R1, in a cavity with round-trip gain g d.
    """
    model_config = _FROZEN

    model: Literal["reflectivity"] = "reflectivity"
    loss_depth: float = Field(..., ge=0, description="Depth a of the reflectance dip")
    beta: float = Field(..., gt=0)
    gain_length: float = Field(..., description="Gain-length product g*d")
    r1_background: float = Field(default=1.0, gt=0, le=1, description="R1 far from the axis")


MirrorModel = Annotated[Union[PhaseMirrors, ReflectivityMirrors], Field(discriminator="model")]


class ResonatorSection(BaseModel):
    """Cavity geometry and mirrors as written in a config file."""
    model_config = _FROZEN

    spacing: float = Field(..., gt=0, description="Mirror spacing d")
    wavenumber: float = Field(..., gt=0, description="Optical wavenumber k = 2 pi / lambda")
    mirrors: MirrorModel

    @model_validator(mode="before")
    @classmethod
    def _wavelength_to_wavenumber(cls, data: Any) -> Any:
        if isinstance(data, dict) and "wavelength" in data:
            data = dict(data)
            wavelength = data.pop("wavelength")
            if not isinstance(wavelength, (int, float)) or wavelength <= 0:
                raise ValueError("wavelength must be positive")
            data["wavenumber"] = 2.0 * math.pi / wavelength
        return data


class ResonatorSpec(ResonatorSection):
    """Cavity geometry, mirror model and transverse grid."""
    grid: Grid1D = Field(default_factory=Grid1D)

    @property
    def diffraction_length(self) -> float:
        """d / k, the one-way diffraction 'time'."""
        return self.spacing / self.wavenumber


# =============================================================================
# Run Configuration
# =============================================================================

class TrajectorySection(BaseModel):
    """Initial data and stepping for a pendulum run."""
    model_config = _FROZEN

    theta0: float = Field(..., description="Initial angle (real)")
    theta_dot0: float = Field(default=0.0)
    periods: float = Field(default=200.0, gt=0, description="Run length in drive periods")
    steps_per_period: int = Field(default=100, ge=50)
    sample_every: int = Field(default=1, ge=1)
    slow_start: bool = Field(
        default=False,
        description="Read theta0 and theta_dot0 as the slow variable and add the fast component",
    )


class ScanSection(BaseModel):
    """Frequency window for the transition scan."""
    model_config = _FROZEN

    omega_lo: float = Field(..., gt=0)
    omega_hi: float = Field(..., gt=0)
    step: float = Field(..., gt=0)

    @model_validator(mode="after")
    def _ordered(self) -> "ScanSection":
        if self.omega_hi < self.omega_lo:
            raise ValueError("omega_hi must not be below omega_lo")
        return self


class EvolveSection(BaseModel):
    """Initial wavefunction and run length for time-domain evolution."""
    model_config = _FROZEN

    periods: int = Field(default=100, ge=1)
    steps_per_period: int = Field(
        default_factory=lambda: get_settings().evolve_steps_per_period,
        ge=200,
    )
    initial: Literal["gaussian", "delta_well"] = "gaussian"
    center: float = 0.0
    width: float = Field(default=5.0, gt=0)
    momentum: float = 0.0


class FloquetSection(BaseModel):
    """Harmonic cutoff of the Floquet expansion."""
    model_config = _FROZEN

    harmonic_cutoff: int = Field(
        default_factory=lambda: get_settings().harmonic_cutoff,
        ge=1,
    )


_REQUIRED_SECTIONS: Dict[Command, List[str]] = {
    Command.CLASSICAL: ["pendulum", "trajectory"],
    Command.VEFF: ["potential"],
    Command.FLOQUET: ["potential"],
    Command.SCAN: ["potential", "scan"],
    Command.EVOLVE: ["potential"],
    Command.RESONATOR: ["resonator"],
}


class RunConfig(BaseModel):
    """A validated batch run: one command plus its parameter sections."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    command: Command
    output_dir: str = Field(default="out")
    format: OutputFormat = Field(default=OutputFormat.CSV)
    grid: Grid1D = Field(default_factory=Grid1D)
    floquet: FloquetSection = Field(default_factory=FloquetSection)
    evolve: EvolveSection = Field(default_factory=EvolveSection)
    potential: Optional[PotentialSpec] = None
    scan: Optional[ScanSection] = None
    pendulum: Optional[PendulumParams] = None
    trajectory: Optional[TrajectorySection] = None
    resonator: Optional[ResonatorSection] = None

    @model_validator(mode="after")
    def _sections_present(self) -> "RunConfig":
        for section in _REQUIRED_SECTIONS[self.command]:
            if getattr(self, section) is None:
                raise ValueError(f"{self.command.value} command requires a [{section}] section")
        if self.command in (Command.FLOQUET, Command.SCAN):
            if self.potential.drive != DriveShape.SINUSOIDAL:
                raise ValueError(f"{self.command.value} command needs a sinusoidal drive")
            dimension = (2 * self.floquet.harmonic_cutoff + 1) * self.grid.point_count
            if dimension > get_settings().eig_max_dimension:
                raise ValueError(
                    f"Floquet dimension {dimension} exceeds eig_max_dimension "
                    f"{get_settings().eig_max_dimension}"
                )
        return self

    def resonator_spec(self) -> ResonatorSpec:
        return ResonatorSpec(grid=self.grid, **self.resonator.model_dump())

    def floquet_problem(self, omega: Optional[float] = None) -> FloquetProblem:
        spec = self.potential
        if omega is not None:
            spec = spec.model_copy(update={"omega": omega})
        return FloquetProblem(spec=spec, grid=self.grid, harmonic_cutoff=self.floquet.harmonic_cutoff)


class RunManifest(BaseModel):
    """What a run produced, for reproducibility."""
    schema_version: int = Field(default=1)
    library_version: str
    command: Command
    config: Dict[str, Any] = Field(..., description="Echo of the validated config")
    artifacts: List[str] = Field(default_factory=list)
    timings: Dict[str, float] = Field(default_factory=dict, description="Wall-clock seconds")
    provenance: Dict[str, Any] = Field(default_factory=dict, description="Grid and cutoff used")
    results: Dict[str, Any] = Field(default_factory=dict, description="Scalar results")
