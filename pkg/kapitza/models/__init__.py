"""Input schemas and result records."""

from kapitza.models.schemas import (
    # Enums
    PotentialKind,
    DriveShape,
    Provenance,
    ModeClass,
    Command,
    OutputFormat,
    
    # Inputs
    Grid1D,
    PotentialSpec,
    FloquetProblem,
    PendulumParams,
    PhaseMirrors,
    ReflectivityMirrors,
    ResonatorSpec,
    
    # Run configuration
    RunConfig,
    RunManifest,
)
from kapitza.models.results import (
    EigenPair,
    ClassicalState,
    Trajectory,
    EffectivePotential,
    DeltaWell,
    StaticBoundState,
    QuasiEnergyEntry,
    QuasiEnergySpectrum,
    TransitionScan,
    Monodromy,
    MonodromyState,
    EvolutionTrace,
    CavityMode,
    CavityModeSet,
)

__all__ = [
    "PotentialKind",
    "DriveShape",
    "Provenance",
    "ModeClass",
    "Command",
    "OutputFormat",
    "Grid1D",
    "PotentialSpec",
    "FloquetProblem",
    "PendulumParams",
    "PhaseMirrors",
    "ReflectivityMirrors",
    "ResonatorSpec",
    "RunConfig",
    "RunManifest",
    "EigenPair",
    "ClassicalState",
    "Trajectory",
    "EffectivePotential",
    "DeltaWell",
    "StaticBoundState",
    "QuasiEnergyEntry",
    "QuasiEnergySpectrum",
    "TransitionScan",
    "Monodromy",
    "MonodromyState",
    "EvolutionTrace",
    "CavityMode",
    "CavityModeSet",
]
