"""Computational services, one module per concern."""

from kapitza.services import (
    artifacts,
    classical,
    effective,
    floquet,
    numerics,
    propagator,
    resonator,
)

__all__ = [
    "artifacts",
    "classical",
    "effective",
    "floquet",
    "numerics",
    "propagator",
    "resonator",
]
