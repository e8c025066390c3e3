"""
Command Plumbing
================

What every command handler receives and returns.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List

from kapitza.models.schemas import Grid1D, RunConfig


@dataclass
class CommandResult:
    """Files written by a handler plus the scalars echoed in the manifest."""

    artifacts: List[str] = field(default_factory=list)
    results: Dict[str, Any] = field(default_factory=dict)
    provenance: Dict[str, Any] = field(default_factory=dict)


Handler = Callable[[RunConfig, Path], CommandResult]


def grid_provenance(grid: Grid1D) -> Dict[str, Any]:
    return {
        "half_width": grid.half_width,
        "point_count": grid.point_count,
        "spacing": grid.spacing,
    }


def complex_pair(value: complex) -> List[float]:
    """[re, im] for JSON."""
    return [float(value.real), float(value.imag)]
