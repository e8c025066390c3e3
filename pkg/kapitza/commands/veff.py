"""
Effective-Potential Command
===========================

Write veff.csv for the configured drive, solve the static problem on it and
report the delta-well estimate.
"""

from pathlib import Path

import structlog

from kapitza.commands.base import CommandResult, grid_provenance
from kapitza.errors import NoBoundState
from kapitza.models.schemas import RunConfig
from kapitza.services.artifacts import write_table
from kapitza.services.effective import bound_states_static, delta_approximation, effective_potential

logger = structlog.get_logger(__name__)

VEFF_COLUMNS = ["x", "v_eff"]


def run_veff(config: RunConfig, out_dir: Path) -> CommandResult:
    spec, grid = config.potential, config.grid
    veff = effective_potential(spec, grid)
    filename = write_table(out_dir, "veff", VEFF_COLUMNS, zip(grid.nodes, veff.values), config.format)

    states = bound_states_static(veff)
    try:
        well = delta_approximation(veff)
        delta = {"alpha": well.alpha, "mu": well.mu, "energy": well.energy}
    except NoBoundState as e:
        logger.info("no delta-well bound state", **e.details)
        delta = None

    return CommandResult(
        artifacts=[filename],
        results={
            "provenance": veff.provenance.value,
            "min_v_eff": float(veff.values.min()),
            "max_v_eff": float(veff.values.max()),
            "bound_energies": [s.energy for s in states],
            "delta_well": delta,
        },
        provenance=grid_provenance(grid),
    )
