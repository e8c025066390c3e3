"""
Evolve Command
==============

Crank-Nicolson evolution of a wavepacket or of the delta-well profile under
the configured drive; writes evolution.csv once per period.
"""

from pathlib import Path

import numpy as np

from kapitza.commands.base import CommandResult, complex_pair, grid_provenance
from kapitza.models.schemas import EvolveSection, Grid1D, PotentialKind, PotentialSpec, RunConfig
from kapitza.services.artifacts import write_table
from kapitza.services.effective import delta_approximation, delta_profile, effective_potential
from kapitza.services.propagator import evolve

EVOLUTION_COLUMNS = ["t", "re_survival", "im_survival", "norm"]


def initial_state(spec: PotentialSpec, grid: Grid1D, section: EvolveSection) -> np.ndarray:
    """
    Gaussian wavepacket, or the delta-well profile of the averaged potential.

    The delta well always comes from the imaginary-drive counterpart, so a
    real drive evolves the same initial state as a control run.
    """
    if section.initial == "delta_well":
        well_spec = spec.model_copy(update={"kind": PotentialKind.IMAGINARY})
        return delta_profile(delta_approximation(effective_potential(well_spec, grid)), grid).astype(complex)
    x = grid.nodes - section.center
    return np.exp(-0.5 * (x / section.width) ** 2 + 1j * section.momentum * grid.nodes)


def run_evolve(config: RunConfig, out_dir: Path) -> CommandResult:
    spec, grid, section = config.potential, config.grid, config.evolve
    dt = spec.period / section.steps_per_period
    trace = evolve(
        spec,
        grid,
        initial_state(spec, grid, section),
        t_end=section.periods * spec.period,
        dt=dt,
    )
    rows = zip(trace.times, trace.survival.real, trace.survival.imag, trace.norms)
    filename = write_table(out_dir, "evolution", EVOLUTION_COLUMNS, rows, config.format)
    return CommandResult(
        artifacts=[filename],
        results={
            "final_survival": complex_pair(trace.survival[-1]),
            "final_abs_survival": float(abs(trace.survival[-1])),
            "final_norm": float(trace.norms[-1]),
        },
        provenance={**grid_provenance(grid), "dt": dt, "initial": section.initial},
    )
