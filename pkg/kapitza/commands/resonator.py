"""
Resonator Command
=================

Round-trip modes of the configured cavity, written to modes.csv, with the
short-cavity Schrodinger energy for comparison.
"""

from pathlib import Path

from kapitza.commands.base import CommandResult, complex_pair, grid_provenance
from kapitza.models.schemas import RunConfig
from kapitza.services.artifacts import write_table
from kapitza.services.effective import bound_states_static
from kapitza.services.resonator import (
    cavity_modes,
    round_trip,
    short_cavity_effective_potential,
    short_cavity_parameter,
)

MODES_COLUMNS = ["index", "re_mu", "im_mu", "abs_eigenvalue", "localization", "classification"]


def run_resonator(config: RunConfig, out_dir: Path) -> CommandResult:
    spec = config.resonator_spec()
    modes = cavity_modes(round_trip(spec), spec)
    rows = (
        (i, m.mu.real, m.mu.imag, abs(m.eigenvalue), m.localization, m.classification.value)
        for i, m in enumerate(modes.modes)
    )
    filename = write_table(out_dir, "modes", MODES_COLUMNS, rows, config.format)

    confined = modes.confined()
    static = bound_states_static(short_cavity_effective_potential(spec))
    return CommandResult(
        artifacts=[filename],
        results={
            "mirrors": spec.mirrors.model,
            "confined_count": len(confined),
            "confined_energies": [complex_pair(m.energy) for m in confined],
            "short_cavity_parameter": (
                short_cavity_parameter(confined[0].profile, spec) if confined else None
            ),
            "effective_bound_energy": static[0].energy if static else None,
        },
        provenance={**grid_provenance(spec.grid), "diffraction_length": spec.diffraction_length},
    )
