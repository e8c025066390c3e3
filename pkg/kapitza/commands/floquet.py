"""
Floquet Commands
================

``floquet`` writes the folded quasi-energy spectrum at one frequency and,
when a bound state is found, its density next to the two static oracles.
``scan`` writes per-frequency diagnostics of the spectral transition.
"""

from pathlib import Path

import numpy as np

from kapitza.commands.base import CommandResult, complex_pair, grid_provenance
from kapitza.errors import NoBoundState
from kapitza.models.schemas import RunConfig
from kapitza.services.artifacts import write_table
from kapitza.services.effective import (
    bound_states_static,
    delta_approximation,
    delta_profile,
    veff_sinusoidal,
)
from kapitza.services.floquet import scan_transition, solve_spectrum
from kapitza.services.numerics import normalize_state

SPECTRUM_COLUMNS = ["omega", "index", "re_eps_folded", "im_eps", "localization", "is_bound"]
SCAN_COLUMNS = ["omega", "max_abs_im_eps", "bound_count"]
BOUND_STATE_COLUMNS = ["x", "floquet_density", "veff_density", "delta_density"]


def _density(psi: np.ndarray, grid) -> np.ndarray:
    return np.abs(normalize_state(psi, grid)) ** 2


def run_floquet(config: RunConfig, out_dir: Path) -> CommandResult:
    problem = config.floquet_problem()
    grid = problem.grid
    spectrum = solve_spectrum(problem)

    rows = (
        (spectrum.omega, i, e.epsilon_folded.real, e.epsilon.imag, e.localization, e.is_bound)
        for i, e in enumerate(spectrum.entries)
    )
    artifacts = [write_table(out_dir, "spectrum", SPECTRUM_COLUMNS, rows, config.format)]

    bound = spectrum.bound_entries()
    if bound:
        nan = np.full(grid.point_count, np.nan)
        floquet = _density(bound[0].zeroth_harmonic(), grid)
        veff = veff_sinusoidal(problem.spec, grid)
        static = bound_states_static(veff)
        static_density = _density(static[0].wavefunction, grid) if static else nan
        try:
            delta_density = _density(delta_profile(delta_approximation(veff), grid), grid)
        except NoBoundState:
            delta_density = nan
        artifacts.append(
            write_table(
                out_dir,
                "bound_state",
                BOUND_STATE_COLUMNS,
                zip(grid.nodes, floquet, static_density, delta_density),
                config.format,
            )
        )

    return CommandResult(
        artifacts=artifacts,
        results={
            "bound_count": len(bound),
            "bound_epsilons": [complex_pair(e.epsilon_folded) for e in bound],
            "max_abs_im_eps": spectrum.max_abs_imag,
            "matrix_norm": spectrum.matrix_norm,
        },
        provenance={
            **grid_provenance(grid),
            "harmonic_cutoff": problem.harmonic_cutoff,
            "dimension": problem.dimension,
        },
    )


def run_scan(config: RunConfig, out_dir: Path) -> CommandResult:
    window = config.scan
    scan = scan_transition(
        config.potential,
        config.grid,
        config.floquet.harmonic_cutoff,
        window.omega_lo,
        window.omega_hi,
        window.step,
    )
    rows = zip(scan.omegas, scan.max_abs_imag, scan.bound_counts)
    filename = write_table(out_dir, "spectrum_scan", SCAN_COLUMNS, rows, config.format)
    return CommandResult(
        artifacts=[filename],
        results={"omega_th": scan.omega_th, "points": len(scan.omegas)},
        provenance={
            **grid_provenance(config.grid),
            "harmonic_cutoff": config.floquet.harmonic_cutoff,
        },
    )
