"""
Floquet Spectra
===============

Truncated harmonic expansion of a sinusoidally driven Schrodinger equation.
Writing psi = exp(-i eps t) sum_n u_n(x) exp(i n omega t) turns the driven
problem into the coupled static system

    (H0 + n omega) u_n + (W / 2) (u_{n-1} + u_{n+1}) = eps u_n,   n = -N..N

whose eigenvalues are the quasi-energies. Each physical Floquet state shows up
once per harmonic shift; only the copy carried by the zeroth harmonic can be
classified as bound.
"""

import time
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence, Tuple

import numpy as np
import structlog
from scipy.optimize import linear_sum_assignment

from kapitza.config import get_settings
from kapitza.errors import DimensionTooLarge, NoTransitionFound
from kapitza.models.results import QuasiEnergyEntry, QuasiEnergySpectrum, TransitionScan
from kapitza.models.schemas import FloquetProblem, Grid1D, PotentialSpec
from kapitza.services.effective import drive_profile
from kapitza.services.numerics import build_laplacian, eig_arrays

logger = structlog.get_logger(__name__)


def fold(epsilon: complex, omega: float) -> complex:
    """Reduce Re(epsilon) into (-omega/2, omega/2]; Im is untouched."""
    re = np.real(epsilon)
    folded = re - omega * np.ceil((re - 0.5 * omega) / omega)
    return folded + 1j * np.imag(epsilon)


def build_floquet_matrix(problem: FloquetProblem) -> np.ndarray:
    """
    Block matrix of the coupled harmonic equations, blocks ordered n = -N..N.

    Raises:
        DimensionTooLarge: if (2N+1) * Nx exceeds the eigensolver limit.
    """
    limit = get_settings().eig_max_dimension
    if problem.dimension > limit:
        raise DimensionTooLarge(
            f"Floquet dimension {problem.dimension} exceeds {limit}",
            {"dimension": problem.dimension, "max_dimension": limit},
        )

    nx = problem.grid.point_count
    blocks = len(problem.harmonics)
    laplacian = build_laplacian(problem.grid)
    coupling = np.diag(0.5 * drive_profile(problem.spec, problem.grid))

    m = np.zeros((blocks * nx, blocks * nx), dtype=complex)
    for i, n in enumerate(problem.harmonics):
        rows = slice(i * nx, (i + 1) * nx)
        m[rows, rows] = laplacian + n * problem.spec.omega * np.eye(nx)
        if i + 1 < blocks:
            nxt = slice((i + 1) * nx, (i + 2) * nx)
            m[rows, nxt] = coupling
            m[nxt, rows] = coupling
    return m


def _classify(
    values: np.ndarray,
    vectors: np.ndarray,
    problem: FloquetProblem,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Folded quasi-energies, zeroth-harmonic localization and bound flags.

    A bound state has a real quasi-energy whose unfolded value lies in
    (-omega/2, 0). Lattice states near the top of the band (energy ~ 2/h^2)
    fold to just below zero as well, so the folded value is not used here.
    """
    settings = get_settings()
    grid = problem.grid
    omega = problem.spec.omega
    nx = grid.point_count
    zeroth = problem.harmonic_cutoff

    weight = np.abs(vectors) ** 2
    total = weight.sum(axis=0)
    inside = np.abs(grid.nodes) <= 0.5 * grid.half_width
    u0_weight = weight[zeroth * nx:(zeroth + 1) * nx]
    loc = u0_weight[inside].sum(axis=0) / total

    folded = fold(values, omega)
    bound = (
        (np.abs(values.imag) <= settings.bound_imag_tolerance * omega)
        & (values.real < 0)
        & (values.real > -0.5 * omega)
        & (loc > settings.bound_localization_threshold)
    )
    return folded, loc, bound


def solve_spectrum(problem: FloquetProblem) -> QuasiEnergySpectrum:
    """
    Diagonalize the Floquet matrix and split each eigenvector into its
    harmonic components.

    Localization is the weight of the zeroth harmonic inside |x| <= L/2 with
    the full eigenvector normalized to one.
    """
    started = time.perf_counter()
    m = build_floquet_matrix(problem)
    values, vectors, _ = eig_arrays(m)
    folded, loc, bound = _classify(values, vectors, problem)

    shape = (len(problem.harmonics), problem.grid.point_count)
    entries = [
        QuasiEnergyEntry(
            epsilon=complex(values[i]),
            epsilon_folded=complex(folded[i]),
            components=vectors[:, i].reshape(shape),
            localization=float(loc[i]),
            is_bound=bool(bound[i]),
        )
        for i in range(len(values))
    ]
    logger.info(
        "floquet spectrum solved",
        omega=problem.spec.omega,
        dimension=problem.dimension,
        bound_count=int(bound.sum()),
        max_abs_imag=float(np.abs(values.imag).max()),
        seconds=round(time.perf_counter() - started, 3),
    )
    return QuasiEnergySpectrum(
        omega=problem.spec.omega,
        harmonic_cutoff=problem.harmonic_cutoff,
        grid=problem.grid,
        entries=entries,
        matrix_norm=float(np.linalg.norm(m, "fro")),
    )


def bound_entries(spectrum: QuasiEnergySpectrum) -> List[QuasiEnergyEntry]:
    return spectrum.bound_entries()


def conjugate_pair_mismatch(values: Sequence[complex]) -> float:
    """
    Largest distance between the multisets {eps} and {eps*} under the
    optimal one-to-one matching. Zero when every complex value has its
    conjugate partner.
    """
    values = np.asarray(values, dtype=complex)
    if values.size == 0:
        return 0.0
    cost = np.abs(values[:, None] - np.conj(values)[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


# =============================================================================
# Frequency Scan
# =============================================================================

def _scan_point(spec: PotentialSpec, grid: Grid1D, cutoff: int, omega: float) -> Tuple[float, int]:
    problem = FloquetProblem(
        spec=spec.model_copy(update={"omega": omega}),
        grid=grid,
        harmonic_cutoff=cutoff,
    )
    values, vectors, _ = eig_arrays(build_floquet_matrix(problem))
    _, _, bound = _classify(values, vectors, problem)
    return float(np.abs(values.imag).max()), int(bound.sum())


def scan_omegas(omega_lo: float, omega_hi: float, step: float) -> np.ndarray:
    """Evenly spaced frequencies from omega_lo to omega_hi inclusive."""
    count = int(round((omega_hi - omega_lo) / step)) + 1
    return np.linspace(omega_lo, omega_lo + (count - 1) * step, count)


def transition_threshold(omegas: np.ndarray, max_abs_imag: np.ndarray, threshold: float) -> float:
    """
    Smallest omega whose spectrum, and that of every larger scanned omega,
    has max |Im eps| <= threshold.

    Raises:
        NoTransitionFound: if the largest scanned omega already fails.
    """
    real = max_abs_imag <= threshold
    if not real[-1]:
        raise NoTransitionFound(
            "spectrum is not real at the top of the scanned range",
            {"omega_hi": float(omegas[-1]), "max_abs_imag": float(max_abs_imag[-1])},
        )
    failing = np.nonzero(~real)[0]
    start = 0 if failing.size == 0 else int(failing[-1]) + 1
    return float(omegas[start])


def scan_transition(
    spec: PotentialSpec,
    grid: Grid1D,
    harmonic_cutoff: int,
    omega_lo: float,
    omega_hi: float,
    step: float,
    workers: Optional[int] = None,
) -> TransitionScan:
    """
    Solve the Floquet problem across a frequency window and locate the
    complex-to-real transition of the quasi-energy spectrum.

    Frequencies are solved concurrently; results keep ascending-omega order.

    Raises:
        NoTransitionFound: if no scanned frequency qualifies.
    """
    settings = get_settings()
    omegas = scan_omegas(omega_lo, omega_hi, step)
    workers = workers or settings.scan_workers
    started = time.perf_counter()

    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(lambda w: _scan_point(spec, grid, harmonic_cutoff, float(w)), omegas))

    max_abs_imag = np.array([r[0] for r in results])
    bound_counts = np.array([r[1] for r in results], dtype=int)
    omega_th = transition_threshold(omegas, max_abs_imag, settings.scan_imag_threshold)

    logger.info(
        "transition scan finished",
        points=len(omegas),
        omega_th=omega_th,
        workers=workers,
        seconds=round(time.perf_counter() - started, 3),
    )
    return TransitionScan(
        omegas=omegas,
        max_abs_imag=max_abs_imag,
        bound_counts=bound_counts,
        omega_th=omega_th,
    )
