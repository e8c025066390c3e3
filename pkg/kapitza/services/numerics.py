"""
Numerics
========

Discretization and linear-algebra contracts shared by every other service:
finite-difference operators, dense eigendecomposition with residual checks,
trapezoidal quadrature, complex RK4 stepping and matrix exponentials.

Operators act on all Nx stored nodes; the wavefunction is taken as zero at
ghost nodes one spacing beyond each end of the grid.
"""

from typing import Callable, List, Optional, Tuple

import numpy as np
import scipy.linalg
import structlog
from scipy.integrate import trapezoid
from scipy.sparse.linalg import expm_multiply

from kapitza.config import get_settings
from kapitza.errors import (
    DimensionTooLarge,
    DivergedTrajectory,
    InvalidParameter,
    NonConvergence,
)
from kapitza.models.results import EigenPair
from kapitza.models.schemas import Grid1D

logger = structlog.get_logger(__name__)


# =============================================================================
# Finite-Difference Operators
# =============================================================================

def build_laplacian(grid: Grid1D) -> np.ndarray:
    """Matrix of -1/2 d^2/dx^2 from the second-order central stencil."""
    n = grid.point_count
    h2 = grid.spacing ** 2
    off = np.full(n - 1, -0.5 / h2)
    lap = np.diag(np.full(n, 1.0 / h2)) + np.diag(off, 1) + np.diag(off, -1)
    return lap.astype(complex)


def build_first_derivative(grid: Grid1D) -> np.ndarray:
    """Matrix of d/dx from the central stencil."""
    n = grid.point_count
    half = np.full(n - 1, 0.5 / grid.spacing)
    return (np.diag(half, 1) - np.diag(half, -1)).astype(complex)


def laplacian_bands(grid: Grid1D) -> Tuple[float, float]:
    """(diagonal, off-diagonal) of the Laplacian, for banded solvers."""
    h2 = grid.spacing ** 2
    return 1.0 / h2, -0.5 / h2


# =============================================================================
# Dense Eigendecomposition
# =============================================================================

def eig_arrays(
    m: np.ndarray,
    max_dimension: Optional[int] = None,
    tolerance: Optional[float] = None,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    All eigenpairs of a dense matrix as arrays.

    Returns:
        (eigenvalues, eigenvectors as columns, residual norms), sorted by
        ascending real part with ties broken by ascending imaginary part.

    Raises:
        DimensionTooLarge: if the matrix exceeds the configured dimension.
        NonConvergence: if LAPACK fails or a residual exceeds the bound.
    """
    settings = get_settings()
    max_dimension = max_dimension or settings.eig_max_dimension
    tolerance = settings.eig_residual_tolerance if tolerance is None else tolerance

    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise InvalidParameter("matrix must be square and non-empty", {"shape": list(m.shape)})
    n = m.shape[0]
    if n > max_dimension:
        raise DimensionTooLarge(
            f"matrix dimension {n} exceeds {max_dimension}",
            {"dimension": n, "max_dimension": max_dimension},
        )
    if not np.all(np.isfinite(m)):
        raise InvalidParameter("matrix has non-finite entries")

    hermitian = np.array_equal(m, m.conj().T)
    try:
        if hermitian:
            values, vectors = scipy.linalg.eigh(m)
            values = values.astype(complex)
        else:
            values, vectors = scipy.linalg.eig(m)
    except (scipy.linalg.LinAlgError, ValueError) as e:
        raise NonConvergence(f"eigendecomposition failed: {e}", {"dimension": n}) from e

    vectors = vectors / np.linalg.norm(vectors, axis=0)
    residuals = np.linalg.norm(m @ vectors - vectors * values, axis=0)
    bound = tolerance * np.linalg.norm(m, "fro")
    worst = float(residuals.max())
    if worst > bound:
        raise NonConvergence(
            "eigenpair residual exceeds tolerance",
            {"dimension": n, "max_residual": worst, "bound": float(bound)},
        )

    # real parts equal up to round-off tie, so the imaginary part decides
    scale = float(np.linalg.norm(m, "fro")) or 1.0
    order = np.lexsort((values.imag, np.round(values.real / scale, 10)))
    logger.debug("eig_dense", dimension=n, hermitian=hermitian, max_residual=worst)
    return values[order], vectors[:, order], residuals[order]


def eig_dense(m: np.ndarray, max_dimension: Optional[int] = None) -> List[EigenPair]:
    """All eigenpairs of a dense complex matrix, sorted by (Re, Im)."""
    values, vectors, residuals = eig_arrays(m, max_dimension=max_dimension)
    return [
        EigenPair(eigenvalue=complex(values[i]), eigenvector=vectors[:, i], residual_norm=float(residuals[i]))
        for i in range(len(values))
    ]


# =============================================================================
# Matrix Exponential
# =============================================================================

def expm_checked(h: np.ndarray, scale: complex, samples: int = 2) -> np.ndarray:
    """
    exp(scale * h), verified against a truncated-Taylor evaluation of its
    action on random test vectors.

    Raises:
        NonConvergence: if the two evaluations disagree beyond tolerance.
    """
    a = scale * np.asarray(h, dtype=complex)
    try:
        u = scipy.linalg.expm(a)
    except (scipy.linalg.LinAlgError, ValueError) as e:
        raise NonConvergence(f"matrix exponential failed: {e}") from e

    rng = np.random.default_rng(0)
    n = a.shape[0]
    v = rng.standard_normal((n, samples)) + 1j * rng.standard_normal((n, samples))
    v /= np.linalg.norm(v, axis=0)
    reference = expm_multiply(a, v)
    scale_ref = max(1.0, float(np.linalg.norm(reference, axis=0).max()))
    residual = float(np.linalg.norm(u @ v - reference, axis=0).max()) / scale_ref
    tolerance = get_settings().expm_residual_tolerance
    if not np.isfinite(residual) or residual > tolerance:
        raise NonConvergence(
            "matrix exponential residual exceeds tolerance",
            {"residual": residual, "tolerance": tolerance, "dimension": n},
        )
    return u


# =============================================================================
# Quadrature & State Utilities
# =============================================================================

def integrate_trapezoid(values: np.ndarray, grid: Grid1D):
    """Trapezoidal rule over [-L, L]."""
    values = np.asarray(values)
    if values.shape != (grid.point_count,):
        raise InvalidParameter(
            "values length does not match the grid",
            {"length": int(values.size), "point_count": grid.point_count},
        )
    return trapezoid(values, dx=grid.spacing)


def localization(values: np.ndarray, grid: Grid1D) -> float:
    """Fraction of |v|^2 inside |x| <= L/2."""
    weight = np.abs(values) ** 2
    total = weight.sum()
    if total == 0:
        return 0.0
    inside = np.abs(grid.nodes) <= 0.5 * grid.half_width
    return float(weight[inside].sum() / total)


def kinetic_energy(vectors: np.ndarray, grid: Grid1D) -> np.ndarray:
    """
    <v|K|v> / <v|v> with K = -1/2 d^2/dx^2, per column of a (Nx, m) array or
    as a 0-d array for a single vector. Zero vectors give zero.
    """
    v = np.asarray(vectors, dtype=complex)
    diag, off = laplacian_bands(grid)
    kv = diag * v
    kv[1:] += off * v[:-1]
    kv[:-1] += off * v[1:]
    num = np.sum(v.conj() * kv, axis=0).real
    den = np.sum(np.abs(v) ** 2, axis=0)
    return np.divide(num, den, out=np.zeros_like(num), where=den > 0)


def normalize_state(v: np.ndarray, grid: Grid1D) -> np.ndarray:
    """L2-normalize with the grid measure; largest component real positive."""
    v = np.asarray(v, dtype=complex)
    norm = np.sqrt(grid.spacing * np.sum(np.abs(v) ** 2))
    if norm == 0:
        return v
    v = v / norm
    peak = v[np.argmax(np.abs(v))]
    return v * (abs(peak) / peak)


def profile_distance(a: np.ndarray, b: np.ndarray, grid: Grid1D) -> float:
    """L2 distance between the normalized amplitudes |a| and |b|."""
    pa = np.abs(normalize_state(a, grid))
    pb = np.abs(normalize_state(b, grid))
    return float(np.sqrt(grid.spacing * np.sum((pa - pb) ** 2)))


# =============================================================================
# ODE Stepping
# =============================================================================

Rhs = Callable[[float, np.ndarray], np.ndarray]


def rk4_step(state: np.ndarray, t: float, dt: float, rhs: Rhs) -> np.ndarray:
    """
    One classical fourth-order Runge-Kutta step with complex arithmetic.

    Raises:
        InvalidParameter: if dt is not positive.
        DivergedTrajectory: if the state is or becomes non-finite.
    """
    if not dt > 0:
        raise InvalidParameter("dt must be positive", {"dt": dt})
    y = np.asarray(state, dtype=complex)
    if not np.all(np.isfinite(y)):
        raise DivergedTrajectory("non-finite state", {"t": t})

    k1 = rhs(t, y)
    k2 = rhs(t + 0.5 * dt, y + 0.5 * dt * k1)
    k3 = rhs(t + 0.5 * dt, y + 0.5 * dt * k2)
    k4 = rhs(t + dt, y + dt * k3)
    y_next = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    if not np.all(np.isfinite(y_next)):
        raise DivergedTrajectory("non-finite state", {"t": t + dt})
    return y_next
