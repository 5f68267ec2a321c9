"""Lazy walk transition matrix and its positive stationary (left) vector."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PerronConvergenceError, SingularMatrixError
from .graph import DirectedGraph
from .linalg import TOL, solve_linear

__all__ = [
    "StochasticMatrix",
    "PerronVector",
    "build_probability_matrix",
    "perron_vector",
    "stationary_direct",
    "stationary_power",
]

# Above this size the dense LU of the fixed-point system gets replaced by
# power iteration; everything in the test suite sits far below it.
_DIRECT_LIMIT = 4096


@dataclass(frozen=True)
class StochasticMatrix:
    """Row-stochastic transition matrix of the lazy walk.

    Diagonal entries equal ``alpha``; entry (i, j) for an edge (i, j) is
    ``(1 - alpha) / out_degree(i)``; all other entries vanish.
    """

    matrix: np.ndarray
    alpha: float

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class PerronVector:
    """Positive stationary row vector, normalized to sum 1."""

    phi: np.ndarray
    residual: float


def build_probability_matrix(g: DirectedGraph, alpha: float) -> StochasticMatrix:
    """Transition matrix of the alpha-lazy walk on g.

    Every vertex must have an outgoing edge, otherwise its row cannot be
    stochastic and the offending vertex is named in the error.
    """
    if not 0.0 <= alpha < 1.0:
        raise ValueError(f"alpha must lie in [0, 1), got {alpha}")
    m = np.zeros((g.n, g.n))
    for u in range(g.n):
        d = g.out_degree(u)
        if d == 0:
            raise ValueError(
                f"vertex {g.labels[u]!r} has no outgoing edges; its transition row "
                "cannot be stochastic")
        m[u, list(g.out_adj[u])] = (1.0 - alpha) / d
        m[u, u] = alpha
    return StochasticMatrix(matrix=m, alpha=float(alpha))


def stationary_direct(matrix: np.ndarray) -> np.ndarray:
    """Stationary row vector by a direct solve.

    The fixed-point system ``(M^T - I) phi = 0`` has rank n-1 for an
    irreducible M; swapping its last row for the normalization constraint
    makes it square and nonsingular. Raises SingularMatrixError when the
    input is reducible enough to break that rank structure.
    """
    m = np.asarray(matrix, dtype=float)
    n = m.shape[0]
    a = m.T - np.eye(n)
    a[-1, :] = 1.0
    b = np.zeros(n)
    b[-1] = 1.0
    return solve_linear(a, b)


def stationary_power(matrix: np.ndarray, max_iter: int = 100_000,
                     tol: float = TOL.perron_residual) -> np.ndarray:
    """Stationary row vector by power iteration with Cesaro averaging.

    Iterates on the half-lazy matrix ``(M + I) / 2``, which keeps M's
    stationary vector while being aperiodic even when M is periodic (a bare
    power iteration oscillates forever on a directed cycle at alpha = 0).
    The running Cesaro average of the iterates is checked alongside the raw
    iterate and whichever first meets the residual wins.
    """
    m = np.asarray(matrix, dtype=float)
    n = m.shape[0]
    half = 0.5 * (m + np.eye(n))
    x = np.full(n, 1.0 / n)
    acc = np.zeros(n)
    best = math.inf
    for it in range(1, max_iter + 1):
        x = x @ half
        x /= x.sum()
        acc += x
        if it % 16 == 0 or it == max_iter:
            for cand in (x, acc / it):
                residual = float(np.abs(cand @ m - cand).max())
                best = min(best, residual)
                if residual <= tol:
                    return cand / cand.sum()
    raise PerronConvergenceError(
        f"power iteration stalled at residual {best:.3e} after {max_iter} iterations",
        residual=best)


def perron_vector(m: StochasticMatrix | np.ndarray) -> PerronVector:
    """Positive left fixed vector of an irreducible row-stochastic matrix.

    Callers are expected to have verified strong connectivity; a reducible
    matrix surfaces here as a singular system, a nonpositive entry, or a
    residual above ``TOL.perron_residual``, all raised as
    PerronConvergenceError with the achieved residual attached.
    """
    mat = m.matrix if isinstance(m, StochasticMatrix) else np.asarray(m, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {mat.shape}")
    n = mat.shape[0]
    if n == 0:
        raise ValueError("empty matrix has no stationary vector")
    if n <= _DIRECT_LIMIT:
        try:
            phi = stationary_direct(mat)
        except SingularMatrixError as exc:
            raise PerronConvergenceError(
                f"fixed-point system is singular, input likely not irreducible ({exc})",
                residual=math.inf) from exc
    else:
        phi = stationary_power(mat)
    if float(phi.min()) <= 0.0:
        raise PerronConvergenceError(
            "stationary vector has nonpositive entries; input not irreducible",
            residual=float(np.abs(phi @ mat - phi).max()))
    phi = phi / phi.sum()
    residual = float(np.abs(phi @ mat - phi).max())
    if residual > TOL.perron_residual:
        raise PerronConvergenceError(
            f"stationary residual {residual:.3e} exceeds {TOL.perron_residual:.0e}",
            residual=residual)
    return PerronVector(phi=phi, residual=residual)
