"""Small dense linear-algebra kernel with explicit, fixed tolerances.

Routines are backed by LAPACK (through numpy/scipy) but keep narrow
contracts: callers get pivot and residual diagnostics instead of silent
garbage, and the pencil solver understands semidefinite denominators.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import NumericalError, SingularMatrixError

__all__ = [
    "Tolerances",
    "TOL",
    "SymmetricEigenResult",
    "PencilResult",
    "solve_linear",
    "sym_eig",
    "pencil_min_eig",
]


@dataclass(frozen=True)
class Tolerances:
    """Fixed numerical tolerances used across the package.

    One record, documented in the README, deliberately not configurable.
    """

    row_sum: float = 1e-12            # stochastic rows / Laplacian zero-row defect
    perron_residual: float = 1e-10    # max-norm fixed-point residual of phi
    solve_residual: float = 1e-9      # linear-solve backward residual
    eig_residual: float = 1e-10       # eigenpair reconstruction defect
    kernel_rel: float = 1e-12         # relative eigenvalue cut for kernel splits
    kernel_psd: float = 1e-9          # PSD slack on kernel blocks
    cd_slack: float = 1e-9            # K_optimal >= K_theorem - cd_slack
    falsification: float = 1e-8       # residual below -this counts as a violation
    tightness: float = 1e-8           # extremal-direction residual at K_optimal
    gamma_oracle: float = 1e-9        # neighborhood-sum vs definitional gamma
    scale_invariance: float = 1e-12   # invariance under phi -> 2*phi
    forms_match: float = 1e-10        # quadratic forms vs scalar evaluators


TOL = Tolerances()


@dataclass(frozen=True)
class SymmetricEigenResult:
    """Eigenvalues ascending, orthonormal eigenvectors as columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


@dataclass(frozen=True)
class PencilResult:
    """Outcome of maximising K subject to ``a - K*g`` staying PSD.

    Attributes
    ----------
    min_ratio : float
        sup{K : a - K*g is PSD}; ``-inf`` when no finite K works, ``+inf``
        when g vanishes while a is PSD.
    kernel_ok : bool
        a is PSD on ker(g) within tolerance.
    coupling_ok : bool
        The coupling of ker(g) with its complement stays inside the range
        of the kernel block of a (otherwise no K makes the pencil PSD).
    kernel_min_eig : float
        Smallest eigenvalue of a restricted to ker(g); 0.0 for trivial kernel.
    coupling_residual : float
        Largest coupling entry falling outside the kernel-block range.
    extremal : numpy.ndarray or None
        Direction attaining min_ratio with unit g-energy; None when
        min_ratio is infinite.
    """

    min_ratio: float
    kernel_ok: bool
    coupling_ok: bool
    kernel_min_eig: float
    coupling_residual: float
    extremal: np.ndarray | None


def solve_linear(a, b) -> np.ndarray:
    """Solve ``a @ x = b`` by LU with partial pivoting.

    Raises SingularMatrixError, carrying the offending pivot magnitude,
    when the factorization is singular to working precision or the backward
    residual exceeds ``TOL.solve_residual * max(1, max|b|)``.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if b.shape != (a.shape[0],):
        raise ValueError(f"shape mismatch: matrix {a.shape}, rhs {b.shape}")
    n = a.shape[0]
    if n == 0:
        return np.zeros(0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a)
        pivots = np.abs(np.diag(lu))
        scale = max(1.0, float(np.abs(a).max()))
        min_pivot = float(pivots.min())
        if min_pivot <= scale * np.finfo(float).eps * n:
            raise SingularMatrixError(
                f"matrix singular to working precision (min pivot {min_pivot:.3e})",
                pivot=min_pivot)
        x = scipy.linalg.lu_solve((lu, piv), b)
    residual = float(np.abs(a @ x - b).max())
    if not np.isfinite(x).all() or residual > TOL.solve_residual * max(1.0, float(np.abs(b).max())):
        raise SingularMatrixError(
            f"linear solve residual {residual:.3e} exceeds tolerance",
            pivot=min_pivot, residual=residual)
    return x


def sym_eig(a) -> SymmetricEigenResult:
    """Full eigendecomposition of a (near-)symmetric matrix.

    The input is symmetrized exactly before the solve, so tiny asymmetries
    from accumulated rounding are harmless. Deterministic for a given input.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    s = 0.5 * (a + a.T)
    try:
        w, v = np.linalg.eigh(s)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"symmetric eigensolver did not converge: {exc}") from exc
    return SymmetricEigenResult(eigenvalues=w, eigenvectors=v)


def pencil_min_eig(a, g, kernel_tol: float = TOL.kernel_rel) -> PencilResult:
    """Largest K keeping ``a - K*g`` positive semidefinite, for PSD ``g``.

    ker(g) is split off at the relative eigenvalue threshold
    ``kernel_tol * max(lambda_max(g), 1)``. On the kernel, ``a`` itself must
    be PSD (within ``TOL.kernel_psd``) and its coupling to the complement
    must be representable inside the kernel block, else no finite K works
    and min_ratio is ``-inf``. On the complement the pencil is whitened by
    ``g^(-1/2)`` and the minimum eigenvalue of the kernel-corrected
    (generalized Schur complement) form is returned, which matches a brute
    force bisection over K with a full PSD test.

    Parameters
    ----------
    a : (n, n) array_like, symmetric
    g : (n, n) array_like, symmetric positive semidefinite
    kernel_tol : float
        Relative eigenvalue cut separating ker(g) from its complement.
    """
    a = np.asarray(a, dtype=float)
    g = np.asarray(g, dtype=float)
    if a.shape != g.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected equal square shapes, got {a.shape} and {g.shape}")
    a = 0.5 * (a + a.T)
    g = 0.5 * (g + g.T)
    n = a.shape[0]
    if n == 0:
        return PencilResult(math.inf, True, True, 0.0, 0.0, None)

    eg = sym_eig(g)
    lam, vecs = eg.eigenvalues, eg.eigenvectors
    gscale = max(float(lam[-1]), 1.0)
    if float(lam[0]) < -TOL.kernel_psd * gscale:
        raise ValueError(f"denominator form is not PSD (min eigenvalue {lam[0]:.3e})")
    ker = lam <= kernel_tol * gscale
    vk = vecs[:, ker]
    vr = vecs[:, ~ker]
    lr = lam[~ker]
    k_dim = vk.shape[1]
    r_dim = vr.shape[1]
    ascale = max(1.0, float(np.abs(a).max()))

    kernel_min = 0.0
    coupling_resid = 0.0
    eb = None
    pos = None
    z_pos = None
    if k_dim:
        b = vk.T @ a @ vk
        eb = sym_eig(b)
        kernel_min = float(eb.eigenvalues[0])
        if r_dim:
            cb = (vr.T @ a @ vk) @ eb.eigenvectors
            rank_tol = kernel_tol * max(1.0, float(np.abs(eb.eigenvalues).max()))
            pos = eb.eigenvalues > rank_tol
            if (~pos).any():
                coupling_resid = float(np.abs(cb[:, ~pos]).max())
            if pos.any():
                z_pos = cb[:, pos]

    kernel_ok = kernel_min >= -TOL.kernel_psd * ascale
    coupling_ok = coupling_resid <= TOL.kernel_psd * ascale
    if not (kernel_ok and coupling_ok):
        return PencilResult(-math.inf, kernel_ok, coupling_ok,
                            kernel_min, coupling_resid, None)
    if r_dim == 0:
        return PencilResult(math.inf, kernel_ok, coupling_ok,
                            kernel_min, coupling_resid, None)

    s = vr.T @ a @ vr
    if z_pos is not None:
        s = s - (z_pos / eb.eigenvalues[pos]) @ z_pos.T
    sqrt_lr = np.sqrt(lr)
    w = s / sqrt_lr[:, None] / sqrt_lr[None, :]
    ew = sym_eig(w)
    kstar = float(ew.eigenvalues[0])
    coords = ew.eigenvectors[:, 0] / sqrt_lr
    extremal = vr @ coords
    if z_pos is not None:
        extremal = extremal - vk @ (eb.eigenvectors[:, pos] @ (z_pos.T @ coords / eb.eigenvalues[pos]))
    return PencilResult(kstar, True, True, kernel_min, coupling_resid, extremal)
