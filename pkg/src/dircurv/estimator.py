"""Scikit-learn style front end for the curvature analysis pipeline."""

from __future__ import annotations

import math
import numbers

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .curvature import verify_operators
from .errors import NotStronglyConnectedError
from .graph import DirectedGraph, is_strongly_connected
from .linalg import TOL
from .operators import assemble_forms, build_operators, cd_residual_batch

__all__ = ["CurvatureAnalysis"]


class CurvatureAnalysis(BaseEstimator):
    """Curvature-dimension analysis of a lazy walk on a directed graph.

    ``fit`` ingests a graph (a :class:`DirectedGraph` or a square 0/1
    adjacency matrix), solves the stationary vector, builds the gamma
    calculus, and computes per-vertex curvature constants. ``transform``
    then maps test functions on the vertices to their per-vertex CD
    residuals at the fitted bounds, and ``predict`` says which functions
    satisfy the inequality everywhere.

    Parameters
    ----------
    alpha : float, default=0.5
        Laziness of the walk, in [0, 1).
    m : float, default=2.0
        Dimension parameter of the CD inequality, in [1, inf]
        (``float("inf")`` is accepted).
    samples : int, default=0
        Random falsification functions drawn per vertex during fit.
    seed : int, default=0
        Seed for the falsification sampler.

    Attributes
    ----------
    n_vertices_ : int
    labels_ : tuple of str
    phi_ : ndarray of shape (n_vertices,)
        Stationary vector of the walk, normalized to sum 1.
    constant_ : ndarray of shape (n_vertices,)
        Per-vertex neighborhood constant C.
    k_theorem_ : ndarray of shape (n_vertices,)
        Guaranteed curvature lower bound C - (1 - alpha).
    k_optimal_ : ndarray of shape (n_vertices,)
        Exact optimal curvature constant at the configured m.
    cd_holds_ : ndarray of bool
        Whether k_optimal_ clears k_theorem_ (within tolerance) per vertex.
    report_ : CurvatureReport
        Full report including violations and extremal directions.

    Examples
    --------
    >>> from dircurv import CurvatureAnalysis, cycle_graph
    >>> est = CurvatureAnalysis(alpha=0.5).fit(cycle_graph(3))
    >>> est.k_theorem_.round(12)
    array([-0.5, -0.5, -0.5])
    """

    def __init__(self, alpha: float = 0.5, m: float = 2.0,
                 samples: int = 0, seed: int = 0):
        self.alpha = alpha
        self.m = m
        self.samples = samples
        self.seed = seed

    def _validate_params_(self) -> None:
        if not isinstance(self.alpha, numbers.Real) or not 0.0 <= float(self.alpha) < 1.0:
            raise ValueError(f"alpha must lie in [0, 1), got {self.alpha!r}")
        if not isinstance(self.m, numbers.Real) or math.isnan(float(self.m)) \
                or float(self.m) < 1.0:
            raise ValueError(f"m must lie in [1, inf], got {self.m!r}")
        if not isinstance(self.samples, numbers.Integral) or self.samples < 0:
            raise ValueError(f"samples must be a nonnegative integer, got {self.samples!r}")

    def _as_graph(self, X) -> DirectedGraph:
        if isinstance(X, DirectedGraph):
            return X
        a = check_array(X, dtype=np.float64, ensure_2d=True)
        if a.shape[0] != a.shape[1]:
            raise ValueError(f"adjacency matrix must be square, got {a.shape}")
        if np.any(np.diag(a) != 0.0):
            raise ValueError("adjacency diagonal must be zero; laziness is the "
                             "alpha parameter, not a self-loop")
        edges = [(int(u), int(v)) for u, v in np.argwhere(a != 0.0)]
        return DirectedGraph.from_edges(a.shape[0], edges)

    def fit(self, X, y=None):
        """Run the full analysis on a graph.

        X is a DirectedGraph or a square adjacency matrix whose nonzero
        off-diagonal entries are edges. y is ignored (sklearn convention).
        """
        self._validate_params_()
        g = self._as_graph(X)
        if not is_strongly_connected(g):
            raise NotStronglyConnectedError("graph is not strongly connected")
        bundle = build_operators(g, float(self.alpha))
        forms = assemble_forms(bundle)
        report = verify_operators(bundle, forms, m=float(self.m),
                                  samples=int(self.samples), seed=int(self.seed))
        self.graph_ = g
        self.bundle_ = bundle
        self.forms_ = forms
        self.report_ = report
        self.n_vertices_ = g.n
        self.labels_ = g.labels
        self.phi_ = bundle.phi.copy()
        self.constant_ = np.array([v.constant for v in report.vertices])
        self.k_theorem_ = np.array([v.k_theorem for v in report.vertices])
        self.k_optimal_ = np.array([v.k_optimal for v in report.vertices])
        self.cd_holds_ = np.array([v.cd_holds for v in report.vertices], dtype=bool)
        return self

    def transform(self, F) -> np.ndarray:
        """Per-vertex CD residuals of test functions at the fitted bounds.

        F has shape (n_functions, n_vertices_), one function per row; the
        result has the same shape, with residuals evaluated at
        K = k_theorem_ per vertex and the configured m. Nonnegative entries
        certify the inequality for that function and vertex.
        """
        check_is_fitted(self, "report_")
        F = check_array(F, dtype=np.float64, ensure_2d=True)
        if F.shape[1] != self.n_vertices_:
            raise ValueError(
                f"functions have {F.shape[1]} entries, graph has {self.n_vertices_} vertices")
        return cd_residual_batch(self.bundle_, F, float(self.m), self.k_theorem_)

    def predict(self, F) -> np.ndarray:
        """Boolean per function: residual within tolerance at every vertex."""
        return np.all(self.transform(F) >= -TOL.falsification, axis=1)
