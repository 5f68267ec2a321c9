"""Weight matrix, symmetrized directed Laplacian, and the gamma calculus.

The scalar operator definitions are the single source of truth:

    gamma(f, g)  = (1/2) { L(f g) - f L(g) - g L(f) }
    gamma2(f, g) = (1/2) { L(gamma(f, g)) - gamma(f, L g) - gamma(L f, g) }

where L is the Laplacian acting on vertex functions. The expanded
neighborhood formulas in this module are independent cross-checks of
those definitions, and the per-vertex quadratic forms are their exact
polarizations, assembled in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import DirectedGraph
from .stochastic import build_probability_matrix, perron_vector

__all__ = [
    "OperatorBundle",
    "QuadraticForms",
    "build_weights",
    "laplacian_matrix",
    "build_operators",
    "gamma",
    "gamma_scalar",
    "gamma2",
    "gamma2_scalar",
    "gamma_closed_form",
    "delta_gamma_closed_form",
    "gamma_delta_closed_form",
    "reconcile_closed_forms",
    "assemble_forms",
    "cd_residual_batch",
]


@dataclass(frozen=True)
class OperatorBundle:
    """Weights, Laplacian and the stationary vector they were built from.

    ``weights[i, j] = phi[i] * M[i, j]`` including the lazy diagonal
    ``alpha * phi[i]``. The Laplacian has zero row sums and ``diag(phi) @
    laplacian`` is symmetric. All derived quantities are invariant under
    positive rescaling of phi.
    """

    graph: DirectedGraph
    alpha: float
    phi: np.ndarray
    weights: np.ndarray
    laplacian: np.ndarray

    @property
    def n(self) -> int:
        return self.graph.n


@dataclass(frozen=True)
class QuadraticForms:
    """Per-vertex quadratic forms of the gamma calculus.

    For every vertex i and all functions f:

    - ``f @ gamma_forms[i] @ f  == gamma(f, f)`` at i (PSD, constants in kernel)
    - ``f @ gamma2_forms[i] @ f == gamma2(f, f)`` at i (symmetric)
    - ``delta_rows[i] @ f       == (laplacian @ f)[i]``
    """

    bundle: OperatorBundle
    gamma_forms: np.ndarray
    gamma2_forms: np.ndarray
    delta_rows: np.ndarray


def build_weights(g: DirectedGraph, alpha: float, phi) -> np.ndarray:
    """Edge weights ``w[i, j] = phi[i] * M[i, j]``, lazy diagonal included."""
    phi = np.asarray(getattr(phi, "phi", phi), dtype=float)
    if phi.shape != (g.n,):
        raise ValueError(f"phi has shape {phi.shape}, expected ({g.n},)")
    m = build_probability_matrix(g, alpha).matrix
    return phi[:, None] * m


def laplacian_matrix(weights: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Symmetrized directed Laplacian as a matrix acting on vertex functions.

    Off-diagonal entries are ``(w[i, j] + w[j, i]) / (2 phi[i])`` and the
    diagonal makes each row sum to zero, so

        (L f)(i) = 1/(2 phi_i) [ sum_out w_ij (f_j - f_i)
                                 + sum_in  w_ki (f_k - f_i) ].
    """
    phi = np.asarray(getattr(phi, "phi", phi), dtype=float)
    sym = 0.5 * (weights + weights.T)
    np.fill_diagonal(sym, 0.0)
    lap = sym / phi[:, None]
    np.fill_diagonal(lap, -lap.sum(axis=1))
    return lap


def build_operators(g: DirectedGraph, alpha: float, phi=None) -> OperatorBundle:
    """Assemble the full operator bundle for a graph and laziness alpha.

    When phi is omitted it is solved from the transition matrix; passing an
    explicit positive vector (any scaling) supports the scale-invariance
    checks and callers that already hold a stationary vector.
    """
    if phi is None:
        phi = perron_vector(build_probability_matrix(g, alpha)).phi
    else:
        phi = np.asarray(getattr(phi, "phi", phi), dtype=float)
        if phi.shape != (g.n,):
            raise ValueError(f"phi has shape {phi.shape}, expected ({g.n},)")
        if float(phi.min()) <= 0.0:
            raise ValueError("phi must be strictly positive")
    w = build_weights(g, alpha, phi)
    return OperatorBundle(graph=g, alpha=float(alpha), phi=phi,
                          weights=w, laplacian=laplacian_matrix(w, phi))


def gamma(bundle: OperatorBundle, f, g=None) -> np.ndarray:
    """gamma(f, g) at every vertex, straight from the definition."""
    f = np.asarray(f, dtype=float)
    g = f if g is None else np.asarray(g, dtype=float)
    lap = bundle.laplacian
    return 0.5 * (lap @ (f * g) - f * (lap @ g) - g * (lap @ f))


def gamma_scalar(bundle: OperatorBundle, f, g, i: int) -> float:
    """Definitional gamma(f, g) at vertex i; the authoritative evaluator."""
    return float(gamma(bundle, f, g)[i])


def gamma2(bundle: OperatorBundle, f, g=None) -> np.ndarray:
    """Iterated form gamma2(f, g) at every vertex, from the definition."""
    f = np.asarray(f, dtype=float)
    g = f if g is None else np.asarray(g, dtype=float)
    lap = bundle.laplacian
    return 0.5 * (lap @ gamma(bundle, f, g)
                  - gamma(bundle, f, lap @ g)
                  - gamma(bundle, lap @ f, g))


def gamma2_scalar(bundle: OperatorBundle, f, i: int) -> float:
    """Definitional gamma2(f, f) at vertex i."""
    return float(gamma2(bundle, f)[i])


def gamma_closed_form(bundle: OperatorBundle, f, i: int) -> float:
    """Neighborhood-sum evaluation of gamma(f, f) at vertex i:

        1/(4 phi_i) [ sum_out w_ij (f_j - f_i)^2 + sum_in w_ki (f_k - f_i)^2 ]

    Independent of the Laplacian-product route; agrees with gamma_scalar to
    ``TOL.gamma_oracle`` and is asserted as an oracle in the tests.
    """
    f = np.asarray(f, dtype=float)
    w = bundle.weights
    g = bundle.graph
    acc = 0.0
    for j in g.out_adj[i]:
        acc += w[i, j] * (f[j] - f[i]) ** 2
    for k in g.in_adj[i]:
        acc += w[k, i] * (f[k] - f[i]) ** 2
    return float(acc / (4.0 * bundle.phi[i]))


def _w_out(bundle: OperatorBundle, f, j: int, f_i: float) -> float:
    # sum over the closed out-neighborhood of j (j itself included)
    w = bundle.weights
    base = (f[j] - f_i) ** 2
    acc = w[j, j] * (0.0 - base)
    for a in bundle.graph.out_adj[j]:
        acc += w[j, a] * ((f[a] - f[j]) ** 2 - base)
    return acc


def _w_in(bundle: OperatorBundle, f, j: int, f_i: float) -> float:
    w = bundle.weights
    base = (f[j] - f_i) ** 2
    acc = w[j, j] * (0.0 - base)
    for b in bundle.graph.in_adj[j]:
        acc += w[b, j] * ((f[b] - f[j]) ** 2 - base)
    return acc


def delta_gamma_closed_form(bundle: OperatorBundle, f, i: int) -> float:
    """Expanded neighborhood formula for L(gamma(f, f)) at vertex i.

    Sums ``w/phi``-weighted in/out square defects over the closed in- and
    out-neighborhoods of i, divided by ``8 phi_i``. Cross-check only: it is
    compared against the definitional route in reconciliation reports,
    never used by the pipeline and never asserted equal.
    """
    f = np.asarray(f, dtype=float)
    w = bundle.weights
    phi = bundle.phi
    g = bundle.graph
    f_i = f[i]
    total = 0.0
    for j in (i, *g.out_adj[i]):
        total += w[i, j] / phi[j] * (_w_in(bundle, f, j, f_i) + _w_out(bundle, f, j, f_i))
    for k in (i, *g.in_adj[i]):
        total += w[k, i] / phi[k] * (_w_in(bundle, f, k, f_i) + _w_out(bundle, f, k, f_i))
    return float(total / (8.0 * phi[i]))


def gamma_delta_closed_form(bundle: OperatorBundle, f, i: int) -> float:
    """Expanded formula for ``2 * gamma(L f, f)`` at vertex i.

    Evaluates ``(L f)(i)^2 + 1/(2 phi_i) sum w * (L f)(j) (f_j - f_i)`` over
    out- and in-neighbors. Cross-check only: this variant disagrees with
    the definitional route by exactly ``2 (L f)(i)^2`` (the square term
    enters with the wrong sign), which the reconciliation report makes
    visible; nothing asserts equality.
    """
    f = np.asarray(f, dtype=float)
    w = bundle.weights
    g = bundle.graph
    lf = bundle.laplacian @ f
    acc = 0.0
    for j in g.out_adj[i]:
        acc += w[i, j] * lf[j] * (f[j] - f[i])
    for k in g.in_adj[i]:
        acc += w[k, i] * lf[k] * (f[k] - f[i])
    return float(lf[i] ** 2 + acc / (2.0 * bundle.phi[i]))


def reconcile_closed_forms(bundle: OperatorBundle, rng: np.random.Generator,
                           samples: int = 50) -> dict[str, float]:
    """Max absolute deviation of each expanded formula from its definitional
    value over random test functions. Returned for reporting; the caller
    decides what, if anything, to assert.
    """
    n = bundle.n
    dev = {"gamma": 0.0, "laplacian_of_gamma": 0.0, "twice_gamma_of_laplacian": 0.0}
    for _ in range(samples):
        f = rng.uniform(-1.0, 1.0, n)
        gv = gamma(bundle, f)
        lg = bundle.laplacian @ gv
        lf = bundle.laplacian @ f
        for i in range(n):
            dev["gamma"] = max(
                dev["gamma"], abs(gamma_closed_form(bundle, f, i) - gv[i]))
            dev["laplacian_of_gamma"] = max(
                dev["laplacian_of_gamma"],
                abs(delta_gamma_closed_form(bundle, f, i) - lg[i]))
            dev["twice_gamma_of_laplacian"] = max(
                dev["twice_gamma_of_laplacian"],
                abs(gamma_delta_closed_form(bundle, f, i)
                    - 2.0 * gamma_scalar(bundle, lf, f, i)))
    return dev


def assemble_forms(bundle: OperatorBundle) -> QuadraticForms:
    """Per-vertex matrices of the gamma and gamma2 forms.

    Exact polarization of the definitional evaluators, written in closed
    form: with L the Laplacian and e_i the basis vector at i,

        G_i = (1/2) ( diag(L_i.) - e_i L_i. - L_i.^T e_i^T )
        H_i = (1/2) ( sum_j L_ij G_j - L^T G_i - G_i L ),

    then symmetrized exactly. Memory is n matrices of size n^2, so this is
    meant for small and moderate n.
    """
    lap = bundle.laplacian
    n = bundle.n
    gmats = np.zeros((n, n, n))
    for i in range(n):
        row = lap[i]
        gi = 0.5 * np.diag(row)
        gi[i, :] -= 0.5 * row
        gi[:, i] -= 0.5 * row
        gmats[i] = gi
    hmats = 0.5 * (np.einsum("ij,jab->iab", lap, gmats)
                   - np.matmul(lap.T, gmats)
                   - np.matmul(gmats, lap))
    hmats = 0.5 * (hmats + np.transpose(hmats, (0, 2, 1)))
    return QuadraticForms(bundle=bundle, gamma_forms=gmats,
                          gamma2_forms=hmats, delta_rows=lap.copy())


def cd_residual_batch(bundle: OperatorBundle, funcs, m: float, k) -> np.ndarray:
    """CD residuals ``gamma2 - (1/m)(L f)^2 - K * gamma`` for rows of funcs.

    Parameters
    ----------
    funcs : (s, n) array_like
        One test function per row.
    m : float
        Dimension parameter in [1, inf]; ``math.inf`` drops the (L f)^2 term.
    k : float or (n,) array_like
        Curvature constant, scalar or per vertex.

    Returns
    -------
    (s, n) ndarray of residuals, one column per vertex. Everything is
    evaluated from the operator definitions, so this route is independent
    of the assembled quadratic forms.
    """
    funcs = np.atleast_2d(np.asarray(funcs, dtype=float))
    lap_t = bundle.laplacian.T
    lf = funcs @ lap_t
    g1 = 0.5 * ((funcs * funcs) @ lap_t - 2.0 * funcs * lf)
    g_lf = 0.5 * ((funcs * lf) @ lap_t - funcs * (lf @ lap_t) - lf * lf)
    g2 = 0.5 * (g1 @ lap_t - 2.0 * g_lf)
    m_inv = 0.0 if math.isinf(m) else 1.0 / m
    return g2 - m_inv * lf * lf - np.asarray(k, dtype=float) * g1
