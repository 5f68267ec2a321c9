"""Per-vertex curvature constants, optimal CD constants, and verification.

At each vertex i the CD inequality with dimension m and constant K reads

    gamma2(f, f)(i) >= (1/m) (L f)(i)^2 + K * gamma(f, f)(i)   for all f.

``local_constant_C`` and ``theorem_bound`` give the guaranteed lower bound
``C(i) - (1 - alpha)``; ``optimal_K`` computes the exact largest admissible
K from the quadratic-form pencil; ``verify_graph`` runs the whole pipeline
and adds randomized falsification.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NotStronglyConnectedError
from .graph import DirectedGraph, is_strongly_connected
from .linalg import TOL, PencilResult, pencil_min_eig
from .operators import (
    OperatorBundle,
    QuadraticForms,
    assemble_forms,
    build_operators,
    cd_residual_batch,
)

__all__ = [
    "VertexCurvature",
    "Violation",
    "CurvatureReport",
    "local_constant_C",
    "theorem_bound",
    "optimal_K",
    "vertex_pencil",
    "check_CD",
    "verify_operators",
    "verify_graph",
]


@dataclass(frozen=True)
class VertexCurvature:
    """Curvature summary of one vertex.

    ``worst_f`` is the pencil's extremal direction, reported up to sign and
    scale; consumers should compare directions only.
    """

    index: int
    label: str
    phi: float
    constant: float
    k_theorem: float
    k_optimal: float
    cd_holds: bool
    worst_f: np.ndarray | None


@dataclass(frozen=True)
class Violation:
    """A test function whose CD residual fell below the falsification cut."""

    index: int
    label: str
    k: float
    residual: float
    f: np.ndarray


@dataclass(frozen=True)
class CurvatureReport:
    alpha: float
    m: float
    vertices: tuple[VertexCurvature, ...]
    violations: tuple[Violation, ...]
    samples: int
    seed: int
    k_override: float | None

    @property
    def min_k_theorem(self) -> float:
        return min(v.k_theorem for v in self.vertices)

    @property
    def min_k_optimal(self) -> float:
        return min(v.k_optimal for v in self.vertices)

    @property
    def all_cd_hold(self) -> bool:
        return all(v.cd_holds for v in self.vertices)

    @property
    def c_at_least_one(self) -> tuple[int, ...]:
        """Vertices where the local constant reaches 1 (informational)."""
        return tuple(v.index for v in self.vertices if v.constant >= 1.0)


def _validate_m(m: float) -> float:
    m = float(m)
    if math.isnan(m) or m < 1.0:
        raise ValueError(f"dimension parameter m must lie in [1, inf], got {m}")
    return m


def local_constant_C(bundle: OperatorBundle, i: int) -> float:
    """Minimum of w_ij/phi_j over out-neighbors and w_ki/phi_k over
    in-neighbors of vertex i; strictly positive on strongly connected
    graphs, and invariant under rescaling phi.
    """
    w = bundle.weights
    phi = bundle.phi
    g = bundle.graph
    ratios = [w[i, j] / phi[j] for j in g.out_adj[i]]
    ratios += [w[k, i] / phi[k] for k in g.in_adj[i]]
    if not ratios:
        raise ValueError(f"vertex {g.labels[i]!r} has no neighbors; constant undefined")
    return float(min(ratios))


def theorem_bound(c: float, alpha: float) -> float:
    """Guaranteed curvature lower bound C - (1 - alpha) at dimension 2."""
    return float(c - (1.0 - alpha))


def vertex_pencil(forms: QuadraticForms, i: int, m: float) -> PencilResult:
    """Pencil solve for the largest K with
    ``gamma2_form - (1/m) l l^T >= K * gamma_form`` at vertex i."""
    m = _validate_m(m)
    a = forms.gamma2_forms[i].copy()
    if not math.isinf(m):
        li = forms.delta_rows[i]
        a -= np.outer(li, li) / m
    return pencil_min_eig(a, forms.gamma_forms[i], TOL.kernel_rel)


def optimal_K(forms: QuadraticForms, i: int, m: float) -> float:
    """Exact optimal curvature constant at vertex i for dimension m.

    ``-inf`` when no finite K satisfies the inequality (impossible on
    strongly connected graphs), ``+inf`` in the degenerate case of a
    vanishing gamma form.
    """
    return vertex_pencil(forms, i, m).min_ratio


def check_CD(forms: QuadraticForms, i: int, m: float, k: float, f) -> float:
    """CD residual ``gamma2 - (1/m)(L f)^2 - K*gamma`` at vertex i.

    Evaluated from the operator definitions rather than the assembled
    matrices, so a zero residual at the pencil's extremal direction also
    cross-checks the form assembly. Nonnegative iff the inequality holds
    at (i, f); constant f gives 0 trivially.
    """
    m = _validate_m(m)
    f = np.asarray(f, dtype=float)
    return float(cd_residual_batch(forms.bundle, f[None, :], m, float(k))[0, i])


def verify_operators(bundle: OperatorBundle, forms: QuadraticForms, m: float = 2.0,
                     samples: int = 100, seed: int = 0,
                     k_override: float | None = None) -> CurvatureReport:
    """Per-vertex curvature report from prebuilt operators.

    ``cd_holds`` records ``k_optimal >= k_theorem - TOL.cd_slack`` (the
    guarantee applies at m = 2; larger m only widens the gap). The
    falsification pass draws ``samples`` mean-free random functions per
    vertex and flags residuals below ``-TOL.falsification`` at
    K = k_theorem, or at ``k_override`` when given; with an override the
    pencil's extremal directions are tried as deterministic witnesses too.
    """
    m = _validate_m(m)
    g = bundle.graph
    verts = []
    for i in range(g.n):
        c = local_constant_C(bundle, i)
        k_thm = theorem_bound(c, bundle.alpha)
        result = vertex_pencil(forms, i, m)
        k_opt = result.min_ratio
        verts.append(VertexCurvature(
            index=i, label=g.labels[i], phi=float(bundle.phi[i]), constant=c,
            k_theorem=k_thm, k_optimal=k_opt,
            cd_holds=bool(k_opt >= k_thm - TOL.cd_slack),
            worst_f=result.extremal))

    violations: list[Violation] = []
    if samples > 0:
        rng = np.random.default_rng(seed)
        for i in range(g.n):
            funcs = rng.uniform(-1.0, 1.0, size=(samples, g.n))
            funcs -= funcs.mean(axis=1, keepdims=True)
            k_i = verts[i].k_theorem if k_override is None else float(k_override)
            residuals = cd_residual_batch(bundle, funcs, m, k_i)[:, i]
            for s in np.nonzero(residuals < -TOL.falsification)[0]:
                violations.append(Violation(
                    index=i, label=g.labels[i], k=k_i,
                    residual=float(residuals[s]), f=funcs[s].copy()))
    if k_override is not None:
        for v in verts:
            if v.worst_f is not None and math.isfinite(v.k_optimal) \
                    and float(k_override) > v.k_optimal:
                residual = check_CD(forms, v.index, m, float(k_override), v.worst_f)
                if residual < -TOL.falsification:
                    violations.append(Violation(
                        index=v.index, label=v.label, k=float(k_override),
                        residual=residual, f=np.asarray(v.worst_f, dtype=float)))

    return CurvatureReport(alpha=bundle.alpha, m=m, vertices=tuple(verts),
                           violations=tuple(violations), samples=int(samples),
                           seed=int(seed), k_override=k_override)


def verify_graph(g: DirectedGraph, alpha: float, m: float = 2.0,
                 samples: int = 100, seed: int = 0,
                 k_override: float | None = None) -> CurvatureReport:
    """Full pipeline: connectivity check, operators, forms, report.

    Rejects graphs that are not strongly connected before any numerics.
    """
    if not is_strongly_connected(g):
        raise NotStronglyConnectedError(
            "graph is not strongly connected; the walk has no positive stationary vector")
    bundle = build_operators(g, alpha)
    forms = assemble_forms(bundle)
    return verify_operators(bundle, forms, m=m, samples=samples, seed=seed,
                            k_override=k_override)
