"""Curvature-dimension analysis for lazy random walks on directed graphs.

Builds the lazy transition matrix of a strongly connected digraph, solves
its positive stationary vector, assembles the symmetrized Laplacian and
the associated gamma calculus, and computes per-vertex curvature
constants: the guaranteed bound ``C - (1 - alpha)`` and the exact optimal
CD constant from a quadratic-form pencil.
"""

from .curvature import (
    CurvatureReport,
    VertexCurvature,
    Violation,
    check_CD,
    local_constant_C,
    optimal_K,
    theorem_bound,
    verify_graph,
    verify_operators,
    vertex_pencil,
)
from .errors import (
    GraphFormatError,
    NotStronglyConnectedError,
    NumericalError,
    PerronConvergenceError,
    SingularMatrixError,
)
from .estimator import CurvatureAnalysis
from .graph import (
    DirectedGraph,
    complete_bidirected_graph,
    cycle_graph,
    distance,
    is_strongly_connected,
    load_graph_text,
    parse_edge_list,
    parse_json_graph,
    random_strongly_connected_graph,
)
from .linalg import (
    TOL,
    PencilResult,
    SymmetricEigenResult,
    Tolerances,
    pencil_min_eig,
    solve_linear,
    sym_eig,
)
from .operators import (
    OperatorBundle,
    QuadraticForms,
    assemble_forms,
    build_operators,
    build_weights,
    cd_residual_batch,
    delta_gamma_closed_form,
    gamma,
    gamma2,
    gamma2_scalar,
    gamma_closed_form,
    gamma_delta_closed_form,
    gamma_scalar,
    laplacian_matrix,
    reconcile_closed_forms,
)
from .stochastic import (
    PerronVector,
    StochasticMatrix,
    build_probability_matrix,
    perron_vector,
    stationary_direct,
    stationary_power,
)

__version__ = "0.1.0"

__all__ = [
    "CurvatureAnalysis",
    "CurvatureReport",
    "DirectedGraph",
    "GraphFormatError",
    "NotStronglyConnectedError",
    "NumericalError",
    "OperatorBundle",
    "PencilResult",
    "PerronConvergenceError",
    "PerronVector",
    "QuadraticForms",
    "SingularMatrixError",
    "StochasticMatrix",
    "SymmetricEigenResult",
    "TOL",
    "Tolerances",
    "VertexCurvature",
    "Violation",
    "assemble_forms",
    "build_operators",
    "build_probability_matrix",
    "build_weights",
    "cd_residual_batch",
    "check_CD",
    "complete_bidirected_graph",
    "cycle_graph",
    "delta_gamma_closed_form",
    "distance",
    "gamma",
    "gamma2",
    "gamma2_scalar",
    "gamma_closed_form",
    "gamma_delta_closed_form",
    "gamma_scalar",
    "is_strongly_connected",
    "laplacian_matrix",
    "load_graph_text",
    "local_constant_C",
    "optimal_K",
    "parse_edge_list",
    "parse_json_graph",
    "pencil_min_eig",
    "perron_vector",
    "random_strongly_connected_graph",
    "reconcile_closed_forms",
    "solve_linear",
    "stationary_direct",
    "stationary_power",
    "sym_eig",
    "theorem_bound",
    "verify_graph",
    "verify_operators",
    "vertex_pencil",
]
