"""Bounds, reductions, constructions, and exact desk-scale checks for
solution-free subsets of F_p^n under balanced systems of linear equations."""

from .bounds import (
    BoundReport,
    LambdaQuery,
    bound_small_p,
    c_tilde,
    count_theta,
    g_value,
    lambda_min,
    optimize_allocation,
    parallelogram_upper,
    star_inequality,
    upper_bound_strong,
    wshape_upper,
)
from .dominance import (
    Dominance,
    DominanceReport,
    LowerBoundReport,
    ReductionStep,
    ReductionTrace,
    StandardForm,
    dominance_of,
    dominant_reduce,
    dominant_subsystems,
    lower_bound_strong,
    lower_bound_weak,
    reduction_sequence,
    render_standard,
    standard_form,
)
from .eqsys import (
    FpSystem,
    ZEquation,
    ZSystem,
    is_balanced,
    lift_centered,
    parse_system,
    reduce_mod_p,
    render_system,
    subsystem,
)
from .errors import GuardExceeded, ParseError
from .lattice import (
    NormClassTable,
    SphereSet,
    best_sphere_set,
    embed_mod_p,
    norm_class_counts,
    pigeonhole_bound,
    smallest_valid_dimension,
    verify_construction,
)
from .oracle import (
    Matching,
    PointSet,
    SearchResult,
    build_colored_subcollection,
    classify_semishape_W,
    enumerate_semishapes,
    extendable_pairs,
    is_multicolored_free,
    is_strongly_free,
    is_weakly_free,
    iter_solutions,
    max_strongly_free,
    max_weakly_free,
    space_points,
)
from .structure import (
    SystemHypergraph,
    SystemParameters,
    build_hypergraph,
    hypergraph_report,
    is_irreducible,
    parameters,
)
from .systems import builtin, builtin_names

__version__ = "0.1.0"

__all__ = [
    "BoundReport", "LambdaQuery", "bound_small_p", "c_tilde", "count_theta",
    "g_value", "lambda_min", "optimize_allocation", "parallelogram_upper",
    "star_inequality", "upper_bound_strong", "wshape_upper",
    "Dominance", "DominanceReport", "LowerBoundReport", "ReductionStep",
    "ReductionTrace", "StandardForm", "dominance_of", "dominant_reduce",
    "dominant_subsystems", "lower_bound_strong", "lower_bound_weak",
    "reduction_sequence", "render_standard", "standard_form",
    "FpSystem", "ZEquation", "ZSystem", "is_balanced", "lift_centered",
    "parse_system", "reduce_mod_p", "render_system", "subsystem",
    "GuardExceeded", "ParseError",
    "NormClassTable", "SphereSet", "best_sphere_set", "embed_mod_p",
    "norm_class_counts", "pigeonhole_bound", "smallest_valid_dimension",
    "verify_construction",
    "Matching", "PointSet", "SearchResult", "build_colored_subcollection",
    "classify_semishape_W", "enumerate_semishapes", "extendable_pairs",
    "is_multicolored_free", "is_strongly_free", "is_weakly_free",
    "iter_solutions", "max_strongly_free", "max_weakly_free", "space_points",
    "SystemHypergraph", "SystemParameters", "build_hypergraph",
    "hypergraph_report", "is_irreducible", "parameters",
    "builtin", "builtin_names",
    "__version__",
]
