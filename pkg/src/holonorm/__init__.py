"""Discrete Hoelder, parabolic-Hoelder and Lebesgue norms of grid-sampled
functions, with empirical checks of the interpolation inequalities between
them."""

__version__ = "0.1.0"

from .grid import (
    CsvFormatError,
    Domain,
    GridAlignmentError,
    GridFunction,
    GridSizeError,
    MultiIndex,
    ParabolicShift,
    coarsen,
    grid_from_csv,
    kth_difference,
    make_grid_function,
    parabolic_dilate,
    shift_eval,
)
from .expr import (
    Expr,
    ExprDomainError,
    ExprNameError,
    ExprSyntaxError,
    as_grid_callable,
    evaluate,
    parse,
    unparse,
)
from .norms import (
    DiffSeminormSpec,
    HoelderIndex,
    NormReport,
    SamplingInfo,
    StencilError,
    derivative_field,
    diff_quotient_seminorm,
    elliptic_norm,
    holder_norm,
    holder_seminorm_space,
    holder_seminorm_time,
    lp_norm,
    parabolic_norm,
    sup_norm,
    sup_t_lp_norm,
    witness_value,
)
from .interp import (
    CheckReport,
    InterpSpec,
    TwoTermBound,
    Variant,
    balancing_epsilon,
    check,
    check_holder_interp,
    exponent,
    pointwise_reconstruction_bound,
    time_seminorm_bound,
    two_term_value,
)
from .search import Family, SearchResult, random_search, refine_search

__all__ = [
    "__version__",
    "CsvFormatError",
    "Domain",
    "GridAlignmentError",
    "GridFunction",
    "GridSizeError",
    "MultiIndex",
    "ParabolicShift",
    "coarsen",
    "grid_from_csv",
    "kth_difference",
    "make_grid_function",
    "parabolic_dilate",
    "shift_eval",
    "Expr",
    "ExprDomainError",
    "ExprNameError",
    "ExprSyntaxError",
    "as_grid_callable",
    "evaluate",
    "parse",
    "unparse",
    "DiffSeminormSpec",
    "HoelderIndex",
    "NormReport",
    "SamplingInfo",
    "StencilError",
    "derivative_field",
    "diff_quotient_seminorm",
    "elliptic_norm",
    "holder_norm",
    "holder_seminorm_space",
    "holder_seminorm_time",
    "lp_norm",
    "parabolic_norm",
    "sup_norm",
    "sup_t_lp_norm",
    "witness_value",
    "CheckReport",
    "InterpSpec",
    "TwoTermBound",
    "Variant",
    "balancing_epsilon",
    "check",
    "check_holder_interp",
    "exponent",
    "pointwise_reconstruction_bound",
    "time_seminorm_bound",
    "two_term_value",
    "Family",
    "SearchResult",
    "random_search",
    "refine_search",
]
