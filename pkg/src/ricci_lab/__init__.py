from . import types
from ._types import NOT_GIVEN, NotGiven
from ._client import Client, RicciLab
from ._version import __title__, __version__
from .classify import (
    projection,
    g2_quintic,
    sweep_plane,
    region_label,
    wallach_quartic,
    degenerate_locus,
    g2_degenerate_x2,
    ricci_image_sample,
    wallach_projection,
    wallach_from_plane,
)
from .dynamics import flow, root_inventory, newton_critical, diagnose_divergence
from .curvature import (
    norm_g,
    inner_g,
    trace_T,
    spectrum_at,
    CurvatureKernel,
    jacobian_dric,
    scalar_curvature,
    grad_constrained,
    is_rank_deficient,
    ricci_coefficients,
    hessian_constrained,
    ricci_singular_values,
    directional_derivative,
)
from .invariants import (
    beta,
    alpha,
    a_norm,
    f4_beta4,
    f4_alpha24,
    is_f4_flag,
    level_report,
    usable_witness,
    variation_point,
    variation_slope,
    wallach_levels,
    scal_submersion,
    optimal_variation,
    canonical_variation,
    scal_along_variation,
    is_generalized_wallach,
)
from ._exceptions import (
    NoResultError,
    RicciLabError,
    HypothesisError,
    InfeasibleError,
    InvalidGridError,
    NotCriticalError,
    InvalidPointError,
    ContinuationError,
    NotSubalgebraError,
    UnknownSpaceError,
    SpaceValidationError,
    DivergenceAnomalyError,
    ConstraintViolationError,
)
from .space_model import (
    center,
    x_to_y,
    y_to_x,
    catalog,
    normalize,
    load_space,
    base_blocks,
    make_stratum,
    same_structure,
    enumerate_strata,
    restrict_to_base,
    solve_constraint,
    restrict_to_fiber,
    subalgebra_strata,
    generalized_wallach,
)
from .mountainpass import relax, resample, extract_saddle, lowest_stratum, build_path_flag, build_path_wallach

__all__ = [
    "types",
    "__version__",
    "__title__",
    "NotGiven",
    "NOT_GIVEN",
    "RicciLabError",
    "SpaceValidationError",
    "UnknownSpaceError",
    "InvalidPointError",
    "InfeasibleError",
    "ConstraintViolationError",
    "NotSubalgebraError",
    "NotCriticalError",
    "HypothesisError",
    "ContinuationError",
    "InvalidGridError",
    "NoResultError",
    "DivergenceAnomalyError",
    "Client",
    "RicciLab",
    # space model
    "load_space",
    "catalog",
    "generalized_wallach",
    "enumerate_strata",
    "subalgebra_strata",
    "make_stratum",
    "restrict_to_fiber",
    "restrict_to_base",
    "base_blocks",
    "x_to_y",
    "y_to_x",
    "solve_constraint",
    "normalize",
    "center",
    "same_structure",
    # curvature
    "CurvatureKernel",
    "scalar_curvature",
    "ricci_coefficients",
    "trace_T",
    "inner_g",
    "norm_g",
    "grad_constrained",
    "directional_derivative",
    "jacobian_dric",
    "ricci_singular_values",
    "is_rank_deficient",
    "hessian_constrained",
    "spectrum_at",
    # invariants
    "alpha",
    "beta",
    "level_report",
    "canonical_variation",
    "optimal_variation",
    "variation_point",
    "scal_along_variation",
    "variation_slope",
    "usable_witness",
    "a_norm",
    "scal_submersion",
    "wallach_levels",
    "is_generalized_wallach",
    "is_f4_flag",
    "f4_alpha24",
    "f4_beta4",
    # dynamics
    "flow",
    "diagnose_divergence",
    "newton_critical",
    "root_inventory",
    # mountain pass
    "build_path_wallach",
    "build_path_flag",
    "lowest_stratum",
    "relax",
    "extract_saddle",
    "resample",
    # classify
    "region_label",
    "sweep_plane",
    "ricci_image_sample",
    "degenerate_locus",
    "projection",
    "wallach_projection",
    "wallach_from_plane",
    "wallach_quartic",
    "g2_quintic",
    "g2_degenerate_x2",
]

# Update the __module__ attribute for exported symbols so that
# error messages point to this module instead of the module
# it was originally defined in, e.g.
# ricci_lab._exceptions.HypothesisError -> ricci_lab.HypothesisError
__locals = locals()
for __name in __all__:
    if not __name.startswith("__"):
        try:
            setattr(__locals[__name], "__module__", "ricci_lab")
        except (TypeError, AttributeError):
            # Some exported symbols are modules or constants which we can't set attributes for.
            pass
