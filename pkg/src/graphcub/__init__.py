"""Cubature on finite combinatorial graphs.

Exact and certified-approximate integration of vertex signals from sample
subsets, built on variational splines, Poincare constants of vertex sets,
and frames of bandlimited spaces.
"""

from .errors import (
    BandwidthTooLargeError,
    ClosureSaturatedError,
    ConditioningError,
    CoverageError,
    DimensionError,
    EmptyQSetError,
    GraphCubError,
    GraphFormatError,
    InvalidParameterError,
    NotUniquenessSetError,
    NumericError,
)
from .graphs import (
    Graph,
    as_signal,
    build_cycle,
    build_grid,
    build_path,
    edge_list_text,
    from_edge_list,
    inner_product,
    integrate,
    norm,
    read_edge_list,
    vertex_set,
)
from .spectral import (
    BAND_TOL,
    BandlimitedSpace,
    EigenDecomposition,
    bandlimited_space,
    bernstein_margin,
    eigendecompose,
    random_bandlimited,
)
from .splines import (
    COND_LIMIT,
    LagrangianBasis,
    Spline,
    SplineProblem,
    fundamental_solution,
    interpolate,
    interpolate_signal,
    lagrangian_basis,
    lagrangian_basis_from_fundamental,
    smoothing_seminorm,
    variational_residual,
)
from .cubature import (
    CubatureRule,
    LambdaReport,
    QSetInterval,
    apply_rule,
    bandlimited_error_bound,
    bandlimited_gamma,
    bound_decays,
    general_error_bound,
    poincare_constant,
    q_set_deviation_bound,
    q_set_interval,
    require_dyadic,
    spline_cubature_weights,
)
from .frames import (
    FrameBounds,
    FrameIteration,
    FrameSystem,
    convergence_factor,
    dual_frame_vectors,
    dual_frame_weights,
    empirical_frame_bounds,
    frame_cubature,
    frame_iterate,
    frame_system,
    pp_bounds,
)
from .experiments import Check, ExperimentReport, run_experiment

__version__ = "0.1.0"
