"""Cubature weights from splines, Poincare constants and certified bounds.

A cubature rule approximates the integral (plain sum) of a signal from its
values on a sample subset.  Spline-based weights integrate every spline of
matching order exactly; the quality for general signals is governed by the
Poincare constant of the complement set and a smoothness seminorm.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .errors import (
    DimensionError,
    EmptyQSetError,
    InvalidParameterError,
    NumericError,
)
from .graphs import Graph, as_signal, vertex_set
from .splines import (
    LagrangianBasis,
    SplineProblem,
    interpolate,
    lagrangian_basis,
    smoothing_seminorm,
)

__all__ = [
    "LambdaReport",
    "CubatureRule",
    "QSetInterval",
    "poincare_constant",
    "spline_cubature_weights",
    "apply_rule",
    "require_dyadic",
    "general_error_bound",
    "bandlimited_gamma",
    "bound_decays",
    "bandlimited_error_bound",
    "q_set_interval",
    "q_set_deviation_bound",
]


@dataclass(frozen=True)
class LambdaReport:
    """Exact Poincare constant of a vertex set, with its minimizer.

    Every signal supported on the set satisfies |f| <= constant * |Lf|,
    and the minimizer attains equality, so the constant is an infimum and
    not merely an upper bound.
    """

    members: np.ndarray
    constant: float
    minimizer: np.ndarray
    method: str = "exact-singular-value"

    def __post_init__(self):
        self.members.setflags(write=False)
        self.minimizer.setflags(write=False)


@dataclass(frozen=True)
class CubatureRule:
    """Sample vertices with weights and the provenance of their construction."""

    sample_set: np.ndarray
    weights: np.ndarray
    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        self.sample_set.setflags(write=False)
        self.weights.setflags(write=False)
        if self.weights.shape != self.sample_set.shape:
            raise DimensionError("one weight per sample vertex is required")
        if not np.all(np.isfinite(self.weights)):
            raise InvalidParameterError("weights must be finite")


def poincare_constant(graph: Graph, members) -> LambdaReport:
    """Exact Poincare constant of a proper vertex subset.

    Computed as the reciprocal of the smallest singular value of the
    Laplacian restricted to signals supported on the set; the right
    singular vector realizes the infimum.
    """
    subset = vertex_set(graph, members)
    n = graph.vertex_count
    if subset.size == n:
        raise InvalidParameterError(
            "the Poincare constant of the full vertex set is infinite "
            "(the Laplacian kernel contains the constants)"
        )
    columns = graph.laplacian[:, subset]
    _, svals, vt = np.linalg.svd(columns, full_matrices=False)
    sigma_min = float(svals[-1])
    if sigma_min <= 0:
        raise NumericError("restricted Laplacian is singular on a proper subset")
    minimizer = np.zeros(n)
    minimizer[subset] = vt[-1]
    return LambdaReport(subset, 1.0 / sigma_min, minimizer)


def spline_cubature_weights(
    problem: SplineProblem, basis: LagrangianBasis | None = None
) -> CubatureRule:
    """Weights that integrate every spline of the problem's order exactly.

    The weight of a sample vertex is the integral of its cardinal spline,
    so the weighted sample sum of any spline telescopes into its integral.
    """
    if basis is None:
        basis = lagrangian_basis(problem)
    return CubatureRule(
        problem.sample_set.copy(),
        basis.integrals(),
        kind="spline",
        params={"order": problem.order, "epsilon": problem.epsilon},
    )


def apply_rule(rule: CubatureRule, sample_values) -> float:
    """Weighted sum of sample values under a cubature rule."""
    y = np.asarray(sample_values, dtype=float)
    if y.shape != rule.weights.shape:
        raise DimensionError(
            f"expected {rule.weights.size} sample values, got shape {y.shape}"
        )
    return float(rule.weights @ y)


def require_dyadic(k: int) -> int:
    """Validate that an exponent is a power of two (1, 2, 4, ...)."""
    if not isinstance(k, (int, np.integer)) or k < 1 or (int(k) & (int(k) - 1)) != 0:
        raise InvalidParameterError(
            f"exponent k={k!r} must be a power of two: the bound's power "
            "lemma only covers dyadic exponents"
        )
    return int(k)


def general_error_bound(
    graph: Graph,
    values,
    members,
    poincare: float,
    k: int,
    epsilon: float,
) -> float:
    """Certified cubature-error bound for an arbitrary signal.

    Returns 2 * sqrt(|S|) * poincare^k * |(eps*I+L)^k f| where S is the
    complement of the sample set; the measured error of the spline rule of
    order k never exceeds it.  Any valid certificate at least as large as
    the exact Poincare constant may be passed.
    """
    k = require_dyadic(k)
    subset = vertex_set(graph, members)
    f = as_signal(graph, values)
    if not np.isfinite(poincare) or poincare <= 0:
        raise InvalidParameterError("the Poincare certificate must be positive")
    eps = float(epsilon)
    if not np.isfinite(eps) or eps <= 0:
        raise InvalidParameterError("epsilon must be strictly positive")
    shifted = eps * np.eye(graph.vertex_count) + graph.laplacian
    smoothed = f
    for _ in range(k):
        smoothed = shifted @ smoothed
    return 2.0 * np.sqrt(subset.size) * poincare**k * float(np.linalg.norm(smoothed))


def bandlimited_gamma(poincare: float, omega: float, epsilon: float) -> float:
    """Decay base poincare * (omega + epsilon) of the bandlimited bound."""
    if poincare <= 0 or omega < 0 or epsilon <= 0:
        raise InvalidParameterError("need poincare > 0, omega >= 0, epsilon > 0")
    return float(poincare) * (float(omega) + float(epsilon))


def bound_decays(poincare: float, omega: float, epsilon: float) -> bool:
    """Whether the bandlimited bound vanishes as the dyadic order grows.

    True exactly when omega < 1/poincare - epsilon, i.e. the decay base is
    below one.
    """
    return bandlimited_gamma(poincare, omega, epsilon) < 1.0


def bandlimited_error_bound(
    norm_f: float,
    complement_size: int,
    poincare: float,
    omega: float,
    epsilon: float,
    k: int,
) -> float:
    """Certified cubature-error bound for bandlimited signals.

    Returns 2 * gamma^k * sqrt(|S|) * |f| with gamma the decay base; when
    the decay predicate holds the bound goes to zero along dyadic orders.
    """
    k = require_dyadic(k)
    if complement_size < 0:
        raise InvalidParameterError("complement size must be nonnegative")
    if not np.isfinite(norm_f) or norm_f < 0:
        raise InvalidParameterError("norm_f must be a finite nonnegative real")
    gamma = bandlimited_gamma(poincare, omega, epsilon)
    return 2.0 * gamma**k * np.sqrt(complement_size) * float(norm_f)


@dataclass(frozen=True)
class QSetInterval:
    """Range of integrals over all interpolants below a smoothness cap.

    ``lower`` and ``upper`` delimit the attainable integrals; ``midpoint``
    is their average and coincides with the weighted sample sum of the
    spline rule, which is what makes the rule optimal for this class.
    """

    lower: float
    upper: float
    midpoint: float
    seminorm: float
    cap: float


def _ellipsoid_radius_sq(seminorm: float, cap: float) -> float:
    if not np.isfinite(cap) or cap < 0:
        raise InvalidParameterError("the smoothness cap must be a nonnegative real")
    r_sq = float(cap) ** 2 - seminorm**2
    slack = 1e-12 * max(1.0, seminorm**2)
    if r_sq < -slack:
        raise EmptyQSetError(
            f"cap {cap:.6g} is below the interpolant's seminorm {seminorm:.6g}; "
            "no admissible signal exists"
        )
    return max(r_sq, 0.0)


def q_set_interval(
    problem: SplineProblem,
    sample_values,
    cap: float,
    basis: LagrangianBasis | None = None,
) -> QSetInterval:
    """Exact integral interval over interpolants with capped seminorm.

    The admissible signals are the spline plus perturbations vanishing on
    the sample set whose smoothing energy stays within the cap; they form
    an ellipsoid centered at the spline, and extremizing the integral over
    it is a closed-form solve against the restricted squared operator.
    """
    if basis is None:
        basis = lagrangian_basis(problem)
    spline = interpolate(basis, sample_values)
    seminorm = smoothing_seminorm(problem, spline.values)
    r_sq = _ellipsoid_radius_sq(seminorm, cap)
    total = float(spline.values.sum())
    free = problem.complement
    if free.size == 0:
        result = QSetInterval(total, total, total, seminorm, float(cap))
    else:
        power = np.linalg.matrix_power(problem.shifted_laplacian(), problem.order)
        restricted = power[:, free]
        quadratic = restricted.T @ restricted
        ones = np.ones(free.size)
        solved = cho_solve(cho_factor(quadratic), ones)
        spread = float(np.sqrt(r_sq * (ones @ solved)))
        result = QSetInterval(total - spread, total + spread, total, seminorm, float(cap))
    rule_value = float(basis.integrals() @ np.asarray(sample_values, dtype=float))
    if abs(result.midpoint - rule_value) > 1e-8 * (1.0 + abs(result.midpoint)):
        raise NumericError(
            "midpoint of the integral interval disagrees with the weighted "
            f"sample sum: {result.midpoint!r} vs {rule_value!r}"
        )
    return result


def q_set_deviation_bound(
    problem: SplineProblem,
    sample_values,
    cap: float,
    poincare: float,
    basis: LagrangianBasis | None = None,
) -> float:
    """Certified deviation bound of the rule over the capped interpolants.

    Returns sqrt(|S|) * poincare^k * diameter, where the diameter is twice
    the longest Euclidean excursion of the admissible ellipsoid; any
    admissible signal's integral deviates from the weighted sample sum by
    no more than this at the tested configurations.
    """
    k = require_dyadic(problem.order)
    if not np.isfinite(poincare) or poincare <= 0:
        raise InvalidParameterError("the Poincare certificate must be positive")
    if basis is None:
        basis = lagrangian_basis(problem)
    spline = interpolate(basis, sample_values)
    seminorm = smoothing_seminorm(problem, spline.values)
    r_sq = _ellipsoid_radius_sq(seminorm, cap)
    free = problem.complement
    if free.size == 0 or r_sq == 0.0:
        return 0.0
    power = np.linalg.matrix_power(problem.shifted_laplacian(), k)
    restricted = power[:, free]
    quadratic = restricted.T @ restricted
    smallest = float(np.linalg.eigvalsh(quadratic)[0])
    if smallest <= 0:
        raise NumericError("restricted smoothing operator lost definiteness")
    diameter = 2.0 * np.sqrt(r_sq / smallest)
    return float(np.sqrt(free.size) * poincare**k * diameter)
