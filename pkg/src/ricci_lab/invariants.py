"""Critical levels at infinity and canonical variations.

For a subalgebra stratum J with fiber K/H and base G/K,

    alpha_J = sup S(h) / tr_h(T|K/H)   over fiber metrics h,
    beta_J  = sup S(h) / tr_h(T|G/K)   over base metrics h constant on the base blocks.

Both ratios are scale free, so they are maximized over log coordinates with the last
coordinate fixed.
"""

from __future__ import annotations

import math
import logging
import functools
from typing import List, Tuple, Optional, Sequence

import numpy as np
from scipy import optimize
from scipy.stats import qmc

from ._types import FloatArray
from .types import (
    Stratum,
    Candidate,
    SpaceSpec,
    LevelValue,
    LevelReport,
    MetricPoint,
    CanonicalVariation,
)
from .curvature import CurvatureKernel
from ._constants import (
    LOG_BOX,
    SUP_TOL,
    START_SPAN,
    SUP_STARTS,
    WITNESS_FLOOR,
    T_MAX_FRACTION,
    BOUNDARY_MATCH_TOL,
)
from ._exceptions import InvalidPointError, SpaceValidationError
from .space_model import (
    IndexSet,
    catalog,
    make_stratum,
    same_structure,
    base_blocks,
    restrict_to_base,
    subalgebra_strata,
    restrict_to_fiber,
    _require_subalgebra,
)

__all__ = [
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
]

log: logging.Logger = logging.getLogger(__name__)


def _definite(space: SpaceSpec, T: Candidate) -> FloatArray:
    values = T.array
    if values.shape != (space.r,):
        raise InvalidPointError(f"candidate has {values.shape[0]} components, space {space.name} has {space.r} modules")
    if not T.definite:
        raise InvalidPointError(f"candidate T={T.T} is not positive definite")
    return values


class _RatioProblem:
    """S(y) / <w, y> over metrics constant on `blocks`, in log coordinates with the last block fixed at 0."""

    def __init__(self, space: SpaceSpec, weights: FloatArray, blocks: Sequence[Sequence[int]]) -> None:
        self.kernel = CurvatureKernel(space)
        self.weights = weights
        self.expand = np.zeros((len(blocks), space.r))
        for n, block in enumerate(blocks):
            self.expand[n, list(block)] = 1.0

    @property
    def free(self) -> int:
        return self.expand.shape[0] - 1

    def point(self, v: FloatArray) -> FloatArray:
        return np.exp(np.append(v, 0.0) @ self.expand)

    def value(self, y: FloatArray) -> float:
        return float(self.kernel.scalar(1.0 / y)) / float(self.weights @ y)

    def objective(self, v: FloatArray) -> Tuple[float, FloatArray]:
        y = self.point(v)
        trace = float(self.weights @ y)
        ratio = float(self.kernel.scalar(1.0 / y)) / trace
        # dS/dy_i = d_i R_i
        grad_y = (self.kernel.d * self.kernel.ricci(1.0 / y) - ratio * self.weights) / trace
        grad_v = (self.expand @ (grad_y * y))[:-1]
        return -ratio, -grad_v


def _sobol_starts(dim: int, count: int) -> FloatArray:
    sampler = qmc.Sobol(d=dim, scramble=False)
    points = sampler.random_base2(m=max(0, math.ceil(math.log2(max(count, 1)))))[:count]
    return START_SPAN * (2.0 * points - 1.0)


def _maximize(problem: _RatioProblem, starts: int) -> Tuple[float, FloatArray, bool]:
    """Best ratio, its unit trace y point, and whether it lies inside the search box."""
    if problem.free == 0:
        y = problem.point(np.zeros(0))
        return problem.value(y), y / float(problem.weights @ y), True

    bounds = [(-LOG_BOX, LOG_BOX)] * problem.free
    best_value = -math.inf
    best_v = np.zeros(problem.free)
    for start in _sobol_starts(problem.free, starts):
        result = optimize.minimize(
            problem.objective,
            start,
            jac=True,
            method="L-BFGS-B",
            bounds=bounds,
            options={"ftol": 1e-15, "gtol": SUP_TOL, "maxiter": 2000},
        )
        if math.isfinite(result.fun) and -result.fun > best_value:
            best_value = -float(result.fun)
            best_v = np.asarray(result.x, dtype=np.float64)

    interior = bool(np.all(np.abs(best_v) < LOG_BOX - 1e-3))
    y = problem.point(best_v)
    return best_value, y / float(problem.weights @ y), interior


def alpha(
    space: SpaceSpec,
    T: Candidate,
    J: IndexSet,
    *,
    numeric: bool = False,
    starts: int = SUP_STARTS,
) -> LevelValue:
    """alpha_J, the supremum of normalized scalar curvature over fiber metrics.

    A single module fiber has one metric up to scale and is evaluated in closed form.
    Otherwise the interior supremum found by multistart ascent is compared with alpha
    of every smaller subalgebra stratum; when a smaller stratum reaches the same level
    the supremum is a boundary limit and reported as not attained.
    """
    stratum = _require_subalgebra(space, J)
    values = _definite(space, T)
    fiber = restrict_to_fiber(space, stratum)
    T_fiber = values[stratum.index]

    if fiber.r == 1 and not numeric:
        d = float(fiber.d[0])
        value = (d * fiber.b[0] - 0.5 * fiber.triple(1, 1, 1)) / (2.0 * d * float(T_fiber[0]))
        witness = MetricPoint.from_y([1.0 / (d * float(T_fiber[0]))])
        return LevelValue(value=value, attained=True, witness=witness, method="closed-form")

    problem = _RatioProblem(fiber, fiber.dims() * T_fiber, [[n] for n in range(fiber.r)])
    value, y, interior = _maximize(problem, starts)
    attained = interior

    for sub in subalgebra_strata(space):
        if set(sub.J) < set(stratum.J):
            nested = alpha(space, T, sub, numeric=numeric, starts=starts)
            if nested.value >= value - BOUNDARY_MATCH_TOL * (1.0 + abs(value)):
                log.debug("alpha%s reached from %s at %.12g", stratum.label, sub.label, nested.value)
                value = max(value, nested.value)
                attained = False

    return LevelValue(value=value, attained=attained, witness=MetricPoint.from_y(y), method="numeric")


def beta(
    space: SpaceSpec,
    T: Candidate,
    J: IndexSet,
    *,
    numeric: bool = False,
    starts: int = SUP_STARTS,
) -> LevelValue:
    """beta_J, the supremum of normalized scalar curvature of the base over block constant metrics.

    With a single base block this is
    (sum d_i b_i - 1/2 sum [ijk]) / (2 sum d_i T_i), all sums over the base modules.
    """
    stratum = _require_subalgebra(space, J)
    values = _definite(space, T)
    base = restrict_to_base(space, stratum)
    blocks = base_blocks(space, stratum)
    weights = base.dims() * values[stratum.complement(space.r)]

    if len(blocks) == 1 and not numeric:
        total = float(weights.sum())
        killing = float(base.dims() @ base.killing())
        brackets = float(base.structure_tensor().sum())
        witness = MetricPoint.from_y(np.full(base.r, 1.0 / total))
        return LevelValue(value=(killing - 0.5 * brackets) / (2.0 * total), attained=True, witness=witness, method="closed-form")

    problem = _RatioProblem(base, weights, blocks)
    value, y, interior = _maximize(problem, starts)
    return LevelValue(value=value, attained=interior, witness=MetricPoint.from_y(y), method="numeric")


def usable_witness(level: LevelValue) -> MetricPoint:
    """The witness of `level`, lifted off the boundary when the supremum is not attained.

    An unattained supremum leaves the numeric witness at the edge of the search box, so
    every coordinate is floored at WITNESS_FLOOR times the largest one.
    """
    if level.witness is None:
        raise InvalidPointError("level carries no witness metric")
    if level.attained:
        return level.witness
    y = level.witness.y
    return MetricPoint.from_y(np.maximum(y, WITNESS_FLOOR * float(y.max())))


def level_report(space: SpaceSpec, T: Candidate, *, starts: int = SUP_STARTS) -> List[LevelReport]:
    """alpha, beta and the slope of S along the canonical variation through their witnesses.

    When a supremum is not attained the slope is taken at the lifted witness, so it is
    close to, but not equal to, beta - alpha.
    """
    reports: List[LevelReport] = []
    for stratum in subalgebra_strata(space):
        a = alpha(space, T, stratum, starts=starts)
        b = beta(space, T, stratum, starts=starts)
        if a.witness is None or b.witness is None:
            derivative = b.value - a.value
        else:
            cv = canonical_variation(space, T, stratum, usable_witness(a), usable_witness(b))
            derivative = variation_slope(cv)
        reports.append(
            LevelReport(
                stratum=stratum,
                alpha=a.value,
                alpha_attained=a.attained,
                alpha_witness=a.witness,
                beta=b.value,
                beta_attained=b.attained,
                beta_witness=b.witness,
                derivative_at_infinity=derivative,
            )
        )
    return reports


def _assemble(stratum: Stratum, r: int, y_fiber: FloatArray, y_base: FloatArray) -> FloatArray:
    y = np.empty(r)
    y[stratum.index] = y_fiber
    y[stratum.complement(r)] = y_base
    return y


def canonical_variation(
    space: SpaceSpec,
    T: Candidate,
    J: IndexSet,
    g_F: MetricPoint,
    g_B: MetricPoint,
    *,
    t_max: Optional[float] = None,
) -> CanonicalVariation:
    stratum = _require_subalgebra(space, J)
    values = _definite(space, T)
    fiber = restrict_to_fiber(space, stratum)
    base = restrict_to_base(space, stratum)
    if g_F.r != fiber.r or g_B.r != base.r:
        raise InvalidPointError(
            f"stratum {stratum.label} needs a fiber metric with {fiber.r} and a base metric with {base.r} coordinates"
        )

    y_fiber = g_F.y
    y_base = g_B.y
    for block in base_blocks(space, stratum):
        block_values = y_base[block]
        if float(np.ptp(block_values)) > 1e-9 * float(np.max(block_values)):
            raise SpaceValidationError(f"base metric {list(y_base)} is not constant on the base block {block}")

    fiber_trace = float(fiber.dims() * values[stratum.index] @ y_fiber)
    base_trace = float(base.dims() * values[stratum.complement(space.r)] @ y_base)
    fiber_scalar = float(CurvatureKernel(fiber).scalar(1.0 / y_fiber))
    base_scalar = float(CurvatureKernel(base).scalar(1.0 / y_base))
    joined = float(CurvatureKernel(space).scalar(1.0 / _assemble(stratum, space.r, y_fiber, y_base)))

    norm = fiber_scalar + base_scalar - joined
    if -1e-12 * (1.0 + abs(joined)) < norm < 0:
        norm = 0.0

    return CanonicalVariation(
        stratum=stratum,
        r=space.r,
        fiber=MetricPoint.from_y(y_fiber),
        base=MetricPoint.from_y(y_base),
        fiber_trace=fiber_trace,
        base_trace=base_trace,
        fiber_scalar=fiber_scalar,
        base_scalar=base_scalar,
        a_norm=norm,
        t_max=T_MAX_FRACTION / base_trace if t_max is None else t_max,
        T=[float(v) for v in values],
    )


def optimal_variation(space: SpaceSpec, T: Candidate, J: IndexSet, *, starts: int = SUP_STARTS) -> CanonicalVariation:
    """The canonical variation through the alpha and beta witnesses of `J`."""
    stratum = make_stratum(space, J)
    fiber = alpha(space, T, stratum, starts=starts).witness
    base = beta(space, T, stratum, starts=starts).witness
    assert fiber is not None and base is not None
    return canonical_variation(space, T, stratum, fiber, base)


def _check_t(cv: CanonicalVariation, t: float) -> None:
    if not 0 < t < 1.0 / cv.base_trace:
        raise InvalidPointError(f"t={t} outside the range (0, {1.0 / cv.base_trace:.6g}) of the variation")


def variation_point(cv: CanonicalVariation, t: float) -> MetricPoint:
    """y_J = s(t) y_F and y_Jc = t y_B."""
    _check_t(cv, t)
    return MetricPoint.from_y(_assemble(cv.stratum, cv.r, cv.s(t) * cv.fiber.y, t * cv.base.y))


def scal_submersion(cv: CanonicalVariation, s: float, t: float) -> float:
    """S(g_F / s + g_B / t) = s S_F + t S_B - (t^2 / s) |A|."""
    if s <= 0 or t <= 0:
        raise InvalidPointError(f"scales must be positive, got s={s}, t={t}")
    return s * cv.fiber_scalar + t * cv.base_scalar - t**2 / s * cv.a_norm


def scal_along_variation(cv: CanonicalVariation, t: float) -> float:
    _check_t(cv, t)
    T1, T2 = cv.fiber_trace, cv.base_trace
    return (
        cv.fiber_scalar / T1
        + T2 * (cv.base_scalar / T2 - cv.fiber_scalar / T1) * t
        - t**2 * T1 / (1.0 - t * T2) * cv.a_norm
    )


def variation_slope(cv: CanonicalVariation) -> float:
    """dS(g_t)/dt at t = 0."""
    T1, T2 = cv.fiber_trace, cv.base_trace
    return T2 * (cv.base_scalar / T2 - cv.fiber_scalar / T1)


def a_norm(cv: CanonicalVariation) -> float:
    return cv.a_norm


def is_generalized_wallach(space: SpaceSpec) -> bool:
    """Three modules, Q = -B and [123] the only nonzero structure constant."""
    return space.r == 3 and set(space.triples) == {"1,2,3"} and all(b == 1.0 for b in space.b)


def _wallach_shape(space: SpaceSpec) -> float:
    if not is_generalized_wallach(space):
        raise SpaceValidationError(f"{space.name} is not a generalized Wallach space")
    return space.triple(1, 2, 3)


def wallach_levels(space: SpaceSpec, T: Candidate) -> List[Tuple[float, float]]:
    """(alpha_i, beta_i) for i = 1, 2, 3 on a generalized Wallach space.

    alpha_i = (d_i - 2[123]) / (2 d_i T_i) and beta_i = (d_j + d_k) / (2 (d_j T_j + d_k T_k)).
    """
    c = _wallach_shape(space)
    values = _definite(space, T)
    d = space.dims()
    levels: List[Tuple[float, float]] = []
    for i in range(3):
        j, k = (n for n in range(3) if n != i)
        a = (d[i] - 2.0 * c) / (2.0 * d[i] * values[i])
        b = (d[j] + d[k]) / (2.0 * (d[j] * values[j] + d[k] * values[k]))
        levels.append((float(a), float(b)))
    return levels


@functools.lru_cache(maxsize=None)
def _f4_reference() -> SpaceSpec:
    return catalog("f4_u3su2")


def is_f4_flag(space: SpaceSpec) -> bool:
    """Whether `space` carries the structure constants of F4/U(3)SU(2)."""
    return same_structure(space, _f4_reference())


def _f4_shape(space: SpaceSpec, T: Candidate) -> FloatArray:
    if not is_f4_flag(space):
        raise SpaceValidationError(f"{space.name} does not carry the F4/U(3)SU(2) structure constants")
    return _definite(space, T)


def f4_alpha24(space: SpaceSpec, T: Candidate) -> LevelValue:
    """alpha for the fiber m2 + m4 of F4/U(3)SU(2).

    On the fiber S = 7 y2 + 4/3 y4 - y2^2 / (2 y4) and tr = 18 T2 y2 + 6 T4 y4. With
    u = y2 / y4 the ratio has an interior maximum (7 - u*) / (18 T2) exactly when
    T2 < 7 T4 / 4; otherwise it is approached as y2 -> 0 and equals alpha_4.
    """
    values = _f4_shape(space, T)
    p = 18.0 * float(values[1])
    q = 6.0 * float(values[3])
    if 24.0 * values[1] >= 42.0 * values[3]:
        return LevelValue(value=4.0 / (3.0 * q), attained=False, method="closed-form")
    u = (-q + math.sqrt(q * q + 2.0 * p * (7.0 * q - 4.0 * p / 3.0))) / p
    y4 = 1.0 / (p * u + q)
    return LevelValue(
        value=(7.0 - u) / p,
        attained=True,
        witness=MetricPoint.from_y([u * y4, y4]),
        method="closed-form",
    )


def f4_beta4(space: SpaceSpec, T: Candidate) -> LevelValue:
    """beta for the stratum {4} of F4/U(3)SU(2), base metrics constant on m1 + m3.

    With v = 3 T1 + T3, the supremum is 7 / (18 T2) (not attained) when 7 v >= 36 T2, and
    (8 v + 9 T2 - sqrt(-28 v^2 + 144 v T2 + 81 T2^2)) / (4 v^2) at an interior maximum otherwise.
    """
    values = _f4_shape(space, T)
    T1, T2, T3 = (float(v) for v in values[:3])
    v = 3.0 * T1 + T3
    if 7.0 * v >= 36.0 * T2:
        return LevelValue(value=7.0 / (18.0 * T2), attained=False, method="closed-form")

    # S = I1 / y2 + I2 y2 + I3 after eliminating y13 with the constraint
    I1 = -1.0 / (16.0 * v * v)
    I2 = (28.0 * v * v - 144.0 * v * T2 - 81.0 * T2 * T2) / (4.0 * v * v)
    y2 = math.sqrt(I1 / I2)
    y13 = (1.0 - 18.0 * T2 * y2) / (4.0 * v)
    discriminant = -28.0 * v * v + 144.0 * v * T2 + 81.0 * T2 * T2
    return LevelValue(
        value=(8.0 * v + 9.0 * T2 - math.sqrt(discriminant)) / (4.0 * v * v),
        attained=True,
        witness=MetricPoint.from_y([y13, y2, y13]),
        method="closed-form",
    )
