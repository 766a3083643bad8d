"""Region labels in T space, plane sweeps, Ricci image samples and degenerate loci.

A label records which existence results apply to a candidate T:

- GlobalMax: alpha is largest at a stratum K (lowest dimension among ties) and beta_K - alpha_K > 0.
- SaddleByThmB: a generalized Wallach space with two negative beta_i - alpha_i.
- SaddleByThmC: alpha is lowest at K (lowest dimension among ties), beta_K - alpha_K < 0, and every
  other stratum has a fiber with at most two modules.
"""

from __future__ import annotations

import math
import logging
import functools
from typing import Dict, List, Tuple, Callable, Optional, Sequence
from typing_extensions import Literal

import numpy as np
import scipy.linalg

from ._types import FloatArray, SampleMode
from .types import (
    Stratum,
    GridSpec,
    Candidate,
    LocusSpec,
    Predicate,
    SpaceSpec,
    ImagePoint,
    LevelValue,
    LocusPoint,
    RegionKind,
    MetricPoint,
    RegionLabel,
    SweepRecord,
)
from ._utils import parallel_map
from .curvature import CurvatureKernel, ricci_singular_values
from ._constants import SIGMA_GAP, SUP_STARTS, BOUNDARY_MATCH_TOL
from ._exceptions import InvalidGridError, InvalidPointError, ContinuationError
from .invariants import (
    beta,
    alpha,
    f4_beta4,
    f4_alpha24,
    is_f4_flag,
    wallach_levels,
    is_generalized_wallach,
)
from .space_model import catalog, same_structure, restrict_to_fiber, subalgebra_strata

__all__ = [
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

log: logging.Logger = logging.getLogger(__name__)

SQRT3 = math.sqrt(3.0)


@functools.lru_cache(maxsize=None)
def _reference(name: str) -> SpaceSpec:
    return catalog(name)


def _is(space: SpaceSpec, name: str) -> bool:
    return same_structure(space, _reference(name))


def _check_length(space: SpaceSpec, T: Candidate) -> FloatArray:
    values = T.array
    if values.shape != (space.r,):
        raise InvalidPointError(f"candidate has {values.shape[0]} components, space {space.name} has {space.r} modules")
    return values


# projections


def wallach_projection(T: Sequence[float]) -> Optional[List[float]]:
    """Plane coordinates of T normalized to T1 + T2 + T3 = 1; None when the sum is not positive."""
    total = float(sum(T))
    if total <= 0:
        return None
    T1, T2, T3 = (float(t) / total for t in T)
    return [4.0 * SQRT3 / 3.0 * (T1 - T2), 4.0 * T3 - 4.0 / 3.0]


def wallach_from_plane(x: float, y: float) -> List[float]:
    """Inverse of `wallach_projection`, returning T with T1 + T2 + T3 = 1."""
    T3 = (y + 4.0 / 3.0) / 4.0
    T1 = (1.0 - T3 + x * SQRT3 / 4.0) / 2.0
    T2 = (1.0 - T3 - x * SQRT3 / 4.0) / 2.0
    return [T1, T2, T3]


def projection(space: SpaceSpec, T: Sequence[float]) -> Optional[List[float]]:
    """Generalized Wallach spaces use the plane coordinates, other spaces divide by the last component."""
    if is_generalized_wallach(space):
        return wallach_projection(T)
    last = float(T[-1])
    if last == 0:
        return None
    return [float(t) / last for t in T[:-1]]


# region labels


_LevelTable = List[Tuple[Stratum, float, float]]


def _strata_levels(space: SpaceSpec, T: Candidate, starts: int) -> _LevelTable:
    f4 = is_f4_flag(space)
    table: _LevelTable = []
    for stratum in subalgebra_strata(space):
        a: LevelValue
        b: LevelValue
        if f4 and stratum.J == (2, 4):
            a = f4_alpha24(space, T)
        else:
            a = alpha(space, T, stratum, starts=starts)
        if f4 and stratum.J == (4,):
            b = f4_beta4(space, T)
        else:
            b = beta(space, T, stratum, starts=starts)
        table.append((stratum, a.value, b.value))
    return table


def _fiber_dim(space: SpaceSpec, stratum: Stratum) -> int:
    return sum(space.d[j - 1] for j in stratum.J)


def _extreme(space: SpaceSpec, table: _LevelTable, *, highest: bool) -> Tuple[Stratum, float, float]:
    """The stratum with the highest (or lowest) alpha, ties going to the smallest fiber."""
    target = max(a for _, a, _ in table) if highest else min(a for _, a, _ in table)
    tol = BOUNDARY_MATCH_TOL * (1.0 + abs(target))
    tied = [row for row in table if abs(row[1] - target) <= tol]
    return min(tied, key=lambda row: (_fiber_dim(space, row[0]), row[0].J))


def _compare(name: str, lhs: float, relation: Literal["<", ">", "<=", ">="], rhs: float) -> Predicate:
    holds = {
        "<": lhs < rhs,
        ">": lhs > rhs,
        "<=": lhs <= rhs,
        ">=": lhs >= rhs,
    }[relation]
    return Predicate(name=name, lhs=lhs, relation=relation, rhs=rhs, holds=holds)


def _kind(max_holds: bool, by_b: bool, by_c: bool) -> RegionKind:
    saddle = by_b or by_c
    if max_holds and saddle:
        return RegionKind.MAX_AND_SADDLE
    if max_holds:
        return RegionKind.GLOBAL_MAX
    if by_b:
        return RegionKind.SADDLE_BY_THM_B
    if by_c:
        return RegionKind.SADDLE_BY_THM_C
    return RegionKind.NO_PREDICTION


def _wallach_label(space: SpaceSpec, T: Candidate) -> RegionLabel:
    levels = wallach_levels(space, T)
    table = [(Stratum(J=(i + 1,), kind="Subalgebra"), a, b) for i, (a, b) in enumerate(levels)]
    top, a_top, b_top = _extreme(space, table, highest=True)
    # alpha_i / beta_i is (T_j + T_k) / (3 T_i) on SU(3)/T^2
    predicates = [_compare(f"alpha{top.label}/beta{top.label}", a_top / b_top, "<", 1.0)]
    ratios = [_compare(f"alpha{s.label}/beta{s.label}", a / b, ">", 1.0) for s, a, b in table]
    predicates.extend(ratios)
    by_b = sum(p.holds for p in ratios) >= 2
    return RegionLabel(kind=_kind(predicates[0].holds, by_b, False), predicates=predicates)


_Row = Tuple[str, float, Literal["<", ">", "<=", ">="], float]


def _f4_collections(T: FloatArray) -> List[Tuple[str, List[_Row]]]:
    # the collections are stated for T4 = 1
    T1, T2, T3 = (float(t) / float(T[3]) for t in T[:3])
    v = 3.0 * T1 + T3
    discriminant = -28.0 * v * v + 144.0 * v * T2 + 81.0 * T2 * T2
    beta4 = (8.0 * v + 9.0 * T2 - math.sqrt(max(discriminant, 0.0))) / (4.0 * v * v)
    split = 7.0 * v - 36.0 * T2
    first: List[_Row] = [
        ("T3", T3, ">=", 3.0 / 8.0),
        ("30T3 - (2T1 + 3T2 + 1)", 30.0 * T3 - (2.0 * T1 + 3.0 * T2 + 1.0), "<", 0.0),
    ]
    second: List[_Row] = [
        ("T3", T3, "<=", 3.0 / 8.0),
        ("7(3T1 + T3) - 36T2", split, ">=", 0.0),
        ("T2", T2, ">", 7.0 / 4.0),
    ]
    third: List[_Row] = [
        ("T3", T3, "<=", 3.0 / 8.0),
        ("7(3T1 + T3) - 36T2", split, "<", 0.0),
        ("beta4", beta4, "<", 2.0 / 9.0),
    ]
    return [("(1)", first), ("(2)", second), ("(3)", third)]


def _f4_label(space: SpaceSpec, T: Candidate, table: _LevelTable) -> RegionLabel:
    top, a_top, b_top = _extreme(space, table, highest=True)
    predicates = [_compare(f"beta{top.label} - alpha{top.label}", b_top - a_top, ">", 0.0)]
    by_c = False
    for collection, rows in _f4_collections(T.array):
        evaluated = [_compare(f"collection {collection}: {name}", lhs, relation, rhs) for name, lhs, relation, rhs in rows]
        predicates.extend(evaluated)
        by_c = by_c or all(p.holds for p in evaluated)
    return RegionLabel(kind=_kind(predicates[0].holds, False, by_c), predicates=predicates)


def _generic_label(space: SpaceSpec, T: Candidate, table: _LevelTable) -> RegionLabel:
    top, a_top, b_top = _extreme(space, table, highest=True)
    low, a_low, b_low = _extreme(space, table, highest=False)
    max_predicate = _compare(f"beta{top.label} - alpha{top.label}", b_top - a_top, ">", 0.0)
    predicates = [max_predicate]

    saddle_predicate = _compare(f"beta{low.label} - alpha{low.label}", b_low - a_low, "<", 0.0)
    predicates.append(saddle_predicate)
    others = [stratum for stratum, _, _ in table if stratum.J != low.J]
    widest = max((restrict_to_fiber(space, stratum).r for stratum in others), default=0)
    small_fibers = _compare("modules in other fibers", float(widest), "<=", 2.0)
    predicates.append(small_fibers)
    by_c = bool(others) and saddle_predicate.holds and small_fibers.holds
    return RegionLabel(kind=_kind(max_predicate.holds, False, by_c), predicates=predicates)


def region_label(space: SpaceSpec, T: Candidate, *, starts: int = SUP_STARTS) -> RegionLabel:
    """Which existence results apply at T, with every inequality evaluated.

    Generalized Wallach spaces and F4/U(3)SU(2) use closed forms; other spaces compute alpha and
    beta numerically with `starts` multistart points per supremum.
    """
    _check_length(space, T)
    if not T.definite:
        return RegionLabel(kind=RegionKind.INDEFINITE, predicates=[])
    if not subalgebra_strata(space):
        return RegionLabel(kind=RegionKind.NO_PREDICTION, predicates=[])
    if is_generalized_wallach(space):
        return _wallach_label(space, T)
    table = _strata_levels(space, T, starts)
    if is_f4_flag(space):
        return _f4_label(space, T, table)
    return _generic_label(space, T, table)


# sweeps


def _axis_index(space: SpaceSpec, name: str) -> int:
    if name.startswith("T"):
        try:
            index = int(name[1:])
        except ValueError:
            index = 0
        if 1 <= index <= space.r:
            return index - 1
    raise InvalidGridError(f"unknown axis {name!r} for {space.name}; expected T1..T{space.r}")


def _grid_candidates(space: SpaceSpec, grid: GridSpec) -> Callable[[float, float], List[float]]:
    if is_generalized_wallach(space):
        if tuple(grid.axes) != ("x", "y"):
            raise InvalidGridError(f"{space.name} is swept in the (x, y) plane, got axes {list(grid.axes)}")
        return wallach_from_plane

    first, second = (_axis_index(space, name) for name in grid.axes)
    if first == second:
        raise InvalidGridError(f"both axes name T{first + 1}")
    base: Dict[int, float] = {space.r - 1: 1.0}
    for name, value in grid.fixed.items():
        base[_axis_index(space, name)] = float(value)
    missing = [f"T{i + 1}" for i in range(space.r) if i not in (first, second) and i not in base]
    if missing:
        raise InvalidGridError(f"no value fixed for {', '.join(missing)}")

    def candidate(a: float, b: float) -> List[float]:
        values = [base.get(i, 0.0) for i in range(space.r)]
        values[first] = a
        values[second] = b
        return values

    return candidate


def sweep_plane(
    space: SpaceSpec,
    grid: GridSpec,
    *,
    threads: Optional[int] = None,
    starts: int = SUP_STARTS,
) -> List[SweepRecord]:
    """Label every point of a rectangular grid, row major in the first axis."""
    for (lo, hi), count in zip(grid.ranges, grid.resolution):
        if not lo < hi or count < 2:
            raise InvalidGridError(f"degenerate grid axis: range ({lo}, {hi}) with {count} points")
    candidate = _grid_candidates(space, grid)
    first = np.linspace(grid.ranges[0][0], grid.ranges[0][1], grid.resolution[0])
    second = np.linspace(grid.ranges[1][0], grid.ranges[1][1], grid.resolution[1])
    coords = [(float(a), float(b)) for a in first for b in second]

    def record(point: Tuple[float, float]) -> SweepRecord:
        T = Candidate(T=candidate(*point))
        label = region_label(space, T, starts=starts)
        return SweepRecord(coords=point, T=T.T, definite=T.definite, label=label.kind, predicates=label.predicates)

    records = parallel_map(record, coords, threads)
    log.info("swept %d points of %s", len(records), space.name)
    return records


# image of the Ricci map


def ricci_image_sample(
    space: SpaceSpec,
    n: int,
    log_range: Tuple[float, float] = (1.0 / 400.0, 400.0),
    seed: int = 0,
    *,
    mode: SampleMode = "log-uniform",
    label_regions: bool = False,
    threads: Optional[int] = None,
) -> List[ImagePoint]:
    """Ricci coefficients of seeded random metrics with x_r = 1.

    `log-uniform` draws log x_i uniformly in `log_range`; `uniform` draws x_i uniformly in
    (0, hi]. With `label_regions`, definite samples also carry the region label of their
    normalized Ricci tensor.
    """
    if n < 1:
        raise InvalidPointError(f"sample size must be positive, got {n}")
    lo, hi = log_range
    if not 0 < lo < hi:
        raise InvalidPointError(f"sample range must satisfy 0 < lo < hi, got ({lo}, {hi})")

    rng = np.random.default_rng(seed)
    if mode == "log-uniform":
        free = np.exp(rng.uniform(math.log(lo), math.log(hi), size=(n, space.r - 1)))
    else:
        free = hi * (1.0 - rng.random(size=(n, space.r - 1)))
    X = np.concatenate([free, np.ones((n, 1))], axis=1)
    R = CurvatureKernel(space).ricci(X)
    definite = np.all(R > 0, axis=1)

    def sample(k: int) -> ImagePoint:
        ricci = [float(v) for v in R[k]]
        region = None
        if label_regions and definite[k]:
            region = region_label(space, Candidate(T=ricci)).kind
        return ImagePoint(
            x=[float(v) for v in X[k]],
            ricci=ricci,
            projected=projection(space, ricci),
            definite=bool(definite[k]),
            region=region,
        )

    points = parallel_map(sample, range(n), threads if label_regions else None)
    log.info("sampled %d metrics of %s, %d with definite Ricci curvature", n, space.name, int(definite.sum()))
    return points


# degenerate critical points


def wallach_quartic(x: Sequence[float]) -> float:
    """x1^4 - (2 x2^2 + 2) x1^2 + x2^4 - 2 x2^2 + 1 after scaling to x3 = 1; zero on x1 +- x2 = +-1."""
    x1, x2 = float(x[0]) / float(x[2]), float(x[1]) / float(x[2])
    return x1**4 - (2.0 * x2**2 + 2.0) * x1**2 + x2**4 - 2.0 * x2**2 + 1.0


def g2_quintic(x: Sequence[float]) -> float:
    """3x1^5 - (6x2^2 + 6x3^2) x1^3 + 3(x2 - x3)^2 (x2 + x3)^2 x1 - 8 x2^2 x3^3 after scaling to x3 = 1."""
    x1, x2, x3 = (float(v) / float(x[2]) for v in x)
    return 3.0 * x1**5 - (6.0 * x2**2 + 6.0 * x3**2) * x1**3 + 3.0 * (x2 - x3) ** 2 * (x2 + x3) ** 2 * x1 - 8.0 * x2**2 * x3**3


def g2_degenerate_x2(t: float, sign: int) -> Optional[float]:
    """x2 on the degenerate curve of G2/U(2) through x1 = t, x3 = 1; `sign` selects the branch."""
    radicand = t * t + 1.0 + 4.0 / (3.0 * t) + sign * 2.0 / (3.0 * t) * math.sqrt(9.0 * t**4 + 6.0 * t**3 + 6.0 * t + 4.0)
    if radicand <= 0:
        return None
    return math.sqrt(radicand)


def _certify(space: SpaceSpec, kernel: CurvatureKernel, x: FloatArray) -> Optional[LocusPoint]:
    point = MetricPoint.from_x(x)
    sigma = ricci_singular_values(space, point)
    sigma_min = float(sigma[-1] / sigma[0])
    sigma_gap = float(sigma[-2] / max(float(sigma[-1]), np.finfo(np.float64).tiny))
    if sigma_gap < SIGMA_GAP:
        log.warning("dropping locus point x=%s, singular value gap %.3g", list(x), sigma_gap)
        return None
    projected = projection(space, [float(v) for v in kernel.ricci(x)])
    return LocusPoint(point=point, projected=projected or [], sigma_min=sigma_min, sigma_gap=sigma_gap)


def _closed_form_points(space: SpaceSpec, spec: LocusSpec) -> List[FloatArray]:
    lo, hi = spec.t_range
    ts = np.linspace(lo, hi, spec.samples)
    points: List[FloatArray] = []
    if _is(space, "wallach_su3"):
        unit = (np.arange(spec.samples) + 1.0) / (spec.samples + 1.0)
        points.extend(np.array([t, 1.0 - t, 1.0]) for t in unit)
        points.extend(np.array([1.0 + t, t, 1.0]) for t in ts)
        points.extend(np.array([t, 1.0 + t, 1.0]) for t in ts)
        return points
    if _is(space, "g2_u2"):
        for sign in (1, -1):
            for t in ts:
                x2 = g2_degenerate_x2(float(t), sign)
                if x2 is not None and x2 > 1e-6:
                    points.append(np.array([float(t), x2, 1.0]))
        return points
    raise ContinuationError(f"no closed-form degenerate locus for {space.name}; use continuation mode")


class _RankDefect:
    """phi(z) = det(N^T H N) / |N^T H N|^(r-1), H the Hessian of S in the y chart and N spanning y^perp.

    H y = 0 by homogeneity, so phi vanishes exactly where dRic loses rank modulo scaling.
    """

    def __init__(self, space: SpaceSpec, anchor: FloatArray, free: Tuple[int, int]) -> None:
        self.kernel = CurvatureKernel(space)
        self.anchor = anchor
        self.free = list(free)

    def point(self, z: FloatArray) -> FloatArray:
        x = self.anchor.copy()
        x[self.free] = z
        return x

    def __call__(self, z: FloatArray) -> float:
        x = self.point(z)
        basis = scipy.linalg.null_space((1.0 / x)[None, :])
        restricted = basis.T @ self.kernel.hessian_y(x) @ basis
        scale = float(np.linalg.norm(restricted)) ** restricted.shape[0]
        return float(np.linalg.det(restricted)) / scale

    def gradient(self, z: FloatArray) -> FloatArray:
        grad = np.empty(2)
        for m in range(2):
            h = 1e-6 * max(1.0, abs(float(z[m])))
            step = np.zeros(2)
            step[m] = h
            grad[m] = (self(z + step) - self(z - step)) / (2.0 * h)
        return grad


_CORRECTOR_ITER = 20
_CORRECTOR_TOL = 1e-12


def _correct(phi: _RankDefect, z: FloatArray, tangent: Optional[FloatArray], predicted: FloatArray) -> Optional[Tuple[FloatArray, int]]:
    """Newton on phi = 0, with the pseudo-arclength condition tangent . (z - predicted) = 0 when a tangent is given."""
    for iteration in range(1, _CORRECTOR_ITER + 1):
        value = phi(z)
        grad = phi.gradient(z)
        if tangent is None:
            norm2 = float(grad @ grad)
            if norm2 == 0:
                return None
            delta = -value * grad / norm2
        else:
            system = np.vstack([grad, tangent])
            rhs = -np.array([value, float(tangent @ (z - predicted))])
            try:
                delta = np.linalg.solve(system, rhs)
            except np.linalg.LinAlgError:
                return None
        z = z + delta
        if np.any(z <= 0) or not np.all(np.isfinite(z)):
            return None
        if abs(phi(z)) <= _CORRECTOR_TOL and float(np.max(np.abs(delta))) <= 1e-10 * (1.0 + float(np.max(np.abs(z)))):
            return z, iteration
    return None


def _trace_branch(phi: _RankDefect, start: FloatArray, direction: FloatArray, spec: LocusSpec, count: int) -> List[FloatArray]:
    points: List[FloatArray] = []
    previous = start
    tangent = direction
    h = spec.step
    while len(points) < count:
        predicted = previous + h * tangent
        corrected = _correct(phi, predicted.copy(), tangent, predicted)
        if corrected is None:
            h /= 2.0
            if h < 1e-6 * spec.step:
                raise ContinuationError(f"continuation step failed near x={list(phi.point(previous))}")
            continue
        z, iterations = corrected
        if np.any(z <= 1.0 / spec.bound) or np.any(z >= spec.bound):
            break
        secant = z - previous
        secant /= float(np.linalg.norm(secant))
        if float(secant @ tangent) <= 0:
            h /= 2.0
            if h < 1e-6 * spec.step:
                raise ContinuationError(f"continuation turned back near x={list(phi.point(previous))}")
            continue
        points.append(z)
        previous = z
        tangent = secant
        if iterations <= 3:
            h = min(1.5 * h, 4.0 * spec.step)
    return points


def _continuation(space: SpaceSpec, spec: LocusSpec) -> List[FloatArray]:
    if spec.start is not None:
        anchor = np.asarray(spec.start, dtype=np.float64)
        if anchor.shape != (space.r,) or np.any(anchor <= 0):
            raise InvalidPointError(f"continuation start must have {space.r} positive coordinates, got {spec.start}")
        anchor = anchor / anchor[-1]
    elif _is(space, "wallach_su3"):
        anchor = np.array([0.5, 0.5, 1.0])
    elif _is(space, "g2_u2"):
        anchor = np.array([1.0, math.sqrt(20.0 / 3.0), 1.0])
    else:
        raise ContinuationError(f"continuation on {space.name} needs a start point")

    free = tuple(i - 1 for i in spec.free)
    if len(set(free)) != 2 or any(not 0 <= i < space.r - 1 for i in free):
        raise InvalidPointError(f"free coordinates must be two distinct indices in 1..{space.r - 1}, got {spec.free}")
    phi = _RankDefect(space, anchor, (free[0], free[1]))

    corrected = _correct(phi, anchor[list(free)].copy(), None, anchor[list(free)])
    if corrected is None:
        raise ContinuationError(f"start x={list(anchor)} could not be corrected onto the degenerate locus")
    start, _ = corrected
    grad = phi.gradient(start)
    tangent = np.array([-grad[1], grad[0]]) / float(np.linalg.norm(grad))

    half = max(1, (spec.max_points - 1) // 2)
    forward = _trace_branch(phi, start, tangent, spec, half)
    backward = _trace_branch(phi, start, -tangent, spec, half)
    log.info("continuation on %s traced %d + %d points", space.name, len(backward), len(forward))
    return [phi.point(z) for z in [*reversed(backward), start, *forward]]


def degenerate_locus(space: SpaceSpec, spec: Optional[LocusSpec] = None) -> List[LocusPoint]:
    """Metrics with x_r = 1 where dRic has rank below r - 1 modulo scaling.

    Closed-form mode samples the known curves of SU(3)/T^2 and G2/U(2); continuation mode
    traces phi = 0 by pseudo-arclength with a secant predictor. Every returned point is
    certified by the singular value gap of dRic.
    """
    spec = spec or LocusSpec()
    if spec.mode == "closed-form":
        xs = _closed_form_points(space, spec)
    else:
        xs = _continuation(space, spec)
    kernel = CurvatureKernel(space)
    certified = [_certify(space, kernel, x) for x in xs]
    return [point for point in certified if point is not None]
