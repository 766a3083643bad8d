"""Mountain pass search: paths between strata pushed up by the gradient flow.

A path is a polyline of feasible points in the y chart. Each relaxation round moves the
interior nodes along the ascent flow for a fixed time, pulls escaped nodes back into the
simplex and redistributes the nodes by arc length. The running sup of the minimum of S
over the nodes estimates the mountain pass level.
"""

from __future__ import annotations

import math
import logging
from typing import List, Tuple, Optional

import numpy as np

from ._types import FloatArray
from .types import (
    Stratum,
    Candidate,
    PathState,
    SpaceSpec,
    FlowParams,
    MetricPoint,
    CriticalPoint,
    RelaxationRow,
)
from .dynamics import newton_critical
from .curvature import CurvatureKernel
from .invariants import beta, alpha, usable_witness, wallach_levels, variation_point, canonical_variation
from ._constants import (
    MAX_ROUNDS,
    PATH_NODES,
    RELAX_RTOL,
    CLAMP_FLOOR,
    STABLE_DELTA,
    STABLE_ROUNDS,
    ROUND_FLOW_TIME,
    ANCHOR_DISTANCE,
    SADDLE_LEVEL_TOL,
)
from ._exceptions import HypothesisError, InvalidPointError
from .space_model import center, make_stratum, subalgebra_strata

__all__ = ["build_path_wallach", "build_path_flag", "lowest_stratum", "relax", "extract_saddle", "resample"]

log: logging.Logger = logging.getLogger(__name__)

def resample(Y: FloatArray, n: int) -> FloatArray:
    """`n` points equally spaced by arc length along the polyline `Y`, endpoints kept.

    Linear interpolation in the y chart keeps every node on the constraint surface.
    """
    segments = np.linalg.norm(np.diff(Y, axis=0), axis=1)
    arc = np.concatenate([[0.0], np.cumsum(segments)])
    if arc[-1] == 0:
        return np.repeat(Y[:1], n, axis=0)
    targets = np.linspace(0.0, arc[-1], n)
    return np.stack([np.interp(targets, arc, Y[:, i]) for i in range(Y.shape[1])], axis=1)


def _path_state(
    kernel: CurvatureKernel,
    Y: FloatArray,
    anchors: Tuple[Stratum, Stratum],
    bracket: Tuple[float, float],
) -> PathState:
    scalars = kernel.scalar(1.0 / Y)
    argmin = int(np.argmin(scalars))
    return PathState(
        nodes=[MetricPoint.from_y(y) for y in Y],
        anchors=anchors,
        c_estimate=float(scalars[argmin]),
        argmin=argmin,
        bracket=bracket,
    )


def build_path_wallach(
    space: SpaceSpec,
    T: Candidate,
    *,
    nodes: int = PATH_NODES,
    anchor_distance: float = ANCHOR_DISTANCE,
) -> PathState:
    """Two canonical variations, towards the two strata with beta - alpha < 0, joined at the center.

    On a generalized Wallach space every fiber and every base is a single module, so both
    variations are straight segments from the center y0 = (w, w, w), w = 1 / sum d_i T_i.
    """
    levels = wallach_levels(space, T)
    values = T.array
    d = space.dims()
    negative = [i for i, (a, b) in enumerate(levels) if b - a < 0]
    if len(negative) < 2:
        raise HypothesisError(
            "fewer than two strata with beta - alpha < 0",
            failed=[f"beta{i + 1} - alpha{i + 1} = {b - a:.6g} >= 0" for i, (a, b) in enumerate(levels) if b - a >= 0],
        )
    first, second = sorted(negative, key=lambda i: -levels[i][0])[:2]
    low = min(range(3), key=lambda i: levels[i][0])

    w = 1.0 / float(d @ values)
    middle = np.full(3, w)
    ends: List[FloatArray] = []
    for i in (first, second):
        # unit trace fiber and base metrics, y_i = s / (d_i T_i) and y_j = t / sum_{j != i} d_j T_j
        base = [j for j in range(3) if j != i]
        t = anchor_distance * float(d[base] @ values[base])
        y = np.empty(3)
        y[i] = (1.0 - t) / (d[i] * values[i])
        y[base] = t / float(d[base] @ values[base])
        ends.append(y)

    Y = resample(np.array([ends[0], middle, ends[1]]), nodes)
    kernel = CurvatureKernel(space)
    inf_scalar = float(kernel.scalar(1.0 / Y).min())
    alpha_low = levels[low][0]
    if not inf_scalar > alpha_low:
        raise HypothesisError(
            "initial path dips below the lowest critical level at infinity",
            failed=[f"inf S = {inf_scalar:.6g} <= alpha{low + 1} = {alpha_low:.6g}"],
        )
    anchors = (make_stratum(space, [first + 1]), make_stratum(space, [second + 1]))
    bracket = (alpha_low, min(levels[first][0], levels[second][0]))
    log.debug("Wallach path %s -> %s, inf S = %.8g, bracket %s", anchors[0].label, anchors[1].label, inf_scalar, bracket)
    return _path_state(kernel, Y, anchors, bracket)


def _stratum_dim(space: SpaceSpec, stratum: Stratum) -> int:
    return sum(space.d[j] for j in stratum.index)


def lowest_stratum(space: SpaceSpec, T: Candidate) -> Stratum:
    """The subalgebra stratum with the lowest alpha, ties going to the smallest fiber."""
    strata = subalgebra_strata(space)
    if not strata:
        raise HypothesisError("no subalgebra stratum", failed=[f"{space.name} has no intermediate subalgebra"])
    return min(strata, key=lambda s: (alpha(space, T, s).value, _stratum_dim(space, s)))


def _anchor(space: SpaceSpec, T: Candidate, stratum: Stratum, distance: float) -> FloatArray:
    """Point on the canonical variation towards `stratum` whose largest base coordinate equals `distance`."""
    variation = canonical_variation(
        space,
        T,
        stratum,
        usable_witness(alpha(space, T, stratum)),
        usable_witness(beta(space, T, stratum)),
    )
    t = distance / float(variation.base.y.max())
    return variation_point(variation, t).y


def build_path_flag(
    space: SpaceSpec,
    T: Candidate,
    k_low: Stratum,
    *,
    nodes: int = PATH_NODES,
    anchor_distance: float = ANCHOR_DISTANCE,
) -> PathState:
    """Two y chart segments from a point next to `k_low` through the center to a point next to another subalgebra stratum.

    `k_low` must carry the lowest alpha (ties allowed when it has the smallest dimension
    among the tied strata) and beta - alpha < 0.
    """
    k_low = make_stratum(space, k_low)
    strata = subalgebra_strata(space)
    if k_low not in strata:
        raise HypothesisError("k_low is not a subalgebra stratum", failed=[f"{k_low.label} is an Infinity stratum"])
    others = [s for s in strata if s != k_low]
    if not others:
        raise HypothesisError("no second subalgebra stratum", failed=[f"only {k_low.label} is a subalgebra stratum"])

    alphas = {s.key: alpha(space, T, s).value for s in strata}
    low = alphas[k_low.key]
    failed: List[str] = []
    for other in others:
        level = alphas[other.key]
        if level < low:
            failed.append(f"alpha{k_low.label} = {low:.6g} > alpha{other.label} = {level:.6g}")
        elif level == low and _stratum_dim(space, other) <= _stratum_dim(space, k_low):
            failed.append(f"alpha{k_low.label} = alpha{other.label} = {low:.6g} and {other.label} is not larger")
    beta_low = beta(space, T, k_low).value
    if not beta_low - low < 0:
        failed.append(f"beta{k_low.label} - alpha{k_low.label} = {beta_low - low:.6g} >= 0")
    if failed:
        raise HypothesisError("hypotheses for a stratum to stratum mountain pass fail", failed=failed)

    apart = [s for s in others if not (set(s.J) <= set(k_low.J) or set(k_low.J) <= set(s.J))]
    target = max(apart or others, key=lambda s: (alphas[s.key], -_stratum_dim(space, s)))

    first, last = (_anchor(space, T, stratum, anchor_distance) for stratum in (k_low, target))
    kernel = CurvatureKernel(space)
    Y = resample(np.array([first, center(space, T).y, last]), nodes)
    inf_scalar = float(kernel.scalar(1.0 / Y).min())
    return _path_state(kernel, Y, (k_low, target), (inf_scalar, low))


class _BatchFlow:
    def __init__(self, space: SpaceSpec, T: FloatArray) -> None:
        self.kernel = CurvatureKernel(space)
        self.T = T
        self.weights = self.kernel.d * T

    def velocity(self, U: FloatArray) -> FloatArray:
        Y = np.exp(U)
        return -Y * self.kernel.grad(1.0 / Y, self.T)

    def advance(self, Y: FloatArray, duration: float, h: float, rtol: float) -> Tuple[FloatArray, float]:
        """Heun steps in log coordinates with one shared step size; returns the new nodes and the last step size."""
        U = np.log(Y)
        elapsed = 0.0
        while elapsed < duration:
            step = min(h, duration - elapsed)
            k1 = self.velocity(U)
            with np.errstate(over="ignore", invalid="ignore"):
                euler = U + step * k1
                heun = U + 0.5 * step * (k1 + self.velocity(euler))
                error = float(np.max(np.abs(heun - euler) / (rtol * (1.0 + np.abs(heun)))))
            if not math.isfinite(error) or error > 1.0:
                h = step * (0.2 if not math.isfinite(error) else max(0.2, 0.9 / math.sqrt(error)))
                if h < 1e-14:
                    break
                continue
            U = heun
            elapsed += step
            h = step * (5.0 if error == 0 else min(5.0, 0.9 / math.sqrt(error)))
        Y = np.exp(U)
        return Y / (Y @ self.weights)[:, None], h


def relax(
    space: SpaceSpec,
    T: Candidate,
    path: PathState,
    *,
    rounds: int = MAX_ROUNDS,
    flow_time: float = ROUND_FLOW_TIME,
    params: Optional[FlowParams] = None,
) -> PathState:
    """Push the interior nodes of `path` up the gradient flow until the level estimate settles.

    The estimate is stable once it moved by less than STABLE_DELTA over STABLE_ROUNDS rounds.
    """
    if not T.definite:
        raise InvalidPointError(f"candidate T={T.T} is not positive definite")
    rtol = RELAX_RTOL if params is None else params.rtol
    batch = _BatchFlow(space, T.array)
    Y = np.array([p.y for p in path.nodes])
    n = len(Y)
    c_estimate = path.c_estimate
    argmin = path.argmin
    history: List[float] = [c_estimate]
    telemetry = list(path.telemetry)
    clamped = set(path.clamped)
    h = flow_time / 10.0
    converged = False
    done = path.rounds

    for round_ in range(path.rounds + 1, path.rounds + rounds + 1):
        interior, h = batch.advance(Y[1:-1], flow_time, h, rtol)
        escaped = np.any(interior < CLAMP_FLOOR, axis=1)
        if escaped.any():
            for k in np.flatnonzero(escaped):
                clamped.add(int(k) + 1)
            log.warning("round %d: clamped %d nodes back into the simplex", round_, int(escaped.sum()))
            interior = np.maximum(interior, CLAMP_FLOOR)
            interior = interior / (interior @ batch.weights)[:, None]
        Y = resample(np.vstack([Y[:1], interior, Y[-1:]]), n)

        scalars = batch.kernel.scalar(1.0 / Y)
        argmin = int(np.argmin(scalars))
        inf_scalar = float(scalars[argmin])
        c_estimate = max(c_estimate, inf_scalar)
        history.append(c_estimate)
        telemetry.append(RelaxationRow(round=round_, inf_scalar=inf_scalar, argmin=argmin, c_estimate=c_estimate))
        done = round_
        if round_ % 10 == 0:
            log.info("round %d: inf S = %.10g at node %d, c = %.10g", round_, inf_scalar, argmin, c_estimate)
        if len(history) > STABLE_ROUNDS and history[-1] - history[-1 - STABLE_ROUNDS] < STABLE_DELTA:
            converged = True
            break

    return PathState(
        nodes=[MetricPoint.from_y(y) for y in Y],
        anchors=path.anchors,
        c_estimate=c_estimate,
        argmin=argmin,
        bracket=path.bracket,
        rounds=done,
        converged=converged,
        clamped=sorted(clamped),
        telemetry=telemetry,
    )


def extract_saddle(
    space: SpaceSpec,
    T: Candidate,
    path: PathState,
    *,
    level_tol: float = SADDLE_LEVEL_TOL,
) -> Optional[CriticalPoint]:
    """Newton from the lowest node of a relaxed path; accepted with co-index at most 1 near the level estimate.

    A zero eigenvalue is allowed, critical curves show up as degenerate spectra.
    """
    start = path.nodes[path.argmin]
    point = newton_critical(space, T, start)
    if point is None:
        kernel = CurvatureKernel(space)
        grad = float(kernel.grad_norm(start.x, T.array))
        log.info("no critical point near node %d, |grad| = %.3e there", path.argmin, grad)
        return None
    c = path.c_estimate
    if point.spectrum.co_index > 1:
        log.info("rejected critical point with co-index %d", point.spectrum.co_index)
        return None
    if abs(point.scalar - c) > level_tol * (1.0 + abs(c)):
        log.info("rejected critical point at S = %.10g, level estimate %.10g", point.scalar, c)
        return None
    return point
