"""Constrained gradient flow of S on tr_g T = 1, Newton refinement and divergence diagnosis.

The flow is integrated in u = log y, where ydot = -y^2 grad and udot = -y grad. Relative
accuracy in y then costs the same near a stratum as in the interior of the simplex.
"""

from __future__ import annotations

import math
import logging
from typing import List, Sized, Tuple, Iterable, Optional, Sequence
from collections import deque

import numpy as np

from ._types import FloatArray
from .types import (
    Stalled,
    Diverged,
    Candidate,
    Converged,
    SpaceSpec,
    AlphaMatch,
    FlowParams,
    FlowResult,
    MetricPoint,
    CriticalPoint,
    TrajectoryRow,
)
from ._utils import parallel_map
from ._compat import model_copy
from .curvature import CurvatureKernel, spectrum_at
from .invariants import alpha
from ._constants import (
    DEDUP_TOL,
    MIN_STEP,
    NEWTON_TOL,
    DECAY_RATIO,
    NEWTON_RANGE,
    BOUNDARY_EPS,
    TREND_POINTS,
    NEWTON_POLISH,
    NEWTON_STARTS,
    CONSTRAINT_TOL,
    DEGENERACY_TOL,
    NEWTON_DAMPING,
    STIFFNESS_STEP,
    NEWTON_MAX_ITER,
    STABILITY_BOUND,
    STIFFNESS_REFRESH,
    NEWTON_MAX_HALVINGS,
)
from ._exceptions import InvalidPointError, DivergenceAnomalyError, ConstraintViolationError
from .space_model import make_stratum, restrict_to_fiber, subalgebra_strata

__all__ = [
    "flow",
    "diagnose_divergence",
    "newton_critical",
    "root_inventory",
]

log: logging.Logger = logging.getLogger(__name__)

_TAIL_LENGTH = 16
_TAIL_FACTOR = 0.5
_REFINE_DISTANCE = 1e-6


def _definite(space: SpaceSpec, T: Candidate) -> FloatArray:
    values = T.array
    if values.shape != (space.r,):
        raise InvalidPointError(f"candidate has {values.shape[0]} components, space {space.name} has {space.r} modules")
    if not T.definite:
        raise InvalidPointError(f"candidate T={T.T} is not positive definite")
    return values


class _Flow:
    def __init__(self, space: SpaceSpec, T: FloatArray, params: FlowParams) -> None:
        self.kernel = CurvatureKernel(space)
        self.T = T
        self.weights = self.kernel.d * T
        self.params = params

    def velocity(self, u: FloatArray) -> FloatArray:
        y = np.exp(u)
        return -y * self.kernel.grad(1.0 / y, self.T)

    def stiffness(self, u: FloatArray) -> float:
        """Spectral radius of the Jacobian of the velocity in u, by central differences."""
        shifts = STIFFNESS_STEP * np.eye(len(u))
        with np.errstate(over="ignore", invalid="ignore"):
            columns = [(self.velocity(u + e) - self.velocity(u - e)) / (2.0 * STIFFNESS_STEP) for e in shifts]
            radius = float(np.max(np.abs(np.linalg.eigvals(np.stack(columns, axis=1)))))
        return radius if math.isfinite(radius) else 0.0

    def project(self, y: FloatArray) -> FloatArray:
        return y / float(self.weights @ y)

    def state(self, y: FloatArray) -> Tuple[float, float]:
        x = 1.0 / y
        return float(self.kernel.scalar(x)), float(self.kernel.grad_norm(x, self.T))


def _near_boundary(y: FloatArray, tail: Sized, params: FlowParams) -> bool:
    if float(y.min()) <= params.boundary_eps:
        return True
    return len(tail) >= TREND_POINTS and float(y.min()) <= params.trend_ratio * float(y.max())


def flow(
    space: SpaceSpec,
    T: Candidate,
    start: MetricPoint,
    params: Optional[FlowParams] = None,
    *,
    record: bool = False,
    refine: bool = True,
) -> FlowResult:
    """Follow the ascent flow xdot = grad S|M_T from `start` with adaptive Heun steps.

    Every accepted step is rescaled back onto tr_g T = 1 and must not decrease S. The step
    size stays below STABILITY_BOUND over the spectral radius of the velocity Jacobian. A flow whose
    smallest coordinate keeps halving is diagnosed as divergent once min y / max y drops
    below `params.trend_ratio`, or once min y drops below `params.boundary_eps`.
    """
    params = params or FlowParams()
    values = _definite(space, T)
    state = _Flow(space, values, params)
    y = start.y
    if y.shape != (space.r,):
        raise InvalidPointError(f"start has {y.shape[0]} coordinates, space {space.name} has {space.r} modules")
    residual = abs(float(state.weights @ y) - 1.0)
    if residual > CONSTRAINT_TOL:
        raise ConstraintViolationError(residual, tol=CONSTRAINT_TOL)

    u = np.log(y)
    scalar, grad_norm = state.state(y)
    limit = math.inf
    h = params.dt
    t = 0.0
    steps = 0
    trajectory: List[TrajectoryRow] = []
    tail: "deque[FloatArray]" = deque([y.copy()], maxlen=_TAIL_LENGTH)
    tail_level = float(y.min())
    mark_step, mark_scalar, mark_grad = 0, scalar, grad_norm

    def row() -> TrajectoryRow:
        return TrajectoryRow(step=steps, t=t, y=[float(v) for v in np.exp(u)], scalar=scalar, grad_norm=grad_norm)

    def stalled(reason: str, *, settle: bool = True) -> FlowResult:
        if settle and refine and grad_norm <= params.stall_grad_tol:
            settled = _converged(space, T, state, np.exp(u), steps, trajectory, refine=True)
            if settled is not None:
                log.debug("flow stopped short at |grad| = %.3e (%s), settled by Newton", grad_norm, reason)
                return settled
        log.info("flow stalled after %d steps: %s (|grad| = %.3e)", steps, reason, grad_norm)
        return Stalled(
            point=MetricPoint.from_y(np.exp(u)),
            reason=reason,
            scalar=scalar,
            grad_norm=grad_norm,
            steps=steps,
            trajectory=trajectory,
        )

    if record:
        trajectory.append(row())

    while True:
        y = np.exp(u)
        if _near_boundary(y, tail, params):
            if tail_level > float(y.min()):
                tail.append(y.copy())
            diverged = diagnose_divergence(space, T, [MetricPoint.from_y(p) for p in tail], boundary_eps=params.boundary_eps)
            log.info("flow diverged after %d steps towards %s at level %.10g", steps, diverged.stratum.label, diverged.level)
            return model_copy(diverged, update={"steps": steps, "trajectory": trajectory})
        if grad_norm <= params.grad_tol * (1.0 + abs(scalar)):
            converged = _converged(space, T, state, y, steps, trajectory, refine=refine)
            if converged is not None:
                return converged
            return stalled("Newton refinement of the limit point failed", settle=False)
        if steps >= params.max_steps:
            return stalled("step budget exhausted")
        if params.max_time is not None and t >= params.max_time:
            return stalled("time budget exhausted")

        if steps % STIFFNESS_REFRESH == 0:
            radius = state.stiffness(u)
            limit = STABILITY_BOUND / radius if radius > 0 else math.inf
            h = min(h, limit)

        k1 = state.velocity(u)
        while True:
            if h < MIN_STEP:
                return stalled(f"step size collapsed below {MIN_STEP:g}")
            with np.errstate(over="ignore", invalid="ignore"):
                euler = u + h * k1
                heun = u + 0.5 * h * (k1 + state.velocity(euler))
                error = float(np.max(np.abs(heun - euler) / (params.atol + params.rtol * (1.0 + np.abs(heun)))))
            if not math.isfinite(error) or error > 1.0:
                h *= 0.2 if not math.isfinite(error) else max(0.2, 0.9 / math.sqrt(error))
                continue
            candidate = state.project(np.exp(heun))
            new_scalar, new_grad = state.state(candidate)
            if not math.isfinite(new_scalar) or new_scalar < scalar - 1e-13 * (1.0 + abs(scalar)):
                h *= 0.5
                continue
            break

        u = np.log(candidate)
        t += h
        steps += 1
        scalar, grad_norm = new_scalar, new_grad
        h *= 5.0 if error == 0 else min(5.0, 0.9 / math.sqrt(error))
        h = min(h, limit)
        if record:
            trajectory.append(row())

        if float(candidate.min()) <= _TAIL_FACTOR * tail_level:
            tail.append(candidate.copy())
            tail_level = float(candidate.min())

        if steps - mark_step >= params.stall_window:
            if scalar - mark_scalar <= 1e-14 * (1.0 + abs(scalar)) and grad_norm >= 0.999 * mark_grad:
                return stalled(f"no progress over {params.stall_window} steps")
            mark_step, mark_scalar, mark_grad = steps, scalar, grad_norm


def _converged(
    space: SpaceSpec,
    T: Candidate,
    state: _Flow,
    y: FloatArray,
    steps: int,
    trajectory: List[TrajectoryRow],
    *,
    refine: bool,
) -> Optional[Converged]:
    """The limit point, polished by Newton when `refine` is set; None when Newton lands elsewhere."""
    x = 1.0 / y
    if refine:
        refined = newton_critical(space, T, MetricPoint.from_x(x), degeneracy_tol=state.params.degeneracy_tol)
        if refined is None or float(np.max(np.abs(refined.point.x - x) / x)) > _REFINE_DISTANCE:
            log.debug("Newton refinement rejected near %s", list(x))
            return None
        x = refined.point.x
    scalar = float(state.kernel.scalar(x))
    grad_norm = float(state.kernel.grad_norm(x, state.T))
    spectrum = spectrum_at(state.kernel, x, state.T, degeneracy_tol=state.params.degeneracy_tol)
    log.info("flow converged after %d steps: S = %.12g, co-index %d", steps, scalar, spectrum.co_index)
    return Converged(
        point=MetricPoint.from_x(x),
        scalar=scalar,
        grad_norm=grad_norm,
        spectrum=spectrum,
        steps=steps,
        trajectory=trajectory,
    )


def diagnose_divergence(
    space: SpaceSpec,
    T: Candidate,
    tail: Sequence[MetricPoint],
    *,
    boundary_eps: float = BOUNDARY_EPS,
) -> Diverged:
    """Identify the limit stratum, level and fiber metric of a divergent sequence.

    A coordinate decays when it ends below `boundary_eps` or shrinks by a factor of at
    least 1/DECAY_RATIO over the tail. The level and the fiber coordinates are
    extrapolated linearly in the largest decaying coordinate.
    """
    values = _definite(space, T)
    if not tail:
        raise InvalidPointError("empty tail")
    kernel = CurvatureKernel(space)
    weights = kernel.d * values
    Y = np.array([p.y for p in tail], dtype=np.float64)
    if Y.shape[1] != space.r:
        raise InvalidPointError(f"tail points have {Y.shape[1]} coordinates, space {space.name} has {space.r} modules")
    Y = Y / (Y @ weights)[:, None]

    last = Y[-1]
    decaying = last <= boundary_eps
    if len(Y) > 1:
        decaying |= last <= DECAY_RATIO * Y[0]
    if not decaying.any():
        raise InvalidPointError(f"tail does not approach the boundary: min y = {float(last.min()):.3e}")
    fiber = [i + 1 for i in range(space.r) if not decaying[i]]
    if not fiber:
        raise InvalidPointError("every coordinate of the tail decays")

    stratum = make_stratum(space, fiber)
    if not stratum.is_subalgebra:
        raise DivergenceAnomalyError(
            f"divergent sequence with bounded scalar curvature approaches the Infinity stratum {stratum.label}",
            fiber=fiber,
        )

    scalars = kernel.scalar(1.0 / Y)
    scale = Y[:, decaying].max(axis=1)
    y_fiber = last[~decaying]
    level = float(scalars[-1])
    # extrapolate against the latest tail point that is clearly further from the boundary
    earlier = [k for k in range(len(Y) - 1) if scale[k] > 1.5 * scale[-1]]
    if earlier:
        k = earlier[-1]
        ratio = scale[-1] / (scale[k] - scale[-1])
        level = float(scalars[-1] - ratio * (scalars[k] - scalars[-1]))
        extrapolated = y_fiber - ratio * (Y[k, ~decaying] - y_fiber)
        if np.all(extrapolated > 0):
            y_fiber = extrapolated

    fiber_space = restrict_to_fiber(space, stratum)
    fiber_kernel = CurvatureKernel(fiber_space)
    T_fiber = values[stratum.index]
    y_fiber = y_fiber / float(fiber_kernel.d * T_fiber @ y_fiber)
    x_fiber = 1.0 / y_fiber
    gap = fiber_kernel.ricci(x_fiber) - level * T_fiber
    ps_residual = float(np.sqrt(fiber_kernel.inner(x_fiber, gap, gap)))

    match: Optional[AlphaMatch] = None
    for candidate in subalgebra_strata(space):
        value = alpha(space, T, candidate).value
        if match is None or abs(level - value) < match.distance:
            match = AlphaMatch(stratum=candidate, alpha=value, distance=abs(level - value))

    log.debug("diagnosed divergence towards %s: level %.10g, residual %.3e", stratum.label, level, ps_residual)
    return Diverged(
        stratum=stratum,
        level=level,
        fiber_point=MetricPoint.from_y(y_fiber),
        ps_residual=ps_residual,
        matched_alpha=match,
    )


def _newton_system(kernel: CurvatureKernel, T: FloatArray, v: FloatArray) -> Tuple[FloatArray, FloatArray, float]:
    """Residual [R - cT, tr_g T - 1] with c = <Ric, T>_g / <T, T>_g and its Jacobian in v = log x."""
    x = np.exp(v)
    d = kernel.d
    ricci = kernel.ricci(x)
    jac = kernel.jacobian(x)
    num = float(np.sum(d * ricci * T / x**2))
    den = float(np.sum(d * T**2 / x**2))
    c = num / den

    d_num = (d * T / x**2) @ jac - 2.0 * d * ricci * T / x**3
    d_den = -2.0 * d * T**2 / x**3
    d_c = (d_num - c * d_den) / den
    d_trace = -d * T / x**2

    residual = np.append(ricci - c * T, float(np.sum(d * T / x)) - 1.0)
    jacobian = np.vstack([jac - np.outer(T, d_c), d_trace]) * x[None, :]
    return residual, jacobian, c


def newton_critical(
    space: SpaceSpec,
    T: Candidate,
    start: MetricPoint,
    *,
    max_iter: int = NEWTON_MAX_ITER,
    tol: float = NEWTON_TOL,
    degeneracy_tol: float = DEGENERACY_TOL,
) -> Optional[CriticalPoint]:
    """Damped Newton on Ric(g) = cT, tr_g T = 1; None when the iteration does not converge."""
    values = _definite(space, T)
    kernel = CurvatureKernel(space)
    v = np.log(start.x)
    if v.shape != (space.r,):
        raise InvalidPointError(f"start has {v.shape[0]} coordinates, space {space.name} has {space.r} modules")

    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        residual, jacobian, c = _newton_system(kernel, values, v)
        norm = float(np.linalg.norm(residual))
        for iteration in range(max_iter):
            if norm <= tol:
                break
            step = np.linalg.lstsq(jacobian, -residual, rcond=None)[0]
            damping = 1.0
            trial, trial_residual, trial_jacobian, trial_c, trial_norm = v, residual, jacobian, c, norm
            for _ in range(NEWTON_MAX_HALVINGS):
                trial = v + damping * step
                if np.all(np.abs(trial) < 50.0):
                    trial_residual, trial_jacobian, trial_c = _newton_system(kernel, values, trial)
                    trial_norm = float(np.linalg.norm(trial_residual))
                    if math.isfinite(trial_norm) and trial_norm < norm:
                        break
                damping *= NEWTON_DAMPING
            else:
                log.debug("Newton line search failed at iteration %d, |F| = %.3e", iteration, norm)
                return None
            v, residual, jacobian, c, norm = trial, trial_residual, trial_jacobian, trial_c, trial_norm
        if not norm <= tol:
            log.debug("Newton did not converge in %d iterations, |F| = %.3e", max_iter, norm)
            return None
        # near a degenerate root Newton is only linear, keep taking full steps while they help
        for _ in range(NEWTON_POLISH):
            trial = v + np.linalg.lstsq(jacobian, -residual, rcond=None)[0]
            if not np.all(np.abs(trial) < 50.0):
                break
            trial_residual, trial_jacobian, trial_c = _newton_system(kernel, values, trial)
            trial_norm = float(np.linalg.norm(trial_residual))
            if not trial_norm < norm:
                break
            v, residual, jacobian, c, norm = trial, trial_residual, trial_jacobian, trial_c, trial_norm

    x = np.exp(v)
    x = x * float(kernel.trace(x, values))
    ricci = kernel.ricci(x)
    gap = ricci - c * values
    return CriticalPoint(
        point=MetricPoint.from_x(x),
        c=c,
        scalar=float(kernel.scalar(x)),
        residual=float(np.sqrt(kernel.inner(x, gap, gap))),
        spectrum=spectrum_at(kernel, x, values, degeneracy_tol=degeneracy_tol),
    )


def _same_root(point: CriticalPoint, root: CriticalPoint, tol: float) -> bool:
    """Whether two Newton roots are one critical point.

    Newton reaches a degenerate root only to about sqrt(machine epsilon), so next to a
    degenerate spectrum the coordinate gap is widened to sqrt(tol) and the levels must agree.
    """
    x, other = point.point.x, root.point.x
    gap = float(np.max(np.abs(x - other))) / float(np.max(np.abs(other)))
    if gap <= tol:
        return True
    degenerate = point.spectrum.degenerate or root.spectrum.degenerate
    return degenerate and gap <= math.sqrt(tol) and abs(point.scalar - root.scalar) <= tol * (1.0 + abs(root.scalar))


def _dedup(points: Iterable[Optional[CriticalPoint]], tol: float) -> List[CriticalPoint]:
    found = sorted((p for p in points if p is not None), key=lambda p: (-p.scalar, tuple(p.point.values)))
    roots: List[CriticalPoint] = []
    for point in found:
        if any(_same_root(point, root, tol) for root in roots):
            continue
        roots.append(point)
    return roots


def root_inventory(
    space: SpaceSpec,
    T: Candidate,
    *,
    starts: int = NEWTON_STARTS,
    seed: int = 0,
    threads: Optional[int] = None,
    log_range: Tuple[float, float] = NEWTON_RANGE,
    tol: float = DEDUP_TOL,
    degeneracy_tol: float = DEGENERACY_TOL,
) -> List[CriticalPoint]:
    """Critical points found by Newton from seeded log-uniform starts, deduplicated, highest S first.

    An empty inventory means no root was found, not that none exists.
    """
    values = _definite(space, T)
    kernel = CurvatureKernel(space)
    rng = np.random.default_rng(seed)
    lo, hi = math.log(log_range[0]), math.log(log_range[1])
    X = np.exp(rng.uniform(lo, hi, size=(starts, space.r)))
    X = X * kernel.trace(X, values)[:, None]

    def solve(x: FloatArray) -> Optional[CriticalPoint]:
        return newton_critical(space, T, MetricPoint.from_x(x), degeneracy_tol=degeneracy_tol)

    results = parallel_map(solve, list(X), threads)
    roots = _dedup((r for r in results if isinstance(r, CriticalPoint)), tol)
    log.info(
        "root inventory for T=%s: %d of %d starts converged, %d distinct roots",
        list(values),
        sum(isinstance(r, CriticalPoint) for r in results),
        starts,
        len(roots),
    )
    return roots
