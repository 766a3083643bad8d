from __future__ import annotations

from typing import List, Union, Optional
from typing_extensions import Literal, Annotated

import pydantic

from .._models import BaseModel
from .._constants import (
    HEUN_ATOL,
    HEUN_RTOL,
    TREND_RATIO,
    BOUNDARY_EPS,
    STALL_WINDOW,
    FLOW_GRAD_TOL,
    DEGENERACY_TOL,
    FLOW_MAX_STEPS,
    FLOW_STALL_GRAD_TOL,
)
from .spectrum import Spectrum
from .space_spec import Stratum
from .metric_point import MetricPoint

__all__ = [
    "FlowParams",
    "TrajectoryRow",
    "AlphaMatch",
    "Converged",
    "Diverged",
    "Stalled",
    "FlowResult",
    "CriticalPoint",
]


class FlowParams(BaseModel):
    dt: float = 1e-2
    """Initial step size."""

    rtol: float = HEUN_RTOL
    """Relative tolerance of the embedded Euler/Heun error estimate."""

    atol: float = HEUN_ATOL

    max_steps: int = FLOW_MAX_STEPS

    grad_tol: float = FLOW_GRAD_TOL
    """Convergence threshold on |grad|_g, relative to 1 + |S|."""

    stall_grad_tol: float = FLOW_STALL_GRAD_TOL
    """A flow that stops making progress with |grad|_g below this value is handed to Newton refinement."""

    boundary_eps: float = BOUNDARY_EPS
    """A y coordinate below this value counts as having reached the boundary of the simplex."""

    trend_ratio: float = TREND_RATIO
    """Once min y / max y falls below this ratio after steady halvings of min y, the flow is diagnosed as divergent."""

    stall_window: int = STALL_WINDOW
    """Number of accepted steps without progress in S or |grad| after which the flow is declared stalled."""

    max_time: Optional[float] = None

    degeneracy_tol: float = DEGENERACY_TOL
    """Relative eigenvalue threshold below which the spectrum at a limit point is flagged degenerate."""


class TrajectoryRow(BaseModel):
    step: int

    t: float

    y: List[float]

    scalar: float

    grad_norm: float


class AlphaMatch(BaseModel):
    stratum: Stratum

    alpha: float

    distance: float
    """|lambda - alpha|."""


class Converged(BaseModel):
    status: Literal["converged"] = "converged"

    point: MetricPoint

    scalar: float

    grad_norm: float

    spectrum: Spectrum

    steps: int

    trajectory: List[TrajectoryRow] = []


class Diverged(BaseModel):
    status: Literal["diverged"] = "diverged"

    stratum: Stratum
    """Limit stratum, spanned by the modules whose y coordinates stay bounded away from zero."""

    level: float
    """lambda, the extrapolated limit of S along the tail."""

    fiber_point: MetricPoint
    """Limit fiber metric, y chart over the stratum's modules, normalized to tr_{g_F} T|F = 1."""

    ps_residual: float
    """|Ric(g_F) - lambda T|F|_{g_F} on the fiber space."""

    matched_alpha: Optional[AlphaMatch] = None

    steps: int = 0

    trajectory: List[TrajectoryRow] = []


class Stalled(BaseModel):
    status: Literal["stalled"] = "stalled"

    point: MetricPoint

    reason: str

    scalar: float

    grad_norm: float

    steps: int

    trajectory: List[TrajectoryRow] = []


FlowResult = Annotated[Union[Converged, Diverged, Stalled], pydantic.Field(discriminator="status")]


class CriticalPoint(BaseModel):
    point: MetricPoint
    """x chart, on the constraint surface."""

    c: float
    """Ric(g) = c T; equals S(g) on the constraint surface."""

    scalar: float

    residual: float
    """|Ric(g) - c T|_g at the returned point."""

    spectrum: Spectrum
