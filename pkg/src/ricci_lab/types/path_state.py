from __future__ import annotations

from typing import List, Tuple

from .._models import BaseModel
from .space_spec import Stratum
from .metric_point import MetricPoint

__all__ = ["RelaxationRow", "PathState"]


class RelaxationRow(BaseModel):
    round: int

    inf_scalar: float

    argmin: int

    c_estimate: float


class PathState(BaseModel):
    nodes: List[MetricPoint]
    """Feasible y chart points; the first and last node are anchored next to their strata."""

    anchors: Tuple[Stratum, Stratum]

    c_estimate: float
    """Running sup over relaxation rounds of the minimum of S over the nodes."""

    argmin: int
    """Index of the node realizing the current minimum of S."""

    bracket: Tuple[float, float]
    """Interval of levels containing no alpha value of any subalgebra stratum."""

    rounds: int = 0

    converged: bool = False

    clamped: List[int] = []
    """Nodes pulled back into the simplex during relaxation."""

    telemetry: List[RelaxationRow] = []
