from __future__ import annotations

from typing import List, Optional
from typing_extensions import Literal

from .._models import BaseModel
from .space_spec import Stratum
from .metric_point import MetricPoint

__all__ = ["LevelValue", "LevelReport", "CanonicalVariation"]


class LevelValue(BaseModel):
    """A supremum of normalized scalar curvature over fiber (alpha) or base (beta) metrics."""

    value: float

    attained: bool
    """False when the supremum is only approached towards the boundary."""

    witness: Optional[MetricPoint] = None
    """Best metric found, y chart, normalized to unit trace; indexed over the fiber or base modules."""

    method: Literal["closed-form", "numeric"]


class LevelReport(BaseModel):
    stratum: Stratum

    alpha: float

    alpha_attained: bool

    alpha_witness: Optional[MetricPoint] = None

    beta: float

    beta_attained: bool

    beta_witness: Optional[MetricPoint] = None

    derivative_at_infinity: float
    """Slope of the scalar curvature along the optimal canonical variation at t = 0; has the sign of beta - alpha."""


class CanonicalVariation(BaseModel):
    """The family g_t obtained by shrinking the base of K/H -> G/H -> G/K while keeping tr_g T = 1.

    In the y chart it is the affine segment y_J = s(t) y_F, y_Jc = t y_B with s(t) = (1 - t T2*) / T1*.
    """

    stratum: Stratum

    r: int

    fiber: MetricPoint
    """y chart coordinates of g_F over the fiber modules."""

    base: MetricPoint
    """y chart coordinates of g_B over the base modules, constant on every base block."""

    fiber_trace: float
    """T1* = tr_{g_F} T restricted to the fiber."""

    base_trace: float
    """T2* = tr_{g_B} T restricted to the base."""

    fiber_scalar: float
    """S_F, scalar curvature of g_F on K/H."""

    base_scalar: float
    """S_B, scalar curvature of g_B on G/K."""

    a_norm: float
    """|A|, the O'Neill tensor term S_F + S_B - S(g_F + g_B)."""

    t_max: float

    T: List[float]

    def s(self, t: float) -> float:
        return (1.0 - t * self.base_trace) / self.fiber_trace
