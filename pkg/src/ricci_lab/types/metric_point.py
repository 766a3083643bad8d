from __future__ import annotations

import math
from typing import Any, List

import numpy as np

from .._types import Chart, FloatArray
from .._compat import PYDANTIC_V2
from .._models import BaseModel
from .._exceptions import InvalidPointError

__all__ = ["MetricPoint"]


class MetricPoint(BaseModel):
    """A diagonal invariant metric.

    In the `x` chart `values` are the eigenvalues x_i of g with respect to Q,
    in the `y` chart their reciprocals y_i = 1/x_i.
    """

    chart: Chart

    values: List[float]

    if PYDANTIC_V2:

        def model_post_init(self, __context: Any) -> None:
            self._check_positive()

    else:

        def __init__(self, **data: Any) -> None:
            super().__init__(**data)
            self._check_positive()

    def _check_positive(self) -> None:
        for value in self.values:
            if not math.isfinite(value) or value <= 0:
                raise InvalidPointError(f"non-positive coordinate {value!r} in {self.chart}={list(self.values)}")

    @classmethod
    def from_x(cls, values: object) -> "MetricPoint":
        return cls(chart="x", values=[float(v) for v in np.asarray(values, dtype=np.float64).ravel()])

    @classmethod
    def from_y(cls, values: object) -> "MetricPoint":
        return cls(chart="y", values=[float(v) for v in np.asarray(values, dtype=np.float64).ravel()])

    @property
    def x(self) -> FloatArray:
        values = np.asarray(self.values, dtype=np.float64)
        return values if self.chart == "x" else 1.0 / values

    @property
    def y(self) -> FloatArray:
        values = np.asarray(self.values, dtype=np.float64)
        return values if self.chart == "y" else 1.0 / values

    @property
    def r(self) -> int:
        return len(self.values)
