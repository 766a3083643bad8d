from __future__ import annotations

from typing import List

import numpy as np

from .._types import FloatArray
from .._models import BaseModel

__all__ = ["Candidate", "DiagTensor"]


class Candidate(BaseModel):
    """A diagonal invariant tensor T = sum T_i Q|m_i, the Ricci curvature to be prescribed up to scaling."""

    T: List[float]

    @property
    def definite(self) -> bool:
        return min(self.T) > 0

    @property
    def array(self) -> FloatArray:
        return np.asarray(self.T, dtype=np.float64)

    @classmethod
    def of(cls, values: object) -> "Candidate":
        return cls(T=[float(v) for v in np.asarray(values, dtype=np.float64).ravel()])


class DiagTensor(BaseModel):
    """A diagonal invariant symmetric tensor A = sum a_i Q|m_i with no sign requirement."""

    a: List[float]

    @property
    def array(self) -> FloatArray:
        return np.asarray(self.a, dtype=np.float64)

    @classmethod
    def of(cls, values: object) -> "DiagTensor":
        return cls(a=[float(v) for v in np.asarray(values, dtype=np.float64).ravel()])
