from __future__ import annotations

from enum import Enum
from typing import Dict, List, Tuple, Optional
from typing_extensions import Literal

from .._models import BaseModel
from .metric_point import MetricPoint

__all__ = ["RegionKind", "Predicate", "RegionLabel", "GridSpec", "SweepRecord", "ImagePoint", "LocusPoint", "LocusSpec"]


class RegionKind(str, Enum):
    GLOBAL_MAX = "GlobalMax"
    SADDLE_BY_THM_B = "SaddleByThmB"
    SADDLE_BY_THM_C = "SaddleByThmC"
    MAX_AND_SADDLE = "MaxAndSaddle"
    NO_PREDICTION = "NoPrediction"
    INDEFINITE = "Indefinite"


class Predicate(BaseModel):
    name: str

    lhs: float

    relation: Literal["<", ">", "<=", ">="]

    rhs: float

    holds: bool

    def __str__(self) -> str:
        return f"{self.name}: {self.lhs:.6g} {self.relation} {self.rhs:.6g} is {self.holds}"


class RegionLabel(BaseModel):
    kind: RegionKind

    predicates: List[Predicate]
    """Every inequality evaluated while labelling, with its values."""

    @property
    def predicts_max(self) -> bool:
        return self.kind in (RegionKind.GLOBAL_MAX, RegionKind.MAX_AND_SADDLE)

    @property
    def predicts_saddle(self) -> bool:
        return self.kind in (RegionKind.SADDLE_BY_THM_B, RegionKind.SADDLE_BY_THM_C, RegionKind.MAX_AND_SADDLE)


class GridSpec(BaseModel):
    axes: Tuple[str, str]
    """Names of the swept coordinates: `x`/`y` for the Wallach plane, otherwise `T1`, `T2`, ..."""

    ranges: Tuple[Tuple[float, float], Tuple[float, float]]

    resolution: Tuple[int, int]

    fixed: Dict[str, float] = {}
    """Values of the remaining T components, e.g. `{"T3": 0.375, "T4": 1.0}`."""


class SweepRecord(BaseModel):
    coords: Tuple[float, float]

    T: List[float]

    definite: bool

    label: RegionKind

    predicates: List[Predicate] = []


class ImagePoint(BaseModel):
    x: List[float]

    ricci: List[float]

    projected: Optional[List[float]] = None
    """Plane coordinates of the normalized candidate; absent when the normalization is undefined."""

    definite: bool

    region: Optional[RegionKind] = None


class LocusPoint(BaseModel):
    point: MetricPoint

    projected: List[float]

    sigma_min: float
    """Smallest singular value of dRic after removing the radial direction, relative to the largest."""

    sigma_gap: float
    """sigma_{r-2} / sigma_{r-1}; large when the rank drop is clean."""


class LocusSpec(BaseModel):
    mode: Literal["closed-form", "continuation"] = "closed-form"

    samples: int = 50
    """Parameter values per branch in closed-form mode."""

    t_range: Tuple[float, float] = (0.2, 5.0)

    start: Optional[List[float]] = None
    """Continuation start in the x chart with x_r = 1; defaults to a point of the first closed-form branch."""

    free: Tuple[int, int] = (1, 2)
    """The two coordinates varied by continuation, 1-based; the others stay at their start values."""

    step: float = 1e-2

    max_points: int = 200

    bound: float = 50.0
    """Continuation stops when a free coordinate leaves (1/bound, bound)."""
