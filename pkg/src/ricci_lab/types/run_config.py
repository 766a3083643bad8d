from __future__ import annotations

from typing import Any, Dict, List, Optional
from typing_extensions import Literal

from .._types import OutputFormat
from .._models import BaseModel

__all__ = ["RunConfig", "RunManifest"]

Command = Literal["curvature", "levels", "flow", "saddle", "classify", "sweep", "image", "locus"]


class RunConfig(BaseModel):
    command: Command

    space: str
    """Catalog name, `generalized_wallach(d1,d2,d3,c123)`, or a path to a space document."""

    T: Optional[List[float]] = None

    x: Optional[List[float]] = None

    y: Optional[List[float]] = None

    params: Dict[str, Any] = {}
    """Command specific parameters, e.g. `grid`, `slice`, `n`, `rounds`."""

    seed: int = 0

    threads: Optional[int] = None

    output: Optional[str] = None

    format: OutputFormat = "json"


class RunManifest(BaseModel):
    config: RunConfig

    outputs: List[str]

    versions: Dict[str, str]

    wall_time: float

    exit_code: int
