from __future__ import annotations

from typing_extensions import Literal, TypeAlias

import numpy as np
import numpy.typing as npt

FloatArray: TypeAlias = npt.NDArray[np.float64]
"""Coordinates, coefficients or batches thereof; the last axis always runs over modules."""

Chart = Literal["x", "y"]
OutputFormat = Literal["json", "csv", "svg"]
SampleMode = Literal["log-uniform", "uniform"]


class NotGiven:
    """
    A sentinel singleton class used to distinguish omitted keyword arguments
    from those passed in with the value None (which may have different behavior).

    For example:

    ```py
    lab.copy(threads=None)  # unset, fall back to RICCI_LAB_THREADS or a single thread
    lab.copy()  # keep the current thread count
    ```
    """

    def __bool__(self) -> Literal[False]:
        return False

    def __repr__(self) -> str:
        return "NOT_GIVEN"


NOT_GIVEN = NotGiven()
