from __future__ import annotations

from typing import List

from .._models import BaseModel

__all__ = ["Spectrum"]


class Spectrum(BaseModel):
    eigenvalues: List[float]
    """Eigenvalues of the constrained Hessian, ascending."""

    co_index: int
    """Number of eigenvalues above the degeneracy tolerance."""

    degenerate: bool

    tolerance: float
    """Threshold below which an eigenvalue counts as zero."""
