from __future__ import annotations

from typing import List, Sequence

from ._utils import quote, human_join

__all__ = [
    "RicciLabError",
    "SpaceValidationError",
    "UnknownSpaceError",
    "InvalidPointError",
    "InfeasibleError",
    "ConstraintViolationError",
    "NotSubalgebraError",
    "NotCriticalError",
    "HypothesisError",
    "ContinuationError",
    "InvalidGridError",
    "NoResultError",
    "DivergenceAnomalyError",
]


class RicciLabError(Exception):
    message: str

    exit_code: int = 2
    """Process exit code used by the command line front end."""

    def __init__(self, message: str) -> None:
        super().__init__(message)
        self.message = message


class SpaceValidationError(RicciLabError):
    """Raised when a space document is malformed or violates a structural invariant."""


class UnknownSpaceError(RicciLabError):
    name: str

    def __init__(self, name: str, *, known: Sequence[str]) -> None:
        super().__init__(f"unknown space {name!r}; expected {human_join([quote(k) for k in known])}")
        self.name = name


class InvalidPointError(RicciLabError):
    """Raised for metric coordinates that are not strictly positive and finite, or have the wrong length."""


class InfeasibleError(RicciLabError):
    """Raised when the trace constraint cannot be met with positive coordinates."""


class ConstraintViolationError(RicciLabError):
    residual: float

    def __init__(self, residual: float, *, tol: float) -> None:
        super().__init__(f"point is off the constraint surface: |tr_g T - 1| = {residual:.3e} > {tol:.1e}")
        self.residual = residual


class NotSubalgebraError(RicciLabError):
    def __init__(self, label: str) -> None:
        super().__init__(f"stratum {label} is not a subalgebra stratum")


class NotCriticalError(RicciLabError):
    grad_norm: float

    def __init__(self, grad_norm: float, *, tol: float) -> None:
        super().__init__(f"point is not critical: |grad| = {grad_norm:.3e} > {tol:.1e}")
        self.grad_norm = grad_norm


class HypothesisError(RicciLabError):
    """Raised when the hypotheses of an existence construction fail.

    `failed` lists one human readable line per inequality that does not hold,
    including the evaluated values.
    """

    failed: List[str]

    def __init__(self, message: str, *, failed: Sequence[str]) -> None:
        super().__init__(f"{message}: " + "; ".join(failed) if failed else message)
        self.failed = list(failed)


class ContinuationError(RicciLabError):
    """Raised when a continuation step cannot be corrected back onto the traced locus."""


class InvalidGridError(RicciLabError):
    """Raised for sweep grids with unknown axes, empty ranges or fewer than two points per axis."""


class NoResultError(RicciLabError):
    exit_code = 3


class DivergenceAnomalyError(RicciLabError):
    """Raised when a divergent sequence with bounded scalar curvature approaches an Infinity stratum.

    Bounded divergent sequences only accumulate at subalgebra strata, so this signals a numerical failure.
    """

    exit_code = 4

    fiber: List[int]

    def __init__(self, message: str, *, fiber: Sequence[int]) -> None:
        super().__init__(message)
        self.fiber = list(fiber)
