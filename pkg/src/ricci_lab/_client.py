from __future__ import annotations

import os
from typing import Union, Optional

from . import resources
from ._types import NOT_GIVEN, NotGiven
from .types import FlowParams
from ._utils import coerce_integer
from ._constants import (
    ENV_SEED,
    SUP_STARTS,
    ENV_THREADS,
    DEFAULT_SEED,
    NEWTON_STARTS,
    DEGENERACY_TOL,
)
from ._exceptions import RicciLabError

__all__ = ["RicciLab", "Client"]


def _env_int(name: str) -> Optional[int]:
    value = os.environ.get(name)
    if value is None or not value.strip():
        return None
    try:
        return coerce_integer(value.strip())
    except ValueError as exc:
        raise RicciLabError(f"{name} must be an integer, got {value!r}") from exc


class RicciLab:
    levels: resources.Levels
    flows: resources.Flows
    saddles: resources.Saddles
    regions: resources.Regions

    # client options
    threads: Optional[int]
    seed: int
    flow_params: FlowParams
    degeneracy_tol: float
    starts: int
    sup_starts: int

    def __init__(
        self,
        *,
        threads: Optional[int] = None,
        seed: Optional[int] = None,
        flow_params: Optional[FlowParams] = None,
        degeneracy_tol: float = DEGENERACY_TOL,
        starts: int = NEWTON_STARTS,
        sup_starts: int = SUP_STARTS,
    ) -> None:
        """Construct a new lab instance.

        This automatically infers the following arguments from their corresponding environment variables if they are not provided:
        - `threads` from `RICCI_LAB_THREADS`
        - `seed` from `RICCI_LAB_SEED`
        """
        if threads is None:
            threads = _env_int(ENV_THREADS)
        if threads is not None and threads < 1:
            raise RicciLabError(f"threads must be at least 1, got {threads}")
        self.threads = threads

        if seed is None:
            seed = _env_int(ENV_SEED)
        self.seed = DEFAULT_SEED if seed is None else seed

        self.flow_params = flow_params or FlowParams()
        self.degeneracy_tol = degeneracy_tol
        self.starts = starts
        self.sup_starts = sup_starts

        self.levels = resources.Levels(self)
        self.flows = resources.Flows(self)
        self.saddles = resources.Saddles(self)
        self.regions = resources.Regions(self)

    def copy(
        self,
        *,
        threads: Union[int, None, NotGiven] = NOT_GIVEN,
        seed: Union[int, NotGiven] = NOT_GIVEN,
        flow_params: Union[FlowParams, NotGiven] = NOT_GIVEN,
        degeneracy_tol: Union[float, NotGiven] = NOT_GIVEN,
        starts: Union[int, NotGiven] = NOT_GIVEN,
        sup_starts: Union[int, NotGiven] = NOT_GIVEN,
    ) -> RicciLab:
        """Create a new lab instance re-using the same options given to the current one with optional overriding."""
        return self.__class__(
            threads=self.threads if isinstance(threads, NotGiven) else threads,
            seed=self.seed if isinstance(seed, NotGiven) else seed,
            flow_params=self.flow_params if isinstance(flow_params, NotGiven) else flow_params,
            degeneracy_tol=self.degeneracy_tol if isinstance(degeneracy_tol, NotGiven) else degeneracy_tol,
            starts=self.starts if isinstance(starts, NotGiven) else starts,
            sup_starts=self.sup_starts if isinstance(sup_starts, NotGiven) else sup_starts,
        )

    # Alias for `copy` for nicer inline usage, e.g.
    # lab.with_options(threads=8).regions.sweep(...)
    with_options = copy

    def __repr__(self) -> str:
        return f"RicciLab(threads={self.threads}, seed={self.seed}, starts={self.starts})"


Client = RicciLab
