from __future__ import annotations

from typing import TYPE_CHECKING, Union, Sequence

from .types import Candidate, SpaceSpec
from .space_model import catalog

if TYPE_CHECKING:
    from ._client import RicciLab

SpaceLike = Union[str, SpaceSpec]
CandidateLike = Union[Candidate, Sequence[float]]


class SyncResource:
    _client: RicciLab

    def __init__(self, client: RicciLab) -> None:
        self._client = client

    @staticmethod
    def _space(space: SpaceLike) -> SpaceSpec:
        if isinstance(space, str):
            return catalog(space)
        return space

    @staticmethod
    def _candidate(T: CandidateLike) -> Candidate:
        if isinstance(T, Candidate):
            return T
        return Candidate(T=[float(t) for t in T])
