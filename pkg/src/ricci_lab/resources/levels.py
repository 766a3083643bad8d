from __future__ import annotations

from typing import List, Tuple

from ..types import LevelValue, LevelReport, CanonicalVariation
from .._resource import SpaceLike, SyncResource, CandidateLike
from ..invariants import beta, alpha, level_report, wallach_levels, optimal_variation
from ..space_model import IndexSet

__all__ = ["Levels"]


class Levels(SyncResource):
    def alpha(self, space: SpaceLike, T: CandidateLike, J: IndexSet) -> LevelValue:
        return alpha(self._space(space), self._candidate(T), J, starts=self._client.sup_starts)

    def beta(self, space: SpaceLike, T: CandidateLike, J: IndexSet) -> LevelValue:
        return beta(self._space(space), self._candidate(T), J, starts=self._client.sup_starts)

    def report(self, space: SpaceLike, T: CandidateLike) -> List[LevelReport]:
        """alpha, beta and beta - alpha for every subalgebra stratum."""
        return level_report(self._space(space), self._candidate(T), starts=self._client.sup_starts)

    def variation(self, space: SpaceLike, T: CandidateLike, J: IndexSet) -> CanonicalVariation:
        return optimal_variation(self._space(space), self._candidate(T), J, starts=self._client.sup_starts)

    def wallach(self, space: SpaceLike, T: CandidateLike) -> List[Tuple[float, float]]:
        return wallach_levels(self._space(space), self._candidate(T))
