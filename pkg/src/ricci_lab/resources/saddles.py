from __future__ import annotations

from typing import Tuple, Optional

from ..types import PathState, CriticalPoint
from .._constants import MAX_ROUNDS
from ..invariants import is_generalized_wallach
from .._resource import SpaceLike, SyncResource, CandidateLike
from ..space_model import IndexSet
from ..mountainpass import relax, lowest_stratum, extract_saddle, build_path_flag, build_path_wallach

__all__ = ["Saddles"]


class Saddles(SyncResource):
    def path(self, space: SpaceLike, T: CandidateLike, *, k_low: Optional[IndexSet] = None) -> PathState:
        """Initial path: two variations on generalized Wallach spaces, otherwise a segment from `k_low`.

        `k_low` defaults to the stratum with the lowest alpha.
        """
        spec = self._space(space)
        candidate = self._candidate(T)
        if k_low is None and is_generalized_wallach(spec):
            return build_path_wallach(spec, candidate)
        return build_path_flag(spec, candidate, k_low if k_low is not None else lowest_stratum(spec, candidate))

    def relax(self, space: SpaceLike, T: CandidateLike, path: PathState, *, rounds: int = MAX_ROUNDS) -> PathState:
        return relax(self._space(space), self._candidate(T), path, rounds=rounds)

    def extract(self, space: SpaceLike, T: CandidateLike, path: PathState) -> Optional[CriticalPoint]:
        return extract_saddle(self._space(space), self._candidate(T), path)

    def find(
        self,
        space: SpaceLike,
        T: CandidateLike,
        *,
        k_low: Optional[IndexSet] = None,
        rounds: int = MAX_ROUNDS,
    ) -> Tuple[Optional[CriticalPoint], PathState]:
        """Build, relax and extract in one call; the relaxed path is returned for inspection."""
        relaxed = self.relax(space, T, self.path(space, T, k_low=k_low), rounds=rounds)
        return self.extract(space, T, relaxed), relaxed
