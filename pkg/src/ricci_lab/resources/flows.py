from __future__ import annotations

from typing import List, Optional

from ..types import FlowResult, MetricPoint, CriticalPoint
from .._compat import model_copy
from ..dynamics import flow, newton_critical, root_inventory
from .._resource import SpaceLike, SyncResource, CandidateLike
from ..space_model import center

__all__ = ["Flows"]


class Flows(SyncResource):
    def run(
        self,
        space: SpaceLike,
        T: CandidateLike,
        start: Optional[MetricPoint] = None,
        *,
        record: bool = False,
    ) -> FlowResult:
        """Ascent flow from `start`, or from the center of M_T when no start is given."""
        spec = self._space(space)
        candidate = self._candidate(T)
        params = model_copy(self._client.flow_params, update={"degeneracy_tol": self._client.degeneracy_tol})
        return flow(spec, candidate, start or center(spec, candidate), params, record=record)

    def newton(self, space: SpaceLike, T: CandidateLike, start: MetricPoint) -> Optional[CriticalPoint]:
        return newton_critical(
            self._space(space),
            self._candidate(T),
            start,
            degeneracy_tol=self._client.degeneracy_tol,
        )

    def inventory(self, space: SpaceLike, T: CandidateLike) -> List[CriticalPoint]:
        return root_inventory(
            self._space(space),
            self._candidate(T),
            starts=self._client.starts,
            seed=self._client.seed,
            threads=self._client.threads,
            degeneracy_tol=self._client.degeneracy_tol,
        )
