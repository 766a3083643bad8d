from __future__ import annotations

from typing import List, Tuple, Optional

from ..types import GridSpec, LocusSpec, ImagePoint, LocusPoint, RegionLabel, SweepRecord
from .._types import SampleMode
from ..classify import sweep_plane, region_label, degenerate_locus, ricci_image_sample
from .._resource import SpaceLike, SyncResource, CandidateLike

__all__ = ["Regions"]


class Regions(SyncResource):
    def label(self, space: SpaceLike, T: CandidateLike) -> RegionLabel:
        return region_label(self._space(space), self._candidate(T), starts=self._client.sup_starts)

    def sweep(self, space: SpaceLike, grid: GridSpec) -> List[SweepRecord]:
        return sweep_plane(self._space(space), grid, threads=self._client.threads, starts=self._client.sup_starts)

    def image(
        self,
        space: SpaceLike,
        n: int,
        log_range: Tuple[float, float] = (1.0 / 400.0, 400.0),
        *,
        mode: SampleMode = "log-uniform",
        label_regions: bool = False,
    ) -> List[ImagePoint]:
        """Seeded with the client's seed."""
        return ricci_image_sample(
            self._space(space),
            n,
            log_range,
            self._client.seed,
            mode=mode,
            label_regions=label_regions,
            threads=self._client.threads,
        )

    def locus(self, space: SpaceLike, spec: Optional[LocusSpec] = None) -> List[LocusPoint]:
        return degenerate_locus(self._space(space), spec)
