from __future__ import annotations

import pytest

from ricci_lab import RicciLab, HypothesisError
from ricci_lab.types import PathState

SADDLE = [0.15, 0.15, 0.7]
G2_SADDLE = [2.0, 0.1, 1.0]


class TestSaddles:
    client = RicciLab(starts=16, sup_starts=16)

    def test_method_path_wallach(self) -> None:
        path = self.client.saddles.path("wallach_su3", SADDLE)
        assert isinstance(path, PathState)
        assert [s.label for s in path.anchors] == ["{1}", "{2}"]

    def test_method_path_flag(self) -> None:
        path = self.client.saddles.path("g2_u2", G2_SADDLE)
        assert [s.label for s in path.anchors] == ["{3}", "{2}"]

    def test_method_path_with_k_low(self) -> None:
        with pytest.raises(HypothesisError):
            self.client.saddles.path("g2_u2", G2_SADDLE, k_low=[2])

    def test_method_relax(self) -> None:
        path = self.client.saddles.path("wallach_su3", SADDLE)
        relaxed = self.client.saddles.relax("wallach_su3", SADDLE, path, rounds=3)
        assert relaxed.rounds == 3
        assert len(relaxed.telemetry) == 3
        assert relaxed.c_estimate >= path.c_estimate

    @pytest.mark.slow
    def test_method_find(self) -> None:
        saddle, relaxed = self.client.saddles.find("wallach_su3", SADDLE)
        assert relaxed.rounds > 0
        assert saddle is not None
        assert saddle.spectrum.co_index <= 1
