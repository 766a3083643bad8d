from __future__ import annotations

import pytest

from ricci_lab import NOT_GIVEN, RicciLab, RicciLabError
from ricci_lab.types import FlowParams


class TestRicciLab:
    def test_copy(self, lab: RicciLab) -> None:
        copied = lab.copy()
        assert id(copied) != id(lab)
        assert copied.seed == lab.seed
        assert copied.starts == lab.starts

        copied = lab.copy(seed=7)
        assert copied.seed == 7
        assert lab.seed == 0

    def test_copy_default_options(self, lab: RicciLab) -> None:
        # options that have a default are overriden correctly
        copied = lab.copy(threads=4)
        assert copied.threads == 4
        assert lab.threads is None

        copied2 = copied.copy(threads=2)
        assert copied2.threads == 2
        assert copied.threads == 4

        # an explicit None unsets the option
        assert copied.copy(threads=None).threads is None
        assert copied.copy(threads=NOT_GIVEN).threads == 4

    def test_copy_flow_params(self, lab: RicciLab) -> None:
        params = FlowParams(rtol=1e-6)
        copied = lab.with_options(flow_params=params)
        assert copied.flow_params is params
        assert lab.flow_params.rtol == 1e-8

    def test_copy_keeps_resources_bound(self, lab: RicciLab) -> None:
        copied = lab.copy(seed=3)
        assert copied.regions._client is copied
        assert lab.regions._client is lab

    def test_threads_from_env(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv("RICCI_LAB_THREADS", "3")
        assert RicciLab().threads == 3
        assert RicciLab(threads=5).threads == 5

    def test_seed_from_env(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv("RICCI_LAB_SEED", " 42 ")
        assert RicciLab().seed == 42
        assert RicciLab(seed=1).seed == 1

        monkeypatch.setenv("RICCI_LAB_SEED", "")
        assert RicciLab().seed == 0

    def test_invalid_env(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv("RICCI_LAB_THREADS", "many")
        with pytest.raises(RicciLabError, match="RICCI_LAB_THREADS must be an integer"):
            RicciLab()

    def test_threads_must_be_positive(self, lab: RicciLab) -> None:
        with pytest.raises(RicciLabError, match="threads must be at least 1"):
            lab.copy(threads=0)

    def test_repr(self, lab: RicciLab) -> None:
        assert repr(lab.copy(threads=2, seed=9)) == "RicciLab(threads=2, seed=9, starts=16)"
