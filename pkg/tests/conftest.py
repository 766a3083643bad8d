from __future__ import annotations

from typing import Iterator

import pytest

from ricci_lab import RicciLab, catalog
from ricci_lab.types import SpaceSpec

pytest.register_assert_rewrite("tests.utils")


@pytest.fixture(scope="session")
def wallach() -> SpaceSpec:
    return catalog("wallach_su3")


@pytest.fixture(scope="session")
def g2() -> SpaceSpec:
    return catalog("g2_u2")


@pytest.fixture(scope="session")
def f4() -> SpaceSpec:
    return catalog("f4_u3su2")


@pytest.fixture
def lab(monkeypatch: pytest.MonkeyPatch) -> Iterator[RicciLab]:
    monkeypatch.delenv("RICCI_LAB_THREADS", raising=False)
    monkeypatch.delenv("RICCI_LAB_SEED", raising=False)
    yield RicciLab(sup_starts=16, starts=16)
