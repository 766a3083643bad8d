from __future__ import annotations

from typing import Dict, List, Tuple, Union, Sequence
from typing_extensions import Literal

import numpy as np

from .._types import FloatArray
from .._models import BaseModel

__all__ = ["ModuleSpec", "TripleSpec", "SpaceDocument", "SpaceSpec", "Stratum"]


class ModuleSpec(BaseModel):
    dim: int
    """Dimension d_i of the irreducible isotropy module."""

    b: Union[float, str]
    """Killing constant, B restricted to the module equals -b Q. Numbers or exact fractions such as `"1/3"`."""


class TripleSpec(BaseModel):
    i: int
    j: int
    k: int
    """1-based module indices, in any order."""

    value: Union[float, str]


class SpaceDocument(BaseModel):
    """Wire form of a homogeneous space, as stored in JSON documents and the bundled catalog."""

    name: str

    modules: List[ModuleSpec]

    triples: List[TripleSpec] = []

    base_partitions: Dict[str, List[List[int]]] = {}
    """Keyed by the subalgebra stratum written as a sorted comma separated list, e.g. `"1,3"`."""


class Stratum(BaseModel):
    J: Tuple[int, ...]
    """Sorted 1-based module indices spanning the stratum."""

    kind: Literal["Subalgebra", "Infinity"]

    @property
    def label(self) -> str:
        return "{" + ",".join(str(j) for j in self.J) + "}"

    @property
    def key(self) -> str:
        return ",".join(str(j) for j in self.J)

    @property
    def index(self) -> List[int]:
        """0-based indices, for array access."""
        return [j - 1 for j in self.J]

    @property
    def is_subalgebra(self) -> bool:
        return self.kind == "Subalgebra"

    def complement(self, r: int) -> List[int]:
        """0-based indices of the base modules."""
        fiber = set(self.index)
        return [i for i in range(r) if i not in fiber]


class SpaceSpec(BaseModel):
    name: str

    d: List[int]
    """Module dimensions."""

    b: List[float]
    """Killing constants."""

    triples: Dict[str, float]
    """Nonzero structure constants keyed by the sorted 1-based triple, e.g. `"1,1,2"`."""

    base_partitions: Dict[str, List[List[int]]] = {}

    @property
    def r(self) -> int:
        return len(self.d)

    def triple(self, i: int, j: int, k: int) -> float:
        """Structure constant [ijk] for 1-based indices in any order."""
        return self.triples.get(",".join(str(n) for n in sorted((i, j, k))), 0.0)

    def partition(self, J: Sequence[int]) -> List[List[int]]:
        """Blocks of the base modules for the 1-based stratum `J`; singleton blocks when none were supplied."""
        key = ",".join(str(j) for j in sorted(J))
        blocks = self.base_partitions.get(key)
        if blocks is not None:
            return [sorted(block) for block in blocks]
        fiber = set(J)
        return [[i] for i in range(1, self.r + 1) if i not in fiber]

    def dims(self) -> FloatArray:
        return np.asarray(self.d, dtype=np.float64)

    def killing(self) -> FloatArray:
        return np.asarray(self.b, dtype=np.float64)

    def structure_tensor(self) -> FloatArray:
        """Fully symmetric r x r x r array of structure constants, 0-based."""
        r = self.r
        tensor = np.zeros((r, r, r), dtype=np.float64)
        for key, value in self.triples.items():
            i, j, k = (int(n) - 1 for n in key.split(","))
            for a, b, c in ((i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)):
                tensor[a, b, c] = value
        return tensor
