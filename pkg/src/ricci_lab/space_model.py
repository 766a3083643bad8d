"""Homogeneous space data: documents, the catalog, strata and chart conversions.

Spaces are described by the module dimensions d_i, the Killing constants b_i and the
symmetric structure constants [ijk]. Index sets are 1-based at this surface.
"""

from __future__ import annotations

import json
import math
import logging
import itertools
from typing import Dict, List, Tuple, Union, Mapping, Iterable, Optional, Sequence
from fractions import Fraction

import numpy as np
import pydantic

from ._types import FloatArray
from ._utils import coerce_float, parse_index_set, format_index_set
from ._compat import parse_obj
from ._catalog import CATALOG_NAMES, get_document
from .types import Stratum, Candidate, SpaceSpec, MetricPoint, SpaceDocument
from ._exceptions import (
    InfeasibleError,
    InvalidPointError,
    NotSubalgebraError,
    UnknownSpaceError,
    SpaceValidationError,
)

__all__ = [
    "load_space",
    "catalog",
    "generalized_wallach",
    "enumerate_strata",
    "subalgebra_strata",
    "make_stratum",
    "restrict_to_fiber",
    "restrict_to_base",
    "base_blocks",
    "x_to_y",
    "y_to_x",
    "solve_constraint",
    "normalize",
    "center",
    "same_structure",
]

log: logging.Logger = logging.getLogger(__name__)

_TRIPLE_MATCH_TOL = 1e-12

IndexSet = Union[Stratum, Iterable[int]]


def _exact(value: Union[float, str], *, what: str) -> float:
    if isinstance(value, str):
        try:
            parsed = float(Fraction(value.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise SpaceValidationError(f"{what}: cannot parse {value!r} as a number") from exc
    else:
        parsed = float(value)
    if not math.isfinite(parsed):
        raise SpaceValidationError(f"{what}: value {value!r} is not finite")
    return parsed


def load_space(document: Union[str, Mapping[str, object], SpaceDocument]) -> SpaceSpec:
    """Validate a space document and build the `SpaceSpec` it describes.

    Triples are canonicalized to sorted keys; listing a permutation of a triple twice is
    allowed as long as both entries carry the same value.
    """
    if isinstance(document, SpaceDocument):
        doc = document
    else:
        if isinstance(document, str):
            try:
                raw: object = json.loads(document)
            except json.JSONDecodeError as exc:
                raise SpaceValidationError(f"malformed document: {exc}") from exc
        else:
            raw = document
        try:
            doc = parse_obj(SpaceDocument, raw)
        except pydantic.ValidationError as exc:
            raise SpaceValidationError(f"malformed document: {exc}") from exc

    r = len(doc.modules)
    if r == 0:
        raise SpaceValidationError(f"space {doc.name!r} has no modules")

    d: List[int] = []
    b: List[float] = []
    for n, module in enumerate(doc.modules, start=1):
        if module.dim < 1:
            raise SpaceValidationError(f"module {n}: dimension must be a positive integer, got {module.dim}")
        value = _exact(module.b, what=f"module {n}")
        if value < 0:
            raise SpaceValidationError(f"module {n}: negative Killing constant {value}")
        d.append(module.dim)
        b.append(value)
    if not any(value > 0 for value in b):
        raise SpaceValidationError("flat space excluded: all Killing constants vanish")

    triples: Dict[str, float] = {}
    for entry in doc.triples:
        indices = (entry.i, entry.j, entry.k)
        if any(i < 1 or i > r for i in indices):
            raise SpaceValidationError(f"triple {indices}: indices must lie in 1..{r}")
        value = _exact(entry.value, what=f"triple {indices}")
        if value < 0:
            raise SpaceValidationError(f"triple {indices}: negative structure constant {value}")
        key = format_index_set(indices)
        previous = triples.get(key)
        if previous is not None and abs(previous - value) > _TRIPLE_MATCH_TOL * max(1.0, abs(previous)):
            raise SpaceValidationError(f"triple [{key}] listed with conflicting values {previous} and {value}")
        triples[key] = value
    triples = {key: value for key, value in triples.items() if value != 0}

    partitions: Dict[str, List[List[int]]] = {}
    for key, blocks in doc.base_partitions.items():
        J = _parse_partition_key(key, r)
        complement = [i for i in range(1, r + 1) if i not in J]
        seen: List[int] = []
        for block in blocks:
            if not block:
                raise SpaceValidationError(f"bad partition for J={{{key}}}: empty block")
            for i in block:
                if i not in complement:
                    raise SpaceValidationError(f"bad partition for J={{{key}}}: {i} is not a base module")
                if i in seen:
                    raise SpaceValidationError(f"bad partition for J={{{key}}}: blocks overlap at {i}")
                seen.append(i)
        if sorted(seen) != complement:
            missing = sorted(set(complement) - set(seen))
            raise SpaceValidationError(f"bad partition for J={{{key}}}: modules {missing} are not covered")
        partitions[format_index_set(J)] = [sorted(block) for block in blocks]

    space = SpaceSpec(name=doc.name, d=d, b=b, triples=triples, base_partitions=partitions)
    _check_partitions(space)
    log.debug("loaded space %s with r=%d and %d nonzero triples", space.name, r, len(triples))
    return space


def _parse_partition_key(key: str, r: int) -> Tuple[int, ...]:
    try:
        J = parse_index_set(key)
    except ValueError as exc:
        raise SpaceValidationError(f"bad partition key {key!r}") from exc
    if not J or len(J) >= r or J[0] < 1 or J[-1] > r:
        raise SpaceValidationError(f"bad partition key {key!r}: expected a nonempty proper subset of 1..{r}")
    return J


def _check_partitions(space: SpaceSpec) -> None:
    # base metrics must be constant on modules coupled through the fiber, otherwise the
    # submersion formula for the scalar curvature picks up extra terms
    tensor = space.structure_tensor()
    for key, blocks in space.base_partitions.items():
        stratum = make_stratum(space, parse_index_set(key))
        if not stratum.is_subalgebra:
            log.warning("%s: base partition given for %s which is not a subalgebra stratum", space.name, stratum.label)
            continue
        block_of = {i: n for n, block in enumerate(blocks) for i in block}
        for j in stratum.index:
            for k, l in itertools.combinations(stratum.complement(space.r), 2):
                if tensor[j, k, l] > 0 and block_of[k + 1] != block_of[l + 1]:
                    log.warning(
                        "%s: partition for %s separates modules %d and %d coupled by [%d%d%d]",
                        space.name,
                        stratum.label,
                        k + 1,
                        l + 1,
                        j + 1,
                        k + 1,
                        l + 1,
                    )


def catalog(name: str) -> SpaceSpec:
    """One of the bundled example spaces, or `generalized_wallach(d1,d2,d3,c123)`."""
    name = name.strip()
    if name.startswith("generalized_wallach"):
        args = name[len("generalized_wallach") :].strip("():= ")
        try:
            d1, d2, d3, c123 = (coerce_float(part) for part in args.split(","))
        except ValueError as exc:
            raise UnknownSpaceError(name, known=["generalized_wallach(d1,d2,d3,c123)"]) from exc
        return generalized_wallach(int(d1), int(d2), int(d3), c123)
    if name not in CATALOG_NAMES:
        raise UnknownSpaceError(name, known=[*CATALOG_NAMES, "generalized_wallach(d1,d2,d3,c123)"])
    return load_space(get_document(name))


def generalized_wallach(d1: int, d2: int, d3: int, c123: float) -> SpaceSpec:
    """Three modules with [123] the only nonzero structure constant and Q = -B."""
    document = {
        "name": f"generalized_wallach({d1},{d2},{d3},{c123:g})",
        "modules": [{"dim": d1, "b": 1}, {"dim": d2, "b": 1}, {"dim": d3, "b": 1}],
        "triples": [{"i": 1, "j": 2, "k": 3, "value": c123}],
        "base_partitions": {"1": [[2, 3]], "2": [[1, 3]], "3": [[1, 2]]},
    }
    return load_space(document)


def _is_subalgebra(tensor: FloatArray, J: Sequence[int], complement: Sequence[int]) -> bool:
    if not complement:
        return True
    block = tensor[np.ix_(J, J, complement)]
    return not bool(np.any(block > 0))


def make_stratum(space: SpaceSpec, J: IndexSet) -> Stratum:
    """The stratum spanned by the 1-based indices `J`, with its kind determined from the structure constants."""
    if isinstance(J, Stratum):
        J = J.J
    indices = tuple(sorted(set(int(j) for j in J)))
    if not indices or len(indices) >= space.r or indices[0] < 1 or indices[-1] > space.r:
        raise SpaceValidationError(f"J={set(indices)} is not a nonempty proper subset of 1..{space.r}")
    zero_based = [j - 1 for j in indices]
    complement = [i for i in range(space.r) if i not in zero_based]
    subalgebra = _is_subalgebra(space.structure_tensor(), zero_based, complement)
    return Stratum(J=indices, kind="Subalgebra" if subalgebra else "Infinity")


def enumerate_strata(space: SpaceSpec) -> List[Stratum]:
    """All 2^r - 2 strata ordered by size, then lexicographically."""
    tensor = space.structure_tensor()
    strata: List[Stratum] = []
    for size in range(1, space.r):
        for J in itertools.combinations(range(space.r), size):
            complement = [i for i in range(space.r) if i not in J]
            kind = "Subalgebra" if _is_subalgebra(tensor, J, complement) else "Infinity"
            strata.append(Stratum(J=tuple(j + 1 for j in J), kind=kind))
    return strata


def subalgebra_strata(space: SpaceSpec) -> List[Stratum]:
    return [stratum for stratum in enumerate_strata(space) if stratum.is_subalgebra]


def _require_subalgebra(space: SpaceSpec, J: IndexSet) -> Stratum:
    stratum = make_stratum(space, J)
    if not stratum.is_subalgebra:
        raise NotSubalgebraError(stratum.label)
    return stratum


def restrict_to_fiber(space: SpaceSpec, J: IndexSet) -> SpaceSpec:
    """The fiber K/H over the modules in `J` with Killing constants of K.

    b_j of K loses the bracket contributions that leave K:
    bbar_j = b_j - (1/d_j) * sum over ordered (k, l) in Jc x Jc of [jkl].
    """
    stratum = _require_subalgebra(space, J)
    tensor = space.structure_tensor()
    fiber = stratum.index
    complement = stratum.complement(space.r)

    b: List[float] = []
    for j in fiber:
        loss = float(tensor[np.ix_([j], complement, complement)].sum()) / space.d[j]
        value = space.b[j] - loss
        # rounding can push an exact zero slightly negative
        b.append(0.0 if abs(value) < 1e-14 else value)

    position = {j: n for n, j in enumerate(fiber, start=1)}
    triples: Dict[str, float] = {}
    for key, value in space.triples.items():
        indices = [int(n) - 1 for n in key.split(",")]
        if all(i in position for i in indices):
            triples[format_index_set(position[i] for i in indices)] = value

    return SpaceSpec(
        name=f"{space.name}/fiber{stratum.label}",
        d=[space.d[j] for j in fiber],
        b=b,
        triples=triples,
    )


def restrict_to_base(space: SpaceSpec, J: IndexSet) -> SpaceSpec:
    """Formal space over the base modules Jc whose scalar curvature is that of the base G/K.

    Killing constants stay those of G and only triples inside Jc survive.
    """
    stratum = _require_subalgebra(space, J)
    complement = stratum.complement(space.r)
    position = {i: n for n, i in enumerate(complement, start=1)}

    triples: Dict[str, float] = {}
    for key, value in space.triples.items():
        indices = [int(n) - 1 for n in key.split(",")]
        if all(i in position for i in indices):
            triples[format_index_set(position[i] for i in indices)] = value

    return SpaceSpec(
        name=f"{space.name}/base{stratum.label}",
        d=[space.d[i] for i in complement],
        b=[space.b[i] for i in complement],
        triples=triples,
    )


def base_blocks(space: SpaceSpec, J: IndexSet) -> List[List[int]]:
    """Base partition of `J` as 0-based positions inside the base index list Jc."""
    stratum = make_stratum(space, J)
    complement = stratum.complement(space.r)
    position = {i: n for n, i in enumerate(complement)}
    return [[position[i - 1] for i in block] for block in space.partition(stratum.J)]


def x_to_y(p: MetricPoint) -> MetricPoint:
    if p.chart == "y":
        return p
    return MetricPoint.from_y(1.0 / p.x)


def y_to_x(p: MetricPoint) -> MetricPoint:
    if p.chart == "x":
        return p
    return MetricPoint.from_x(1.0 / p.y)


def _weights(space: SpaceSpec, T: Candidate) -> FloatArray:
    if len(T.T) != space.r:
        raise InvalidPointError(f"candidate has {len(T.T)} components, space {space.name} has {space.r} modules")
    return space.dims() * T.array


def solve_constraint(space: SpaceSpec, T: Candidate, y_partial: Sequence[Optional[float]]) -> MetricPoint:
    """Fill in the single unknown (`None`) coordinate of `y_partial` so that sum d_i T_i y_i = 1."""
    if len(y_partial) != space.r:
        raise InvalidPointError(f"expected {space.r} coordinates, got {len(y_partial)}")
    unknown = [i for i, value in enumerate(y_partial) if value is None]
    if len(unknown) != 1:
        raise InvalidPointError(f"expected exactly one unknown coordinate, got {len(unknown)}")
    i = unknown[0]
    weights = _weights(space, T)
    if weights[i] == 0:
        raise InfeasibleError(f"infeasible: T_{i + 1} = 0, the constraint does not involve y_{i + 1}")

    rest = 0.0
    for j, value in enumerate(y_partial):
        if value is None:
            continue
        if not value > 0:
            raise InvalidPointError(f"non-positive coordinate y_{j + 1} = {value}")
        rest += weights[j] * value

    solved = (1.0 - rest) / weights[i]
    if not solved > 0:
        raise InfeasibleError(f"infeasible: solving for y_{i + 1} gives {solved:.6g} <= 0")
    y = [solved if value is None else float(value) for value in y_partial]
    return MetricPoint.from_y(y)


def normalize(space: SpaceSpec, T: Candidate, p: MetricPoint) -> MetricPoint:
    """Rescale `p` onto the constraint surface tr_g T = 1 (y chart)."""
    y = p.y
    trace = float(_weights(space, T) @ y)
    if not trace > 0:
        raise InfeasibleError(f"infeasible: tr_g T = {trace:.6g} cannot be scaled to 1")
    return MetricPoint.from_y(y / trace)


def center(space: SpaceSpec, T: Candidate) -> MetricPoint:
    """The point y = (w, ..., w) of the simplex, w = 1 / sum d_i T_i."""
    weights = _weights(space, T)
    return MetricPoint.from_y(np.full(space.r, 1.0 / float(weights.sum())))


def same_structure(space: SpaceSpec, other: SpaceSpec) -> bool:
    """Whether two spaces share dimensions, Killing constants and structure constants, ignoring names."""
    if space.d != other.d or space.b != other.b or set(space.triples) != set(other.triples):
        return False
    return all(abs(value - other.triples[key]) <= _TRIPLE_MATCH_TOL for key, value in space.triples.items())
