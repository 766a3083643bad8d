from __future__ import annotations

import json
from typing import Any, Dict

import pytest

from ricci_lab import (
    center,
    x_to_y,
    y_to_x,
    catalog,
    normalize,
    load_space,
    base_blocks,
    make_stratum,
    same_structure,
    enumerate_strata,
    restrict_to_base,
    solve_constraint,
    restrict_to_fiber,
    subalgebra_strata,
    generalized_wallach,
)
from ricci_lab.types import Candidate, SpaceSpec, MetricPoint
from ricci_lab._exceptions import InfeasibleError, InvalidPointError, UnknownSpaceError, SpaceValidationError
from tests.utils import assert_allclose


def _document(**overrides: Any) -> Dict[str, Any]:
    document: Dict[str, Any] = {
        "name": "toy",
        "modules": [{"dim": 2, "b": 1}, {"dim": 2, "b": 1}, {"dim": 2, "b": 1}],
        "triples": [{"i": 1, "j": 2, "k": 3, "value": "1/3"}],
    }
    document.update(overrides)
    return document


def test_catalog_names() -> None:
    assert catalog("wallach_su3").d == [2, 2, 2]
    assert catalog("g2_u2").d == [4, 2, 4]
    assert catalog("f4_u3su2").d == [12, 18, 4, 6]


def test_catalog_generalized_wallach() -> None:
    space = catalog("generalized_wallach(2,2,2,1/3)")
    assert same_structure(space, catalog("wallach_su3"))
    assert space.name != "wallach_su3"


def test_unknown_space() -> None:
    with pytest.raises(UnknownSpaceError, match="unknown space 'nope'"):
        catalog("nope")


def test_fractions_are_exact() -> None:
    space = catalog("g2_u2")
    assert space.triple(1, 1, 2) == 2 / 3
    assert space.triple(2, 1, 1) == 2 / 3
    assert space.triple(3, 2, 1) == 0.5
    assert space.triple(2, 2, 2) == 0.0


def test_load_space_from_json_string() -> None:
    space = load_space(json.dumps(_document()))
    assert space.name == "toy"
    assert space.triples == {"1,2,3": 1 / 3}


def test_permuted_triples_must_agree() -> None:
    triples = [{"i": 1, "j": 2, "k": 3, "value": 1}, {"i": 3, "j": 1, "k": 2, "value": 1}]
    assert load_space(_document(triples=triples)).triples == {"1,2,3": 1.0}

    triples[1]["value"] = 2
    with pytest.raises(SpaceValidationError, match="conflicting values"):
        load_space(_document(triples=triples))


@pytest.mark.parametrize(
    "overrides, message",
    [
        ({"modules": []}, "no modules"),
        ({"modules": [{"dim": 0, "b": 1}]}, "positive integer"),
        ({"modules": [{"dim": 2, "b": -1}]}, "negative Killing constant"),
        ({"modules": [{"dim": 2, "b": 0}, {"dim": 2, "b": 0}]}, "flat space excluded"),
        ({"triples": [{"i": 1, "j": 2, "k": 4, "value": 1}]}, "indices must lie in 1..3"),
        ({"triples": [{"i": 1, "j": 2, "k": 3, "value": -1}]}, "negative structure constant"),
        ({"triples": [{"i": 1, "j": 2, "k": 3, "value": "one"}]}, "cannot parse"),
        ({"base_partitions": {"1": [[2]]}}, "not covered"),
        ({"base_partitions": {"1": [[2, 3], [3]]}}, "overlap"),
        ({"base_partitions": {"1": [[1, 2, 3]]}}, "not a base module"),
        ({"base_partitions": {"1,2,3": [[1]]}}, "proper subset"),
        ({"extra": 1}, "malformed document"),
    ],
    ids=[
        "no modules",
        "zero dimension",
        "negative b",
        "flat",
        "index out of range",
        "negative triple",
        "unparsable triple",
        "uncovered partition",
        "overlapping partition",
        "fiber module in partition",
        "improper partition key",
        "unknown field",
    ],
)
def test_load_space_rejects(overrides: Dict[str, Any], message: str) -> None:
    with pytest.raises(SpaceValidationError, match=message):
        load_space(_document(**overrides))


def test_malformed_json() -> None:
    with pytest.raises(SpaceValidationError, match="malformed document"):
        load_space("{not json")


def test_strata_of_wallach(wallach: SpaceSpec) -> None:
    strata = enumerate_strata(wallach)
    assert [s.J for s in strata] == [(1,), (2,), (3,), (1, 2), (1, 3), (2, 3)]
    assert [s.kind for s in strata] == ["Subalgebra"] * 3 + ["Infinity"] * 3


def test_strata_of_g2(g2: SpaceSpec) -> None:
    assert [s.J for s in subalgebra_strata(g2)] == [(2,), (3,)]
    assert make_stratum(g2, [1]).kind == "Infinity"
    assert make_stratum(g2, {3}).label == "{3}"


def test_strata_of_f4(f4: SpaceSpec) -> None:
    labels = [s.label for s in subalgebra_strata(f4)]
    assert "{3}" in labels
    assert "{4}" in labels
    assert "{2,4}" in labels
    assert "{1}" not in labels


@pytest.mark.parametrize("J", [[], [1, 2, 3], [0], [4]], ids=["empty", "everything", "zero", "too large"])
def test_make_stratum_rejects(wallach: SpaceSpec, J: Any) -> None:
    with pytest.raises(SpaceValidationError):
        make_stratum(wallach, J)


def test_fiber_killing_constants(g2: SpaceSpec) -> None:
    # [211] and [213] leave the fiber m2
    assert restrict_to_fiber(g2, [2]).b == [pytest.approx(1 / 6)]
    assert restrict_to_fiber(g2, [3]).b == [pytest.approx(3 / 4)]


def test_fiber_keeps_internal_triples(f4: SpaceSpec) -> None:
    fiber = restrict_to_fiber(f4, [2, 4])
    assert fiber.d == [18, 6]
    assert fiber.triples == {"1,1,2": 2.0}
    assert fiber.b == [pytest.approx(14 / 18), pytest.approx(14 / 18)]


def test_base(f4: SpaceSpec) -> None:
    base = restrict_to_base(f4, [4])
    assert base.d == [12, 18, 4]
    assert base.b == [1.0, 1.0, 1.0]
    assert set(base.triples) == {"1,1,2", "1,2,3"}
    assert base_blocks(f4, [4]) == [[0, 2], [1]]


def test_base_blocks_default_to_singletons(wallach: SpaceSpec) -> None:
    space = load_space(_document())
    assert base_blocks(space, [1]) == [[0], [1]]
    assert base_blocks(wallach, [1]) == [[0, 1]]


def test_chart_conversions() -> None:
    p = MetricPoint.from_x([1.0, 2.0, 4.0])
    q = x_to_y(p)
    assert q.chart == "y"
    assert_allclose(q.values, [1.0, 0.5, 0.25])
    assert y_to_x(q).values == p.values
    assert x_to_y(q) is q


def test_non_positive_point() -> None:
    with pytest.raises(InvalidPointError, match="non-positive coordinate"):
        MetricPoint.from_x([1.0, 0.0, 2.0])


def test_normalize_and_center(g2: SpaceSpec) -> None:
    T = Candidate(T=[1.6, 0.22, 1.0])
    weights = [4 * 1.6, 2 * 0.22, 4 * 1.0]

    p = normalize(g2, T, MetricPoint.from_x([1.0, 2.0, 3.0]))
    assert sum(w * y for w, y in zip(weights, p.y)) == pytest.approx(1.0)

    c = center(g2, T)
    assert_allclose(c.y, [1.0 / sum(weights)] * 3)


def test_solve_constraint(wallach: SpaceSpec) -> None:
    T = Candidate(T=[1.0, 1.0, 1.0])
    p = solve_constraint(wallach, T, [0.1, None, 0.2])
    assert_allclose(p.y, [0.1, 0.2, 0.2])

    with pytest.raises(InfeasibleError):
        solve_constraint(wallach, T, [0.3, None, 0.3])
    with pytest.raises(InvalidPointError, match="exactly one unknown"):
        solve_constraint(wallach, T, [None, None, 0.1])
    with pytest.raises(InfeasibleError, match="T_2 = 0"):
        solve_constraint(wallach, Candidate(T=[1.0, 0.0, 1.0]), [0.1, None, 0.1])


def test_same_structure_ignores_names() -> None:
    assert same_structure(generalized_wallach(2, 2, 2, 1 / 3), catalog("wallach_su3"))
    assert not same_structure(generalized_wallach(2, 2, 2, 0.25), catalog("wallach_su3"))
    assert not same_structure(catalog("g2_u2"), catalog("wallach_su3"))
