from __future__ import annotations

import json
from typing import Any, cast

import pytest
import pydantic

from ricci_lab.types import (
    Stratum,
    Spectrum,
    Candidate,
    Converged,
    Predicate,
    RunConfig,
    DiagTensor,
    RegionKind,
    MetricPoint,
    RegionLabel,
    RunManifest,
    SweepRecord,
)
from ricci_lab._compat import parse_obj, parse_json, model_copy
from ricci_lab._exceptions import InvalidPointError
from tests.utils import assert_allclose, assert_json_fields


def test_models_are_frozen() -> None:
    T = Candidate(T=[1.0, 2.0])
    with pytest.raises((TypeError, pydantic.ValidationError)):
        cast(Any, T).T = [3.0, 4.0]

    copied = model_copy(T, update={"T": [3.0, 4.0]})
    assert copied.T == [3.0, 4.0]
    assert T.T == [1.0, 2.0]


def test_unknown_fields_are_rejected() -> None:
    with pytest.raises(pydantic.ValidationError):
        parse_obj(Candidate, {"T": [1.0], "scale": 2})


def test_candidate() -> None:
    assert Candidate(T=[1.0, 0.5]).definite
    assert not Candidate(T=[1.0, 0.0]).definite
    assert Candidate.of([1, 2, 3]).T == [1.0, 2.0, 3.0]
    assert DiagTensor.of([[1, -2]]).a == [1.0, -2.0]


def test_metric_point_charts() -> None:
    p = MetricPoint.from_x([2.0, 4.0])
    assert p.r == 2
    assert_allclose(p.y, [0.5, 0.25])
    assert_allclose(MetricPoint.from_y([0.5, 0.25]).x, [2.0, 4.0])


@pytest.mark.parametrize("value", [0.0, -1.0, float("inf"), float("nan")], ids=["zero", "negative", "inf", "nan"])
def test_metric_point_rejects(value: float) -> None:
    with pytest.raises(InvalidPointError, match="non-positive coordinate"):
        MetricPoint.from_y([1.0, value])


def test_unknown_chart() -> None:
    with pytest.raises(pydantic.ValidationError):
        parse_obj(MetricPoint, {"chart": "z", "values": [1.0]})


def test_stratum() -> None:
    stratum = Stratum(J=(1, 3), kind="Subalgebra")
    assert stratum.label == "{1,3}"
    assert stratum.key == "1,3"
    assert stratum.index == [0, 2]
    assert stratum.complement(4) == [1, 3]
    assert stratum.is_subalgebra


def test_region_kind_dumps_as_its_value() -> None:
    record = SweepRecord(coords=(0.0, 1.0), T=[1.0, 1.0, 1.0], definite=True, label=RegionKind.GLOBAL_MAX)
    assert record.to_dict()["label"] == "GlobalMax"
    assert json.loads(record.to_json())["coords"] == [0.0, 1.0]
    assert_json_fields(record)


def test_region_label_predictions() -> None:
    assert RegionLabel(kind=RegionKind.MAX_AND_SADDLE, predicates=[]).predicts_max
    assert RegionLabel(kind=RegionKind.MAX_AND_SADDLE, predicates=[]).predicts_saddle
    assert not RegionLabel(kind=RegionKind.NO_PREDICTION, predicates=[]).predicts_saddle
    assert not RegionLabel(kind=RegionKind.INDEFINITE, predicates=[]).predicts_max


def test_predicate_str() -> None:
    predicate = Predicate(name="beta{3} - alpha{3}", lhs=-0.0095, relation="<", rhs=0.0, holds=True)
    assert str(predicate) == "beta{3} - alpha{3}: -0.0095 < 0 is True"


def test_flow_result_status() -> None:
    spectrum = Spectrum(eigenvalues=[-2.0, -1.0], co_index=0, degenerate=False, tolerance=1e-7)
    result = Converged(point=MetricPoint.from_x([6.0, 6.0, 6.0]), scalar=0.4, grad_norm=0.0, spectrum=spectrum, steps=0)
    dumped = result.to_dict()
    assert dumped["status"] == "converged"
    assert dumped["point"] == {"chart": "x", "values": [6.0, 6.0, 6.0]}


def test_run_config_defaults() -> None:
    config = RunConfig(command="classify", space="g2_u2", T=[2.0, 0.1, 1.0])
    assert config.seed == 0
    assert config.format == "json"
    assert config.params == {}

    with pytest.raises(pydantic.ValidationError):
        parse_obj(RunConfig, {"command": "plot", "space": "g2_u2"})


def test_run_manifest_from_json() -> None:
    raw = json.dumps(
        {
            "config": {"command": "sweep", "space": "wallach_su3", "params": {"grid": [3, 3]}},
            "outputs": ["out.csv"],
            "versions": {"ricci-lab": "0.1.0"},
            "wall_time": 0.5,
            "exit_code": 0,
        }
    )
    manifest = parse_json(RunManifest, raw)
    assert manifest.config.command == "sweep"
    assert manifest.config.params["grid"] == [3, 3]
    assert manifest.outputs == ["out.csv"]


def test_region_kind_validation() -> None:
    with pytest.raises(pydantic.ValidationError):
        parse_obj(SweepRecord, {"coords": [0, 0], "T": [1.0], "definite": True, "label": "Somewhere"})
