from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import pytest

from ricci_lab._cli import main, build_parser


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.delenv("RICCI_LAB_THREADS", raising=False)
    monkeypatch.delenv("RICCI_LAB_SEED", raising=False)


def _json(capsys: pytest.CaptureFixture[str], argv: list) -> dict:
    assert main(argv) == 0
    return json.loads(capsys.readouterr().out)


def _csv(text: str) -> list:
    return list(csv.DictReader(io.StringIO(text)))


def test_curvature_of_a_kahler_einstein_metric(capsys: pytest.CaptureFixture[str]) -> None:
    payload = _json(capsys, ["curvature", "--space", "wallach_su3", "--x", "1,1,2"])
    assert payload["scalar"] == pytest.approx(2.0)
    assert payload["ricci"] == [pytest.approx(1 / 3), pytest.approx(1 / 3), pytest.approx(2 / 3)]
    assert payload["grad_norm"] < 1e-9
    assert payload["spectrum"]["degenerate"] is True


def test_curvature_of_the_normal_metric(capsys: pytest.CaptureFixture[str]) -> None:
    payload = _json(capsys, ["curvature", "--space", "g2_u2", "--x", "1,1,1", "--T", "1,1,1"])
    assert payload["scalar"] == pytest.approx(3.75)
    assert payload["T"] == [1.0, 1.0, 1.0]


def test_curvature_csv(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["curvature", "--space", "g2_u2", "--y", "1,1,1", "--format", "csv"]) == 0
    rows = _csv(capsys.readouterr().out)
    assert rows[0] == {"name": "space", "value": '"g2_u2"'}
    assert json.loads(next(row["value"] for row in rows if row["name"] == "scalar")) == pytest.approx(3.75)


def test_non_positive_point(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["curvature", "--space", "wallach_su3", "--x", "1,0,2"]) == 2
    assert "non-positive coordinate" in capsys.readouterr().err


def test_unknown_space(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["classify", "--space", "sphere", "--T", "1,1"]) == 2
    assert "unknown space 'sphere'" in capsys.readouterr().err


def test_missing_candidate(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["classify", "--space", "g2_u2"]) == 2
    assert "needs a candidate tensor" in capsys.readouterr().err


def test_classify(capsys: pytest.CaptureFixture[str]) -> None:
    payload = _json(capsys, ["classify", "--space", "g2_u2", "--T", "8/5,11/50,1"])
    assert payload["kind"] == "MaxAndSaddle"
    assert all(predicate["holds"] for predicate in payload["predicates"])


def test_levels_csv(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["levels", "--space", "g2_u2", "--T", "2,0.1,1", "--format", "csv"]) == 0
    rows = _csv(capsys.readouterr().out)
    assert [row["stratum"] for row in rows] == ["{2}", "{3}"]
    assert float(rows[1]["alpha"]) == pytest.approx(3 / 8)
    assert rows[1]["alpha_attained"] == "1"


def test_levels_have_no_svg(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["levels", "--space", "g2_u2", "--T", "2,0.1,1", "--format", "svg"]) == 2
    assert "has no SVG output" in capsys.readouterr().err


def test_flow_converges(capsys: pytest.CaptureFixture[str]) -> None:
    payload = _json(capsys, ["flow", "--space", "wallach_su3", "--T", "1,1,1", "--x", "1,1.4,2.1"])
    assert payload["status"] == "converged"
    assert payload["spectrum"]["co_index"] == 0


def test_flow_out_of_steps(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    trajectory = tmp_path / "trajectory.csv"
    argv = ["flow", "--space", "wallach_su3", "--T", "1,1,1", "--x", "1,1.4,2.1", "--max-steps", "2"]
    assert main(argv + ["--trajectory", str(trajectory)]) == 3
    assert json.loads(capsys.readouterr().out)["status"] == "stalled"
    rows = _csv(trajectory.read_text())
    assert list(rows[0]) == ["step", "t", "scalar", "grad_norm", "y"]


def test_sweep_csv(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["sweep", "--space", "wallach_su3", "--grid", "3x3", "--format", "csv"]) == 0
    rows = _csv(capsys.readouterr().out)
    assert len(rows) == 9
    for row in rows:
        assert sum(float(row[f"T{n}"]) for n in (1, 2, 3)) == pytest.approx(1.0)


def test_sweep_rejects_bad_axes(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["sweep", "--space", "g2_u2", "--grid", "2x2", "--axes", "T1"]) == 2
    assert "expected two axes" in capsys.readouterr().err


def test_sweep_slice(capsys: pytest.CaptureFixture[str]) -> None:
    argv = ["sweep", "--space", "f4_u3su2", "--grid", "2x2", "--axes", "T1,T2", "--slice", "T3=3/8", "--format", "csv"]
    argv += ["--range1", "1,2", "--range2", "1,2"]
    assert main(argv) == 0
    rows = _csv(capsys.readouterr().out)
    assert {row["T3"] for row in rows} == {"0.375"}
    assert {row["T4"] for row in rows} == {"1.0"}


def test_manifest_replay(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    first = tmp_path / "first.csv"
    argv = ["sweep", "--space", "wallach_su3", "--grid", "3x4", "--format", "csv", "-o", str(first)]
    assert main(argv) == 0
    manifest_path = tmp_path / "first.csv.manifest.json"
    manifest = json.loads(manifest_path.read_text())
    assert manifest["config"]["params"]["grid"] == [3, 4]
    assert manifest["outputs"] == [str(first)]
    assert manifest["exit_code"] == 0
    assert "numpy" in manifest["versions"]

    second = tmp_path / "second.csv"
    assert main(["run", "--config", str(manifest_path), "-o", str(second)]) == 0
    assert second.read_text() == first.read_text()
    assert capsys.readouterr().out == ""


def test_run_config_file(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"command": "classify", "space": "g2_u2", "T": [2.0, 0.1, 1.0]}))
    assert _json(capsys, ["run", "--config", str(config)])["kind"] == "SaddleByThmC"
    # flags take precedence over the file
    assert _json(capsys, ["run", "--config", str(config), "--T", "1,1,1"])["kind"] == "GlobalMax"


def test_run_needs_a_config(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["run", "--space", "g2_u2"]) == 2
    assert "needs a --config file" in capsys.readouterr().err


def test_space_document(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    document = {
        "name": "su3_document",
        "modules": [{"dim": 2, "b": 1}, {"dim": 2, "b": 1}, {"dim": 2, "b": 1}],
        "triples": [{"i": 1, "j": 2, "k": 3, "value": "1/3"}],
    }
    path = tmp_path / "su3.json"
    path.write_text(json.dumps(document))
    payload = _json(capsys, ["curvature", "--space", str(path), "--x", "1,1,1"])
    assert payload["space"] == "su3_document"
    assert payload["scalar"] == pytest.approx(2.5)


def test_locus_csv(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["locus", "--space", "wallach_su3", "--samples", "3", "--format", "csv"]) == 0
    rows = _csv(capsys.readouterr().out)
    assert rows
    assert all(row["x3"] == "1.0" for row in rows)


def test_image_json(capsys: pytest.CaptureFixture[str]) -> None:
    payload = _json(capsys, ["image", "--space", "g2_u2", "--n", "5", "--seed", "2"])
    assert len(payload) == 5
    again = _json(capsys, ["image", "--space", "g2_u2", "--n", "5", "--seed", "2"])
    assert again == payload


def test_svg(tmp_path: Path) -> None:
    pytest.importorskip("matplotlib")
    output = tmp_path / "sweep.svg"
    assert main(["sweep", "--space", "wallach_su3", "--grid", "3x3", "--format", "svg", "-o", str(output)]) == 0
    assert "<svg" in output.read_text()


def test_parser_rejects_bad_grids() -> None:
    with pytest.raises(SystemExit):
        build_parser().parse_args(["sweep", "--grid", "200"])


def test_flow_help_lists_the_exit_codes(capsys: pytest.CaptureFixture[str]) -> None:
    with pytest.raises(SystemExit) as exc_info:
        build_parser().parse_args(["flow", "--help"])
    assert exc_info.value.code == 0

    text = capsys.readouterr().out
    assert "diverged   exit 0" in text
    assert "stalled" in text
    assert "exit 3" in text
