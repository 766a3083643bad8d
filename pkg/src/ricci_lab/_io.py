"""Output writers for the command line front end: JSON, CSV, SVG point clouds and run manifests."""

from __future__ import annotations

import io
import csv
import sys
import json
import platform
from typing import Any, Dict, List, Tuple, Union, Mapping, Optional, Sequence
from pathlib import Path

from ._models import BaseModel
from .types import RunConfig, ImagePoint, LocusPoint, RunManifest, SweepRecord
from ._utils import is_dict
from ._compat import model_dump
from ._version import __version__
from ._exceptions import RicciLabError

__all__ = [
    "dump_json",
    "write_text",
    "csv_text",
    "sweep_rows",
    "image_rows",
    "locus_rows",
    "svg_text",
    "manifest_path",
    "write_manifest",
    "versions",
]

Row = Mapping[str, Any]

# label colors of the scatter emitter
PALETTE: Dict[str, str] = {
    "GlobalMax": "#8c8c8c",
    "SaddleByThmB": "#f2c438",
    "SaddleByThmC": "#3f7fd9",
    "MaxAndSaddle": "#e87fb0",
    "NoPrediction": "#d9d9d9",
    "Indefinite": "#9fc8ef",
    "definite": "#4d4d4d",
    "indefinite": "#9fc8ef",
    "locus": "#d62728",
}


def _jsonable(payload: Any) -> Any:
    if isinstance(payload, BaseModel):
        return model_dump(payload)
    if isinstance(payload, (list, tuple)):
        return [_jsonable(item) for item in payload]
    if is_dict(payload):
        return {key: _jsonable(value) for key, value in payload.items()}
    return payload


def dump_json(payload: Any) -> str:
    return json.dumps(_jsonable(payload), indent=2, allow_nan=False) + "\n"


def write_text(text: str, output: Optional[str]) -> Optional[Path]:
    """Write to `output`, or to stdout when no path is given."""
    if output is None:
        sys.stdout.write(text)
        return None
    path = Path(output)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path


def _cell(value: Any) -> Any:
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, float):
        return repr(value)
    return value


def csv_text(fieldnames: Sequence[str], rows: Sequence[Row]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(fieldnames), lineterminator="\n", restval="")
    writer.writeheader()
    for row in rows:
        writer.writerow({key: _cell(value) for key, value in row.items()})
    return buffer.getvalue()


def _numbered(prefix: str, values: Sequence[float]) -> Dict[str, float]:
    return {f"{prefix}{n}": value for n, value in enumerate(values, start=1)}


def sweep_rows(records: Sequence[SweepRecord]) -> Tuple[List[str], List[Row]]:
    """T components, label, then one value and one truth column per evaluated predicate."""
    r = len(records[0].T) if records else 0
    width = max((len(record.predicates) for record in records), default=0)
    fieldnames = [f"T{n}" for n in range(1, r + 1)] + ["label"]
    for n in range(1, width + 1):
        fieldnames += [f"pred{n}", f"pred{n}_holds"]
    rows: List[Row] = []
    for record in records:
        row: Dict[str, Any] = {**_numbered("T", record.T), "label": record.label.value}
        for n, predicate in enumerate(record.predicates, start=1):
            row[f"pred{n}"] = predicate.lhs
            row[f"pred{n}_holds"] = predicate.holds
        rows.append(row)
    return fieldnames, rows


def image_rows(points: Sequence[ImagePoint]) -> Tuple[List[str], List[Row]]:
    r = len(points[0].x) if points else 0
    k = max((len(point.projected or []) for point in points), default=0)
    fieldnames = (
        [f"x{n}" for n in range(1, r + 1)]
        + [f"R{n}" for n in range(1, r + 1)]
        + [f"p{n}" for n in range(1, k + 1)]
        + ["definite", "region"]
    )
    rows: List[Row] = []
    for point in points:
        row: Dict[str, Any] = {**_numbered("x", point.x), **_numbered("R", point.ricci)}
        row.update(_numbered("p", point.projected or []))
        row["definite"] = point.definite
        row["region"] = point.region.value if point.region is not None else ""
        rows.append(row)
    return fieldnames, rows


def locus_rows(points: Sequence[LocusPoint]) -> Tuple[List[str], List[Row]]:
    r = points[0].point.r if points else 0
    k = max((len(point.projected) for point in points), default=0)
    fieldnames = [f"x{n}" for n in range(1, r + 1)] + [f"p{n}" for n in range(1, k + 1)] + ["sigma_min", "sigma_gap"]
    rows: List[Row] = []
    for point in points:
        row: Dict[str, Any] = {**_numbered("x", [float(v) for v in point.point.x]), **_numbered("p", point.projected)}
        row["sigma_min"] = point.sigma_min
        row["sigma_gap"] = point.sigma_gap
        rows.append(row)
    return fieldnames, rows


def svg_text(
    points: Sequence[Tuple[float, float, str]],
    *,
    viewport: Optional[Tuple[float, float, float, float]] = None,
    title: str = "",
) -> str:
    """Flat scatter of (u, v, label) points in a fixed viewport (u_min, u_max, v_min, v_max)."""
    try:
        import matplotlib

        matplotlib.use("Agg")
        from matplotlib import pyplot as plt
    except ImportError as exc:
        raise RicciLabError("SVG output needs matplotlib, install the `plot` extra") from exc

    # fixed hash salt, no date stamp
    matplotlib.rcParams["svg.hashsalt"] = "ricci-lab"
    figure, axes = plt.subplots(figsize=(6, 6))
    try:
        labels = sorted({label for _, _, label in points})
        for label in labels:
            us = [u for u, _, name in points if name == label]
            vs = [v for _, v, name in points if name == label]
            axes.scatter(us, vs, s=2, c=PALETTE.get(label, "#000000"), label=label, linewidths=0)
        if viewport is not None:
            axes.set_xlim(viewport[0], viewport[1])
            axes.set_ylim(viewport[2], viewport[3])
        axes.set_aspect("equal", adjustable="box")
        if title:
            axes.set_title(title)
        if labels:
            axes.legend(loc="upper right", markerscale=4, fontsize="small")
        buffer = io.StringIO()
        figure.savefig(buffer, format="svg", metadata={"Date": None})
    finally:
        plt.close(figure)
    return buffer.getvalue()


def manifest_path(output: Union[str, Path]) -> Path:
    path = Path(output)
    return path.with_name(path.name + ".manifest.json")


def versions() -> Dict[str, str]:
    import numpy
    import scipy
    import pydantic

    return {
        "ricci_lab": __version__,
        "python": platform.python_version(),
        "numpy": numpy.__version__,
        "scipy": scipy.__version__,
        "pydantic": pydantic.VERSION if isinstance(pydantic.VERSION, str) else str(pydantic.VERSION),
    }


def write_manifest(config: RunConfig, outputs: Sequence[Path], wall_time: float, exit_code: int) -> Optional[Path]:
    """JSON manifest next to the first output; re-running with `--config <manifest>` repeats the run."""
    if not outputs:
        return None
    manifest = RunManifest(
        config=config,
        outputs=[str(path) for path in outputs],
        versions=versions(),
        wall_time=wall_time,
        exit_code=exit_code,
    )
    path = manifest_path(outputs[0])
    path.write_text(json.dumps(model_dump(manifest), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path
