"""The `ricci-lab` command line front end.

Every subcommand resolves a `RunConfig` (flags over `--config` file over defaults), runs one
pipeline and writes JSON, CSV or SVG. Runs with an `--output` path also write a manifest
next to it, which `ricci-lab run --config <manifest>` replays.
"""

from __future__ import annotations

import sys
import json
import time
import logging
import argparse
from typing import Any, Dict, List, Tuple, Callable, Optional, Sequence
from pathlib import Path

import pydantic

from . import _io
from .types import (
    Stalled,
    Diverged,
    GridSpec,
    Candidate,
    LocusSpec,
    RunConfig,
    SpaceSpec,
    MetricPoint,
    RunManifest,
)
from ._utils import is_mapping, parse_floats, setup_logging, coerce_float, parse_index_set
from ._client import RicciLab
from ._compat import parse_obj, model_copy, model_dump
from ._version import __version__
from .invariants import is_generalized_wallach
from ._constants import ENV_THREADS, CRITICAL_TOL
from .curvature import CurvatureKernel, spectrum_at
from ._exceptions import NoResultError, RicciLabError, InvalidGridError
from .space_model import catalog, normalize, load_space

__all__ = ["main", "build_parser"]

log: logging.Logger = logging.getLogger(__name__)

Outputs = List[Path]


def _floats(value: str) -> List[float]:
    try:
        return parse_floats(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _pair(value: str) -> List[float]:
    values = _floats(value)
    if len(values) != 2:
        raise argparse.ArgumentTypeError(f"expected two numbers, got {value!r}")
    return values


def _resolution(value: str) -> List[int]:
    parts = value.lower().split("x")
    try:
        numbers = [int(part) for part in parts]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected a grid such as 200x200, got {value!r}") from exc
    if len(numbers) != 2:
        raise argparse.ArgumentTypeError(f"expected a grid such as 200x200, got {value!r}")
    return numbers


def _slice(value: str) -> Tuple[str, float]:
    name, sep, number = value.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected a slice such as T3=0.375, got {value!r}")
    try:
        return name.strip(), coerce_float(number)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected a slice such as T3=0.375, got {value!r}") from exc


_EXIT_CODES = """\
exit codes:
  0  success; a flow that diverges towards a subalgebra stratum is a result
  2  invalid input: space, point, candidate, grid or configuration
  3  no result: the flow stalled or no saddle was found
  4  a divergent flow with bounded S approached an Infinity stratum
"""

_FLOW_EPILOG = """\
results:
  converged  exit 0, the limit point refined by Newton with its Hessian spectrum
  diverged   exit 0, the limit stratum, level and fiber metric
  stalled    exit 3, the last point and the reason
  anomaly    exit 4, divergence towards an Infinity stratum
"""


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--space", help="catalog name, generalized_wallach(d1,d2,d3,c123), or a space document path")
    common.add_argument("--T", type=_floats, help="candidate tensor, e.g. 1.6,0.22,1")
    common.add_argument("--config", help="JSON run configuration or manifest; flags take precedence")
    common.add_argument("--seed", type=int)
    common.add_argument("--threads", type=int, help=f"worker threads; falls back to {ENV_THREADS}")
    common.add_argument("--output", "-o", help="output path; stdout when omitted")
    common.add_argument("--format", choices=["json", "csv", "svg"])
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = argparse.ArgumentParser(
        prog="ricci-lab",
        description="Prescribed Ricci curvature on homogeneous spaces.",
        epilog=_EXIT_CODES,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    curvature = commands.add_parser("curvature", parents=[common], help="S, Ricci coefficients, gradient and spectrum")
    curvature.add_argument("--x", type=_floats)
    curvature.add_argument("--y", type=_floats)

    commands.add_parser("levels", parents=[common], help="alpha, beta and beta - alpha per subalgebra stratum")

    flow = commands.add_parser(
        "flow",
        parents=[common],
        help="ascent flow of S on M_T",
        epilog=_FLOW_EPILOG + "\n" + _EXIT_CODES,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    flow.add_argument("--x", type=_floats, help="start point, x chart; defaults to the center of M_T")
    flow.add_argument("--rtol", type=float)
    flow.add_argument("--max-steps", type=int)
    flow.add_argument("--trajectory", help="CSV path for the recorded trajectory")

    saddle = commands.add_parser("saddle", parents=[common], help="mountain pass critical point")
    saddle.add_argument("--k-low", help="stratum the path starts next to, e.g. 3 or 2,4")
    saddle.add_argument("--rounds", type=int)
    saddle.add_argument("--telemetry", help="CSV path for the per round relaxation telemetry")

    commands.add_parser("classify", parents=[common], help="region label of T")

    sweep = commands.add_parser("sweep", parents=[common], help="region labels on a plane grid")
    sweep.add_argument("--grid", type=_resolution, help="resolution, e.g. 200x200")
    sweep.add_argument("--axes", help="swept coordinates, e.g. T1,T2 or x,y")
    sweep.add_argument("--range1", type=_pair, help="range of the first axis, e.g. 0,4")
    sweep.add_argument("--range2", type=_pair, help="range of the second axis")
    sweep.add_argument("--slice", type=_slice, action="append", help="fixed component, e.g. T3=0.375")

    image = commands.add_parser("image", parents=[common], help="seeded sample of the Ricci map image")
    image.add_argument("--n", type=int)
    image.add_argument("--range", type=_pair, help="sampling range lo,hi of each coordinate")
    image.add_argument("--mode", choices=["log-uniform", "uniform"])
    image.add_argument("--label-regions", action="store_true", default=None)

    locus = commands.add_parser("locus", parents=[common], help="metrics where dRic loses rank")
    locus.add_argument("--mode", choices=["closed-form", "continuation"])
    locus.add_argument("--samples", type=int)
    locus.add_argument("--t-range", type=_pair)
    locus.add_argument("--start", type=_floats, help="continuation start, x chart")
    locus.add_argument("--step", type=float)
    locus.add_argument("--max-points", type=int)

    commands.add_parser("run", parents=[common], help="replay a run configuration or manifest")
    return parser


_PARAM_FLAGS = (
    "rtol",
    "max_steps",
    "trajectory",
    "k_low",
    "rounds",
    "telemetry",
    "grid",
    "axes",
    "range1",
    "range2",
    "slice",
    "n",
    "range",
    "mode",
    "label_regions",
    "samples",
    "t_range",
    "start",
    "step",
    "max_points",
)


def _load_config(path: str) -> Dict[str, Any]:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise RicciLabError(f"cannot read config {path}: {exc}") from exc
    if is_mapping(raw) and "outputs" in raw and is_mapping(raw.get("config")):
        return model_dump(parse_obj(RunManifest, raw).config)
    if not is_mapping(raw):
        raise RicciLabError(f"config {path} must hold a JSON object")
    return dict(raw)


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Flags over the `--config` file over the defaults of `RunConfig`."""
    data: Dict[str, Any] = _load_config(args.config) if args.config else {}
    if args.command != "run":
        data["command"] = args.command
    params: Dict[str, Any] = dict(data.get("params") or {})
    for name in _PARAM_FLAGS:
        value = getattr(args, name, None)
        if value is not None:
            params[name] = [list(item) for item in value] if name == "slice" else value
    data["params"] = params
    for name in ("space", "T", "x", "y", "seed", "threads", "output", "format"):
        value = getattr(args, name, None)
        if value is not None:
            data[name] = value
    if "command" not in data:
        raise RicciLabError("`run` needs a --config file naming the command")
    if "space" not in data:
        raise RicciLabError("no space given, use --space or a config file")
    return parse_obj(RunConfig, data)


def _space(name: str) -> SpaceSpec:
    path = Path(name)
    if name.endswith(".json") and path.exists():
        return load_space(path.read_text(encoding="utf-8"))
    return catalog(name)


def _candidate(config: RunConfig) -> Candidate:
    if config.T is None:
        raise RicciLabError(f"`{config.command}` needs a candidate tensor, use --T")
    return Candidate(T=config.T)


def _emit(config: RunConfig, payload: Any, table: Optional[Tuple[List[str], List[Any]]] = None) -> Outputs:
    if config.format == "csv":
        if table is None:
            raise RicciLabError(f"`{config.command}` has no CSV output")
        text = _io.csv_text(*table)
    elif config.format == "svg":
        raise RicciLabError(f"`{config.command}` has no SVG output")
    else:
        text = _io.dump_json(payload)
    path = _io.write_text(text, config.output)
    return [path] if path is not None else []


def _emit_points(config: RunConfig, payload: Any, table: Tuple[List[str], List[Any]], points: List[Tuple[float, float, str]]) -> Outputs:
    if config.format == "svg":
        path = _io.write_text(_io.svg_text(points, title=config.space), config.output)
        return [path] if path is not None else []
    return _emit(config, payload, table)


def cmd_curvature(config: RunConfig, lab: RicciLab) -> Tuple[int, Outputs]:
    space = _space(config.space)
    if config.x is not None:
        point = MetricPoint.from_x(config.x)
    elif config.y is not None:
        point = MetricPoint.from_y(config.y)
    else:
        raise RicciLabError("`curvature` needs a point, use --x or --y")
    if point.r != space.r:
        raise RicciLabError(f"point has {point.r} coordinates, space {space.name} has {space.r} modules")

    kernel = CurvatureKernel(space)
    x = point.x
    ricci = kernel.ricci(x)
    payload: Dict[str, Any] = {
        "space": space.name,
        "x": [float(v) for v in x],
        "scalar": float(kernel.scalar(x)),
        "ricci": [float(v) for v in ricci],
    }
    # without --T the Ricci tensor itself is prescribed, which makes the point critical
    T = Candidate(T=config.T) if config.T is not None else Candidate.of(ricci)
    if T.definite:
        on_surface = normalize(space, T, point).x
        grad_norm = float(kernel.grad_norm(on_surface, T.array))
        payload["T"] = T.T
        payload["grad_norm"] = grad_norm
        if grad_norm <= CRITICAL_TOL:
            spectrum = spectrum_at(kernel, on_surface, T.array, degeneracy_tol=lab.degeneracy_tol)
            payload["spectrum"] = model_dump(spectrum)
    table = (["name", "value"], [{"name": key, "value": json.dumps(value)} for key, value in payload.items()])
    return 0, _emit(config, payload, table)


def cmd_levels(config: RunConfig, lab: RicciLab) -> Tuple[int, Outputs]:
    reports = lab.levels.report(_space(config.space), _candidate(config))
    rows = [
        {
            "stratum": report.stratum.label,
            "alpha": report.alpha,
            "alpha_attained": report.alpha_attained,
            "beta": report.beta,
            "beta_attained": report.beta_attained,
            "derivative": report.derivative_at_infinity,
        }
        for report in reports
    ]
    fieldnames = ["stratum", "alpha", "alpha_attained", "beta", "beta_attained", "derivative"]
    return 0, _emit(config, reports, (fieldnames, rows))


def cmd_flow(config: RunConfig, lab: RicciLab) -> Tuple[int, Outputs]:
    space = _space(config.space)
    T = _candidate(config)
    updates = {key: config.params[key] for key in ("rtol", "max_steps") if config.params.get(key) is not None}
    runner = lab.with_options(flow_params=model_copy(lab.flow_params, update=updates)) if updates else lab
    start = None
    if config.x is not None:
        start = normalize(space, T, MetricPoint.from_x(config.x))
    trajectory_path = config.params.get("trajectory")
    result = runner.flows.run(space, T, start, record=trajectory_path is not None)

    outputs = _emit(config, result)
    if trajectory_path is not None:
        rows = [model_dump(row) for row in result.trajectory]
        flat = [{"step": row["step"], "t": row["t"], "scalar": row["scalar"], "grad_norm": row["grad_norm"], "y": json.dumps(row["y"])} for row in rows]
        path = _io.write_text(_io.csv_text(["step", "t", "scalar", "grad_norm", "y"], flat), trajectory_path)
        if path is not None:
            outputs.append(path)
    if isinstance(result, Stalled):
        return NoResultError.exit_code, outputs
    if isinstance(result, Diverged):
        log.info("flow diverged towards %s at level %.10g", result.stratum.label, result.level)
    return 0, outputs


def cmd_saddle(config: RunConfig, lab: RicciLab) -> Tuple[int, Outputs]:
    space = _space(config.space)
    T = _candidate(config)
    k_low = config.params.get("k_low")
    rounds = config.params.get("rounds")
    kwargs: Dict[str, Any] = {}
    if rounds is not None:
        kwargs["rounds"] = rounds
    saddle, path = lab.saddles.find(space, T, k_low=parse_index_set(k_low) if k_low else None, **kwargs)

    outputs: Outputs = []
    telemetry_path = config.params.get("telemetry")
    if telemetry_path is not None:
        rows = [model_dump(row) for row in path.telemetry]
        written = _io.write_text(_io.csv_text(["round", "inf_scalar", "argmin", "c_estimate"], rows), telemetry_path)
        if written is not None:
            outputs.append(written)
    if saddle is None:
        raise NoResultError(
            f"no critical point of co-index <= 1 near the level {path.c_estimate:.10g} after {path.rounds} rounds"
        )
    payload = {"saddle": saddle, "c_estimate": path.c_estimate, "rounds": path.rounds, "converged": path.converged}
    return 0, _emit(config, payload) + outputs


def cmd_classify(config: RunConfig, lab: RicciLab) -> Tuple[int, Outputs]:
    label = lab.regions.label(_space(config.space), _candidate(config))
    rows = [{"name": p.name, "lhs": p.lhs, "relation": p.relation, "rhs": p.rhs, "holds": p.holds} for p in label.predicates]
    return 0, _emit(config, label, (["name", "lhs", "relation", "rhs", "holds"], rows))


def _default_grid(space: SpaceSpec) -> Tuple[Tuple[str, str], Tuple[Tuple[float, float], Tuple[float, float]]]:
    if is_generalized_wallach(space):
        edge = 4.0 / 3.0**0.5
        return ("x", "y"), ((-edge, edge), (-4.0 / 3.0, 8.0 / 3.0))
    if space.r < 3:
        raise InvalidGridError(f"{space.name} has {space.r} modules, a plane sweep needs at least 3")
    return ("T1", "T2"), ((0.0, 4.0), (0.0, 1.0 if space.r == 3 else 4.0))


def cmd_sweep(config: RunConfig, lab: RicciLab) -> Tuple[int, Outputs]:
    space = _space(config.space)
    params = config.params
    axes, ranges = _default_grid(space)
    if params.get("axes"):
        names = [name.strip() for name in str(params["axes"]).split(",")]
        if len(names) != 2:
            raise InvalidGridError(f"expected two axes, got {params['axes']!r}")
        axes = (names[0], names[1])
    first = params.get("range1") or ranges[0]
    second = params.get("range2") or ranges[1]
    resolution = params.get("grid") or [100, 100]
    fixed = {name: value for name, value in params.get("slice") or []}
    grid = GridSpec(
        axes=axes,
        ranges=((first[0], first[1]), (second[0], second[1])),
        resolution=(resolution[0], resolution[1]),
        fixed=fixed,
    )
    records = lab.regions.sweep(space, grid)
    points = [(record.coords[0], record.coords[1], record.label.value) for record in records]
    return 0, _emit_points(config, records, _io.sweep_rows(records), points)


def cmd_image(config: RunConfig, lab: RicciLab) -> Tuple[int, Outputs]:
    space = _space(config.space)
    params = config.params
    log_range = params.get("range") or [1.0 / 400.0, 400.0]
    samples = lab.regions.image(
        space,
        int(params.get("n") or 10_000),
        (log_range[0], log_range[1]),
        mode=params.get("mode") or "log-uniform",
        label_regions=bool(params.get("label_regions")),
    )
    points = []
    for sample in samples:
        if sample.projected is not None and len(sample.projected) >= 2:
            label = sample.region.value if sample.region is not None else ("definite" if sample.definite else "indefinite")
            points.append((sample.projected[0], sample.projected[1], label))
    return 0, _emit_points(config, samples, _io.image_rows(samples), points)


def cmd_locus(config: RunConfig, lab: RicciLab) -> Tuple[int, Outputs]:
    params = config.params
    fields = {
        "mode": params.get("mode"),
        "samples": params.get("samples"),
        "t_range": params.get("t_range"),
        "start": params.get("start"),
        "step": params.get("step"),
        "max_points": params.get("max_points"),
    }
    spec = parse_obj(LocusSpec, {key: value for key, value in fields.items() if value is not None})
    points = lab.regions.locus(_space(config.space), spec)
    scatter = [(p.projected[0], p.projected[1], "locus") for p in points if len(p.projected) >= 2]
    return 0, _emit_points(config, points, _io.locus_rows(points), scatter)


COMMANDS: Dict[str, Callable[[RunConfig, RicciLab], Tuple[int, Outputs]]] = {
    "curvature": cmd_curvature,
    "levels": cmd_levels,
    "flow": cmd_flow,
    "saddle": cmd_saddle,
    "classify": cmd_classify,
    "sweep": cmd_sweep,
    "image": cmd_image,
    "locus": cmd_locus,
}


def _fail(error: RicciLabError) -> int:
    sys.stderr.write(f"ricci-lab: error: {error.message}\n")
    return error.exit_code


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verbose:
        setup_logging("debug" if args.verbose > 1 else "info")
    else:
        setup_logging()

    started = time.perf_counter()
    try:
        config = resolve_config(args)
        lab = RicciLab(threads=config.threads, seed=config.seed)
        code, outputs = COMMANDS[config.command](config, lab)
    except RicciLabError as error:
        return _fail(error)
    except pydantic.ValidationError as error:
        sys.stderr.write(f"ricci-lab: error: invalid configuration: {error}\n")
        return 2

    manifest = _io.write_manifest(config, outputs, time.perf_counter() - started, code)
    if manifest is not None:
        log.info("wrote %s", manifest)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
