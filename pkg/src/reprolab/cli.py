"""Declarative experiment runner.

Reads a JSON config, executes the sweep (and fits), and persists
``results.csv``, ``fits.json``, and ``manifest.json`` into the config's
output directory.  Everything written to ``results.csv`` and
``fits.json`` is a pure function of (config, master_seed); wall-clock
timing lives only in the manifest, which is why repeated runs of the
same config are byte-identical.

Exit codes: 0 ok, 1 truncated, 2 config error, 3 accuracy failed,
4 invariant failed, 5 I/O error.
"""

from __future__ import annotations

import argparse
import datetime
import hashlib
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from . import lab
from .core import ConfigError, InsufficientDataError, ReproLabError
from .lab import PAIRINGS, SWEEP_AXES, fit_scaling, sweep, verify_invariant
from .oracles import NoiseSchedule, OracleSpec
from .scenarios import SCENARIOS, catalog
from .solvers import AVERAGING_KINDS, STEP_KINDS

__all__ = [
    "ExperimentConfig",
    "ResultManifest",
    "parse_config",
    "run_experiment",
    "list_catalog",
    "emit_plotdata",
    "render_svg",
    "main",
    "RESULT_COLUMNS",
    "EXIT_OK",
    "EXIT_TRUNCATED",
    "EXIT_CONFIG",
    "EXIT_ACCURACY",
    "EXIT_INVARIANT",
    "EXIT_IO",
]

ARTIFACT_VERSION = "0.1.0"
SLOPE_TOLERANCE = 0.35

EXIT_OK = 0
EXIT_TRUNCATED = 1
EXIT_CONFIG = 2
EXIT_ACCURACY = 3
EXIT_INVARIANT = 4
EXIT_IO = 5

RESULT_COLUMNS = (
    "experiment_id", "scenario", "T", "epsilon", "delta", "mu", "trials",
    "pairing", "deviation_mean", "deviation_stderr", "subopt_mean",
    "subopt_max", "oracle_calls", "wallclock_s",
)

_KNOWN_KEYS = {
    "experiment_id", "scenario", "params", "oracle_overrides", "solver",
    "grid", "trials", "master_seed", "pairing", "output_dir",
    "adversary_search_n", "accuracy_tolerance", "fit_axes", "max_rows",
}


@dataclass(frozen=True)
class ExperimentConfig:
    experiment_id: str
    scenario: str
    master_seed: int
    params: Mapping[str, Any] = field(default_factory=dict)
    oracle_overrides: Mapping[str, Any] = field(default_factory=dict)
    solver: Mapping[str, Any] = field(default_factory=dict)
    grid: Mapping[str, list] = field(default_factory=dict)
    trials: int = 64
    pairing: str = "independent"
    output_dir: str = ""
    adversary_search_n: int = 16
    accuracy_tolerance: float = 0.0
    fit_axes: tuple[str, ...] = ()
    max_rows: int | None = None

    def canonical(self) -> dict:
        """Fully defaulted, key-sorted form; re-parses to an equal config."""
        return {
            "experiment_id": self.experiment_id,
            "scenario": self.scenario,
            "params": dict(sorted(self.params.items())),
            "oracle_overrides": dict(sorted(self.oracle_overrides.items())),
            "solver": dict(sorted(self.solver.items())),
            "grid": {k: list(self.grid[k]) for k in sorted(self.grid)},
            "trials": self.trials,
            "master_seed": self.master_seed,
            "pairing": self.pairing,
            "output_dir": self.output_dir,
            "adversary_search_n": self.adversary_search_n,
            "accuracy_tolerance": self.accuracy_tolerance,
            "fit_axes": list(self.fit_axes),
            "max_rows": self.max_rows,
        }

    def canonical_text(self) -> str:
        return json.dumps(self.canonical(), sort_keys=True, indent=2) + "\n"

    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical_text().encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class ResultManifest:
    experiment_id: str
    artifact_version: str
    config_hash: str
    started_at: str
    finished_at: str
    files: tuple[str, ...]
    status: str


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate a JSON experiment config (strict keys)."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(
            f"malformed JSON at line {e.lineno}, column {e.colno}: {e.msg}"
        ) from None
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(raw) - _KNOWN_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    for req in ("scenario", "master_seed"):
        if req not in raw:
            raise ConfigError(f"missing required config key {req!r}")

    scenario = raw["scenario"]
    if scenario not in SCENARIOS:
        raise ConfigError(
            f"unknown scenario {scenario!r}; valid: {sorted(SCENARIOS)}"
        )
    pairing = raw.get("pairing", "independent")
    if pairing not in PAIRINGS:
        raise ConfigError(f"unknown pairing {pairing!r}; valid: {list(PAIRINGS)}")

    solver = raw.get("solver", {}) or {}
    if not isinstance(solver, dict):
        raise ConfigError("solver must be an object")
    sched = solver.get("schedule")
    if sched is not None:
        kind = sched if isinstance(sched, str) else sched.get("kind")
        if kind not in STEP_KINDS:
            raise ConfigError(
                f"unknown step schedule {kind!r}; valid: {list(STEP_KINDS)}"
            )
    avg = solver.get("averaging")
    if avg is not None:
        kind = avg if isinstance(avg, str) else avg.get("kind")
        if kind not in AVERAGING_KINDS:
            raise ConfigError(
                f"unknown averaging {kind!r}; valid: {list(AVERAGING_KINDS)}"
            )

    grid = raw.get("grid", {}) or {}
    if not isinstance(grid, dict):
        raise ConfigError("grid must be an object of axis -> values")
    for axis in grid:
        if axis not in SWEEP_AXES:
            raise ConfigError(f"unknown grid axis {axis!r}; valid: {list(SWEEP_AXES)}")
        if not isinstance(grid[axis], list) or not grid[axis]:
            raise ConfigError(f"grid axis {axis!r} needs a nonempty list of values")

    trials = int(raw.get("trials", 64))
    if trials < 1:
        raise ConfigError("trials must be >= 1")
    master_seed = int(raw["master_seed"])
    if not (0 <= master_seed < 2 ** 64):
        raise ConfigError("master_seed must fit in 64 unsigned bits")

    fit_axes = tuple(raw.get("fit_axes", ()))
    for axis in fit_axes:
        if axis not in SWEEP_AXES:
            raise ConfigError(f"unknown fit axis {axis!r}")

    experiment_id = str(raw.get("experiment_id", scenario))
    output_dir = str(raw.get("output_dir", os.path.join("results", experiment_id)))
    max_rows = raw.get("max_rows")
    return ExperimentConfig(
        experiment_id=experiment_id,
        scenario=scenario,
        master_seed=master_seed,
        params=dict(raw.get("params", {})),
        oracle_overrides=dict(raw.get("oracle_overrides", {})),
        solver=dict(solver),
        grid={k: list(v) for k, v in grid.items()},
        trials=trials,
        pairing=pairing,
        output_dir=output_dir,
        adversary_search_n=int(raw.get("adversary_search_n", 16)),
        accuracy_tolerance=float(raw.get("accuracy_tolerance", 0.0)),
        fit_axes=fit_axes,
        max_rows=int(max_rows) if max_rows is not None else None,
    )


# ---------------------------------------------------------------------------
# result serialization
# ---------------------------------------------------------------------------

def _fmt(x) -> str:
    if x is None:
        return "nan"
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, int):
        return str(x)
    x = float(x)
    if math.isnan(x):
        return "nan"
    return format(x, ".17g")


def _results_csv(config: ExperimentConfig, table: lab.SweepTable) -> str:
    lines = [",".join(RESULT_COLUMNS)]
    for row in table.rows:
        p = row.params
        lines.append(",".join([
            config.experiment_id,
            config.scenario,
            str(int(p["T"])) if "T" in p else "0",
            _fmt(p.get("epsilon")),
            _fmt(p.get("delta")),
            _fmt(p.get("mu")),
            str(row.deviation.trials),
            row.deviation.pairing,
            _fmt(row.deviation.mean_sq_dev),
            _fmt(row.deviation.stderr),
            _fmt(row.subopt_mean),
            _fmt(row.subopt_max),
            str(row.oracle_calls),
            # determinism contract: results.csv must be byte-identical for a
            # fixed (config, seed); timing lives in the manifest instead
            "0",
        ]))
    return "\n".join(lines) + "\n"


def _fits_json(config: ExperimentConfig, table: lab.SweepTable) -> dict:
    axes = config.fit_axes or tuple(
        a for a in sorted(config.grid)
        if len(set(map(float, config.grid[a]))) >= 3
    )
    fits = {}
    for axis in axes:
        try:
            f = fit_scaling(table, axis)
        except InsufficientDataError as e:
            fits[axis] = {"error": str(e)}
            continue
        fits[axis] = {
            "axis": f.axis,
            "slope": f.slope,
            "intercept": f.intercept,
            "r_squared": f.r_squared,
            "expected_slope": f.expected_slope,
            "n_rows": f.n_rows,
            "dropped_rows": f.dropped_rows,
            "slope_tolerance": SLOPE_TOLERANCE,
        }
    return {
        "experiment_id": config.experiment_id,
        "scenario": config.scenario,
        "table_cell": table.table_cell,
        "fits": fits,
    }


def _utcnow() -> str:
    return datetime.datetime.now(datetime.timezone.utc).replace(
        microsecond=0).isoformat()


def _apply_oracle_overrides(config: ExperimentConfig):
    """Build a solver-descriptor-compatible oracle override, if any."""
    if not config.oracle_overrides:
        return None
    ov = config.oracle_overrides

    def transform(instance):
        spec = instance.oracle
        sched = spec.schedule
        kind = ov.get("kind", sched.kind)
        delta = float(ov.get("delta", sched.delta))
        params = dict(sched.params)
        params.update(ov.get("params", {}))
        return OracleSpec(ov.get("oracle_kind", spec.kind),
                          NoiseSchedule(kind, delta, params))

    return transform


def run_experiment(config: ExperimentConfig, threads: int | None = None) -> ResultManifest:
    """Execute the config and write results.csv / fits.json / manifest.json."""
    started = _utcnow()
    out_dir = Path(config.output_dir)

    status = "ok"
    interrupted = False
    table = None
    try:
        grid = config.grid or _singleton_grid(config)
        table = sweep(
            config.scenario, dict(config.params), grid,
            solver=config.solver or None,
            trials=config.trials,
            pairing=config.pairing,
            master_seed=config.master_seed,
            adversary_search_n=config.adversary_search_n,
            accuracy_tolerance=config.accuracy_tolerance,
            threads=threads,
            max_rows=config.max_rows,
            oracle_transform=_apply_oracle_overrides(config),
        )
    except KeyboardInterrupt:
        interrupted = True

    if interrupted or table is None:
        status = "truncated"
        table = lab.SweepTable(config.scenario, rows=(), truncated=True)
    elif table.truncated:
        status = "truncated"
    elif any(r.accuracy_failed for r in table.rows):
        status = "accuracy_failed"

    files = []
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_text = _results_csv(config, table)
    (out_dir / "results.csv").write_text(csv_text, encoding="utf-8", newline="\n")
    files.append("results.csv")
    fits = _fits_json(config, table)
    (out_dir / "fits.json").write_text(
        json.dumps(fits, sort_keys=True, indent=2) + "\n",
        encoding="utf-8", newline="\n")
    files.append("fits.json")

    manifest = ResultManifest(
        experiment_id=config.experiment_id,
        artifact_version=ARTIFACT_VERSION,
        config_hash=config.config_hash(),
        started_at=started,
        finished_at=_utcnow(),
        files=tuple(files + ["manifest.json"]),
        status=status,
    )
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest.__dict__ | {"files": list(manifest.files)},
                   sort_keys=True, indent=2) + "\n",
        encoding="utf-8", newline="\n")
    return manifest


def _singleton_grid(config: ExperimentConfig) -> dict:
    """A 1-row pseudo-grid for configs without a grid."""
    for axis in SWEEP_AXES:
        if axis in config.params:
            return {axis: [config.params[axis]]}
    raise ConfigError(
        "config needs either a grid or at least one of T/epsilon/delta/mu in params"
    )


def list_catalog() -> str:
    """Scenario catalog as pretty JSON (the ``list`` subcommand)."""
    return json.dumps(catalog(), indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# plot data
# ---------------------------------------------------------------------------

def emit_plotdata(results_path: str | Path, axis: str) -> str:
    """Log-log columns plus fitted-line samples from a results.csv file."""
    if axis not in SWEEP_AXES:
        raise ConfigError(f"unknown axis {axis!r}; valid: {list(SWEEP_AXES)}")
    path = Path(results_path)
    text = path.read_text(encoding="utf-8")
    lines = [ln for ln in text.splitlines() if ln.strip()]
    header = lines[0].split(",")
    try:
        ax_i = header.index(axis if axis != "T" else "T")
        dev_i = header.index("deviation_mean")
    except ValueError:
        raise ConfigError(f"{path} does not look like a results.csv file") from None

    pts = []
    dropped = 0
    for ln in lines[1:]:
        cells = ln.split(",")
        try:
            xv = float(cells[ax_i])
            yv = float(cells[dev_i])
        except ValueError:
            dropped += 1
            continue
        if not (xv > 0.0) or not (yv > 0.0) or math.isnan(xv) or math.isnan(yv):
            dropped += 1
            continue
        pts.append((xv, yv))
    if len({p[0] for p in pts}) < 3:
        raise InsufficientDataError(
            f"need >= 3 usable rows with distinct {axis!r} values, got {len(pts)}"
        )
    pts.sort()
    import numpy as np
    lx = np.log(np.array([p[0] for p in pts]))
    ly = np.log(np.array([p[1] for p in pts]))
    slope, intercept = np.polyfit(lx, ly, 1)
    fit = slope * lx + intercept
    out = [
        f"# source: {path.name}",
        f"# axis: {axis}",
        f"# dropped_rows: {dropped}",
        f"# fit_slope: {_fmt(float(slope))}",
        f"# fit_intercept: {_fmt(float(intercept))}",
        "log_axis,log_dev,fit_line",
    ]
    for i in range(len(pts)):
        out.append(f"{_fmt(float(lx[i]))},{_fmt(float(ly[i]))},{_fmt(float(fit[i]))}")
    return "\n".join(out) + "\n"


def render_svg(plotdata_text: str, width: int = 480, height: int = 360) -> str:
    """Minimal standalone SVG line chart of the plotdata columns."""
    rows = [ln for ln in plotdata_text.splitlines()
            if ln and not ln.startswith("#") and not ln.startswith("log_axis")]
    pts = [tuple(map(float, ln.split(","))) for ln in rows]
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts] + [p[2] for p in pts]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    pad = 40
    sx = (width - 2 * pad) / ((x1 - x0) or 1.0)
    sy = (height - 2 * pad) / ((y1 - y0) or 1.0)

    def px(x):
        return pad + (x - x0) * sx

    def py(y):
        return height - pad - (y - y0) * sy

    data_pts = " ".join(f"{px(p[0]):.2f},{py(p[1]):.2f}" for p in pts)
    fit_pts = " ".join(f"{px(p[0]):.2f},{py(p[2]):.2f}" for p in pts)
    circles = "".join(
        f'<circle cx="{px(p[0]):.2f}" cy="{py(p[1]):.2f}" r="3" fill="#1f6fb2"/>'
        for p in pts)
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">'
        f'<rect width="{width}" height="{height}" fill="white"/>'
        f'<polyline points="{fit_pts}" fill="none" stroke="#c44" stroke-width="1.5"/>'
        f'<polyline points="{data_pts}" fill="none" stroke="#1f6fb2" '
        f'stroke-width="1" stroke-dasharray="3,3"/>'
        f"{circles}"
        f'<text x="{pad}" y="{height - 8}" font-size="11" fill="#333">'
        f"log axis vs log mean squared deviation (line = least-squares fit)</text>"
        f"</svg>\n"
    )


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _status_code(status: str) -> int:
    return {
        "ok": EXIT_OK,
        "accuracy_failed": EXIT_ACCURACY,
        "invariant_failed": EXIT_INVARIANT,
        "truncated": EXIT_TRUNCATED,
    }.get(status, EXIT_OK)


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="reprolab",
        description="batch experiment runner for optimization-reproducibility "
                    "measurements",
    )
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: REPROLAB_THREADS or 1); "
                        "output is identical for any value")
    sub = p.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute a config (grid optional)")
    run_p.add_argument("config", type=str)

    sweep_p = sub.add_parser("sweep", help="execute a config that declares a grid")
    sweep_p.add_argument("config", type=str)

    inv_p = sub.add_parser("invariants", help="run the structural identity suite")
    inv_p.add_argument("--suite", default="all",
                       choices=("all",) + lab.INVARIANT_IDS)
    inv_p.add_argument("--seed", type=int, default=0)
    inv_p.add_argument("--max-residual", type=float, default=1e-9)
    inv_p.add_argument("--t-max", type=int, default=64)
    inv_p.add_argument("--matrices", type=int, default=20)

    sub.add_parser("list", help="print the scenario catalog as JSON")

    plot_p = sub.add_parser("plotdata", help="emit log-log plot columns from results.csv")
    plot_p.add_argument("results", type=str)
    plot_p.add_argument("--axis", required=True, choices=SWEEP_AXES)
    plot_p.add_argument("--out", type=str, default=None)
    plot_p.add_argument("--svg", type=str, default=None)
    return p


def _cmd_run(args, require_grid: bool) -> int:
    try:
        text = Path(args.config).read_text(encoding="utf-8")
    except OSError as e:
        print(f"error: cannot read config {args.config}: {e}", file=sys.stderr)
        return EXIT_IO
    try:
        config = parse_config(text)
        if require_grid and not config.grid:
            raise ConfigError("the sweep subcommand requires a nonempty grid")
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        manifest = run_experiment(config, threads=args.threads)
    except OSError as e:
        print(f"I/O error: {e}", file=sys.stderr)
        return EXIT_IO
    except ReproLabError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    print(f"{manifest.experiment_id}: status={manifest.status} "
          f"files={','.join(manifest.files)} dir={config.output_dir}")
    return _status_code(manifest.status)


def _cmd_invariants(args) -> int:
    ids = lab.INVARIANT_IDS if args.suite == "all" else (args.suite,)
    failed = False
    for inv in ids:
        report = verify_invariant(
            inv,
            {"T": args.t_max, "n_matrices": args.matrices},
            master_seed=args.seed,
            tolerance=args.max_residual,
        )
        state = "PASS" if report.passed else "FAIL"
        print(f"{state} {inv}: max residual {report.max_residual:.3e} "
              f"(tolerance {report.tolerance:.3e})")
        failed = failed or not report.passed
    return EXIT_INVARIANT if failed else EXIT_OK


def _cmd_plotdata(args) -> int:
    try:
        text = emit_plotdata(args.results, args.axis)
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except (ConfigError, InsufficientDataError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8", newline="\n")
        else:
            sys.stdout.write(text)
        if args.svg:
            Path(args.svg).write_text(render_svg(text), encoding="utf-8", newline="\n")
    except OSError as e:
        print(f"I/O error: {e}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "run":
        return _cmd_run(args, require_grid=False)
    if args.command == "sweep":
        return _cmd_run(args, require_grid=True)
    if args.command == "invariants":
        return _cmd_invariants(args)
    if args.command == "list":
        sys.stdout.write(list_catalog())
        return EXIT_OK
    if args.command == "plotdata":
        return _cmd_plotdata(args)
    return EXIT_CONFIG  # pragma: no cover


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
