#!/usr/bin/env python3
"""End-to-end batch workflow through the command-line interface.

Writes a JSON experiment config, executes it (``reprolab run``), and
turns the results into plot-ready log-log columns plus a standalone SVG
chart (``reprolab plotdata``).  Everything written to results.csv and
fits.json is a pure function of (config, master_seed): run it twice and
the bytes match.
"""

import json
import pathlib
import tempfile

from reprolab.cli import main

workdir = pathlib.Path(tempfile.mkdtemp(prefix="reprolab_demo_"))
config = {
    "experiment_id": "demo_sweep",
    "scenario": "smooth_sto_lb",
    "params": {"epsilon": 0.05, "delta": 1.0},
    "solver": {"schedule": "slowed", "averaging": "uniform"},
    "grid": {"T": [64, 128, 256, 512]},
    "trials": 12,
    "pairing": "independent",
    "master_seed": 20260810,
    "output_dir": str(workdir / "out"),
}
cfg_path = workdir / "config.json"
cfg_path.write_text(json.dumps(config, indent=2))
print(f"config: {cfg_path}\n")

code = main(["run", str(cfg_path)])
print(f"\n`run` exit code: {code}")

results = workdir / "out" / "results.csv"
print("\nresults.csv:")
print(results.read_text())

print("fits.json:")
print((workdir / "out" / "fits.json").read_text())

code = main(["plotdata", str(results), "--axis", "T",
             "--out", str(workdir / "plot.csv"),
             "--svg", str(workdir / "plot.svg")])
print(f"`plotdata` exit code: {code}")
print(f"\nplot columns: {workdir / 'plot.csv'}")
print((workdir / "plot.csv").read_text())
print(f"SVG chart: {workdir / 'plot.svg'}")
