"""Command-line experiment runner.

Subcommands::

    bismut run --config cfg.json [--out DIR] [--threads N] [--seed S]
    bismut list-suites
    bismut print-constants --model '{"kind": "sphere", "dimension": 2, "curvature": 1.0}'

``run`` writes <suite>.csv (one row per checked quantity) and <suite>.json
(summary) into the output directory.  Exit codes: 0 all checks passed,
1 bound violations, 2 configuration error, 3 estimator failure, 4 I/O error.
"""

import argparse
import json
import os
import sys

import numpy as np
import scipy

from . import __version__, engine
from .estimators import EstimatorFailure
from .geometry import brute_force_constants
from .reports import config_hash, summarize, write_csv, write_summary
from .suites import SUITES, ConfigError, parse_model, run_suite, validate_config

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_CONFIG = 2
EXIT_ESTIMATOR = 3
EXIT_IO = 4


def _build_parser():
    p = argparse.ArgumentParser(prog="bismut", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run an experiment suite from a JSON config")
    run_p.add_argument("--config", required=True, help="path to the JSON config")
    run_p.add_argument("--out", default=None, help="output directory (overrides config)")
    run_p.add_argument("--threads", type=int, default=None, help="worker threads (overrides config)")
    run_p.add_argument("--seed", type=int, default=None, help="master seed (overrides config)")

    sub.add_parser("list-suites", help="list available suites")

    pc = sub.add_parser("print-constants", help="print curvature constants of a model")
    pc.add_argument("--model", required=True, help="model spec as inline JSON")
    pc.add_argument("--samples", type=int, default=2000, help="sweep size for the brute-force check")
    return p


def cmd_run(args) -> int:
    try:
        with open(args.config) as fh:
            raw = json.load(fh)
    except OSError as exc:
        print(f"config error: cannot read {args.config}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except json.JSONDecodeError as exc:
        print(f"config error: invalid JSON: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if args.seed is not None:
        raw["seed"] = args.seed
    if args.threads is not None:
        raw["threads"] = args.threads
    try:
        cfg = validate_config(raw)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    out_dir = args.out or cfg.get("output", "reports")
    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as exc:
        print(f"io error: cannot create {out_dir}: {exc}", file=sys.stderr)
        return EXIT_IO

    try:
        rows = run_suite(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except EstimatorFailure as exc:
        print(f"estimator failure: {exc}", file=sys.stderr)
        return EXIT_ESTIMATOR

    header = {
        "report": "bismut",
        "suite": cfg["suite"],
        "config_sha256": config_hash(cfg),
        "seed": cfg["seed"],
        "versions": f"bismut={__version__} numpy={np.__version__} scipy={scipy.__version__}",
        "backend": engine.BACKEND,
    }
    summary = summarize(cfg["suite"], rows)
    csv_path = os.path.join(out_dir, f"{cfg['suite']}.csv")
    json_path = os.path.join(out_dir, f"{cfg['suite']}.json")
    try:
        write_csv(csv_path, rows, header)
        write_summary(json_path, summary)
    except OSError as exc:
        print(f"io error: cannot write reports: {exc}", file=sys.stderr)
        return EXIT_IO

    print(f"{cfg['suite']}: {summary['n_pass']} passed, {summary['n_fail']} failed, "
          f"worst margin {summary['worst_margin']:.6g}")
    print(f"wrote {csv_path} and {json_path}")
    return EXIT_OK if summary["n_fail"] == 0 else EXIT_VIOLATIONS


def cmd_list_suites() -> int:
    for s in SUITES:
        print(s)
    return EXIT_OK


def cmd_print_constants(args) -> int:
    try:
        spec = json.loads(args.model)
        model = parse_model(spec)
    except (json.JSONDecodeError, ConfigError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    exact = model.curvature_constants()
    swept = brute_force_constants(model, max(args.samples, 1000))
    print(f"model: {model.kind} d={model.dimension} curvature={model.curvature:g} "
          f"drift={model.drift_coefficient:g} h3={model.h3_scale:g}")
    print(f"closed form : K={exact.K:.12g} K1={exact.K1:.12g} K2={exact.K2:.12g}")
    print(f"brute force : K={swept.K:.12g} K1={swept.K1:.12g} K2={swept.K2:.12g}")
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "run":
        return cmd_run(args)
    if args.command == "list-suites":
        return cmd_list_suites()
    return cmd_print_constants(args)


if __name__ == "__main__":
    sys.exit(main())
