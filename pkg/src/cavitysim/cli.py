"""Command-line entry point: ``sim <experiment> [--config f] [--threads n] [--seed s] [--out dir]``."""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from .experiments import EXPERIMENTS, load_config, parse_config, run_experiment


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sim",
        description="Coupled atom-cavity chain experiments (ground-state sweeps, "
        "blockade dynamics, spin-chain comparison, self checks).",
    )
    parser.add_argument("experiment", choices=EXPERIMENTS)
    parser.add_argument("--config", help="JSON config file (see README for the schema)")
    parser.add_argument("--threads", type=int, default=1, help="worker processes for trajectory ensembles")
    parser.add_argument("--seed", type=int, default=None, help="override base_seed")
    parser.add_argument("--out", default=None, help="override output directory")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.config:
            cfg = load_config(args.config, experiment=args.experiment)
        else:
            cfg = parse_config({"experiment": args.experiment})
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    if args.seed is not None:
        cfg = replace(cfg, base_seed=args.seed)
    if args.out is not None:
        cfg = replace(cfg, output_dir=args.out)

    result = run_experiment(cfg, threads=max(1, args.threads))
    for name, path in result["paths"].items():
        print(f"{name}: {path}")
    if "passed" in result and not result["passed"]:
        failed = [c["name"] for c in result["summary"]["checks"] if not c["passed"]]
        print(f"FAILED checks: {', '.join(failed)}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
