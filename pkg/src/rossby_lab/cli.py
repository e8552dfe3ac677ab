"""Command-line surface: rossby-lab {run-euler|run-qg|run-acoustic|probe-decay|sweep}."""

from __future__ import annotations

import argparse
import sys

from .config import ExperimentConfig, load_config
from .errors import RossbyLabError
from .harness import (
    run_acoustic_trajectory,
    run_convergence_sweep,
    run_decay_probe,
    run_euler_trajectory,
    run_qg_trajectory,
)


def _add_common(p: argparse.ArgumentParser, epsilon: bool = False):
    p.add_argument("--config", help="JSON configuration file (defaults apply if omitted)")
    p.add_argument("--out-dir", help="output directory (overrides the config)")
    p.add_argument("--seed", type=int, help="RNG seed override for randomized presets")
    if epsilon:
        p.add_argument("--epsilon", type=float, help="scale parameter (default: first configured)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rossby-lab",
        description=(
            "Desk-scale laboratory for rotating compressible flow in the joint "
            "low Mach / low Rossby regime: compressible, wave, and geostrophic "
            "solvers with relative-energy diagnostics."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    _add_common(sub.add_parser("run-euler", help="single compressible trajectory"), epsilon=True)
    _add_common(sub.add_parser("run-qg", help="geostrophic limit trajectory"))
    _add_common(sub.add_parser("run-acoustic", help="rotating wave trajectory"), epsilon=True)
    probe = sub.add_parser("probe-decay", help="dispersive decay probe on a compact bump")
    _add_common(probe, epsilon=True)
    probe.add_argument(
        "--with-oracle",
        action="store_true",
        help="also evaluate the free-space quadrature oracle",
    )
    sweep = sub.add_parser("sweep", help="full epsilon sweep with relative-energy records")
    _add_common(sweep)
    sweep.add_argument("--workers", type=int, default=1, help="parallel runs (default 1)")
    return parser


def _load(args) -> ExperimentConfig:
    from dataclasses import replace

    cfg = load_config(args.config) if args.config else ExperimentConfig()
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    if args.out_dir is not None:
        cfg = replace(cfg, out_dir=args.out_dir)
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _load(args)
        out = cfg.out_dir
        if args.command == "run-euler":
            eps = args.epsilon if args.epsilon is not None else cfg.epsilons[0]
            meta = run_euler_trajectory(cfg, eps, out)
            if meta["status"] != "ok":
                print(f"run failed: {meta['message']}", file=sys.stderr)
                return 2
        elif args.command == "run-qg":
            meta = run_qg_trajectory(cfg, out)
            if meta["status"] != "ok":
                print(f"run failed: {meta['message']}", file=sys.stderr)
                return 2
        elif args.command == "run-acoustic":
            eps = args.epsilon if args.epsilon is not None else cfg.epsilons[0]
            run_acoustic_trajectory(cfg, eps, out)
        elif args.command == "probe-decay":
            eps = args.epsilon if args.epsilon is not None else cfg.epsilons[0]
            run_decay_probe(cfg, eps, out, with_oracle=args.with_oracle)
        elif args.command == "sweep":
            summary = run_convergence_sweep(cfg, out_dir=out, workers=args.workers)
            failed = [r["epsilon"] for r in summary["runs"] if r["status"] != "ok"]
            if failed:
                print(f"failed runs at epsilon = {failed}", file=sys.stderr)
                return 2
    except RossbyLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
