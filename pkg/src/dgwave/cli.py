"""Command-line driver: ``dgwave run <experiment> [flags]``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .dg_core import SchemeConfig
from .experiments import EXPERIMENTS, ExperimentSpec, run, run_all

_OVERRIDES = ("scheme", "degree", "cells", "tfinal", "cfl", "perturb", "seed", "alpha", "outdir")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dgwave", description="DG dispersion experiments for u_t + u_x = 0.")
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run an experiment and write CSV data plus report.csv")
    r.add_argument("experiment", choices=EXPERIMENTS + ("all",))
    r.add_argument("--scheme", choices=("U", "C", "A", "Astar"))
    r.add_argument("--degree", "--N", dest="degree", type=int)
    r.add_argument("--cells", type=int)
    r.add_argument("--tfinal", type=float)
    r.add_argument("--cfl", type=float)
    r.add_argument("--perturb", type=float)
    r.add_argument("--seed", type=int)
    r.add_argument("--alpha", type=float, help="flux constant for scheme A (default 1)")
    r.add_argument("--outdir", type=Path)
    r.add_argument("--config", type=Path, help="JSON file with any of the flags above; flags win")
    r.add_argument("-q", "--quiet", action="store_true")
    return p


def _settings(args: argparse.Namespace) -> dict:
    cfg = {}
    if args.config is not None:
        cfg = json.loads(args.config.read_text())
        unknown = set(cfg) - set(_OVERRIDES)
        if unknown:
            raise ValueError(f"unknown keys in {args.config}: {', '.join(sorted(unknown))}")
    for key in _OVERRIDES:
        v = getattr(args, key)
        if v is not None:
            cfg[key] = v
    return cfg


def _spec(experiment: str, cfg: dict) -> ExperimentSpec:
    kw = {
        "scheme": cfg.get("scheme"),
        "degree": cfg.get("degree"),
        "cells": cfg.get("cells"),
        "t_final": cfg.get("tfinal"),
        "perturb": cfg.get("perturb"),
        "alpha": cfg.get("alpha"),
        "outdir": Path(cfg.get("outdir", "results")),
    }
    if "cfl" in cfg:
        kw["cfl"] = float(cfg["cfl"])
    if "seed" in cfg:
        kw["seed"] = int(cfg["seed"])
    if kw["scheme"] is not None:
        kw["scheme"] = SchemeConfig.named(kw["scheme"], 0).label
    return ExperimentSpec(experiment, **kw)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _settings(args)
        if args.experiment == "all":
            base = {k: cfg[k] for k in ("cfl", "seed", "outdir") if k in cfg}
            summary, reports = run_all(_spec("fig1", base))
        else:
            summary = run(_spec(args.experiment, cfg))
            reports = [summary]
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        parser.error(str(exc))
    if not args.quiet:
        for rep in reports if args.experiment == "all" else []:
            print(f"{rep.experiment}: {'PASS' if rep.passed else 'FAIL'}")
        for c in summary.claims:
            print(c.line())
    return 0 if summary.passed else 1


if __name__ == "__main__":
    sys.exit(main())
