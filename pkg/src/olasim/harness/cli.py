"""Command-line entry point.

Subcommands:
  run    execute an experiment config and write CSVs
  sweep  repeat an experiment over values of one numeric config key
  theta  Monte Carlo the disagreement coefficient for a config's class
  plot   render SVG charts from a run directory

Exit codes: 0 success, 2 configuration errors, 3 sampling exhaustion,
4 invariant violations.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .. import analysis
from ..errors import ConfigurationError, InvariantViolationError, SamplingExhaustedError
from ..stream import MassartFlip
from . import config as cfgmod
from . import runner


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="olasim")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="path to a JSON config file")
        p.add_argument("--preset", help="preset name (fig1..fig5); merged under --config")

    p_run = sub.add_parser("run", help="run an experiment")
    add_config_args(p_run)
    p_run.add_argument("--out", required=True, help="output directory")

    p_sweep = sub.add_parser("sweep", help="sweep one numeric config key")
    add_config_args(p_sweep)
    p_sweep.add_argument("--axis", required=True, help="dotted config key, e.g. ola.m")
    p_sweep.add_argument("--values", required=True, help="comma-separated numbers")
    p_sweep.add_argument("--out", required=True, help="output directory")

    p_theta = sub.add_parser("theta", help="estimate the disagreement coefficient")
    add_config_args(p_theta)

    p_plot = sub.add_parser("plot", help="render charts from a run directory")
    p_plot.add_argument("--in", dest="in_dir", required=True, help="run directory")
    p_plot.add_argument("--out", help="chart directory (defaults to --in)")
    return parser


def _resolve_config(args: argparse.Namespace) -> dict:
    user = cfgmod.load_config(args.config) if args.config else {}
    if args.config is None and args.preset is None:
        raise ConfigurationError("provide --config, --preset, or both")
    return cfgmod.resolve(user, preset=args.preset)


def _cmd_run(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    result = runner.run_experiment(cfg, args.out)
    print(f"wrote {result.files['aggregate']} ({len(result.runs)} runs, "
          f"fingerprint {result.fingerprint})")
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    try:
        values = [float(v) for v in args.values.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigurationError(f"cannot parse sweep values {args.values!r}") from exc
    results = runner.sweep(cfg, args.axis, values, args.out)
    print(f"wrote {len(results)} sweep runs under {args.out}")
    return 0


def _cmd_theta(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    grid = runner.build_grid_from_config(cfg)
    oracle = runner.build_oracle(cfg, seed=0)
    n_mc = int(cfg["analysis"]["n_mc"])
    r_grid = np.asarray(cfg["analysis"]["r_grid"], dtype=float)
    theta = analysis.estimate_theta(
        grid, oracle.bayes_params, oracle, r_grid=r_grid, n_mc=n_mc
    )
    print(f"theta_hat={theta:.6g} n_mc={n_mc} r_grid_min={r_grid.min():g} "
          f"r_grid_max={r_grid.max():g}")
    if isinstance(oracle.noise, MassartFlip):
        bound = analysis.label_complexity_bound(
            d=grid.cls.vc_dimension,
            m=int(cfg["ola"]["m"]),
            theta=theta,
            gamma=oracle.noise.gamma,
            T=int(cfg["horizon"]["T"]),
        )
        print(f"query_bound={bound.value:.6g} c={bound.c:.6g} in_regime={bound.in_regime}")
    return 0


def _cmd_plot(args: argparse.Namespace) -> int:
    from .plotting import emit_plot

    written = emit_plot(args.in_dir, args.out)
    print("wrote " + ", ".join(str(p) for p in written))
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "run": _cmd_run,
        "sweep": _cmd_sweep,
        "theta": _cmd_theta,
        "plot": _cmd_plot,
    }
    try:
        return handlers[args.command](args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except SamplingExhaustedError as exc:
        print(f"sampling exhausted: {exc}", file=sys.stderr)
        return 3
    except InvariantViolationError as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
