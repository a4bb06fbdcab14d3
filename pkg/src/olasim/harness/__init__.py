"""Experiment harness: configuration, presets, runner, plots, CLI."""

from .config import DEFAULTS, fingerprint, learner_kinds, load_config, resolve, seed_list
from .presets import PRESETS
from .runner import (
    ExperimentResult,
    RunResult,
    build_grid_from_config,
    build_learner,
    build_oracle,
    execute_run,
    run_experiment,
    sweep,
)

__all__ = [
    "DEFAULTS",
    "PRESETS",
    "ExperimentResult",
    "RunResult",
    "build_grid_from_config",
    "build_learner",
    "build_oracle",
    "execute_run",
    "fingerprint",
    "learner_kinds",
    "load_config",
    "resolve",
    "run_experiment",
    "seed_list",
    "sweep",
]
