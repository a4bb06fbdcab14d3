"""Experiment execution: build streams and learners from a configuration, run
replications, and write per-seed and aggregate CSVs.

Replications are independent; with the ``OLASIM_WORKERS`` environment
variable set above 1 they run in a process pool. Output rows are assembled in
(learner, seed) order regardless of scheduling, and floats are serialized via
``repr``, so identical configurations yield byte-identical aggregate files.
"""

from __future__ import annotations

import copy
import csv
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .. import analysis
from ..baselines import A2Learner, CalLearner, CbgzLearner, DhmLearner
from ..core import ThresholdParams
from ..errors import ConfigurationError
from ..hypotheses import HypothesisClass, HypothesisGrid, build_grid
from ..learner import EpochEvent, OlaLearner, run, run_doubling
from ..stream import LinearSphere, MassartFlip, StreamOracle, UniformCube, UniformSphere
from . import config as cfgmod

AGGREGATE_COLUMNS = ["t", "learner", "mean_Q", "se_Q", "mean_R", "se_R", "n_seeds"]
SUMMARY_COLUMNS = [
    "learner",
    "seed",
    "T",
    "Q_final",
    "R_final",
    "label_calls",
    "epochs",
    "final_active",
    "bayes_retained",
    "nested_ok",
    "fingerprint",
]

_CBGZ_RNG_TAG = 0xCB62


@dataclass
class RunResult:
    """Reduced outcome of one (learner, seed) replication."""

    learner: str
    seed: int
    T: int
    t_grid: np.ndarray
    Q: np.ndarray
    R: np.ndarray
    label_calls: int
    epochs: int
    final_active: int | None
    bayes_retained: bool | None
    nested_ok: bool
    epoch_events: list[EpochEvent]
    phi_log: list[tuple[int, int, float, float]]

    @property
    def Q_final(self) -> int:
        return int(self.Q[-1])

    @property
    def R_final(self) -> int:
        return int(self.R[-1])


@dataclass
class ExperimentResult:
    config: dict[str, Any]
    fingerprint: str
    runs: list[RunResult]
    aggregate: list[dict[str, Any]]
    t_grid: np.ndarray
    out_dir: Path | None = None
    files: dict[str, Path] = field(default_factory=dict)


def build_class(cfg: dict[str, Any]) -> HypothesisClass:
    kind = cfg["hypothesis"]["kind"]
    if kind == "halfspace":
        dim = cfg["hypothesis"]["dim"] or 2
        return HypothesisClass(kind, dim)
    dims = {"threshold1d": 1, "interval1d": 1, "box2d": 2}
    if kind not in dims:
        raise ConfigurationError(f"unknown hypothesis kind {kind!r}")
    return HypothesisClass(kind, dims[kind])


def build_grid_from_config(cfg: dict[str, Any]) -> HypothesisGrid:
    return build_grid(build_class(cfg), cfg["hypothesis"]["resolution"])


def build_oracle(cfg: dict[str, Any], seed: int) -> StreamOracle:
    cls = build_class(cfg)
    bayes = np.asarray(cfg["stream"]["bayes_params"], dtype=float)
    noise_cfg = cfg["noise"]
    if noise_cfg["kind"] == "massart_flip":
        eta_high = float(noise_cfg["eta_high"])
        eta_low = noise_cfg.get("eta_low")
        noise = MassartFlip(eta_high, 1.0 - eta_high if eta_low is None else float(eta_low))
    else:
        noise = LinearSphere(bayes)
    dist_kind = cfg["stream"]["distribution"]
    dist = UniformCube(cls.dim) if dist_kind == "uniform_cube" else UniformSphere(cls.dim)
    return StreamOracle(cls, bayes, noise, dist, seed)


def build_learner(
    kind: str,
    cfg: dict[str, Any],
    grid: HypothesisGrid,
    horizon: int,
    oracle: StreamOracle,
    seed: int,
):
    scale = float(cfg["threshold"]["scale"])
    if kind == "ola":
        tp = ThresholdParams(
            horizon=horizon,
            vc_dim=grid.cls.vc_dimension,
            m=int(cfg["ola"]["m"]),
            scale=scale,
            beta_squared_radicals=bool(cfg["threshold"]["beta_squared_radicals"]),
        )
        return OlaLearner(grid, tp)
    if kind == "cal":
        noise = cfg["noise"]
        if noise["kind"] != "massart_flip" or float(noise["eta_high"]) != 1.0:
            raise ConfigurationError(
                "the consistency learner requires a realizable stream "
                "(massart_flip with eta_high=1)"
            )
        return CalLearner(grid)
    if kind == "a2":
        phi_rng = oracle.eval_rng(5)
        phi_mc = int(cfg["analysis"]["phi_mc"])

        def phi_estimator(vs) -> float:
            return analysis.estimate_phi(vs, oracle, phi_mc, rng=phi_rng).value

        return A2Learner(grid, max(horizon, 2), phi_estimator, scale=scale)
    if kind == "dhm":
        return DhmLearner(grid, max(horizon, 2), scale=scale)
    if kind == "cbgz":
        rng = np.random.default_rng(np.random.SeedSequence((seed, _CBGZ_RNG_TAG)))
        return CbgzLearner(grid.cls.dim, float(cfg["cbgz"]["b"]), rng=rng)
    raise ConfigurationError(f"unknown learner kind {kind!r}")


def execute_run(
    cfg: dict[str, Any],
    kind: str,
    seed: int,
    grid: HypothesisGrid | None = None,
) -> RunResult:
    """One replication: build oracle and learner, run T steps, reduce."""
    grid = build_grid_from_config(cfg) if grid is None else grid
    oracle = build_oracle(cfg, seed)
    T = int(cfg["horizon"]["T"])
    phi_mc = int(cfg["analysis"]["phi_mc"])
    if bool(cfg["horizon"]["unknown"]):
        trace = run_doubling(
            lambda h: build_learner(kind, cfg, grid, h, oracle, seed),
            oracle,
            T,
            phi_mc=phi_mc,
        )
    else:
        learner = build_learner(kind, cfg, grid, T, oracle, seed)
        trace = run(learner, oracle, T, phi_mc=phi_mc)
    t_grid = analysis.log_t_grid(T, int(cfg["grid_points"]))
    series = analysis.compute_metrics(trace, t_grid)
    vs = trace.final_version_space
    retained = None
    if vs is not None:
        retained = analysis.bayes_retained(vs, np.asarray(cfg["stream"]["bayes_params"]))
    return RunResult(
        learner=kind,
        seed=seed,
        T=T,
        t_grid=series.t,
        Q=series.Q,
        R=series.R,
        label_calls=trace.label_calls,
        epochs=int(trace.epoch.max()) if trace.epoch.size else 0,
        final_active=None if vs is None else vs.active_count,
        bayes_retained=retained,
        nested_ok=all(e.nested for e in trace.epoch_events),
        epoch_events=trace.epoch_events,
        phi_log=trace.phi_log,
    )


def _run_task(args: tuple[dict[str, Any], str, int]) -> RunResult:
    cfg, kind, seed = args
    return execute_run(cfg, kind, seed)


def run_experiment(cfg: dict[str, Any], out_dir: str | Path | None = None) -> ExperimentResult:
    """Run every configured learner over every seed; optionally write CSVs."""
    fp = cfgmod.fingerprint(cfg)
    kinds = cfgmod.learner_kinds(cfg)
    seeds = cfgmod.seed_list(cfg)
    tasks = [(cfg, kind, seed) for kind in kinds for seed in seeds]
    workers = _worker_count()
    started = time.monotonic()
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_task, tasks))
    else:
        grid = build_grid_from_config(cfg)
        results = [execute_run(cfg, kind, seed, grid=grid) for cfg, kind, seed in tasks]
    elapsed = time.monotonic() - started
    results.sort(key=lambda r: (kinds.index(r.learner), seeds.index(r.seed)))

    t_grid = analysis.log_t_grid(int(cfg["horizon"]["T"]), int(cfg["grid_points"]))
    aggregate = _aggregate_rows(results, kinds, t_grid)
    out = ExperimentResult(cfg, fp, results, aggregate, t_grid)
    if out_dir is not None:
        out.out_dir = Path(out_dir)
        out.files = _write_outputs(out, elapsed)
    return out


def _worker_count() -> int:
    raw = os.environ.get("OLASIM_WORKERS", "1")
    try:
        n = int(raw)
    except ValueError as exc:
        raise ConfigurationError(f"OLASIM_WORKERS must be an integer, got {raw!r}") from exc
    return max(1, n)


def _aggregate_rows(
    results: list[RunResult], kinds: list[str], t_grid: np.ndarray
) -> list[dict[str, Any]]:
    rows = []
    for kind in kinds:
        group = [r for r in results if r.learner == kind]
        if not group:
            continue
        Q = np.stack([r.Q for r in group]).astype(float)
        R = np.stack([r.R for r in group]).astype(float)
        n = len(group)
        se_divisor = np.sqrt(n)
        for i, t in enumerate(t_grid):
            rows.append(
                {
                    "t": int(t),
                    "learner": kind,
                    "mean_Q": float(Q[:, i].mean()),
                    "se_Q": float(Q[:, i].std(ddof=1) / se_divisor) if n > 1 else 0.0,
                    "mean_R": float(R[:, i].mean()),
                    "se_R": float(R[:, i].std(ddof=1) / se_divisor) if n > 1 else 0.0,
                    "n_seeds": n,
                }
            )
    return rows


def _fmt(value: Any) -> str:
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if value is None:
        return ""
    return str(value)


def _write_outputs(result: ExperimentResult, elapsed: float) -> dict[str, Path]:
    out_dir = result.out_dir
    assert out_dir is not None
    out_dir.mkdir(parents=True, exist_ok=True)
    files = {}

    agg_path = out_dir / "aggregate.csv"
    with open(agg_path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(AGGREGATE_COLUMNS)
        for row in result.aggregate:
            writer.writerow([_fmt(row[c]) for c in AGGREGATE_COLUMNS])
    files["aggregate"] = agg_path

    sum_path = out_dir / "summary.csv"
    with open(sum_path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SUMMARY_COLUMNS)
        for r in result.runs:
            writer.writerow(
                [
                    r.learner,
                    r.seed,
                    r.T,
                    r.Q_final,
                    r.R_final,
                    r.label_calls,
                    r.epochs,
                    _fmt(r.final_active),
                    _fmt(r.bayes_retained),
                    _fmt(r.nested_ok),
                    result.fingerprint,
                ]
            )
    files["summary"] = sum_path

    meta_path = out_dir / "meta.json"
    with open(meta_path, "w") as fh:
        json.dump(
            {
                "fingerprint": result.fingerprint,
                "config": result.config,
                "seeds": cfgmod.seed_list(result.config),
                "elapsed_seconds": round(elapsed, 3),
            },
            fh,
            indent=2,
            sort_keys=True,
        )
        fh.write("\n")
    files["meta"] = meta_path
    return files


def sweep(
    cfg: dict[str, Any],
    axis: str,
    values: list[float],
    out_dir: str | Path,
) -> list[ExperimentResult]:
    """Re-run the experiment with a numeric config key swept over values;
    writes each run's outputs in a subdirectory plus a combined sweep.csv."""
    current = cfgmod.get_path(cfg, axis)
    if isinstance(current, bool) or not isinstance(current, (int, float)):
        raise ConfigurationError(
            f"sweep axis {axis!r} must point at a numeric value, found {current!r}"
        )
    if not values:
        raise ConfigurationError("sweep needs at least one value")
    out_root = Path(out_dir)
    out_root.mkdir(parents=True, exist_ok=True)
    results = []
    combined: list[dict[str, Any]] = []
    for value in values:
        sub = copy.deepcopy(cfg)
        cast = int(value) if isinstance(current, int) and float(value).is_integer() else value
        cfgmod.set_path(sub, axis, cast)
        sub = cfgmod.resolve(sub)
        label = f"{axis.replace('.', '_')}={cast}"
        res = run_experiment(sub, out_root / label)
        results.append(res)
        for row in res.aggregate:
            combined.append({"axis": axis, "value": cast, **row})
    sweep_path = out_root / "sweep.csv"
    cols = ["axis", "value", *AGGREGATE_COLUMNS]
    with open(sweep_path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(cols)
        for row in combined:
            writer.writerow([_fmt(row[c]) for c in cols])
    return results
