"""Run traces, query/regret metrics, and Monte Carlo estimators for
disagreement mass, hypothesis distance, and the disagreement coefficient.

Regret here is excess mistakes over the Bayes classifier, summed over
predicted (non-query) steps only:

    R(t) = sum_{s <= t, predicted} 1[pred_s != y_s] - 1[bayes_s != y_s]

so it can be negative on lucky noise. Q(t) counts queries among the first t
steps. All estimators draw from an evaluation generator independent of any
learner's stream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .core import VersionSpace
from .errors import ConfigurationError
from .hypotheses import HypothesisClass, HypothesisGrid, classify_batch, nearest_index
from .learner import EpochEvent
from .stream import StreamOracle

DEFAULT_R_GRID = tuple(2.0**k for k in range(-10, 1))

_CHUNK = 2048


@dataclass
class RunTrace:
    """Per-step record of one run plus per-epoch transition summaries."""

    queried: np.ndarray
    predicted: np.ndarray
    y_true: np.ndarray
    y_bayes: np.ndarray
    epoch: np.ndarray
    label_calls: int
    epoch_events: list[EpochEvent] = field(default_factory=list)
    phi_log: list[tuple[int, int, float, float]] = field(default_factory=list)
    final_version_space: VersionSpace | None = None

    @property
    def T(self) -> int:
        return int(self.queried.size)


@dataclass(frozen=True)
class MetricSeries:
    t: np.ndarray
    Q: np.ndarray
    R: np.ndarray


class PhiEstimate(NamedTuple):
    value: float
    stderr: float


@dataclass(frozen=True)
class LabelComplexityBound:
    """Closed-form query bound 2 m d / ln(2/(1+c)) * (ln T + 1)^2 with
    c = 8 theta / (gamma sqrt(m)). ``in_regime`` records whether m clears
    256 theta^2 / gamma^2 (equivalently c <= 1/2); outside that regime the
    value is still reported when c < 1 and is inf otherwise."""

    value: float
    c: float
    in_regime: bool


def compute_metrics(trace: RunTrace, t_grid: np.ndarray | None = None) -> MetricSeries:
    """Cumulative Q and R, either per step or sampled on a given step grid."""
    q = np.cumsum(trace.queried.astype(np.int64))
    pred_steps = ~trace.queried
    penalty = np.zeros(trace.T, dtype=np.int64)
    wrong = (trace.predicted != trace.y_true) & pred_steps
    bayes_wrong = (trace.y_bayes != trace.y_true) & pred_steps
    penalty[wrong] += 1
    penalty[bayes_wrong] -= 1
    r = np.cumsum(penalty)
    if t_grid is None:
        t = np.arange(1, trace.T + 1, dtype=np.int64)
        return MetricSeries(t, q, r)
    t = np.asarray(t_grid, dtype=np.int64)
    if t.size == 0 or t.min() < 1 or t.max() > trace.T:
        raise ConfigurationError("t_grid must contain steps in [1, T]")
    return MetricSeries(t, q[t - 1], r[t - 1])


def log_t_grid(T: int, points: int = 50) -> np.ndarray:
    """About ``points`` distinct integer steps, logarithmically spaced in
    [1, T], always ending at T."""
    if T < 1:
        raise ConfigurationError(f"log_t_grid needs T >= 1, got {T}")
    raw = np.unique(np.round(np.logspace(0.0, math.log10(T), points)).astype(np.int64))
    return raw[(raw >= 1) & (raw <= T)]


def estimate_phi(
    vs: VersionSpace,
    oracle: StreamOracle,
    n_mc: int,
    rng: np.random.Generator | None = None,
) -> PhiEstimate:
    """Monte Carlo mass of the disagreement region of a version space."""
    if n_mc < 1:
        raise ConfigurationError(f"estimate_phi needs n_mc >= 1, got {n_mc}")
    r = oracle.eval_rng(2) if rng is None else rng
    X = oracle.distribution.sample(r, n_mc)
    cls = vs.grid.cls
    base = classify_batch(cls, vs.active_params[:1], X)[0]
    disagree = np.zeros(n_mc, dtype=bool)
    for lo in range(1, vs.active_count, _CHUNK):
        chunk = classify_batch(cls, vs.active_params[lo : lo + _CHUNK], X)
        disagree |= (chunk != base).any(axis=0)
    value = float(disagree.mean())
    stderr = math.sqrt(value * (1.0 - value) / n_mc)
    return PhiEstimate(value, stderr)


def estimate_rho(
    cls: HypothesisClass,
    params1,
    params2,
    oracle: StreamOracle,
    n_mc: int,
    rng: np.random.Generator | None = None,
) -> float:
    """Monte Carlo probability that two hypotheses label a fresh point
    differently."""
    if n_mc < 1:
        raise ConfigurationError(f"estimate_rho needs n_mc >= 1, got {n_mc}")
    r = oracle.eval_rng(3) if rng is None else rng
    X = oracle.distribution.sample(r, n_mc)
    p1 = np.atleast_1d(np.asarray(params1, dtype=float)).reshape(1, -1)
    p2 = np.atleast_1d(np.asarray(params2, dtype=float)).reshape(1, -1)
    a = classify_batch(cls, p1, X)[0]
    b = classify_batch(cls, p2, X)[0]
    return float(np.mean(a != b))


def estimate_theta(
    grid: HypothesisGrid,
    star_params,
    oracle: StreamOracle,
    r_grid=DEFAULT_R_GRID,
    n_mc: int = 10**5,
    rng: np.random.Generator | None = None,
) -> float:
    """Disagreement coefficient sup_r phi(ball(h*, r)) / r over a radius grid.

    Balls are taken over the hypothesis grid: member i has estimated distance
    rho_i < r from h*. One shared Monte Carlo sample serves every radius; per
    sample point we keep the smallest rho_i among hypotheses that disagree
    with h* there, so the ball's disagreement mass at radius r is just the
    fraction of points with that minimum below r.
    """
    if n_mc < 1:
        raise ConfigurationError(f"estimate_theta needs n_mc >= 1, got {n_mc}")
    radii = np.asarray(r_grid, dtype=float)
    if radii.size == 0 or np.any(radii <= 0):
        raise ConfigurationError("r_grid must hold positive radii")
    r = oracle.eval_rng(4) if rng is None else rng
    X = oracle.distribution.sample(r, n_mc)
    cls = grid.cls
    star = np.atleast_1d(np.asarray(star_params, dtype=float)).reshape(1, -1)
    star_pred = classify_batch(cls, star, X)[0]
    # Per sample point, the smallest rho_i among hypotheses differing from h*
    # there. Within a chunk, scanning rows in ascending-rho order makes the
    # first differing row per column that chunk's minimum.
    min_rho = np.full(n_mc, np.inf)
    chunk_rows = max(1, _CHUNK // max(1, n_mc // 1000))
    for lo in range(0, grid.count, chunk_rows):
        differ = classify_batch(cls, grid.params[lo : lo + chunk_rows], X) != star_pred
        rho = differ.mean(axis=1)
        order = np.argsort(rho, kind="stable")
        differ = differ[order]
        hit = differ.any(axis=0)
        first = np.argmax(differ, axis=0)
        cand = np.where(hit, rho[order][first], np.inf)
        np.minimum(min_rho, cand, out=min_rho)
    best = 0.0
    for radius in radii:
        phi = float(np.mean(min_rho < radius))
        best = max(best, phi / radius)
    return best


def label_complexity_bound(
    d: int, m: int, theta: float, gamma: float, T: int
) -> LabelComplexityBound:
    """Closed-form expected-query bound for the epoch learner."""
    if d < 1 or m < 1 or T < 2:
        raise ConfigurationError("label_complexity_bound needs d >= 1, m >= 1, T >= 2")
    if theta <= 0 or not (0 < gamma <= 0.5):
        raise ConfigurationError("label_complexity_bound needs theta > 0 and gamma in (0, 0.5]")
    c = 8.0 * theta / (gamma * math.sqrt(m))
    in_regime = m >= 256.0 * theta**2 / gamma**2
    if c >= 1.0:
        return LabelComplexityBound(math.inf, c, in_regime)
    value = 2.0 * m * d / math.log(2.0 / (1.0 + c)) * (math.log(T) + 1.0) ** 2
    return LabelComplexityBound(value, c, in_regime)


def bayes_retained(vs: VersionSpace, star_params) -> bool:
    """True iff the grid hypothesis nearest the Bayes parameters is active."""
    idx = nearest_index(vs.grid, star_params)
    return bool((vs.active == idx).any())
