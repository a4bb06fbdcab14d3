"""The epoch-driven disagreement learner and the stream drivers.

Per step: if the current point falls where active hypotheses disagree, its
label is requested and buffered; otherwise every active hypothesis agrees and
the shared label is emitted as the prediction. Once the buffer holds M labels
the version space is pruned, the buffer is discarded, and a new epoch begins.
Queried labels are the only labels a learner ever sees; ``run`` counts label
callback invocations and fails hard if they diverge from the query count.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Protocol

import numpy as np

from .core import QueryBuffer, ThresholdParams, VersionSpace, full_version_space, prune
from .errors import ConfigurationError, InvariantViolationError
from .hypotheses import HypothesisGrid, as_point, classify_grid
from .stream import StreamOracle


@dataclass(frozen=True)
class StepOutcome:
    """What one step did: either a query (predicted = -1) or a prediction."""

    queried: bool
    predicted: int
    epoch: int


@dataclass(frozen=True)
class EpochEvent:
    """Summary of one version-space transition."""

    epoch: int
    active_before: int
    active_after: int
    nested: bool


class Learner(Protocol):
    epoch: int

    def step(self, x, label_source: Callable[[np.ndarray], int]) -> StepOutcome: ...


class OlaLearner:
    """Online active learner over a hypothesis grid with a known horizon."""

    def __init__(self, grid: HypothesisGrid, tparams: ThresholdParams):
        if tparams.vc_dim != grid.cls.vc_dimension:
            raise ConfigurationError(
                f"threshold params carry vc_dim={tparams.vc_dim} but the grid class "
                f"has VC dimension {grid.cls.vc_dimension}"
            )
        self.grid = grid
        self.tp = tparams
        self.vs = full_version_space(grid)
        self.buffer = QueryBuffer(tparams.M, grid.cls.dim)
        self.epoch = 0
        self.epoch_events: list[EpochEvent] = []

    @property
    def version_space(self) -> VersionSpace:
        return self.vs

    def step(self, x, label_source: Callable[[np.ndarray], int]) -> StepOutcome:
        pt = as_point(x, self.grid.cls.dim)
        labels = classify_grid(self.grid.cls, self.vs.active_params, pt)
        if labels.min() != labels.max():
            y = int(label_source(pt))
            self.buffer.append(pt, y)
            epoch_before = self.epoch
            if self.buffer.full:
                self._advance_epoch()
            return StepOutcome(True, -1, epoch_before)
        # All active hypotheses agree; the lowest-index one speaks for the set.
        return StepOutcome(False, int(labels[0]), self.epoch)

    def _advance_epoch(self) -> None:
        before = self.vs
        after = prune(self.buffer, before, self.tp)
        nested = bool(np.isin(after.active, before.active).all())
        if not nested:
            raise InvariantViolationError("pruned version space is not nested in its parent")
        self.epoch_events.append(
            EpochEvent(self.epoch, before.active_count, after.active_count, nested)
        )
        self.vs = after
        self.buffer.clear()
        self.epoch += 1


def run(
    learner: Any,
    oracle: StreamOracle,
    T: int,
    *,
    phi_mc: int = 0,
    eval_rng: np.random.Generator | None = None,
):
    """Feed T stream steps to a learner and record the full trace.

    With ``phi_mc`` > 0 the disagreement mass of the learner's version space
    is Monte Carlo estimated at the start of the run and after every epoch
    transition, using an evaluation generator that is independent of the
    stream (so instrumentation never changes a run).
    """
    from .analysis import RunTrace, estimate_phi

    if T < 1:
        raise ConfigurationError(f"run needs T >= 1, got {T}")
    queried = np.zeros(T, dtype=bool)
    predicted = np.full(T, -1, dtype=np.int8)
    y_true = np.zeros(T, dtype=np.uint8)
    y_bayes = np.zeros(T, dtype=np.uint8)
    epoch_col = np.zeros(T, dtype=np.int32)

    calls = 0

    def make_source(label: int) -> Callable[[np.ndarray], int]:
        def source(_pt: np.ndarray) -> int:
            nonlocal calls
            calls += 1
            return label

        return source

    track_phi = phi_mc > 0 and hasattr(learner, "version_space")
    rng = None
    phi_log: list[tuple[int, int, float, float]] = []
    if track_phi:
        rng = oracle.eval_rng(2) if eval_rng is None else eval_rng
        est = estimate_phi(learner.version_space, oracle, phi_mc, rng=rng)
        phi_log.append((getattr(learner, "epoch", 0), 0, est.value, est.stderr))
    last_epoch = getattr(learner, "epoch", 0)

    t = 0
    block = 8192
    while t < T:
        n = min(block, T - t)
        X, y, yb = oracle.draw_block(n)
        for i in range(n):
            out = learner.step(X[i], make_source(int(y[i])))
            queried[t] = out.queried
            if not out.queried:
                predicted[t] = out.predicted
            y_true[t] = y[i]
            y_bayes[t] = yb[i]
            epoch_col[t] = out.epoch
            t += 1
            cur = getattr(learner, "epoch", 0)
            if track_phi and cur != last_epoch:
                est = estimate_phi(learner.version_space, oracle, phi_mc, rng=rng)
                phi_log.append((cur, t, est.value, est.stderr))
            last_epoch = cur

    n_queries = int(queried.sum())
    if calls != n_queries:
        raise InvariantViolationError(
            f"label source invoked {calls} times for {n_queries} queries"
        )
    return RunTrace(
        queried=queried,
        predicted=predicted,
        y_true=y_true,
        y_bayes=y_bayes,
        epoch=epoch_col,
        label_calls=calls,
        epoch_events=list(getattr(learner, "epoch_events", [])),
        phi_log=phi_log,
        final_version_space=getattr(learner, "version_space", None),
    )


def run_doubling(
    make_learner: Callable[[int], Any],
    oracle: StreamOracle,
    T_total: int,
    *,
    phi_mc: int = 0,
    eval_rng: np.random.Generator | None = None,
):
    """Unknown-horizon driver: fresh learners on segments of length 2, 4, 8,
    ... until T_total steps are consumed (the last segment is truncated).
    Epoch indices in the combined trace are re-based so they stay
    nondecreasing across segment boundaries.
    """
    from .analysis import RunTrace

    if T_total < 1:
        raise ConfigurationError(f"run_doubling needs T_total >= 1, got {T_total}")
    traces = []
    horizon = 2
    consumed = 0
    while consumed < T_total:
        seg = min(horizon, T_total - consumed)
        learner = make_learner(horizon)
        traces.append(run(learner, oracle, seg, phi_mc=phi_mc, eval_rng=eval_rng))
        consumed += seg
        horizon *= 2

    offset = 0
    epoch_cols = []
    events: list[EpochEvent] = []
    phi_log: list[tuple[int, int, float, float]] = []
    t_offset = 0
    for tr in traces:
        epoch_cols.append(tr.epoch + offset)
        events.extend(
            EpochEvent(e.epoch + offset, e.active_before, e.active_after, e.nested)
            for e in tr.epoch_events
        )
        phi_log.extend((ep + offset, t + t_offset, v, se) for ep, t, v, se in tr.phi_log)
        offset += int(tr.epoch.max()) + 1 if tr.epoch.size else 1
        t_offset += tr.queried.size
    return RunTrace(
        queried=np.concatenate([tr.queried for tr in traces]),
        predicted=np.concatenate([tr.predicted for tr in traces]),
        y_true=np.concatenate([tr.y_true for tr in traces]),
        y_bayes=np.concatenate([tr.y_bayes for tr in traces]),
        epoch=np.concatenate(epoch_cols),
        label_calls=sum(tr.label_calls for tr in traces),
        epoch_events=events,
        phi_log=phi_log,
        final_version_space=traces[-1].final_version_space,
    )
