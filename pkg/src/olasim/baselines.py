"""Baseline stream learners: a realizable consistency learner (CAL-style), an
agnostic region-halving eliminator (A2-style), a label-inference reduction
(DHM-style), and a margin-based selective-sampling perceptron (CBGZ-style).

The first three are reconstructions at the level of the published procedures'
query curves, not line-by-line ports: each keeps the defining mechanism (query
inside the disagreement region and eliminate by consistency; eliminate by
upper/lower error bounds and start a fresh round when the region mass halves;
infer a label whenever forcing the opposite label costs more than a
concentration threshold) with simulation-sized constants. The two
bound-driven baselines share the learner-wide threshold scale so comparisons
against the epoch learner differ in structure, not in tuning: their bounds are
anchored to absolute empirical errors, which keep a noise floor under label
noise, while the epoch learner's pairwise excesses vanish near the best
hypothesis.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .core import DEFAULT_THRESHOLD_SCALE, VersionSpace, full_version_space
from .errors import ConfigurationError, InvariantViolationError
from .hypotheses import HypothesisGrid, as_point, classify_grid, shattering_bound
from .learner import EpochEvent, StepOutcome

_MIN_EVAL = 16


class CalLearner:
    """Queries wherever consistent hypotheses disagree; eliminates on every
    queried label. Only sound on realizable streams whose target is on the
    grid."""

    def __init__(self, grid: HypothesisGrid):
        self.grid = grid
        self.vs = full_version_space(grid)
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
            keep = labels == y
            if not keep.any():
                raise InvariantViolationError(
                    "every hypothesis is inconsistent with the queried labels; "
                    "the stream is not realizable over this grid"
                )
            self.vs = VersionSpace(self.grid, self.vs.active[keep])
            return StepOutcome(True, -1, 0)
        return StepOutcome(False, int(labels[0]), 0)


class A2Learner:
    """Round-based eliminator: queries inside the disagreement region, drops
    hypotheses whose error lower bound clears the best upper bound, and starts
    a fresh round (discarding its sample) whenever the estimated disagreement
    mass has halved. Needs a callable that estimates that mass, i.e. marginal
    knowledge of P_X."""

    def __init__(
        self,
        grid: HypothesisGrid,
        horizon: int,
        phi_estimator: Callable[[VersionSpace], float],
        scale: float = DEFAULT_THRESHOLD_SCALE,
    ):
        if horizon < 2:
            raise ConfigurationError(f"A2 needs a horizon >= 2, got {horizon}")
        self.grid = grid
        self.horizon = horizon
        self.phi_estimator = phi_estimator
        self.scale = scale
        self.vs = full_version_space(grid)
        self.epoch = 0
        self.epoch_events: list[EpochEvent] = []
        self._counts = np.zeros(grid.count, dtype=np.int64)
        self._n = 0
        self._next_eval = _MIN_EVAL
        self._round_start_phi = self.phi_estimator(self.vs)

    @property
    def version_space(self) -> VersionSpace:
        return self.vs

    def step(self, x, label_source: Callable[[np.ndarray], int]) -> StepOutcome:
        pt = as_point(x, self.grid.cls.dim)
        labels = classify_grid(self.grid.cls, self.vs.active_params, pt)
        if labels.min() == labels.max():
            return StepOutcome(False, int(labels[0]), self.epoch)
        y = int(label_source(pt))
        self._counts[: self.vs.active_count] += labels != y
        self._n += 1
        if self._n >= self._next_eval:
            self._evaluate_bounds()
            self._next_eval = max(self._next_eval * 2, self._n + 1)
        return StepOutcome(True, -1, self.epoch)

    def _evaluate_bounds(self) -> None:
        n = self._n
        errs = self._counts[: self.vs.active_count] / n
        S = shattering_bound(self.grid.cls, 2 * n)
        # Confidence 1/T^2 per evaluation, normalized-deviation shape.
        alpha = self.scale * math.sqrt(
            (4.0 / n) * (math.log(8.0) + 2.0 * math.log(S) + 2.0 * math.log(self.horizon))
        )
        root = np.sqrt(errs)
        upper = errs + alpha**2 + alpha * root
        lower = errs - alpha * root
        keep = lower <= upper.min()
        if not keep.any():
            raise InvariantViolationError("A2 bounds eliminated every hypothesis")
        if not keep.all():
            before = self.vs.active_count
            self.vs = VersionSpace(self.grid, self.vs.active[keep])
            self._counts[: self.vs.active_count] = self._counts[: before][keep]
            phi = self.phi_estimator(self.vs)
            if phi <= 0.5 * self._round_start_phi:
                self.epoch_events.append(
                    EpochEvent(self.epoch, before, self.vs.active_count, True)
                )
                self.epoch += 1
                self._round_start_phi = phi
                self._counts[: self.vs.active_count] = 0
                self._n = 0
                self._next_eval = _MIN_EVAL


class DhmLearner:
    """Reduction-style selective sampler: before asking for a label, fit the
    best hypothesis under each forced label for the current point; if one
    forced label is worse by more than a concentration threshold, infer the
    other label (and train on it as if it were observed), otherwise query."""

    def __init__(
        self,
        grid: HypothesisGrid,
        horizon: int,
        scale: float = DEFAULT_THRESHOLD_SCALE,
    ):
        if horizon < 2:
            raise ConfigurationError(f"DHM needs a horizon >= 2, got {horizon}")
        self.grid = grid
        self.horizon = horizon
        self.scale = scale
        self.epoch = 0
        self.epoch_events: list[EpochEvent] = []
        self._counts = np.zeros(grid.count, dtype=np.int64)
        self._n = 0

    def step(self, x, label_source: Callable[[np.ndarray], int]) -> StepOutcome:
        pt = as_point(x, self.grid.cls.dim)
        labels = classify_grid(self.grid.cls, self.grid.params, pt)
        inferred = self._infer(labels)
        if inferred is None:
            y = int(label_source(pt))
            self._absorb(labels, y)
            return StepOutcome(True, -1, 0)
        self._absorb(labels, inferred)
        return StepOutcome(False, inferred, 0)

    def _infer(self, labels: np.ndarray) -> int | None:
        ones = labels == 1
        if ones.all():
            return 1
        if not ones.any():
            return 0
        if self._n < _MIN_EVAL:
            return None
        n = self._n
        e1 = float(self._counts[ones].min()) / n
        e0 = float(self._counts[~ones].min()) / n
        S = shattering_bound(self.grid.cls, 2 * n)
        # delta = 1/T split over steps as delta / (n (n + 1)).
        alpha = self.scale * math.sqrt(
            (4.0 / n)
            * (
                math.log(8.0)
                + 2.0 * math.log(S)
                + math.log(float(n) * (n + 1))
                + math.log(self.horizon)
            )
        )
        threshold = alpha**2 + alpha * (math.sqrt(e0) + math.sqrt(e1))
        if e0 - e1 > threshold:
            return 1
        if e1 - e0 > threshold:
            return 0
        return None

    def _absorb(self, labels: np.ndarray, y: int) -> None:
        self._counts += labels != y
        self._n += 1


class CbgzLearner:
    """Selective-sampling perceptron: predict by the sign of w . x, query with
    probability b / (b + |w . x|), and make a perceptron update on queried
    mistakes. A zero weight vector predicts 1 and queries surely."""

    def __init__(self, dim: int, b: float = 1.0, rng: np.random.Generator | None = None):
        if dim < 1:
            raise ConfigurationError(f"CBGZ needs dim >= 1, got {dim}")
        if b <= 0:
            raise ConfigurationError(f"CBGZ smoothing b must be positive, got {b}")
        self.dim = dim
        self.b = b
        self.rng = np.random.default_rng(0) if rng is None else rng
        self.w = np.zeros(dim, dtype=float)
        self.epoch = 0
        self.epoch_events: list[EpochEvent] = []

    def query_probability(self, x) -> float:
        pt = as_point(x, self.dim)
        return self.b / (self.b + abs(float(self.w @ pt)))

    def step(self, x, label_source: Callable[[np.ndarray], int]) -> StepOutcome:
        pt = as_point(x, self.dim)
        margin = float(self.w @ pt)
        pred = 1 if margin >= 0.0 else 0
        if self.rng.random() < self.b / (self.b + abs(margin)):
            y = int(label_source(pt))
            if pred != y:
                self.w += (2 * y - 1) * pt
            return StepOutcome(True, -1, 0)
        return StepOutcome(False, pred, 0)
