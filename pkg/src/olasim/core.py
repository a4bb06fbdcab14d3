"""Version spaces over hypothesis grids, empirical error bookkeeping, and the
epoch-end elimination rule.

Elimination compares each active hypothesis h against the empirical risk
minimizer h_e of the epoch buffer Z and keeps h iff

    err_Z(h) - err_Z(h_e) < delta(h, h_e)

with delta(h, h_e) = b^2 + b * (sqrt(x1) + sqrt(x2)), where x1 and x2 are the
two one-sided excess errors between h and h_e on Z and b is a concentration
width for sample size |Z| at horizon T. The identity

    err_Z(h1) - err_Z(h2) = excess_Z(h1, h2) - excess_Z(h2, h1)

ties the pieces together; the one-sided excesses concentrate at a rate set by
the disagreement between the pair rather than by their absolute errors, which
is what lets the threshold tighten as the version space shrinks.

A note on scale: ``beta`` below is a distribution-free uniform-convergence
width, and at simulation-sized buffers (tens to hundreds of labels) its value
exceeds 1, so the raw threshold can never fire -- empirical error gaps live in
[0, 1]. Learner configurations therefore apply a multiplicative
``threshold scale`` to beta (see ThresholdParams.scale). The formula and its
confidence calibration are kept exact here and are exercised as such by the
concentration tests; the scale is an explicit, documented knob of the
simulator, not part of the bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, InvariantViolationError
from .hypotheses import HypothesisClass, HypothesisGrid, as_point, classify_batch, classify_grid, shattering_bound

DEFAULT_THRESHOLD_SCALE = 0.15


@dataclass
class VersionSpace:
    """An active subset of a hypothesis grid, stored as sorted indices."""

    grid: HypothesisGrid
    active: np.ndarray
    _params: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.active = np.asarray(self.active, dtype=np.int64)
        if self.active.size == 0:
            raise InvariantViolationError("version space must keep at least one hypothesis")
        if self.active.size > 1 and np.any(np.diff(self.active) <= 0):
            raise ConfigurationError("active indices must be strictly increasing")
        if self.active[0] < 0 or self.active[-1] >= self.grid.count:
            raise ConfigurationError("active indices out of grid range")
        self._params = self.grid.params[self.active]

    @property
    def active_count(self) -> int:
        return int(self.active.size)

    @property
    def active_params(self) -> np.ndarray:
        return self._params


def full_version_space(grid: HypothesisGrid) -> VersionSpace:
    return VersionSpace(grid, np.arange(grid.count, dtype=np.int64))


class QueryBuffer:
    """Fixed-capacity store for one epoch's queried examples."""

    def __init__(self, capacity: int, dim: int):
        if capacity < 1:
            raise ConfigurationError(f"buffer capacity must be >= 1, got {capacity}")
        self.capacity = capacity
        self._X = np.empty((capacity, dim), dtype=float)
        self._y = np.empty(capacity, dtype=np.uint8)
        self.size = 0

    def append(self, x: np.ndarray, y: int) -> None:
        if self.size >= self.capacity:
            raise InvariantViolationError("appending to a full query buffer")
        self._X[self.size] = x
        self._y[self.size] = y
        self.size += 1

    @property
    def full(self) -> bool:
        return self.size == self.capacity

    def arrays(self):
        return self._X[: self.size], self._y[: self.size]

    def clear(self) -> None:
        self.size = 0


@dataclass(frozen=True)
class ThresholdParams:
    """Epoch sizing and elimination-threshold settings for one run.

    M = max(1, ceil(m * d * ln T)) labels are collected per epoch (natural
    log; the max keeps degenerate horizons workable). ``scale`` multiplies the
    concentration width used in elimination thresholds; see the module
    docstring. ``beta_squared_radicals`` switches the radical terms from
    b * (sqrt + sqrt) to b^2 * (sqrt + sqrt), an alternative reading of the
    elimination rule kept behind a flag.
    """

    horizon: int
    vc_dim: int
    m: int = 16
    scale: float = DEFAULT_THRESHOLD_SCALE
    beta_squared_radicals: bool = False

    def __post_init__(self) -> None:
        if self.horizon < 1:
            raise ConfigurationError(f"horizon must be >= 1, got {self.horizon}")
        if self.m < 1:
            raise ConfigurationError(f"m must be >= 1, got {self.m}")
        if self.vc_dim < 1:
            raise ConfigurationError(f"vc_dim must be >= 1, got {self.vc_dim}")
        if self.scale <= 0:
            raise ConfigurationError(f"threshold scale must be positive, got {self.scale}")

    @property
    def M(self) -> int:
        return max(1, math.ceil(self.m * self.vc_dim * math.log(self.horizon)))


def beta(cls: HypothesisClass, n: int, T: int) -> float:
    """Uniform-convergence width sqrt((4/n) ln(16 T^2 S(cls, 2n)^2)).

    The 16 T^2 factor calibrates the confidence to 1/(2 T^2) per comparison,
    which union-bounds over a horizon-T run. Monotone: decreasing in n,
    increasing in T.
    """
    if n < 1:
        raise ConfigurationError(f"beta needs n >= 1, got {n}")
    if T < 2:
        raise ConfigurationError(f"beta needs T >= 2, got {T}")
    S = shattering_bound(cls, 2 * n)
    return math.sqrt((4.0 / n) * (math.log(16.0) + 2.0 * math.log(T) + 2.0 * _log_int(S)))


def beta_for_confidence(cls: HypothesisClass, n: int, delta: float) -> float:
    """Width sqrt((4/n) ln(8 S(cls, 2n)^2 / delta)) at explicit confidence
    delta, as used by the concentration statement itself."""
    if n < 1:
        raise ConfigurationError(f"beta needs n >= 1, got {n}")
    if not (0.0 < delta < 1.0):
        raise ConfigurationError(f"delta must lie in (0, 1), got {delta}")
    S = shattering_bound(cls, 2 * n)
    return math.sqrt((4.0 / n) * (math.log(8.0) + 2.0 * _log_int(S) - math.log(delta)))


def _log_int(v: int) -> float:
    # math.log handles arbitrarily large Python ints exactly enough for us.
    return math.log(v)


def empirical_error(buffer: QueryBuffer, cls: HypothesisClass, params) -> float:
    """Fraction of buffered examples a hypothesis mislabels."""
    X, y = buffer.arrays()
    if X.shape[0] == 0:
        raise ConfigurationError("empirical error of an empty buffer is undefined")
    p = np.atleast_1d(np.asarray(params, dtype=float)).reshape(1, -1)
    pred = classify_batch(cls, p, X)[0]
    return float(np.mean(pred != y))


def excess_error(buffer: QueryBuffer, cls: HypothesisClass, params1, params2) -> float:
    """Fraction of buffered examples where hypothesis 1 errs and hypothesis 2
    is correct."""
    X, y = buffer.arrays()
    if X.shape[0] == 0:
        raise ConfigurationError("excess error of an empty buffer is undefined")
    p1 = np.atleast_1d(np.asarray(params1, dtype=float)).reshape(1, -1)
    p2 = np.atleast_1d(np.asarray(params2, dtype=float)).reshape(1, -1)
    w1 = classify_batch(cls, p1, X)[0] != y
    w2 = classify_batch(cls, p2, X)[0] != y
    return float(np.mean(w1 & ~w2))


def delta_threshold(
    buffer: QueryBuffer,
    cls: HypothesisClass,
    params_h,
    params_ref,
    beta_value: float,
    beta_squared_radicals: bool = False,
) -> float:
    """Elimination threshold b^2 + b (sqrt(x1) + sqrt(x2)) for one pair, with
    x1 = excess(h, ref) and x2 = excess(ref, h) on the buffer."""
    x1 = excess_error(buffer, cls, params_h, params_ref)
    x2 = excess_error(buffer, cls, params_ref, params_h)
    radical_coef = beta_value**2 if beta_squared_radicals else beta_value
    return beta_value**2 + radical_coef * (math.sqrt(x1) + math.sqrt(x2))


def erm(buffer: QueryBuffer, vs: VersionSpace) -> int:
    """Grid index of the active hypothesis with minimal empirical error on the
    buffer; ties go to the lowest grid index."""
    X, y = buffer.arrays()
    if X.shape[0] == 0:
        raise ConfigurationError("ERM over an empty buffer is undefined")
    mism = classify_batch(vs.grid.cls, vs.active_params, X) != y
    errs = mism.mean(axis=1)
    return int(vs.active[int(np.argmin(errs))])


def in_disagreement(vs: VersionSpace, x) -> bool:
    """True iff the active hypotheses do not all give x the same label."""
    pt = as_point(x, vs.grid.cls.dim)
    labels = classify_grid(vs.grid.cls, vs.active_params, pt)
    return bool(labels.min() != labels.max())


def prune(buffer: QueryBuffer, vs: VersionSpace, tp: ThresholdParams) -> VersionSpace:
    """Apply the elimination rule to a full epoch buffer of size M.

    Keeps active h iff err_Z(h) - err_Z(h_e) < delta(h, h_e) where h_e is the
    buffer's ERM over the active set. The ERM itself always survives, so the
    result is a nonempty subset of the input's active set.
    """
    X, y = buffer.arrays()
    if X.shape[0] != tp.M:
        raise ConfigurationError(
            f"prune expects a full buffer of M={tp.M} examples, got {X.shape[0]}"
        )
    cls = vs.grid.cls
    mism = classify_batch(cls, vs.active_params, X) != y
    errs = mism.mean(axis=1)
    j = int(np.argmin(errs))
    ref = mism[j]
    x1 = (mism & ~ref).mean(axis=1)
    x2 = (~mism & ref).mean(axis=1)
    b = tp.scale * beta(cls, tp.M, max(tp.horizon, 2))
    radical_coef = b * b if tp.beta_squared_radicals else b
    thresholds = b * b + radical_coef * (np.sqrt(x1) + np.sqrt(x2))
    keep = (errs - errs[j]) < thresholds
    if not keep[j]:
        raise InvariantViolationError("elimination removed the epoch ERM")
    return VersionSpace(vs.grid, vs.active[keep])
