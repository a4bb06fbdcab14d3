"""Synthetic labeled streams: instance distributions, noise models, and the
oracle that draws (x, y) pairs.

The oracle owns a deterministic PCG64 generator keyed by its seed, so a given
seed reproduces the identical stream bit for bit. Evaluation code (Monte Carlo
estimators, conditional samplers) can pass its own generator so that measuring
a run never perturbs it; by default those helpers derive an independent
generator from the oracle seed at a fixed offset stream.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ConfigurationError, SamplingExhaustedError
from .hypotheses import HypothesisClass, as_point, classify_batch

# Tag mixed into SeedSequence for evaluation generators, so estimators are
# deterministic per seed yet independent of the stream draws.
EVAL_STREAM_TAG = 0xE7A1

REJECTION_CAP = 10**7


@dataclass(frozen=True)
class UniformCube:
    """Uniform distribution on [0, 1]^dim."""

    dim: int = 1

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.random((n, self.dim))


@dataclass(frozen=True)
class UniformSphere:
    """Uniform distribution on the unit sphere S^{dim-1}."""

    dim: int = 2

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        raw = rng.standard_normal((n, self.dim))
        norms = np.linalg.norm(raw, axis=1, keepdims=True)
        # A zero draw has probability zero; nudge defensively anyway.
        norms[norms == 0.0] = 1.0
        return raw / norms


Distribution = UniformCube | UniformSphere


@dataclass(frozen=True)
class MassartFlip:
    """Bounded label noise: eta(x) = eta_high where the Bayes classifier says 1
    and eta_low where it says 0. The margin gamma = min(eta_high - 1/2,
    1/2 - eta_low) must be positive."""

    eta_high: float = 0.75
    eta_low: float = 0.25

    def __post_init__(self) -> None:
        if not (0.5 < self.eta_high <= 1.0):
            raise ConfigurationError(f"eta_high must lie in (0.5, 1], got {self.eta_high}")
        if not (0.0 <= self.eta_low < 0.5):
            raise ConfigurationError(f"eta_low must lie in [0, 0.5), got {self.eta_low}")

    @property
    def gamma(self) -> float:
        return min(self.eta_high - 0.5, 0.5 - self.eta_low)


@dataclass(frozen=True)
class LinearSphere:
    """eta(x) = (1 + u . x) / 2 for points on the unit sphere. The margin
    vanishes at the equator u . x = 0, so this is not bounded-noise."""

    u: np.ndarray

    def __post_init__(self) -> None:
        u = np.asarray(self.u, dtype=float)
        if abs(np.linalg.norm(u) - 1.0) > 1e-9:
            raise ConfigurationError("LinearSphere direction u must be a unit vector")
        object.__setattr__(self, "u", u)


NoiseModel = MassartFlip | LinearSphere


@dataclass(frozen=True)
class LabeledExample:
    x: np.ndarray
    y: int


@dataclass
class StreamOracle:
    """Draws x ~ distribution and y ~ Bernoulli(eta(x)).

    ``bayes_params`` are the parameters of the Bayes-optimal hypothesis h* in
    ``cls``; for MassartFlip noise, eta is keyed off h*(x). For LinearSphere
    noise the direction u must equal bayes_params so that the two views of h*
    (sign of u . x, and eta >= 1/2) agree.
    """

    cls: HypothesisClass
    bayes_params: np.ndarray
    noise: NoiseModel
    distribution: Distribution
    seed: int
    rng: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.bayes_params = np.atleast_1d(np.asarray(self.bayes_params, dtype=float))
        if self.bayes_params.shape != (self.cls.params_per_hypothesis,):
            raise ConfigurationError(
                f"bayes_params shape {self.bayes_params.shape} does not match "
                f"{self.cls.kind} parameter count {self.cls.params_per_hypothesis}"
            )
        if self.distribution.dim != self.cls.dim:
            raise ConfigurationError(
                f"distribution dim {self.distribution.dim} does not match "
                f"hypothesis class dim {self.cls.dim}"
            )
        if isinstance(self.noise, LinearSphere):
            if not isinstance(self.distribution, UniformSphere):
                raise ConfigurationError("LinearSphere noise requires a sphere distribution")
            if self.noise.u.shape != self.bayes_params.shape or not np.allclose(
                self.noise.u, self.bayes_params, atol=1e-12
            ):
                raise ConfigurationError(
                    "LinearSphere direction u must equal the Bayes parameters"
                )
        self.rng = np.random.default_rng(np.random.SeedSequence(self.seed))

    # -- label law ---------------------------------------------------------

    def eta_batch(self, X: np.ndarray) -> np.ndarray:
        """P(y = 1 | x) for each row of X."""
        if isinstance(self.noise, MassartFlip):
            bayes = classify_batch(self.cls, self.bayes_params.reshape(1, -1), X).ravel()
            return np.where(bayes == 1, self.noise.eta_high, self.noise.eta_low)
        return (1.0 + X @ self.noise.u) / 2.0

    def eta(self, x) -> float:
        return float(self.eta_batch(as_point(x, self.cls.dim).reshape(1, -1))[0])

    def bayes_label(self, x) -> int:
        """1 iff eta(x) >= 1/2; ties go to 1. Coincides with h*(x)."""
        return int(self.eta(x) >= 0.5)

    def bayes_batch(self, X: np.ndarray) -> np.ndarray:
        return (self.eta_batch(X) >= 0.5).astype(np.uint8)

    # -- drawing -----------------------------------------------------------

    def draw_block(self, n: int, rng: np.random.Generator | None = None):
        """Draw n examples; returns (X, y, y_bayes). One batch of instance
        coordinates plus one uniform per example are consumed, in that order."""
        r = self.rng if rng is None else rng
        X = self.distribution.sample(r, n)
        eta = self.eta_batch(X)
        y = (r.random(n) < eta).astype(np.uint8)
        return X, y, self.bayes_batch(X)

    def next_example(self) -> LabeledExample:
        X, y, _ = self.draw_block(1)
        return LabeledExample(X[0], int(y[0]))

    def eval_rng(self, extra: int = 0) -> np.random.Generator:
        """Evaluation generator independent of the stream draws."""
        return np.random.default_rng(
            np.random.SeedSequence((self.seed, EVAL_STREAM_TAG, extra))
        )

    def sample_conditional(
        self,
        region: Callable[[np.ndarray], np.ndarray],
        n: int,
        cap: int = REJECTION_CAP,
        rng: np.random.Generator | None = None,
    ):
        """Draw n labeled examples from the conditional law P | {x in region}
        by rejection. ``region`` maps an (M, dim) batch to an (M,) boolean
        mask. Raises SamplingExhaustedError once ``cap`` candidate draws have
        been spent."""
        r = self.eval_rng(1) if rng is None else rng
        xs: list[np.ndarray] = []
        ys: list[np.ndarray] = []
        got = 0
        spent = 0
        block = max(1024, 2 * n)
        while got < n:
            if spent >= cap:
                raise SamplingExhaustedError(
                    f"rejection sampling spent {spent} draws for {got}/{n} accepted "
                    "points; the region mass may be zero"
                )
            take = min(block, cap - spent)
            X, y, _ = self.draw_block(take, rng=r)
            spent += take
            mask = np.asarray(region(X), dtype=bool)
            if mask.shape != (take,):
                raise ConfigurationError(
                    "region indicator must return one boolean per candidate row"
                )
            xs.append(X[mask])
            ys.append(y[mask])
            got += int(mask.sum())
        X_all = np.concatenate(xs)[:n]
        y_all = np.concatenate(ys)[:n]
        return X_all, y_all
