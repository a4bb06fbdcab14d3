"""Shared builders for the test suite."""

import numpy as np
import pytest

from olasim import (
    HypothesisClass,
    MassartFlip,
    QueryBuffer,
    StreamOracle,
    UniformCube,
    threshold1d,
)


def make_buffer(X, y, dim=1):
    """QueryBuffer filled with the given example arrays."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[0] == 1 and X.shape[1] != dim:
        X = X.T
    y = np.asarray(y)
    buf = QueryBuffer(len(y), dim)
    for xi, yi in zip(X.reshape(-1, dim), y):
        buf.append(xi, int(yi))
    return buf


def threshold_oracle(seed=1, eta_high=0.75, eta_low=0.25, bayes=0.5):
    return StreamOracle(
        threshold1d(),
        np.array([bayes]),
        MassartFlip(eta_high, eta_low),
        UniformCube(1),
        seed,
    )


@pytest.fixture
def thr_cls() -> HypothesisClass:
    return threshold1d()
