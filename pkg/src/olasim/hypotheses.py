"""Hypothesis classes over low-dimensional instance spaces and their finite
parameter grids.

Four class families are supported:

* ``threshold1d``   -- h_z(x) = 1[x >= z] on [0, 1]
* ``interval1d``    -- h_{a,b}(x) = 1[a <= x <= b] on [0, 1]
* ``box2d``         -- axis-aligned rectangles on [0, 1]^2
* ``halfspace``     -- homogeneous halfspaces 1[u . x >= 0], u on the unit
                       sphere S^{d-1}

Boundary points are always labeled 1. A class is discretized into a finite,
deterministically ordered grid of hypotheses so that version spaces can be
represented as index sets and all per-step work is vectorized over the grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError

KINDS = ("threshold1d", "interval1d", "box2d", "halfspace")

# Default grid resolution per family. For box2d this is deliberately coarse:
# the grid holds (G(G+1)/2)^2 rectangles, which at G=21 is already 53,361.
DEFAULT_RESOLUTION = {
    "threshold1d": 201,
    "interval1d": 101,
    "box2d": 21,
    "halfspace": 256,
}


@dataclass(frozen=True)
class HypothesisClass:
    """A hypothesis family together with its instance-space dimension."""

    kind: str
    dim: int

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ConfigurationError(f"unknown hypothesis kind {self.kind!r}")
        expected = {"threshold1d": 1, "interval1d": 1, "box2d": 2}
        if self.kind in expected and self.dim != expected[self.kind]:
            raise ConfigurationError(
                f"{self.kind} requires dim={expected[self.kind]}, got {self.dim}"
            )
        if self.kind == "halfspace" and self.dim < 2:
            raise ConfigurationError("halfspace requires dim >= 2")

    @property
    def params_per_hypothesis(self) -> int:
        return {"threshold1d": 1, "interval1d": 2, "box2d": 4}.get(self.kind, self.dim)

    @property
    def vc_dimension(self) -> int:
        return {"threshold1d": 1, "interval1d": 2, "box2d": 3}.get(self.kind, self.dim)


def threshold1d() -> HypothesisClass:
    return HypothesisClass("threshold1d", 1)


def interval1d() -> HypothesisClass:
    return HypothesisClass("interval1d", 1)


def box2d() -> HypothesisClass:
    return HypothesisClass("box2d", 2)


def halfspace(dim: int = 2) -> HypothesisClass:
    return HypothesisClass("halfspace", dim)


def as_point(x, dim: int) -> np.ndarray:
    """Coerce ``x`` to a float vector of length ``dim`` (scalars allowed for
    one-dimensional spaces)."""
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if arr.shape != (dim,):
        raise ConfigurationError(
            f"point of shape {arr.shape} does not match instance dimension {dim}"
        )
    return arr


def classify(cls: HypothesisClass, params, x) -> int:
    """Label one point with one hypothesis. Boundary points get label 1."""
    p = np.atleast_1d(np.asarray(params, dtype=float))
    if p.shape != (cls.params_per_hypothesis,):
        raise ConfigurationError(
            f"expected {cls.params_per_hypothesis} parameters for {cls.kind}, "
            f"got shape {p.shape}"
        )
    pt = as_point(x, cls.dim)
    return int(classify_grid(cls, p.reshape(1, -1), pt)[0])


def classify_grid(cls: HypothesisClass, params: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Labels of every hypothesis row in ``params`` (N, p) on one point -> (N,) uint8."""
    if cls.kind == "threshold1d":
        out = x[0] >= params[:, 0]
    elif cls.kind == "interval1d":
        out = (params[:, 0] <= x[0]) & (x[0] <= params[:, 1])
    elif cls.kind == "box2d":
        out = (
            (params[:, 0] <= x[0])
            & (x[0] <= params[:, 1])
            & (params[:, 2] <= x[1])
            & (x[1] <= params[:, 3])
        )
    else:
        out = params @ x >= 0.0
    return out.astype(np.uint8)


def classify_batch(cls: HypothesisClass, params: np.ndarray, X: np.ndarray) -> np.ndarray:
    """Labels of every hypothesis on every point: (N, p) x (M, dim) -> (N, M) uint8."""
    if cls.kind == "threshold1d":
        out = X[:, 0][None, :] >= params[:, 0][:, None]
    elif cls.kind == "interval1d":
        x0 = X[:, 0][None, :]
        out = (params[:, 0][:, None] <= x0) & (x0 <= params[:, 1][:, None])
    elif cls.kind == "box2d":
        x0 = X[:, 0][None, :]
        x1 = X[:, 1][None, :]
        out = (
            (params[:, 0][:, None] <= x0)
            & (x0 <= params[:, 1][:, None])
            & (params[:, 2][:, None] <= x1)
            & (x1 <= params[:, 3][:, None])
        )
    else:
        out = params @ X.T >= 0.0
    return out.astype(np.uint8)


def shattering_bound(cls: HypothesisClass, n: int) -> int:
    """Upper bound on the number of labelings the class realizes on n points.

    Exact counts are used where they are classical: a one-sided threshold
    realizes n+1 labelings on distinct points, an interval realizes
    n(n+1)/2 + 1. The remaining families use the Sauer bound
    sum_{i<=d} C(n, i) with d the VC dimension.
    """
    if n < 1:
        raise ConfigurationError(f"shattering bound needs n >= 1, got {n}")
    if cls.kind == "threshold1d":
        return n + 1
    if cls.kind == "interval1d":
        return n * (n + 1) // 2 + 1
    d = cls.vc_dimension
    return sum(math.comb(n, i) for i in range(min(n, d) + 1))


@dataclass(frozen=True)
class HypothesisGrid:
    """A finite, deterministically ordered discretization of a class.

    ``params`` is a read-only (N, p) float array; hypothesis i is the row
    ``params[i]``. The ordering is stable across runs and platforms: grids
    enumerate parameter tuples in row-major order over per-axis value lists
    that include the corners of the parameter space.
    """

    cls: HypothesisClass
    resolution: int
    params: np.ndarray

    def __post_init__(self) -> None:
        self.params.setflags(write=False)

    @property
    def count(self) -> int:
        return self.params.shape[0]


def build_grid(cls: HypothesisClass, resolution: int | None = None) -> HypothesisGrid:
    """Discretize a class at the given per-axis resolution.

    threshold1d: G thresholds on linspace(0, 1, G).
    interval1d:  all pairs a <= b of grid values, G(G+1)/2 hypotheses,
                 ordered (a outer, b inner); degenerate single-point
                 intervals are included.
    box2d:       the product of the two interval grids, (G(G+1)/2)^2 rows
                 ordered x-interval outer, y-interval inner; each row is
                 (x1, x2, y1, y2).
    halfspace:   G uniformly spaced directions for dim 2 (angle 0 included),
                 a Fibonacci sphere lattice for dim 3.
    """
    G = DEFAULT_RESOLUTION[cls.kind] if resolution is None else int(resolution)
    if G < 2:
        raise ConfigurationError(f"grid resolution must be >= 2, got {G}")
    if cls.kind == "threshold1d":
        params = np.linspace(0.0, 1.0, G).reshape(-1, 1)
    elif cls.kind == "interval1d":
        params = _interval_pairs(G)
    elif cls.kind == "box2d":
        pairs = _interval_pairs(G)
        K = pairs.shape[0]
        params = np.hstack([np.repeat(pairs, K, axis=0), np.tile(pairs, (K, 1))])
    elif cls.dim == 2:
        ang = 2.0 * np.pi * np.arange(G) / G
        params = np.column_stack([np.cos(ang), np.sin(ang)])
    elif cls.dim == 3:
        i = np.arange(G)
        z = 1.0 - (2.0 * i + 1.0) / G
        r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
        phi = i * np.pi * (3.0 - math.sqrt(5.0))
        params = np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
    else:
        raise ConfigurationError(
            f"no deterministic direction grid for halfspace dim {cls.dim}; "
            "supported dims are 2 and 3"
        )
    return HypothesisGrid(cls, G, np.ascontiguousarray(params, dtype=float))


def _interval_pairs(G: int) -> np.ndarray:
    g = np.linspace(0.0, 1.0, G)
    i, j = np.triu_indices(G)
    return np.column_stack([g[i], g[j]])


def nearest_index(grid: HypothesisGrid, params) -> int:
    """Grid index whose parameter row is closest (Euclidean) to ``params``;
    ties go to the lowest index."""
    target = np.atleast_1d(np.asarray(params, dtype=float))
    if target.shape != (grid.params.shape[1],):
        raise ConfigurationError(
            f"parameter vector of shape {target.shape} does not match grid "
            f"parameter count {grid.params.shape[1]}"
        )
    d2 = ((grid.params - target) ** 2).sum(axis=1)
    return int(np.argmin(d2))
