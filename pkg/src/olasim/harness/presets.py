"""Named experiment presets.

fig1, fig2, fig3 compare the epoch learner against the two bound-driven
baselines on uniform data with flipped labels (eta = 3/4 on the positive side,
1/4 on the negative side) for thresholds, intervals, and rectangles. fig4 and
fig5 pit the epoch learner against the selective-sampling perceptron on the
unit circle with linearly varying noise; they share one configuration (fig5 is
the regret view of the same runs). Every preset places the Bayes parameters
exactly on the hypothesis grid.
"""

from __future__ import annotations

from typing import Any

_SPHERE: dict[str, Any] = {
    "hypothesis": {"kind": "halfspace", "resolution": 256, "dim": 2},
    "stream": {"distribution": "uniform_sphere", "bayes_params": [1.0, 0.0]},
    "noise": {"kind": "linear_sphere"},
    "learner": {"kind": ["ola", "cbgz"]},
}

PRESETS: dict[str, dict[str, Any]] = {
    "fig1": {
        "hypothesis": {"kind": "threshold1d", "resolution": 201},
        "stream": {"distribution": "uniform_cube", "bayes_params": [0.5]},
        "noise": {"kind": "massart_flip", "eta_high": 0.75, "eta_low": 0.25},
        "learner": {"kind": ["ola", "a2", "dhm"]},
    },
    "fig2": {
        "hypothesis": {"kind": "interval1d", "resolution": 101},
        "stream": {"distribution": "uniform_cube", "bayes_params": [0.25, 0.75]},
        "noise": {"kind": "massart_flip", "eta_high": 0.75, "eta_low": 0.25},
        "learner": {"kind": ["ola", "a2", "dhm"]},
    },
    "fig3": {
        "hypothesis": {"kind": "box2d", "resolution": 21},
        "stream": {
            "distribution": "uniform_cube",
            "bayes_params": [0.15, 0.85, 0.15, 0.85],
        },
        "noise": {"kind": "massart_flip", "eta_high": 0.75, "eta_low": 0.25},
        "learner": {"kind": ["ola", "a2", "dhm"]},
    },
    "fig4": dict(_SPHERE),
    "fig5": dict(_SPHERE),
}
