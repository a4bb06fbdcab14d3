"""Stream-based active learning on finite hypothesis grids.

The package simulates selective-sampling learners on synthetic noisy streams:
an epoch-driven disagreement learner with version-space elimination, four
baselines, Monte Carlo estimators for disagreement geometry, and an experiment
harness with reproducible CSV/plot outputs.
"""

from .analysis import (
    LabelComplexityBound,
    MetricSeries,
    PhiEstimate,
    RunTrace,
    bayes_retained,
    compute_metrics,
    estimate_phi,
    estimate_rho,
    estimate_theta,
    label_complexity_bound,
    log_t_grid,
)
from .baselines import A2Learner, CalLearner, CbgzLearner, DhmLearner
from .core import (
    QueryBuffer,
    ThresholdParams,
    VersionSpace,
    beta,
    beta_for_confidence,
    delta_threshold,
    empirical_error,
    erm,
    excess_error,
    full_version_space,
    in_disagreement,
    prune,
)
from .errors import (
    ConfigurationError,
    InvariantViolationError,
    OlasimError,
    SamplingExhaustedError,
)
from .hypotheses import (
    HypothesisClass,
    HypothesisGrid,
    box2d,
    build_grid,
    classify,
    classify_batch,
    classify_grid,
    halfspace,
    interval1d,
    nearest_index,
    shattering_bound,
    threshold1d,
)
from .learner import EpochEvent, OlaLearner, StepOutcome, run, run_doubling
from .stream import (
    LabeledExample,
    LinearSphere,
    MassartFlip,
    StreamOracle,
    UniformCube,
    UniformSphere,
)

__version__ = "0.1.0"
