"""Multi-task clustering with a shared subspace and self-paced example weighting.

The model learns per-task cluster centres, a shared orthonormal projection
with common centres, and nonnegative partition matrices; the self-paced
driver grows the set of examples it trusts from easy to hard.
"""

from .errors import (
    BenchmarkAbortedError,
    DataFormatError,
    DataIOError,
    DegenerateWeightsError,
    DimensionError,
    EmptyTaskError,
    InvalidConfigError,
    InvalidInputError,
    InvariantViolationError,
    SpmtcError,
)
from .types import (
    FitConfig,
    InnerFitReport,
    Method,
    MetricReport,
    ModelState,
    MultiTaskProblem,
    ObjectiveTrace,
    RunResult,
    TraceRecord,
    WeightingMode,
    WeightState,
)

from .linalg import eigh_ascending, solve_regularized
from .updates import ObjectiveValue, example_losses, objective, update_M, update_M_task, update_P_task, update_W
from .solver import initialize_state, inner_fit, sweep
from .self_paced import PaceSchedule, advance_pace, compute_weights, hard_weights, lambda_for_fraction, soft_weights
from .metrics import WelchResult, clustering_accuracy, compare_methods, evaluate, nmi, welch_t_test
from .baselines import KMeansResult, kmeans_baseline, kmeans_fit, pooled_baseline
from .driver import assign_clusters, fit_method, spmtc_fit

__all__ = [
    # Errors
    "SpmtcError",
    "DimensionError",
    "InvalidInputError",
    "InvalidConfigError",
    "DegenerateWeightsError",
    "InvariantViolationError",
    "EmptyTaskError",
    "DataFormatError",
    "DataIOError",
    "BenchmarkAbortedError",
    # Types
    "FitConfig",
    "InnerFitReport",
    "Method",
    "MetricReport",
    "ModelState",
    "MultiTaskProblem",
    "ObjectiveTrace",
    "RunResult",
    "TraceRecord",
    "WeightingMode",
    "WeightState",
    # Solver
    "eigh_ascending",
    "solve_regularized",
    "ObjectiveValue",
    "objective",
    "example_losses",
    "update_M",
    "update_M_task",
    "update_P_task",
    "update_W",
    "initialize_state",
    "sweep",
    "inner_fit",
    # Self-paced weighting
    "hard_weights",
    "soft_weights",
    "lambda_for_fraction",
    "compute_weights",
    "PaceSchedule",
    "advance_pace",
    # Evaluation
    "WelchResult",
    "clustering_accuracy",
    "nmi",
    "evaluate",
    "welch_t_test",
    "compare_methods",
    # Driver
    "KMeansResult",
    "kmeans_fit",
    "kmeans_baseline",
    "pooled_baseline",
    "assign_clusters",
    "spmtc_fit",
    "fit_method",
]
