from __future__ import annotations

from typing import List, Mapping, NamedTuple, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.special import betainc
from sklearn.metrics import normalized_mutual_info_score
from sklearn.metrics.cluster import contingency_matrix

from .errors import DimensionError, InvalidInputError
from .types import MetricReport, MultiTaskProblem


class WelchResult(NamedTuple):
    t: float
    dof: float
    p: float


def _label_pair(truth: Sequence[int] | np.ndarray, pred: Sequence[int] | np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    truth = np.asarray(truth).ravel()
    pred = np.asarray(pred).ravel()
    if truth.size != pred.size:
        raise DimensionError(f"label vectors differ in length: {truth.size} vs {pred.size}")
    if truth.size == 0:
        raise InvalidInputError("label vectors are empty")
    return truth, pred


def clustering_accuracy(truth: Sequence[int] | np.ndarray, pred: Sequence[int] | np.ndarray) -> float:
    """Fraction of matches under the best one-to-one cluster-to-class mapping (Hungarian matching)."""
    truth, pred = _label_pair(truth, pred)
    table = contingency_matrix(truth, pred)
    rows, cols = linear_sum_assignment(table, maximize=True)
    return float(table[rows, cols].sum() / truth.size)


def nmi(truth: Sequence[int] | np.ndarray, pred: Sequence[int] | np.ndarray) -> float:
    """MI(truth, pred) / sqrt(H(truth) H(pred)) with natural logs, clipped to [0, 1].

    Two single-cluster partitions score 1; a single-cluster partition against anything else scores 0.
    """
    truth, pred = _label_pair(truth, pred)
    score = normalized_mutual_info_score(truth, pred, average_method="geometric")
    return float(np.clip(score, 0.0, 1.0))


def evaluate(truth: Sequence[int] | np.ndarray, pred: Sequence[int] | np.ndarray) -> MetricReport:
    truth, pred = _label_pair(truth, pred)
    return MetricReport(
        acc=clustering_accuracy(truth, pred),
        nmi=nmi(truth, pred),
        n=int(truth.size),
        c_true=int(np.unique(truth).size),
        c_pred=int(np.unique(pred).size),
    )


def task_metrics(problem: MultiTaskProblem, assignments: Sequence[np.ndarray]) -> List[MetricReport] | None:
    """Per-task MetricReport against the problem's labels, or None for an unlabeled problem."""
    if not problem.has_labels:
        return None
    return [evaluate(truth, pred) for truth, pred in zip(problem.labels, assignments)]


def welch_t_test(sample_a: Sequence[float] | np.ndarray, sample_b: Sequence[float] | np.ndarray) -> WelchResult:
    """Two-sided Welch t-test with Satterthwaite degrees of freedom."""
    a = np.asarray(sample_a, dtype=float).ravel()
    b = np.asarray(sample_b, dtype=float).ravel()
    if a.size < 2 or b.size < 2:
        raise InvalidInputError("each sample needs at least two observations")
    var_a = a.var(ddof=1) / a.size
    var_b = b.var(ddof=1) / b.size
    standard_error_sq = var_a + var_b
    if standard_error_sq <= 0:
        raise InvalidInputError("both samples have zero variance")

    t = float((a.mean() - b.mean()) / np.sqrt(standard_error_sq))
    dof = float(standard_error_sq**2 / (var_a**2 / (a.size - 1) + var_b**2 / (b.size - 1)))
    p = float(betainc(dof / 2.0, 0.5, dof / (dof + t * t)))
    return WelchResult(t=t, dof=dof, p=min(1.0, max(0.0, p)))


def compare_methods(samples_by_method: Mapping[str, Sequence[float]], alpha: float = 0.05) -> set[str]:
    """Methods with the best mean, plus those not significantly worse than it at level alpha."""
    means = {name: float(np.mean(values)) for name, values in samples_by_method.items() if len(values) > 0}
    if not means:
        return set()
    best = max(sorted(means), key=lambda name: means[name])
    marked = {best}
    best_sample = np.asarray(samples_by_method[best], dtype=float)
    for name, mean in means.items():
        if name == best:
            continue
        sample = np.asarray(samples_by_method[name], dtype=float)
        try:
            result = welch_t_test(best_sample, sample)
        except InvalidInputError:
            # undersized or constant samples: comparable only when the means tie
            if mean == means[best]:
                marked.add(name)
            continue
        if result.p >= alpha:
            marked.add(name)
    return marked
