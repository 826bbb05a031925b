import itertools

import numpy as np
import pytest

from src.mtc.errors import DimensionError, InvalidInputError
from src.mtc.metrics import clustering_accuracy, compare_methods, evaluate, nmi, task_metrics, welch_t_test
from src.mtc.types import MultiTaskProblem


def _brute_force_accuracy(truth, pred, c):
    best = 0
    for perm in itertools.permutations(range(c)):
        best = max(best, sum(perm[p] == t for t, p in zip(truth, pred)))
    return best / len(truth)


def test_accuracy_examples():
    assert clustering_accuracy([0, 0, 1, 1], [1, 1, 0, 0]) == 1.0
    assert clustering_accuracy([0, 0, 1, 1], [0, 1, 0, 1]) == 0.5
    assert clustering_accuracy([0, 0, 0], [0, 0, 0]) == 1.0


def test_accuracy_matches_permutation_search():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        truth = rng.integers(0, 3, size=12)
        pred = rng.integers(0, 3, size=12)
        assert clustering_accuracy(truth, pred) == pytest.approx(_brute_force_accuracy(truth, pred, 3))


def test_accuracy_ignores_label_names():
    rng = np.random.default_rng(1)
    for _ in range(1000):
        truth = rng.integers(0, 4, size=30)
        pred = rng.integers(0, 4, size=30)
        renamed = rng.permutation(4)[pred]
        assert clustering_accuracy(truth, pred) == pytest.approx(clustering_accuracy(truth, renamed))


def test_accuracy_handles_more_clusters_than_classes():
    assert clustering_accuracy([0, 0, 1, 1], [0, 1, 2, 2]) == 0.75


def test_nmi_examples():
    assert nmi([0, 0, 1, 1], [1, 1, 0, 0]) == pytest.approx(1.0)
    assert nmi([0, 0, 1, 1], [0, 1, 0, 1]) == pytest.approx(0.0, abs=1e-12)
    assert nmi([0, 0, 0], [0, 0, 0]) == 1.0
    assert nmi([0, 1, 0, 1], [0, 0, 0, 0]) == 0.0


def test_nmi_is_symmetric_and_bounded():
    rng = np.random.default_rng(2)
    for _ in range(1000):
        a = rng.integers(0, 4, size=25)
        b = rng.integers(0, 3, size=25)
        assert nmi(a, b) == pytest.approx(nmi(b, a), abs=1e-12)
        assert 0.0 <= nmi(a, b) <= 1.0


def test_nmi_geometric_normalization():
    truth = np.array([0, 0, 1, 1, 2, 2])
    pred = np.array([0, 0, 1, 1, 1, 1])
    p_truth = np.bincount(truth) / truth.size
    p_pred = np.bincount(pred) / pred.size
    h_truth = -np.sum(p_truth * np.log(p_truth))
    h_pred = -np.sum(p_pred * np.log(p_pred))
    # pred is a coarsening of truth, so the mutual information is H(pred)
    assert nmi(truth, pred) == pytest.approx(h_pred / np.sqrt(h_truth * h_pred))


def test_metric_errors():
    with pytest.raises(DimensionError):
        clustering_accuracy([0, 1], [0])
    with pytest.raises(InvalidInputError):
        nmi([], [])


def test_evaluate_report():
    report = evaluate([0, 0, 1, 1, 2], [1, 1, 0, 0, 0])
    assert report.acc == pytest.approx(0.8)
    assert report.n == 5
    assert report.c_true == 3
    assert report.c_pred == 2


def test_task_metrics_requires_labels():
    problem = MultiTaskProblem(tasks=[np.zeros((2, 3))], c=2)
    assert task_metrics(problem, [np.zeros(3, dtype=int)]) is None
    labelled = MultiTaskProblem(tasks=[np.zeros((2, 3))], c=2, labels=[np.array([0, 1, 1])])
    (report,) = task_metrics(labelled, [np.array([1, 0, 0])])
    assert report.acc == 1.0


def test_welch_identical_samples():
    result = welch_t_test([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
    assert result.t == 0.0
    assert result.p == pytest.approx(1.0)


def test_welch_is_symmetric_under_swap():
    a = [0.61, 0.72, 0.65, 0.70, 0.69]
    b = [0.55, 0.58, 0.63, 0.51, 0.60, 0.57]
    forward = welch_t_test(a, b)
    backward = welch_t_test(b, a)
    assert forward.t == pytest.approx(-backward.t)
    assert forward.p == pytest.approx(backward.p)
    assert forward.dof == pytest.approx(backward.dof)


def test_welch_known_value():
    # equal sizes and variances: dof = 2(n-1) and t = diff / sqrt(2 s^2 / n)
    result = welch_t_test([1.0, 2.0, 3.0, 4.0], [3.0, 4.0, 5.0, 6.0])
    assert result.dof == pytest.approx(6.0)
    assert result.t == pytest.approx(-2.0 / np.sqrt(2 * (5.0 / 3.0) / 4))
    assert 0.05 < result.p < 0.1


def test_welch_detects_separated_samples():
    rng = np.random.default_rng(4)
    result = welch_t_test(rng.normal(0.9, 0.01, 20), rng.normal(0.5, 0.05, 20))
    assert result.p < 1e-6


def test_welch_rejects_undersized_or_constant_samples():
    with pytest.raises(InvalidInputError):
        welch_t_test([1.0], [1.0, 2.0])
    with pytest.raises(InvalidInputError):
        welch_t_test([1.0, 1.0], [2.0, 2.0])


def test_compare_methods_marks_best_and_ties():
    rng = np.random.default_rng(5)
    best = rng.normal(0.90, 0.02, 20)
    samples = {"spmtc-s": best, "lssmtc": best - 0.001, "km": rng.normal(0.60, 0.02, 20)}
    marked = compare_methods(samples)
    assert "km" not in marked
    assert {"spmtc-s", "lssmtc"} <= marked


def test_compare_methods_constant_samples():
    marked = compare_methods({"a": [1.0, 1.0], "b": [1.0, 1.0], "c": [0.5, 0.5]})
    assert marked == {"a", "b"}
