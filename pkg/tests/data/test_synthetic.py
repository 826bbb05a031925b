import numpy as np
import pytest

from src.data.loaders import validate_model
from src.data.models import SynthSpec
from src.data.synthetic import cluster_sizes, synth_multitask
from src.mtc.errors import InvalidConfigError


def test_same_seed_same_problem():
    spec = SynthSpec(m=3, d=10, c=4, n=30, seed=21)
    a, _ = synth_multitask(spec)
    b, _ = synth_multitask(spec)
    for x, y in zip(a.tasks, b.tasks):
        np.testing.assert_array_equal(x, y)


def test_label_counts():
    problem, _ = synth_multitask(SynthSpec(m=2, d=6, c=3, n=20, seed=2))
    for y in problem.labels:
        assert sorted(np.bincount(y)) == [6, 7, 7]
    np.testing.assert_array_equal(cluster_sizes(20, 3), [7, 7, 6])


def test_points_stay_near_their_centres():
    spec = SynthSpec(m=2, d=8, c=3, n=60, noise_sd=0.5, seed=5)
    problem, truth = synth_multitask(spec)
    for k, (X, y) in enumerate(zip(problem.tasks, problem.labels)):
        residual = X - truth.task_centers(k)[:, y]
        assert np.max(np.abs(residual)) <= 6 * spec.noise_sd


def test_centres_lie_in_the_planted_subspace():
    _, truth = synth_multitask(SynthSpec(d=12, c=4, l_true=2, seed=8))
    projected = truth.basis @ (truth.basis.T @ truth.centers)
    np.testing.assert_allclose(projected, truth.centers, atol=1e-12)
    gaps = np.linalg.norm(truth.centers - np.roll(truth.centers, 1, axis=1), axis=0)
    np.testing.assert_allclose(gaps, 8.0)


def test_outlier_count():
    spec = SynthSpec(m=2, d=5, c=2, n=100, outlier_fraction=0.05, seed=4)
    problem, truth = synth_multitask(spec)
    assert [indices.size for indices in truth.outlier_indices] == [5, 5]
    assert problem.n_per_task == [100, 100]


@pytest.mark.parametrize("values", [{"outlier_fraction": 0.5}, {"d": 2, "l_true": 3}, {"n": 2, "c": 3}])
def test_invalid_specs(values):
    with pytest.raises(InvalidConfigError):
        validate_model(SynthSpec, values, "synth.env")
