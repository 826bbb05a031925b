import numpy as np
import pytest

from src.mtc.errors import DegenerateWeightsError, InvalidConfigError
from src.mtc.solver import initialize_state, inner_fit, sweep
from src.mtc.types import FitConfig, WeightingMode, WeightState
from tests.mtc.factories import random_instance, random_problem


def test_initialize_state_is_seeded(small_problem):
    config = FitConfig(l=3, seed=11)
    first = initialize_state(small_problem, config)
    second = initialize_state(small_problem, config)
    for P1, P2 in zip(first.P, second.P):
        np.testing.assert_array_equal(P1, P2)
        assert np.all((P1 > 0) & (P1 < 1))
    np.testing.assert_array_equal(first.W, np.eye(5, 3))
    first.check(small_problem)


def test_initialize_state_differs_across_seeds(small_problem):
    a = initialize_state(small_problem, FitConfig(seed=1))
    b = initialize_state(small_problem, FitConfig(seed=2))
    assert not np.array_equal(a.P[0], b.P[0])


def test_initialize_state_rejects_l_above_d(small_problem):
    with pytest.raises(InvalidConfigError):
        initialize_state(small_problem, FitConfig(l=6))


def test_sweep_returns_new_state(small_problem):
    state = initialize_state(small_problem, FitConfig())
    updated = sweep(small_problem, state, WeightState.unit(small_problem), FitConfig())
    assert updated is not state
    np.testing.assert_array_equal(state.W, np.eye(5, 2))
    updated.check(small_problem)


def test_sweep_skips_tasks_without_selection(small_problem):
    config = FitConfig()
    state = initialize_state(small_problem, config)
    weights = WeightState(v=[np.ones(7), np.zeros(6)], lambda2=np.ones(2), mode=WeightingMode.HARD)
    updated = sweep(small_problem, state, weights, config)
    np.testing.assert_array_equal(updated.P[1], state.P[1])
    np.testing.assert_array_equal(updated.M_task[1], state.M_task[1])


@pytest.mark.parametrize("seed", range(50))
def test_inner_fit_is_monotone(seed):
    problem, _, weights = random_instance(seed)
    config = FitConfig(l=1, seed=seed, lambda1=float(np.random.default_rng(seed).uniform()))
    state = initialize_state(problem, config)
    report = inner_fit(problem, state, weights, config)
    totals = report.trace.totals()
    assert 1 <= report.iterations_used <= 50
    assert len(report.trace) == report.iterations_used
    for previous, current in zip(totals, totals[1:]):
        assert current <= previous + 1e-9


def test_inner_fit_fixed_sweep_count(small_problem):
    config = FitConfig()
    report = inner_fit(small_problem, initialize_state(small_problem, config), WeightState.unit(small_problem), config, max_iters=7, rel_tol=0.0, outer_round=3, regularizer=1.5)
    assert report.iterations_used == 7
    assert not report.converged
    assert [r.inner_iter for r in report.trace] == list(range(1, 8))
    assert all(r.outer_round == 3 and r.reg == 1.5 for r in report.trace)
    assert all(r.fractions == (1.0, 1.0) for r in report.trace)


def test_inner_fit_converges_on_planted_data(planted_problem):
    config = FitConfig(l=2, inner_max_iters=200, inner_rel_tol=1e-4)
    report = inner_fit(planted_problem, initialize_state(planted_problem, config), WeightState.unit(planted_problem), config)
    assert report.converged
    assert report.iterations_used < 200


def test_inner_fit_needs_a_selected_example(small_problem):
    weights = WeightState(v=[np.zeros(7), np.zeros(6)], lambda2=np.ones(2), mode=WeightingMode.HARD)
    with pytest.raises(DegenerateWeightsError):
        inner_fit(small_problem, initialize_state(small_problem, FitConfig()), weights, FitConfig())


def test_inner_fit_is_deterministic(rng):
    problem = random_problem(rng, d=6, n=(10, 9), c=3)
    config = FitConfig(seed=5)
    a = inner_fit(problem, initialize_state(problem, config), WeightState.unit(problem), config)
    b = inner_fit(problem, initialize_state(problem, config), WeightState.unit(problem), config)
    assert a.trace == b.trace
    np.testing.assert_array_equal(a.state.W, b.state.W)


def test_inner_fit_reentry_from_a_fixed_point(planted_problem):
    config = FitConfig(l=2, seed=1, inner_max_iters=5000, inner_rel_tol=1e-12)
    settled = inner_fit(planted_problem, initialize_state(planted_problem, config), WeightState.unit(planted_problem), config)
    before = settled.trace.totals()[-1]
    again = inner_fit(planted_problem, settled.state, WeightState.unit(planted_problem), config, max_iters=1)
    assert abs(again.trace.totals()[-1] - before) < 1e-8 * max(1.0, abs(before))
