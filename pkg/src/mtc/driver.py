"""Outer self-paced loop, cluster assignment and method dispatch."""

from __future__ import annotations

import logging
import time
from typing import List

import numpy as np

from .baselines import kmeans_baseline, pooled_baseline
from .errors import DimensionError, InvalidInputError
from .metrics import task_metrics
from .self_paced import PaceSchedule, advance_pace, compute_weights, total_regularizer
from .solver import initialize_state, inner_fit
from .types import FitConfig, Method, MultiTaskProblem, ObjectiveTrace, RunResult, WeightingMode, WeightState
from .updates import example_losses

logger = logging.getLogger(__name__)


def assign_clusters(P: np.ndarray) -> np.ndarray:
    """Row argmax of a nonnegative partition matrix, lowest column index on ties."""
    P = np.asarray(P, dtype=float)
    if P.ndim != 2 or P.size == 0:
        raise DimensionError(f"expected a nonempty n x c matrix, got shape {P.shape}")
    if np.any(P < 0):
        raise InvalidInputError("partition matrix has negative entries")
    return np.argmax(P, axis=1).astype(np.int64)


def _method_name(mode: WeightingMode) -> str:
    return {WeightingMode.NONE: Method.LSSMTC, WeightingMode.HARD: Method.SPMTC_H, WeightingMode.SOFT: Method.SPMTC_S}[mode].value


def spmtc_fit(problem: MultiTaskProblem, config: FitConfig, method: str | None = None) -> RunResult:
    """Fit the self-paced multi-task model.

    hard / soft: warm start with unit weights for exactly warm_start_iters sweeps
    (trace round 0), then rounds 1, 2, ... each recompute weights from the
    current losses and re-solve, the selected fraction growing by
    pace_step_fraction until every task is at 1.0; the round at 1.0 is the last.

    none: plain LSSMTC, a single unit-weight solve with no warm start.
    """
    mode = WeightingMode(config.mode)
    start = time.perf_counter()
    state = initialize_state(problem, config)
    trace = ObjectiveTrace()
    history: List[WeightState] = []

    if mode is WeightingMode.NONE:
        weights = WeightState.unit(problem)
        report = inner_fit(problem, state, weights, config)
        state = report.state
        trace.extend(report.trace)
        history.append(weights)
        outer_rounds = 1
        logger.info("lssmtc: %d sweeps, converged=%s", report.iterations_used, report.converged)
    else:
        warm = inner_fit(problem, state, WeightState.unit(problem), config, max_iters=config.warm_start_iters, rel_tol=0.0, outer_round=0)
        state = warm.state
        trace.extend(warm.trace)

        schedule = PaceSchedule.start(problem.m, config.pace_start_fraction, config.pace_step_fraction)
        losses = example_losses(problem, state, config.lambda1)
        lambda2 = schedule.lambdas(losses)
        outer_rounds = 0
        while True:
            outer_rounds += 1
            weights = compute_weights(losses, lambda2, mode)
            history.append(weights)
            report = inner_fit(problem, state, weights, config, outer_round=outer_rounds, regularizer=total_regularizer(weights))
            state = report.state
            trace.extend(report.trace)
            logger.info(
                "round %d: fractions=%s selected=%s sweeps=%d objective=%.10g",
                outer_rounds,
                schedule.current_fraction,
                weights.selected_fraction(),
                report.iterations_used,
                report.trace[-1].total,
            )
            if schedule.complete:
                break
            losses = example_losses(problem, state, config.lambda1)
            schedule, lambda2 = advance_pace(schedule, losses)

    assignments = [assign_clusters(P) for P in state.P]
    return RunResult(
        method=method or _method_name(mode),
        assignments=assignments,
        trace=trace,
        config=config,
        seed=config.seed,
        wall_time=time.perf_counter() - start,
        state=state,
        weights=history[-1],
        weight_history=history,
        outer_rounds=outer_rounds,
        metrics=task_metrics(problem, assignments),
    )


def fit_method(problem: MultiTaskProblem, method: Method | str, config: FitConfig) -> RunResult:
    """Run one of km, all-km, lssmtc, spmtc-h, spmtc-s with the given configuration."""
    try:
        method = Method(method)
    except ValueError as e:
        raise InvalidInputError(f"unknown method {method!r}; expected one of {[m.value for m in Method]}") from e
    if method is Method.KM:
        return kmeans_baseline(problem, seed=config.seed, config=config)
    if method is Method.ALL_KM:
        return pooled_baseline(problem, "kmeans", seed=config.seed, config=config)
    return spmtc_fit(problem, config.with_overrides(mode=method.mode), method=method.value)
