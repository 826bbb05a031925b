from __future__ import annotations

import logging

import numpy as np

from .errors import DegenerateWeightsError, InvalidConfigError
from .types import FitConfig, InnerFitReport, ModelState, MultiTaskProblem, ObjectiveTrace, TraceRecord, WeightState
from .updates import objective, update_M, update_M_task, update_P_task, update_W

logger = logging.getLogger(__name__)


def initialize_state(problem: MultiTaskProblem, config: FitConfig) -> ModelState:
    """Seeded starting point: P^(k) uniform in (0,1), W = first l identity columns, zero centres.

    M and M^(k) are placeholders; every sweep recomputes them before they are read.
    """
    if config.l > problem.d:
        raise InvalidConfigError(f"subspace dimension l={config.l} exceeds d={problem.d}")
    rng = np.random.default_rng(config.seed)
    P = []
    for n_k in problem.n_per_task:
        # default_rng().random() is in [0, 1); nudge away from an exact 0 so no entry is locked at birth
        draws = rng.random((n_k, problem.c))
        P.append(np.where(draws == 0.0, np.finfo(float).tiny, draws))
    return ModelState(
        W=np.eye(problem.d, config.l),
        M=np.zeros((config.l, problem.c)),
        M_task=[np.zeros((problem.d, problem.c)) for _ in range(problem.m)],
        P=P,
    )


def sweep(problem: MultiTaskProblem, state: ModelState, weights: WeightState, config: FitConfig) -> ModelState:
    """One pass M -> M^(k) -> P^(k) -> (W, M).

    Shared centres are refit right after W moves, so the pass is a joint
    minimization over (W, M) and the objective cannot go up. Tasks without any
    selected example keep their M^(k) and P^(k).
    """
    state = state.copy()
    eps = config.ridge_eps
    state.M = update_M(problem, state, weights, eps)
    for k in range(problem.m):
        if np.any(weights.v[k] > 0):
            state.M_task[k] = update_M_task(problem, state, weights, k, eps)
    for k in range(problem.m):
        if np.any(weights.v[k] > 0):
            state.P[k] = update_P_task(problem, state, weights, k, config.lambda1)
    state.W = update_W(problem, state, weights, eps)
    state.M = update_M(problem, state, weights, eps)
    return state


def _relative_change(previous: float, current: float) -> float:
    if previous == current:
        return 0.0
    return abs(previous - current) / max(abs(previous), np.finfo(float).tiny)


def inner_fit(
    problem: MultiTaskProblem,
    state: ModelState,
    weights: WeightState,
    config: FitConfig,
    *,
    max_iters: int | None = None,
    rel_tol: float | None = None,
    outer_round: int = 0,
    regularizer: float = 0.0,
) -> InnerFitReport:
    """Alternate the four updates with fixed weights (a weighted LSSMTC solve).

    Stops when the relative change of the total objective between sweeps drops
    below rel_tol (config.inner_rel_tol) or after max_iters (config.inner_max_iters)
    sweeps. rel_tol=0 runs exactly max_iters sweeps.
    """
    max_iters = config.inner_max_iters if max_iters is None else max_iters
    rel_tol = config.inner_rel_tol if rel_tol is None else rel_tol
    if not weights.any_selected():
        raise DegenerateWeightsError("no example is selected in any task")

    fractions = weights.selected_fraction()
    trace = ObjectiveTrace()
    previous = objective(problem, state, weights, config.lambda1).total
    converged = False
    iterations = 0
    for iteration in range(1, max_iters + 1):
        state = sweep(problem, state, weights, config)
        value = objective(problem, state, weights, config.lambda1)
        trace.append(
            TraceRecord(
                outer_round=outer_round,
                inner_iter=iteration,
                within=value.within_task,
                cross=value.cross_task,
                total=value.total,
                reg=regularizer,
                fractions=fractions,
            )
        )
        iterations = iteration
        logger.debug("round %d sweep %d: total=%.10g", outer_round, iteration, value.total)
        if _relative_change(previous, value.total) < rel_tol:
            converged = True
            break
        previous = value.total

    state.check(problem)
    return InnerFitReport(state=state, trace=trace, iterations_used=iterations, converged=converged)
