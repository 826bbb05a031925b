"""Weighted objective and the closed-form / multiplicative update rules.

Weights enter every expression as a per-column scaling (X V == X * v), never
as the block-diagonal matrix V.
"""

from __future__ import annotations

import logging
from typing import List, NamedTuple

import numpy as np

from .errors import DegenerateWeightsError, DimensionError, InvalidConfigError, InvariantViolationError
from .linalg import eigh_ascending, solve_regularized
from .types import ModelState, MultiTaskProblem, WeightState

logger = logging.getLogger(__name__)

RIDGE_EPS = 1e-8
DENOMINATOR_GUARD = 1e-12


class ObjectiveValue(NamedTuple):
    within_task: float
    cross_task: float
    total: float


def _check_lambda1(lambda1: float) -> None:
    if not 0.0 <= lambda1 <= 1.0:
        raise InvalidConfigError(f"lambda1 must lie in [0, 1], got {lambda1}")


def _check_consistent(problem: MultiTaskProblem, state: ModelState, weights: WeightState | None = None) -> None:
    d, c = problem.d, problem.c
    if state.W.shape[0] != d or state.M.shape != (state.W.shape[1], c):
        raise DimensionError(f"W {state.W.shape} / M {state.M.shape} do not match d={d}, c={c}")
    if len(state.P) != problem.m or len(state.M_task) != problem.m:
        raise DimensionError("state must hold one M^(k) and one P^(k) per task")
    for k, n_k in enumerate(problem.n_per_task):
        if state.P[k].shape != (n_k, c) or state.M_task[k].shape != (d, c):
            raise DimensionError(f"task {k}: P {state.P[k].shape} / M^(k) {state.M_task[k].shape} do not match n_k={n_k}, c={c}")
    if weights is not None:
        if len(weights.v) != problem.m:
            raise DimensionError(f"weights cover {len(weights.v)} tasks, problem has {problem.m}")
        for k, n_k in enumerate(problem.n_per_task):
            if weights.v[k].shape != (n_k,):
                raise DimensionError(f"weights of task {k} have shape {weights.v[k].shape}, expected ({n_k},)")


def _residuals(problem: MultiTaskProblem, state: ModelState, k: int) -> tuple[np.ndarray, np.ndarray]:
    X = problem.tasks[k]
    within = X - state.M_task[k] @ state.P[k].T
    cross = state.W.T @ X - state.M @ state.P[k].T
    return within, cross


def objective(problem: MultiTaskProblem, state: ModelState, weights: WeightState, lambda1: float) -> ObjectiveValue:
    """Reconstruction part of the weighted objective.

    within = sum_k ||(X^(k) - M^(k) P^(k)T) V^(k)||_F^2
    cross  = sum_k ||(W^T X^(k) - M P^(k)T) V^(k)||_F^2
    total  = lambda1 * within + (1 - lambda1) * cross
    """
    _check_lambda1(lambda1)
    _check_consistent(problem, state, weights)
    within_task = 0.0
    cross_task = 0.0
    for k in range(problem.m):
        within, cross = _residuals(problem, state, k)
        v = weights.v[k]
        within_task += float(np.sum((within * v) ** 2))
        cross_task += float(np.sum((cross * v) ** 2))
    total = lambda1 * within_task + (1.0 - lambda1) * cross_task
    return ObjectiveValue(within_task, cross_task, total)


def example_losses(problem: MultiTaskProblem, state: ModelState, lambda1: float) -> List[np.ndarray]:
    """Unweighted reconstruction error of every example, one vector per task."""
    _check_lambda1(lambda1)
    _check_consistent(problem, state)
    losses = []
    for k in range(problem.m):
        within, cross = _residuals(problem, state, k)
        losses.append(lambda1 * np.sum(within**2, axis=0) + (1.0 - lambda1) * np.sum(cross**2, axis=0))
    return losses


def _weighted_stack(problem: MultiTaskProblem, state: ModelState, weights: WeightState) -> tuple[np.ndarray, np.ndarray]:
    """Stacked X V (d x N) and V^T P (N x c) across tasks."""
    v = np.concatenate(weights.v)
    Xv = problem.stacked() * v
    Pv = np.vstack(state.P) * v[:, None]
    return Xv, Pv


def _log_empty_clusters(Pv: np.ndarray, where: str) -> None:
    empty = np.flatnonzero(~np.any(Pv, axis=0))
    if empty.size:
        logger.debug("%s centres: clusters %s carry no weight, ridge keeps them finite", where, empty.tolist())


def update_M(
    problem: MultiTaskProblem,
    state: ModelState,
    weights: WeightState,
    ridge_eps: float = RIDGE_EPS,
) -> np.ndarray:
    """M = W^T X V V^T P (P^T V V^T P + eps I)^{-1}."""
    _check_consistent(problem, state, weights)
    if not weights.any_selected():
        raise DegenerateWeightsError("no example is selected in any task")
    Xv, Pv = _weighted_stack(problem, state, weights)
    _log_empty_clusters(Pv, "shared")
    return solve_regularized(Pv.T @ Pv, state.W.T @ Xv @ Pv, ridge_eps)


def update_M_task(
    problem: MultiTaskProblem,
    state: ModelState,
    weights: WeightState,
    k: int,
    ridge_eps: float = RIDGE_EPS,
) -> np.ndarray:
    """M^(k) = X^(k) V^(k) V^(k)T P^(k) (P^(k)T V^(k) V^(k)T P^(k) + eps I)^{-1}."""
    _check_consistent(problem, state, weights)
    v = weights.v[k]
    if not np.any(v > 0):
        raise DegenerateWeightsError(f"no example is selected in task {k}")
    Xv = problem.tasks[k] * v
    Pv = state.P[k] * v[:, None]
    _log_empty_clusters(Pv, f"task {k}")
    return solve_regularized(Pv.T @ Pv, Xv @ Pv, ridge_eps)


def _split_signs(A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    magnitude = np.abs(A)
    return (magnitude + A) / 2.0, (magnitude - A) / 2.0


def update_P_task(
    problem: MultiTaskProblem,
    state: ModelState,
    weights: WeightState,
    k: int,
    lambda1: float,
) -> np.ndarray:
    """Multiplicative update P_ij <- P_ij sqrt([A+ + VV^T P B-]_ij / [A- + VV^T P B+]_ij).

    A = VV^T (lambda1 X^(k)T M^(k) + (1 - lambda1) X^(k)T W M)   (n_k x c)
    B = lambda1 M^(k)T M^(k) + (1 - lambda1) M^T M               (c x c)

    Rows with zero weight do not enter the objective and are returned unchanged.
    """
    _check_lambda1(lambda1)
    _check_consistent(problem, state, weights)
    P = state.P[k]
    if np.any(P < 0):
        raise InvariantViolationError(f"P^({k}) has negative entries")

    X = problem.tasks[k]
    Mk, M, W = state.M_task[k], state.M, state.W
    v2 = weights.v[k] ** 2

    A = v2[:, None] * (lambda1 * (X.T @ Mk) + (1.0 - lambda1) * (X.T @ W @ M))
    B = lambda1 * (Mk.T @ Mk) + (1.0 - lambda1) * (M.T @ M)
    A_pos, A_neg = _split_signs(A)
    B_pos, B_neg = _split_signs(B)

    numerator = A_pos + v2[:, None] * (P @ B_neg)
    denominator = A_neg + v2[:, None] * (P @ B_pos) + DENOMINATOR_GUARD
    updated = P * np.sqrt(numerator / denominator)

    unselected = weights.v[k] == 0
    updated[unselected] = P[unselected]
    return updated


def subspace_scatter(
    problem: MultiTaskProblem,
    state: ModelState,
    weights: WeightState,
    ridge_eps: float = RIDGE_EPS,
) -> np.ndarray:
    """X V (I - V^T P (P^T V V^T P)^{-1} P^T V) V^T X^T, symmetrized.

    tr(W^T S W) is the shared-subspace term once M is eliminated.
    """
    Xv, Pv = _weighted_stack(problem, state, weights)
    H = Xv @ Pv
    S = Xv @ Xv.T - solve_regularized(Pv.T @ Pv, H, ridge_eps) @ H.T
    return 0.5 * (S + S.T)


def update_W(
    problem: MultiTaskProblem,
    state: ModelState,
    weights: WeightState,
    ridge_eps: float = RIDGE_EPS,
) -> np.ndarray:
    """Eigenvectors of the subspace scatter for its l smallest eigenvalues."""
    _check_consistent(problem, state, weights)
    S = subspace_scatter(problem, state, weights, ridge_eps)
    eigenvalues, W = eigh_ascending(S, state.l)
    logger.debug("W update: smallest eigenvalues %s", eigenvalues)
    return W
