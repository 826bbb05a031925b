"""k-means baselines: per-task KM and pooled All-KM."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import List

import numpy as np
from scipy.spatial.distance import cdist

from .errors import DimensionError, InvalidInputError
from .metrics import task_metrics
from .types import FitConfig, MultiTaskProblem, ObjectiveTrace, RunResult, TraceRecord

logger = logging.getLogger(__name__)

KMEANS_MAX_ITERS = 100


@dataclass
class KMeansResult:
    assignments: np.ndarray
    centers: np.ndarray
    inertia: float
    inertia_trace: List[float] = field(default_factory=list)
    iterations: int = 0


def _assign(X: np.ndarray, centers: np.ndarray) -> np.ndarray:
    # argmin returns the lowest centre index on ties
    return np.argmin(cdist(X.T, centers.T, "sqeuclidean"), axis=1)


def _inertia(X: np.ndarray, labels: np.ndarray, centers: np.ndarray) -> float:
    return float(sum(np.sum((X[:, labels == j] - centers[:, [j]]) ** 2) for j in range(centers.shape[1])))


def _fill_empty_clusters(X: np.ndarray, labels: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """Move the point farthest from its centre into each empty cluster.

    Donors are taken only from clusters with more than one member so no new empty cluster appears.
    """
    c = centers.shape[1]
    labels = labels.copy()
    for j in range(c):
        if np.any(labels == j):
            continue
        counts = np.bincount(labels, minlength=c)
        distances = np.sum((X - centers[:, labels]) ** 2, axis=0)
        distances[counts[labels] <= 1] = -np.inf
        donor = int(np.argmax(distances))
        logger.debug("reseeding empty cluster %d with example %d", j, donor)
        labels[donor] = j
        centers[:, j] = X[:, donor]
    return labels


def _recentre(X: np.ndarray, labels: np.ndarray, centers: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    centers = centers.copy()
    labels = _fill_empty_clusters(X, labels, centers)
    for j in range(centers.shape[1]):
        centers[:, j] = X[:, labels == j].mean(axis=1)
    return labels, centers


def kmeans_fit(X: np.ndarray, c: int, seed: int | np.random.Generator = 0, max_iters: int = KMEANS_MAX_ITERS) -> KMeansResult:
    """Lloyd's algorithm on the columns of X (d x n) from c distinct seeded examples.

    The recorded inertia is non-increasing; iteration stops early once the
    assignments no longer change.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise DimensionError(f"expected a d x n matrix, got ndim={X.ndim}")
    n = X.shape[1]
    if c < 1 or n < c:
        raise InvalidInputError(f"cannot form {c} clusters from {n} examples")
    if max_iters < 1:
        raise InvalidInputError(f"max_iters must be positive, got {max_iters}")

    rng = np.random.default_rng(seed)
    centers = X[:, np.sort(rng.choice(n, size=c, replace=False))].copy()
    labels = _assign(X, centers)
    trace: List[float] = []
    iterations = 0
    for iteration in range(1, max_iters + 1):
        labels, centers = _recentre(X, labels, centers)
        inertia = _inertia(X, labels, centers)
        trace.append(inertia)
        iterations = iteration
        reassigned = _assign(X, centers)
        if np.array_equal(reassigned, labels):
            break
        if iteration < max_iters:
            labels = reassigned

    return KMeansResult(assignments=labels, centers=centers, inertia=trace[-1], inertia_trace=trace, iterations=iterations)


def _kmeans_records(result: KMeansResult, outer_round: int, m: int) -> List[TraceRecord]:
    return [
        TraceRecord(outer_round=outer_round, inner_iter=i, within=value, cross=0.0, total=value, reg=0.0, fractions=(1.0,) * m)
        for i, value in enumerate(result.inertia_trace, start=1)
    ]


def kmeans_baseline(problem: MultiTaskProblem, seed: int = 0, max_iters: int = KMEANS_MAX_ITERS, config: FitConfig | None = None) -> RunResult:
    """KM: k-means on every task separately; trace rounds are task indices and record inertia."""
    config = config or FitConfig(seed=seed)
    rng = np.random.default_rng(seed)
    start = time.perf_counter()
    trace = ObjectiveTrace()
    assignments = []
    for k, X in enumerate(problem.tasks):
        result = kmeans_fit(X, problem.c, rng, max_iters)
        assignments.append(result.assignments)
        trace.extend(_kmeans_records(result, k, problem.m))
        logger.info("km task %d: inertia=%.6g after %d iterations", k, result.inertia, result.iterations)
    return RunResult(
        method="km",
        assignments=assignments,
        trace=trace,
        config=config,
        seed=seed,
        wall_time=time.perf_counter() - start,
        metrics=task_metrics(problem, assignments),
    )


def pooled_baseline(
    problem: MultiTaskProblem,
    method: str = "kmeans",
    seed: int = 0,
    max_iters: int = KMEANS_MAX_ITERS,
    config: FitConfig | None = None,
) -> RunResult:
    """All-KM: cluster the concatenated tasks once and split the assignments back per task."""
    if method != "kmeans":
        raise InvalidInputError(f"unsupported pooled baseline {method!r}; only 'kmeans' is available")
    config = config or FitConfig(seed=seed)
    start = time.perf_counter()
    result = kmeans_fit(problem.stacked(), problem.c, seed, max_iters)
    boundaries = np.cumsum(problem.n_per_task)[:-1]
    assignments = np.split(result.assignments, boundaries)
    logger.info("all-km: inertia=%.6g over %d examples", result.inertia, problem.n_total)
    return RunResult(
        method="all-km",
        assignments=assignments,
        trace=ObjectiveTrace(_kmeans_records(result, 0, problem.m)),
        config=config,
        seed=seed,
        wall_time=time.perf_counter() - start,
        metrics=task_metrics(problem, assignments),
    )
