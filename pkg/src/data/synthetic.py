"""Planted multi-task clustering benchmarks with an optional outlier fraction."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List

import numpy as np

from src.mtc.types import MultiTaskProblem

from .models import SynthSpec

logger = logging.getLogger(__name__)

BOX_INFLATION = 1.5


@dataclass
class GroundTruth:
    basis: np.ndarray  # d x l_true, orthonormal
    centers: np.ndarray  # d x c, before the task offsets
    offsets: np.ndarray  # m x d
    outlier_indices: List[np.ndarray]

    def task_centers(self, k: int) -> np.ndarray:
        return self.centers + self.offsets[k][:, None]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "basis": self.basis.tolist(),
            "centers": self.centers.tolist(),
            "offsets": self.offsets.tolist(),
            "outlier_indices": [indices.tolist() for indices in self.outlier_indices],
        }


def _subspace_coordinates(c: int, l_true: int, separation: float) -> np.ndarray:
    """l_true x c centre coordinates with neighbouring centres `separation` apart."""
    coords = np.zeros((l_true, c))
    if c == 1:
        return coords
    if l_true == 1:
        coords[0] = separation * (np.arange(c) - (c - 1) / 2.0)
        return coords
    radius = separation / (2.0 * math.sin(math.pi / c))
    angles = 2.0 * math.pi * np.arange(c) / c
    coords[0] = radius * np.cos(angles)
    coords[1] = radius * np.sin(angles)
    return coords


def cluster_sizes(n: int, c: int) -> np.ndarray:
    """n // c per cluster, the remainder going to the lowest-index clusters."""
    sizes = np.full(c, n // c)
    sizes[: n % c] += 1
    return sizes


def synth_multitask(spec: SynthSpec) -> tuple[MultiTaskProblem, GroundTruth]:
    rng = np.random.default_rng(spec.seed)
    basis, _ = np.linalg.qr(rng.standard_normal((spec.d, spec.l_true)))
    centers = basis @ _subspace_coordinates(spec.c, spec.l_true, spec.separation)

    tasks, labels, offsets, outliers = [], [], [], []
    sizes = cluster_sizes(spec.n, spec.c)
    for k in range(spec.m):
        direction = rng.standard_normal(spec.d)
        offset = spec.task_offset * direction / np.linalg.norm(direction)
        y = np.repeat(np.arange(spec.c), sizes)
        X = centers[:, y] + offset[:, None] + spec.noise_sd * rng.standard_normal((spec.d, spec.n))

        order = rng.permutation(spec.n)
        X, y = X[:, order], y[order]

        n_out = int(math.floor(spec.outlier_fraction * spec.n))
        replaced = np.sort(rng.choice(spec.n, size=n_out, replace=False)) if n_out else np.zeros(0, dtype=np.int64)
        if n_out:
            low, high = X.min(axis=1), X.max(axis=1)
            middle, half = (low + high) / 2.0, BOX_INFLATION * (high - low) / 2.0
            # outliers keep the label of the point they replace
            X[:, replaced] = rng.uniform(middle - half, middle + half, size=(n_out, spec.d)).T

        tasks.append(X)
        labels.append(y)
        offsets.append(offset)
        outliers.append(replaced)
        logger.debug("task %d: %d points, %d outliers", k, spec.n, n_out)

    problem = MultiTaskProblem(tasks=tasks, c=spec.c, labels=labels)
    return problem, GroundTruth(basis=basis, centers=centers, offsets=np.array(offsets), outlier_indices=outliers)
