"""Self-paced example weighting and the per-task pace schedule.

Weights are chosen per task: every task contributes its own easiest examples,
whatever the scale of its losses relative to the other tasks.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from .errors import EmptyTaskError, InvalidConfigError, InvalidInputError
from .types import WeightingMode, WeightState

logger = logging.getLogger(__name__)

THRESHOLD_SLACK = 1e-12
FRACTION_DECIMALS = 10


def _as_losses(losses: Sequence[float] | np.ndarray) -> np.ndarray:
    losses = np.asarray(losses, dtype=float).ravel()
    if losses.size == 0:
        raise EmptyTaskError("loss vector is empty")
    if np.any(losses < 0) or not np.all(np.isfinite(losses)):
        raise InvalidInputError("losses must be finite and nonnegative")
    return losses


def selected_count(n: int, fraction: float) -> int:
    """ceil(fraction * n), tolerant of float drift such as 0.7000000000000001 * 10."""
    return min(n, max(1, math.ceil(fraction * n - 1e-9)))


def _threshold(value: float) -> float:
    # slack scales with magnitude so value + slack stays strictly above value in floating point
    return value + THRESHOLD_SLACK * max(1.0, abs(value))


def lambda_for_fraction(losses: Sequence[float] | np.ndarray, fraction: float) -> float:
    """Pace parameter that admits the ceil(fraction * n) smallest losses (ties inclusive)."""
    losses = _as_losses(losses)
    if not 0.0 < fraction <= 1.0:
        raise InvalidInputError(f"fraction must lie in (0, 1], got {fraction}")
    if fraction >= 1.0:
        return _threshold(float(losses.max()))
    count = selected_count(losses.size, fraction)
    return _threshold(float(np.sort(losses)[count - 1]))


def hard_weights(losses: Sequence[float] | np.ndarray, lambda2: float) -> np.ndarray:
    """v_i = 1 if L_i <= lambda2 else 0."""
    losses = _as_losses(losses)
    if not lambda2 > 0:
        raise InvalidInputError(f"lambda2 must be positive, got {lambda2}")
    return (losses <= lambda2).astype(float)


def soft_weights(losses: Sequence[float] | np.ndarray, lambda2: float, gamma: float | None = None) -> np.ndarray:
    """Mixture weighting: 1 below gamma*lambda2/(gamma+lambda2), 0 from lambda2 on, gamma/L - gamma/lambda2 between."""
    losses = _as_losses(losses)
    if not lambda2 > 0:
        raise InvalidInputError(f"lambda2 must be positive, got {lambda2}")
    gamma = lambda2 / 2.0 if gamma is None else gamma
    if not gamma > 0:
        raise InvalidInputError(f"gamma must be positive, got {gamma}")

    inner = gamma * lambda2 / (gamma + lambda2)
    weights = np.zeros_like(losses)
    weights[losses <= inner] = 1.0
    middle = (losses > inner) & (losses < lambda2)
    # gamma/L - gamma/lambda2, written to avoid cancellation near lambda2
    weights[middle] = gamma * (lambda2 - losses[middle]) / (losses[middle] * lambda2)
    return np.clip(weights, 0.0, 1.0)


def regularizer_value(weights: Sequence[float] | np.ndarray, lambda2: float, gamma: float | None, mode: WeightingMode | str) -> float:
    """Value of the self-paced term f(lambda2, V) for one task."""
    mode = WeightingMode(mode)
    v = np.asarray(weights, dtype=float)
    if mode is WeightingMode.HARD:
        return float(lambda2 * np.sum(v))
    if mode is WeightingMode.SOFT:
        gamma = lambda2 / 2.0 if gamma is None else gamma
        return float(np.sum(gamma * np.log(v + gamma / lambda2)))
    return 0.0


def compute_weights(losses_per_task: Sequence[np.ndarray], lambda2_per_task: Sequence[float], mode: WeightingMode | str) -> WeightState:
    mode = WeightingMode(mode)
    lambda2 = np.asarray(lambda2_per_task, dtype=float)
    if mode is WeightingMode.NONE:
        return WeightState(v=[np.ones(np.size(losses)) for losses in losses_per_task], lambda2=lambda2, mode=mode)
    if mode is WeightingMode.HARD:
        v = [hard_weights(losses, lam) for losses, lam in zip(losses_per_task, lambda2)]
        return WeightState(v=v, lambda2=lambda2, mode=mode)
    gamma = lambda2 / 2.0
    v = [soft_weights(losses, lam, g) for losses, lam, g in zip(losses_per_task, lambda2, gamma)]
    return WeightState(v=v, lambda2=lambda2, mode=mode, gamma=gamma)


def total_regularizer(weights: WeightState) -> float:
    gammas = weights.gamma if weights.gamma is not None else [None] * len(weights.v)
    return sum(regularizer_value(v, lam, g, weights.mode) for v, lam, g in zip(weights.v, weights.lambda2, gammas))


@dataclass(frozen=True)
class PaceSchedule:
    current_fraction: tuple[float, ...]
    start_fraction: float
    step_fraction: float

    def __post_init__(self) -> None:
        for name in ("start_fraction", "step_fraction"):
            value = getattr(self, name)
            if not 0.0 < value <= 1.0:
                raise InvalidConfigError(f"{name} must lie in (0, 1], got {value}")
        if any(not 0.0 < f <= 1.0 for f in self.current_fraction):
            raise InvalidConfigError("current fractions must lie in (0, 1]")

    @classmethod
    def start(cls, m: int, start_fraction: float, step_fraction: float) -> "PaceSchedule":
        return cls(current_fraction=(float(start_fraction),) * m, start_fraction=start_fraction, step_fraction=step_fraction)

    @property
    def complete(self) -> bool:
        return all(f >= 1.0 for f in self.current_fraction)

    def lambdas(self, losses_per_task: Sequence[np.ndarray]) -> np.ndarray:
        return np.array([lambda_for_fraction(losses, f) for losses, f in zip(losses_per_task, self.current_fraction)])


def advance_pace(schedule: PaceSchedule, losses_per_task: Sequence[np.ndarray]) -> tuple[PaceSchedule, np.ndarray]:
    """Step every task's fraction (clamped to 1.0) and recompute its lambda2 on the given losses."""
    fractions: List[float] = []
    for fraction in schedule.current_fraction:
        stepped = round(fraction + schedule.step_fraction, FRACTION_DECIMALS)
        fractions.append(min(1.0, stepped))
    advanced = PaceSchedule(
        current_fraction=tuple(fractions),
        start_fraction=schedule.start_fraction,
        step_fraction=schedule.step_fraction,
    )
    logger.info("pace advanced to %s", advanced.current_fraction)
    return advanced, advanced.lambdas(losses_per_task)
