from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from .errors import DimensionError, EmptyTaskError, InvalidConfigError, InvalidInputError, InvariantViolationError


class WeightingMode(str, Enum):
    HARD = "hard"
    SOFT = "soft"
    NONE = "none"


class Method(str, Enum):
    """Clustering methods the fit and benchmark surfaces know how to run."""

    KM = "km"
    ALL_KM = "all-km"
    LSSMTC = "lssmtc"
    SPMTC_H = "spmtc-h"
    SPMTC_S = "spmtc-s"

    @property
    def mode(self) -> WeightingMode | None:
        return {
            Method.LSSMTC: WeightingMode.NONE,
            Method.SPMTC_H: WeightingMode.HARD,
            Method.SPMTC_S: WeightingMode.SOFT,
        }.get(self)


ORTHONORMAL_TOL = 1e-8


def _densify(labels: np.ndarray) -> np.ndarray:
    _, dense = np.unique(labels, return_inverse=True)
    return dense.astype(np.int64)


@dataclass
class MultiTaskProblem:
    """m task matrices X^(k) (d features x n_k examples) sharing d and the cluster count c.

    Labels are optional and only used for evaluation; they are densified per
    task to 0..(distinct-1) on construction.
    """

    tasks: Sequence[np.ndarray]
    c: int
    labels: Optional[Sequence[np.ndarray]] = None

    def __post_init__(self) -> None:
        if len(self.tasks) == 0:
            raise InvalidInputError("a multi-task problem needs at least one task")
        tasks = [np.array(X, dtype=float, copy=True) for X in self.tasks]
        for k, X in enumerate(tasks):
            if X.ndim != 2:
                raise DimensionError(f"task {k} must be a 2-D matrix, got ndim={X.ndim}")
            if X.shape[1] == 0:
                raise EmptyTaskError(f"task {k} has no examples")
        d = tasks[0].shape[0]
        for k, X in enumerate(tasks):
            if X.shape[0] != d:
                raise DimensionError(f"task {k} has {X.shape[0]} feature rows, expected d={d}")
        self.tasks = tasks

        if int(self.c) != self.c or self.c < 1:
            raise InvalidInputError(f"cluster count must be a positive integer, got {self.c}")
        self.c = int(self.c)
        if self.c > min(self.n_per_task):
            raise InvalidInputError(f"c={self.c} exceeds the smallest task size {min(self.n_per_task)}")

        if self.labels is not None:
            if len(self.labels) != len(tasks):
                raise DimensionError(f"got labels for {len(self.labels)} tasks, expected {len(tasks)}")
            dense_labels = []
            for k, y in enumerate(self.labels):
                y = np.asarray(y).ravel()
                if y.size != tasks[k].shape[1]:
                    raise DimensionError(f"task {k} has {tasks[k].shape[1]} examples but {y.size} labels")
                y = _densify(y)
                if y.max() >= self.c:
                    raise InvalidInputError(f"task {k} labels use {y.max() + 1} classes, more than c={self.c}")
                dense_labels.append(y)
            self.labels = dense_labels

    @property
    def d(self) -> int:
        return int(self.tasks[0].shape[0])

    @property
    def m(self) -> int:
        return len(self.tasks)

    @property
    def n_per_task(self) -> List[int]:
        return [int(X.shape[1]) for X in self.tasks]

    @property
    def n_total(self) -> int:
        return sum(self.n_per_task)

    @property
    def has_labels(self) -> bool:
        return self.labels is not None

    def stacked(self) -> np.ndarray:
        """X = [X^(1), ..., X^(m)], d x sum(n_k)."""
        return np.hstack(self.tasks)


@dataclass
class ModelState:
    """Projection W (d x l), shared centres M (l x c), task centres M^(k) (d x c), partitions P^(k) (n_k x c)."""

    W: np.ndarray
    M: np.ndarray
    M_task: List[np.ndarray]
    P: List[np.ndarray]

    @property
    def l(self) -> int:
        return int(self.W.shape[1])

    def copy(self) -> "ModelState":
        return ModelState(
            W=self.W.copy(),
            M=self.M.copy(),
            M_task=[Mk.copy() for Mk in self.M_task],
            P=[Pk.copy() for Pk in self.P],
        )

    def check(self, problem: MultiTaskProblem) -> None:
        d, c, l = problem.d, problem.c, self.l
        if self.W.shape != (d, l):
            raise DimensionError(f"W has shape {self.W.shape}, expected {(d, l)}")
        if self.M.shape != (l, c):
            raise DimensionError(f"M has shape {self.M.shape}, expected {(l, c)}")
        if len(self.M_task) != problem.m or len(self.P) != problem.m:
            raise DimensionError("state must hold one M^(k) and one P^(k) per task")
        for k, n_k in enumerate(problem.n_per_task):
            if self.M_task[k].shape != (d, c):
                raise DimensionError(f"M^({k}) has shape {self.M_task[k].shape}, expected {(d, c)}")
            if self.P[k].shape != (n_k, c):
                raise DimensionError(f"P^({k}) has shape {self.P[k].shape}, expected {(n_k, c)}")
            if np.any(self.P[k] < 0):
                raise InvariantViolationError(f"P^({k}) has negative entries")
        gram_error = np.max(np.abs(self.W.T @ self.W - np.eye(l)))
        if gram_error > ORTHONORMAL_TOL:
            raise InvariantViolationError(f"W is not orthonormal (max |W^T W - I| = {gram_error:.3e})")


@dataclass
class WeightState:
    """Per-task example weights v^(k) in [0,1]^{n_k} and pace parameters lambda2^(k)."""

    v: List[np.ndarray]
    lambda2: np.ndarray
    mode: WeightingMode
    gamma: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        self.mode = WeightingMode(self.mode)
        self.v = [np.asarray(vk, dtype=float) for vk in self.v]
        self.lambda2 = np.asarray(self.lambda2, dtype=float)
        if self.lambda2.shape != (len(self.v),):
            raise DimensionError(f"expected {len(self.v)} pace parameters, got shape {self.lambda2.shape}")
        for k, vk in enumerate(self.v):
            if vk.ndim != 1:
                raise DimensionError(f"weights of task {k} must be a vector")
            if np.any(vk < 0.0) or np.any(vk > 1.0):
                raise InvalidInputError(f"weights of task {k} must lie in [0, 1]")
        if self.mode is WeightingMode.NONE:
            if any(np.any(vk != 1.0) for vk in self.v):
                raise InvalidInputError("weighting mode 'none' requires unit weights")
        if self.mode is WeightingMode.SOFT:
            expected = self.lambda2 / 2.0
            if self.gamma is None:
                self.gamma = expected
            self.gamma = np.asarray(self.gamma, dtype=float)
            if not np.array_equal(self.gamma, expected):
                raise InvalidInputError("soft weighting requires gamma == lambda2 / 2")

    @classmethod
    def unit(cls, problem: MultiTaskProblem) -> "WeightState":
        return cls(
            v=[np.ones(n_k) for n_k in problem.n_per_task],
            lambda2=np.full(problem.m, np.inf),
            mode=WeightingMode.NONE,
        )

    def selected_fraction(self) -> tuple[float, ...]:
        return tuple(float(np.count_nonzero(vk > 0) / vk.size) for vk in self.v)

    def any_selected(self) -> bool:
        return any(np.any(vk > 0) for vk in self.v)

    def copy(self) -> "WeightState":
        return WeightState(
            v=[vk.copy() for vk in self.v],
            lambda2=self.lambda2.copy(),
            mode=self.mode,
            gamma=None if self.gamma is None else self.gamma.copy(),
        )


class FitConfig(BaseModel):
    """Hyperparameters of one SPMTC / LSSMTC fit."""

    model_config = ConfigDict(frozen=True, use_enum_values=False)

    lambda1: float = Field(default=0.5, ge=0.0, le=1.0)
    l: int = Field(default=2, ge=1)
    inner_max_iters: int = Field(default=50, ge=1)
    inner_rel_tol: float = Field(default=1e-6, gt=0.0)
    warm_start_iters: int = Field(default=20, ge=1)
    pace_start_fraction: float = 0.5
    pace_step_fraction: float = 0.1
    ridge_eps: float = Field(default=1e-8, gt=0.0)
    seed: int = Field(default=0, ge=0, le=2**64 - 1)
    mode: WeightingMode = WeightingMode.SOFT

    @field_validator("pace_start_fraction", "pace_step_fraction")
    @classmethod
    def fraction_in_unit_interval(cls, v: float) -> float:
        if not 0.0 < v <= 1.0:
            raise ValueError("pace fractions must lie in (0, 1]")
        return v

    @classmethod
    def from_mapping(cls, values: Mapping[str, Any]) -> "FitConfig":
        """Validate loosely-typed values (e.g. parsed from a key = value file)."""
        cleaned = {k: v for k, v in values.items() if v is not None and v != ""}
        try:
            return cls(**cleaned)
        except ValidationError as e:
            raise InvalidConfigError(f"invalid fit configuration: {e}") from e

    def with_overrides(self, **overrides: Any) -> "FitConfig":
        merged = self.model_dump()
        merged.update({k: v for k, v in overrides.items() if v is not None})
        return FitConfig.from_mapping(merged)


@dataclass(frozen=True)
class TraceRecord:
    outer_round: int
    inner_iter: int
    within: float
    cross: float
    total: float
    reg: float
    fractions: tuple[float, ...]


class ObjectiveTrace:
    """Ordered objective records of a fit, one per inner sweep."""

    def __init__(self, records: Iterable[TraceRecord] | None = None) -> None:
        self._records: List[TraceRecord] = list(records or [])

    def append(self, record: TraceRecord) -> None:
        self._records.append(record)

    def extend(self, other: Iterable[TraceRecord]) -> None:
        self._records.extend(other)

    def __len__(self) -> int:
        return len(self._records)

    def __iter__(self) -> Iterator[TraceRecord]:
        return iter(self._records)

    def __getitem__(self, index: int) -> TraceRecord:
        return self._records[index]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ObjectiveTrace) and self._records == other._records

    def totals(self) -> np.ndarray:
        return np.array([r.total for r in self._records], dtype=float)

    def for_round(self, outer_round: int) -> "ObjectiveTrace":
        return ObjectiveTrace(r for r in self._records if r.outer_round == outer_round)

    def to_frame(self) -> pd.DataFrame:
        m = max((len(r.fractions) for r in self._records), default=0)
        rows = []
        for r in self._records:
            row: Dict[str, Any] = {
                "outer_round": r.outer_round,
                "inner_iter": r.inner_iter,
                "within": r.within,
                "cross": r.cross,
                "total": r.total,
                "reg": r.reg,
            }
            for k in range(m):
                row[f"frac_{k}"] = r.fractions[k]
            rows.append(row)
        columns = ["outer_round", "inner_iter", "within", "cross", "total", "reg"] + [f"frac_{k}" for k in range(m)]
        return pd.DataFrame(rows, columns=columns)


@dataclass
class InnerFitReport:
    state: ModelState
    trace: ObjectiveTrace
    iterations_used: int
    converged: bool


@dataclass(frozen=True)
class MetricReport:
    acc: float
    nmi: float
    n: int
    c_true: int
    c_pred: int


@dataclass
class RunResult:
    """Outcome of one fit: per-task assignments plus everything needed to reproduce it."""

    method: str
    assignments: List[np.ndarray]
    trace: ObjectiveTrace
    config: FitConfig
    seed: int
    wall_time: float
    state: Optional[ModelState] = None
    weights: Optional[WeightState] = None
    weight_history: List[WeightState] = field(default_factory=list)
    outer_rounds: int = 0
    metrics: Optional[List[MetricReport]] = None

    @property
    def final_objective(self) -> float:
        return float(self.trace[-1].total) if len(self.trace) else float("nan")
