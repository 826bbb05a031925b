from __future__ import annotations

from enum import Enum
from pathlib import Path

from pydantic import BaseModel, Field, field_validator, model_validator


class MatrixFormat(str, Enum):
    DENSE = "dense"
    SPARSE_TRIPLET = "sparse-triplet"


class TaskEntry(BaseModel):
    data: Path
    labels: Path | None = None
    format: MatrixFormat = MatrixFormat.DENSE


class ProblemManifest(BaseModel):
    """Where the task matrices live and what shape they must have."""

    tasks: list[TaskEntry] = Field(min_length=1)
    d: int = Field(ge=1)
    c: int = Field(ge=1)
    normalize: bool = False

    @property
    def has_labels(self) -> bool:
        return all(task.labels is not None for task in self.tasks)


class SynthSpec(BaseModel):
    """Planted multi-task clustering problem.

    Centres sit `separation` apart inside a random l_true-dimensional subspace;
    every task shifts them by its own offset of length `task_offset`.
    """

    m: int = Field(default=2, ge=1)
    d: int = Field(default=20, ge=1)
    c: int = Field(default=3, ge=1)
    l_true: int = Field(default=2, ge=1)
    n: int = Field(default=120, ge=1)
    separation: float = Field(default=8.0, gt=0.0)
    task_offset: float = Field(default=1.0, ge=0.0)
    noise_sd: float = Field(default=1.0, gt=0.0)
    outlier_fraction: float = 0.0
    seed: int = Field(default=0, ge=0, le=2**64 - 1)

    @field_validator("outlier_fraction")
    @classmethod
    def outlier_fraction_below_half(cls, v: float) -> float:
        if not 0.0 <= v < 0.5:
            raise ValueError("outlier_fraction must lie in [0, 0.5)")
        return v

    @model_validator(mode="after")
    def subspace_fits(self) -> "SynthSpec":
        if self.l_true > self.d:
            raise ValueError(f"l_true={self.l_true} exceeds d={self.d}")
        if self.n < self.c:
            raise ValueError(f"n={self.n} examples per task cannot hold c={self.c} clusters")
        return self
