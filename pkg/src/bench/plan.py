"""Benchmark plans and the other `key = value` settings files.

A plan names its data (`manifest = ...` or `synth = ...`, relative to the
plan file), the methods, the grids and the seeds:

    synth = planted.env
    methods = lssmtc,spmtc-s
    lambda1 = 0.25,0.5,0.75
    l = 2,4
    seeds = 0,1,2,3,4
    fit.inner_max_iters = 30
"""

from __future__ import annotations

import itertools
from pathlib import Path
from typing import Any, Dict, List

from pydantic import BaseModel, Field, field_validator, model_validator

from src.data.loaders import read_key_values, split_list, validate_model
from src.data.models import SynthSpec
from src.mtc.types import FitConfig, Method

DEFAULT_LAMBDA1_GRID = [round(0.05 * i, 2) for i in range(1, 20)]
DEFAULT_L_GRID = [2, 4, 8, 16]
DEFAULT_SEEDS = list(range(20))
DEFAULT_ALPHA = 0.05

_LIST_KEYS = {"methods": "methods", "lambda1": "lambda1_grid", "l": "l_grid", "seeds": "seeds"}


class BenchPlan(BaseModel):
    manifest: Path | None = None
    synth: SynthSpec | None = None
    methods: List[Method] = Field(min_length=1)
    lambda1_grid: List[float] = Field(default_factory=lambda: list(DEFAULT_LAMBDA1_GRID), min_length=1)
    l_grid: List[int] = Field(default_factory=lambda: list(DEFAULT_L_GRID), min_length=1)
    seeds: List[int] = Field(default_factory=lambda: list(DEFAULT_SEEDS), min_length=1)
    output_dir: Path = Path("results")
    alpha: float = Field(default=DEFAULT_ALPHA, gt=0.0, lt=1.0)
    fit: FitConfig = Field(default_factory=FitConfig)

    @field_validator("methods")
    @classmethod
    def unique_methods(cls, v: List[Method]) -> List[Method]:
        return list(dict.fromkeys(v))

    @field_validator("lambda1_grid")
    @classmethod
    def lambda1_in_unit_interval(cls, v: List[float]) -> List[float]:
        if any(not 0.0 <= value <= 1.0 for value in v):
            raise ValueError("lambda1 grid values must lie in [0, 1]")
        return list(dict.fromkeys(v))

    @field_validator("l_grid")
    @classmethod
    def l_positive(cls, v: List[int]) -> List[int]:
        if any(value < 1 for value in v):
            raise ValueError("l grid values must be at least 1")
        return list(dict.fromkeys(v))

    @field_validator("seeds")
    @classmethod
    def seeds_in_range(cls, v: List[int]) -> List[int]:
        if any(not 0 <= value < 2**64 for value in v):
            raise ValueError("seeds must be 64-bit unsigned integers")
        return list(dict.fromkeys(v))

    @model_validator(mode="after")
    def one_data_source(self) -> "BenchPlan":
        if (self.manifest is None) == (self.synth is None):
            raise ValueError("a plan needs exactly one of 'manifest' or 'synth'")
        return self

    def grid(self) -> List[tuple[float, int]]:
        """(lambda1, l) points in plan order."""
        return list(itertools.product(self.lambda1_grid, self.l_grid))

    @property
    def n_runs(self) -> int:
        return len(self.methods) * len(self.grid()) * len(self.seeds)


def load_synth_spec(path: str | Path) -> SynthSpec:
    return validate_model(SynthSpec, read_key_values(path), path)


def load_fit_config(path: str | Path) -> FitConfig:
    return validate_model(FitConfig, read_key_values(path), path)


def plan_values(values: Dict[str, str], base_dir: Path) -> Dict[str, Any]:
    """Turn raw plan-file strings into BenchPlan fields."""
    fields: Dict[str, Any] = {}
    fit: Dict[str, str] = {}
    for key, value in values.items():
        if key in _LIST_KEYS:
            fields[_LIST_KEYS[key]] = split_list(value)
        elif key.startswith("fit."):
            fit[key[len("fit.") :]] = value
        elif key == "manifest":
            fields["manifest"] = base_dir / value
        elif key == "synth":
            fields["synth"] = load_synth_spec(base_dir / value)
        elif key == "output_dir":
            fields["output_dir"] = base_dir / value
        else:
            fields[key] = value
    if fit:
        fields["fit"] = fit
    return fields


def load_plan(path: str | Path) -> BenchPlan:
    path = Path(path)
    return validate_model(BenchPlan, plan_values(read_key_values(path), path.parent), path)
