from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Sequence

import pandas as pd

from src.data.loaders import load_problem
from src.data.results import save_result
from src.data.synthetic import synth_multitask
from src.mtc.driver import fit_method
from src.mtc.errors import BenchmarkAbortedError, InvalidConfigError, InvalidInputError
from src.mtc.metrics import compare_methods
from src.mtc.types import FitConfig, Method, MultiTaskProblem

from .output import RUNS_DIR, write_bench_outputs
from .plan import BenchPlan

logger = logging.getLogger(__name__)

RUN_COLUMNS = ["method", "task", "lambda1", "l", "seed", "acc", "nmi", "objective", "wall_ms"]
FAILURE_COLUMNS = ["method", "lambda1", "l", "seed", "error"]
SUMMARY_COLUMNS = ["method", "task", "lambda1", "l", "runs", "acc_mean", "acc_sd", "nmi_mean", "nmi_sd", "comparable"]
RUN_KEY = ["method", "lambda1", "l", "seed"]


@dataclass(frozen=True)
class BenchJob:
    method: str
    lambda1: float
    l: int
    seed: int

    @property
    def result_dir(self) -> str:
        return f"{self.method}_lambda1={self.lambda1:g}_l={self.l}_seed={self.seed}"


@dataclass
class BenchResults:
    runs: pd.DataFrame
    summary: pd.DataFrame
    failures: pd.DataFrame = field(default_factory=lambda: pd.DataFrame(columns=FAILURE_COLUMNS))

    @property
    def n_runs(self) -> int:
        """Scheduled runs, successful or not."""
        return len(self.runs.drop_duplicates(RUN_KEY)) + len(self.failures)


def plan_problem(plan: BenchPlan) -> MultiTaskProblem:
    if plan.manifest is not None:
        return load_problem(plan.manifest)
    problem, _ = synth_multitask(plan.synth)
    return problem


def check_problem(plan: BenchPlan, problem: MultiTaskProblem) -> None:
    if not problem.has_labels:
        raise InvalidInputError("benchmarking needs labeled tasks")
    too_large = [l for l in plan.l_grid if l > problem.d]
    if too_large:
        raise InvalidConfigError(f"l grid values {too_large} exceed d={problem.d}")


def plan_jobs(plan: BenchPlan) -> List[BenchJob]:
    return [BenchJob(method.value, lambda1, l, seed) for method in plan.methods for lambda1, l in plan.grid() for seed in plan.seeds]


def run_job(problem: MultiTaskProblem, base_config: FitConfig, job: BenchJob, runs_dir: Path | None = None) -> tuple[BenchJob, List[Dict], str | None]:
    """Fit one (method, grid point, seed); failures come back as an error message.

    With `runs_dir` the full result is saved to runs_dir/<job.result_dir>.
    """
    try:
        config = base_config.with_overrides(lambda1=job.lambda1, l=job.l, seed=job.seed)
        result = fit_method(problem, job.method, config)
        if runs_dir is not None:
            save_result(result, runs_dir / job.result_dir)
    except Exception as e:  # a failed run is recorded, never fatal
        return job, [], f"{type(e).__name__}: {e}"
    rows = [
        {
            "method": job.method,
            "task": k,
            "lambda1": job.lambda1,
            "l": job.l,
            "seed": job.seed,
            "acc": report.acc,
            "nmi": report.nmi,
            "objective": result.final_objective,
            "wall_ms": result.wall_time * 1000.0,
        }
        for k, report in enumerate(result.metrics)
    ]
    return job, rows, None


def summarize(runs: pd.DataFrame, alpha: float) -> pd.DataFrame:
    """Best grid point per (method, task) by mean ACC, ties by mean NMI, with significance marks."""
    if runs.empty:
        return pd.DataFrame(columns=SUMMARY_COLUMNS)
    points = (
        runs.groupby(["method", "task", "lambda1", "l"], sort=True)
        .agg(
            runs=("seed", "size"),
            acc_mean=("acc", "mean"),
            acc_sd=("acc", "std"),
            nmi_mean=("nmi", "mean"),
            nmi_sd=("nmi", "std"),
        )
        .reset_index()
    )
    points[["acc_sd", "nmi_sd"]] = points[["acc_sd", "nmi_sd"]].fillna(0.0)
    # stable sort keeps the lowest (lambda1, l) among exact ties
    ranked = points.sort_values(["method", "task", "acc_mean", "nmi_mean"], ascending=[True, True, False, False], kind="mergesort")
    best = ranked.groupby(["method", "task"], sort=True).head(1).reset_index(drop=True)

    comparable = []
    for _, row in best.iterrows():
        comparable.append(row["method"] in _comparable_methods(runs, best, row["task"], alpha))
    best["comparable"] = comparable
    return best[SUMMARY_COLUMNS].sort_values(["task", "method"], kind="mergesort").reset_index(drop=True)


def _comparable_methods(runs: pd.DataFrame, best: pd.DataFrame, task: int, alpha: float) -> set[str]:
    samples = {}
    for _, row in best[best["task"] == task].iterrows():
        mask = (runs["method"] == row["method"]) & (runs["task"] == task) & (runs["lambda1"] == row["lambda1"]) & (runs["l"] == row["l"])
        samples[row["method"]] = runs.loc[mask, "acc"].to_numpy()
    return compare_methods(samples, alpha)


class BenchmarkRunner:
    """Runs every (method, grid point, seed) of a plan and aggregates the results.

    Runs are independent; with workers > 1 they go to a process pool and the
    rows are sorted afterwards, so output does not depend on completion order.
    """

    def __init__(
        self,
        *,
        plan: BenchPlan,
        workers: int = 1,
        on_job_done: Callable[[BenchJob, str | None], None] | None = None,
        runs_dir: Path | None = None,
    ) -> None:
        if workers < 1:
            raise InvalidConfigError(f"workers must be at least 1, got {workers}")
        self._plan = plan
        self._workers = workers
        self._on_job_done = on_job_done
        self._runs_dir = runs_dir

    def _execute(self, problem: MultiTaskProblem, jobs: Sequence[BenchJob]) -> Iterable[tuple[BenchJob, List[Dict], str | None]]:
        work = partial(run_job, problem, self._plan.fit, runs_dir=self._runs_dir)
        if self._workers == 1:
            yield from map(work, jobs)
            return
        with ProcessPoolExecutor(max_workers=self._workers) as executor:
            yield from executor.map(work, jobs)

    def run(self, problem: MultiTaskProblem | None = None) -> BenchResults:
        problem = problem if problem is not None else plan_problem(self._plan)
        check_problem(self._plan, problem)
        jobs = plan_jobs(self._plan)
        logger.info("benchmark: %d runs over %d tasks", len(jobs), problem.m)

        rows: List[Dict] = []
        failures: List[Dict] = []
        for job, job_rows, error in self._execute(problem, jobs):
            if error is not None:
                logger.warning("run %s lambda1=%s l=%s seed=%s failed: %s", job.method, job.lambda1, job.l, job.seed, error)
                failures.append({"method": job.method, "lambda1": job.lambda1, "l": job.l, "seed": job.seed, "error": error})
            rows.extend(job_rows)
            if self._on_job_done is not None:
                self._on_job_done(job, error)

        runs = pd.DataFrame(rows, columns=RUN_COLUMNS).sort_values(RUN_KEY + ["task"], kind="mergesort").reset_index(drop=True)
        failed = pd.DataFrame(failures, columns=FAILURE_COLUMNS).sort_values(RUN_KEY, kind="mergesort").reset_index(drop=True)
        return BenchResults(runs=runs, summary=summarize(runs, self._plan.alpha), failures=failed)


def check_not_aborted(results: BenchResults, methods: Sequence[Method | str]) -> None:
    """Raise BenchmarkAbortedError when some method has no successful run."""
    succeeded = set(results.runs["method"])
    dead = [Method(m).value for m in methods if Method(m).value not in succeeded]
    if dead:
        counts = results.failures["method"].value_counts().to_dict()
        detail = ", ".join(f"{m} ({counts.get(m, 0)} failed runs)" for m in dead)
        raise BenchmarkAbortedError(f"every run failed for: {detail}")


def sensitivity_table(runs: pd.DataFrame) -> pd.DataFrame:
    """Mean ACC / NMI per (method, l, task) over seeds."""
    return (
        runs.groupby(["method", "l", "task"], sort=True)
        .agg(runs=("seed", "size"), acc_mean=("acc", "mean"), nmi_mean=("nmi", "mean"))
        .reset_index()
    )


def bench_run(
    plan: BenchPlan,
    *,
    workers: int = 1,
    problem: MultiTaskProblem | None = None,
    on_job_done: Callable[[BenchJob, str | None], None] | None = None,
) -> BenchResults:
    """Run a plan, write runs.csv / failures.csv / summary.md and one result directory per run
    (under runs/) to plan.output_dir, and return the tables.

    Raises BenchmarkAbortedError (after writing) when some method never succeeded.
    """
    runs_dir = Path(plan.output_dir) / RUNS_DIR
    results = BenchmarkRunner(plan=plan, workers=workers, on_job_done=on_job_done, runs_dir=runs_dir).run(problem)
    write_bench_outputs(results, plan.output_dir, plan.alpha)
    check_not_aborted(results, plan.methods)
    return results
