import numpy as np
import pandas as pd
import pytest

from src.bench import runner as runner_module
from src.bench.output import FAILURES_FILE, RUNS_DIR, RUNS_FILE, SUMMARY_FILE
from src.bench.runner import BenchJob, BenchmarkRunner, bench_run, plan_jobs, run_job, sensitivity_table, summarize
from src.data.results import read_assignments, read_run_header
from src.data.synthetic import synth_multitask
from src.mtc.errors import BenchmarkAbortedError, InvalidConfigError, InvalidInputError
from src.mtc.types import MultiTaskProblem
from tests.bench.conftest import SMALL_FIT, SMALL_SYNTH


def _runs_without_timing(path):
    frame = pd.read_csv(path, float_precision="round_trip")
    return frame.drop(columns=["wall_ms"]).to_csv(index=False)


def test_every_scheduled_run_is_recorded(make_plan):
    plan = make_plan(lambda1_grid=[0.25, 0.5, 0.75], seeds=list(range(20)))
    results = bench_run(plan)
    assert plan.n_runs == 120
    assert results.n_runs == 120
    assert len(results.runs) == 120 * SMALL_SYNTH.m
    assert results.failures.empty
    assert (plan.output_dir / RUNS_FILE).is_file()
    assert not (plan.output_dir / FAILURES_FILE).exists()


def test_plan_jobs_order(make_plan):
    jobs = plan_jobs(make_plan(lambda1_grid=[0.25, 0.5]))
    assert jobs[0] == BenchJob("km", 0.25, 2, 0)
    assert jobs[-1] == BenchJob("all-km", 0.5, 2, 1)
    assert len(jobs) == 8


def test_summary_matches_runs_file(make_plan):
    plan = make_plan(methods=["km", "lssmtc"], lambda1_grid=[0.25, 0.75], seeds=[0, 1, 2])
    results = bench_run(plan)
    runs = pd.read_csv(plan.output_dir / RUNS_FILE, float_precision="round_trip")
    for _, row in results.summary.iterrows():
        same = runs[(runs["method"] == row["method"]) & (runs["task"] == row["task"])]
        by_point = same.groupby(["lambda1", "l"])["acc"].mean()
        point = same[(same["lambda1"] == row["lambda1"]) & (same["l"] == row["l"])]
        assert row["acc_mean"] == pytest.approx(point["acc"].mean())
        assert row["nmi_mean"] == pytest.approx(point["nmi"].mean())
        assert row["runs"] == 3
        assert row["acc_mean"] == pytest.approx(by_point.max())
    assert results.summary.groupby("task")["comparable"].any().all()


def test_runs_are_reproducible(make_plan, tmp_path):
    first = make_plan(methods=["spmtc-h"], output_dir=tmp_path / "a")
    second = make_plan(methods=["spmtc-h"], output_dir=tmp_path / "b")
    bench_run(first)
    bench_run(second)
    assert _runs_without_timing(first.output_dir / RUNS_FILE) == _runs_without_timing(second.output_dir / RUNS_FILE)
    assert (first.output_dir / SUMMARY_FILE).read_text() == (second.output_dir / SUMMARY_FILE).read_text()


def test_worker_pool_gives_the_same_rows(make_plan):
    plan = make_plan(methods=["km", "lssmtc"], seeds=[0, 1, 2])
    serial = BenchmarkRunner(plan=plan).run()
    pooled = BenchmarkRunner(plan=plan, workers=2).run()
    pd.testing.assert_frame_equal(serial.runs.drop(columns="wall_ms"), pooled.runs.drop(columns="wall_ms"))


def test_failed_runs_are_recorded(make_plan, monkeypatch):
    real_fit = runner_module.fit_method

    def flaky(problem, method, config):
        if method == "all-km" and config.seed == 1:
            raise InvalidInputError("boom")
        return real_fit(problem, method, config)

    monkeypatch.setattr(runner_module, "fit_method", flaky)
    plan = make_plan()
    results = bench_run(plan)
    assert len(results.failures) == 1
    assert results.failures.iloc[0]["error"] == "InvalidInputError: boom"
    assert results.n_runs == plan.n_runs
    assert (plan.output_dir / FAILURES_FILE).is_file()


def test_benchmark_aborts_when_a_method_never_succeeds(make_plan, monkeypatch):
    real_fit = runner_module.fit_method

    def broken(problem, method, config):
        if method == "all-km":
            raise RuntimeError("no luck")
        return real_fit(problem, method, config)

    monkeypatch.setattr(runner_module, "fit_method", broken)
    plan = make_plan()
    with pytest.raises(BenchmarkAbortedError, match="all-km"):
        bench_run(plan)
    assert (plan.output_dir / RUNS_FILE).is_file()
    assert len(pd.read_csv(plan.output_dir / FAILURES_FILE)) == 2


def test_run_job_reports_errors_instead_of_raising():
    problem, _ = synth_multitask(SMALL_SYNTH)
    job, rows, error = run_job(problem, SMALL_FIT, BenchJob("lssmtc", 0.5, 7, 0))
    assert rows == []
    assert error.startswith("InvalidConfigError")


def test_benchmark_needs_labels(make_plan):
    problem = MultiTaskProblem(tasks=[np.random.default_rng(0).standard_normal((6, 10))], c=2)
    with pytest.raises(InvalidInputError):
        BenchmarkRunner(plan=make_plan()).run(problem)


def test_l_grid_must_fit_the_data(make_plan):
    with pytest.raises(InvalidConfigError):
        BenchmarkRunner(plan=make_plan(l_grid=[2, 8])).run()


def test_runner_rejects_zero_workers(make_plan):
    with pytest.raises(InvalidConfigError):
        BenchmarkRunner(plan=make_plan(), workers=0)


def test_summarize_breaks_ties_towards_the_first_grid_point():
    runs = pd.DataFrame(
        {
            "method": ["km"] * 4,
            "task": [0] * 4,
            "lambda1": [0.25, 0.25, 0.75, 0.75],
            "l": [2] * 4,
            "seed": [0, 1, 0, 1],
            "acc": [0.9, 0.8, 0.8, 0.9],
            "nmi": [0.5, 0.5, 0.5, 0.5],
            "objective": [1.0] * 4,
            "wall_ms": [1.0] * 4,
        }
    )
    summary = summarize(runs, 0.05)
    assert len(summary) == 1
    assert summary.iloc[0]["lambda1"] == 0.25
    assert summary.iloc[0]["acc_mean"] == pytest.approx(0.85)
    assert bool(summary.iloc[0]["comparable"])


def test_sensitivity_table_averages_over_seeds():
    runs = pd.DataFrame(
        {
            "method": ["lssmtc"] * 4,
            "task": [0, 0, 0, 0],
            "lambda1": [0.5] * 4,
            "l": [2, 2, 4, 4],
            "seed": [0, 1, 0, 1],
            "acc": [1.0, 0.5, 0.75, 0.75],
            "nmi": [1.0, 0.0, 0.5, 0.5],
            "objective": [1.0] * 4,
            "wall_ms": [1.0] * 4,
        }
    )
    table = sensitivity_table(runs)
    assert list(table["l"]) == [2, 4]
    np.testing.assert_allclose(table["acc_mean"], [0.75, 0.75])
    np.testing.assert_allclose(table["nmi_mean"], [0.5, 0.5])


def test_each_run_saves_its_result_directory(make_plan):
    plan = make_plan(methods=["km", "lssmtc"], seeds=[0, 1])
    results = bench_run(plan)
    runs_dir = plan.output_dir / RUNS_DIR
    expected = {job.result_dir for job in plan_jobs(plan)}
    assert expected == {"km_lambda1=0.5_l=2_seed=0", "km_lambda1=0.5_l=2_seed=1", "lssmtc_lambda1=0.5_l=2_seed=0", "lssmtc_lambda1=0.5_l=2_seed=1"}
    assert {p.name for p in runs_dir.iterdir()} == expected
    for job in plan_jobs(plan):
        assignments = read_assignments(runs_dir / job.result_dir)
        assert [a.size for a in assignments] == [SMALL_SYNTH.n] * SMALL_SYNTH.m
        header = read_run_header(runs_dir / job.result_dir)
        assert header["method"] == job.method
        assert header["seed"] == str(job.seed)
    assert results.n_runs == len(expected)
