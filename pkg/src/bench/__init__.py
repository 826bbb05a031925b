"""Benchmark harness: plans, grid runs, aggregation and the command line."""

from .plan import DEFAULT_L_GRID, DEFAULT_LAMBDA1_GRID, DEFAULT_SEEDS, BenchPlan, load_fit_config, load_plan, load_synth_spec
from .runner import BenchJob, BenchmarkRunner, BenchResults, bench_run, sensitivity_table, summarize
from .output import format_summary_markdown, write_bench_outputs

__all__ = [
    "DEFAULT_L_GRID",
    "DEFAULT_LAMBDA1_GRID",
    "DEFAULT_SEEDS",
    "BenchPlan",
    "load_fit_config",
    "load_plan",
    "load_synth_spec",
    "BenchJob",
    "BenchmarkRunner",
    "BenchResults",
    "bench_run",
    "sensitivity_table",
    "summarize",
    "format_summary_markdown",
    "write_bench_outputs",
]
