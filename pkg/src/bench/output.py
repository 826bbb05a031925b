from __future__ import annotations

import logging
from pathlib import Path
from typing import TYPE_CHECKING, List

import pandas as pd
from tabulate import tabulate

from src.mtc.errors import DataIOError

if TYPE_CHECKING:
    from .runner import BenchResults

logger = logging.getLogger(__name__)

RUNS_FILE = "runs.csv"
FAILURES_FILE = "failures.csv"
SUMMARY_FILE = "summary.md"
SENSITIVITY_FILE = "sensitivity.csv"
RUNS_DIR = "runs"


def mean_sd(mean: float, sd: float) -> str:
    return f"{mean:.4f} ± {sd:.4f}"


def summary_rows(summary: pd.DataFrame, task: int, *, mark: str = "**") -> List[list]:
    """Rows of one task's table; comparable methods get their ACC/NMI wrapped in `mark`."""
    rows = []
    for _, row in summary[summary["task"] == task].iterrows():
        acc = mean_sd(row["acc_mean"], row["acc_sd"])
        nmi = mean_sd(row["nmi_mean"], row["nmi_sd"])
        if row["comparable"]:
            acc, nmi = f"{mark}{acc}{mark}", f"{mark}{nmi}{mark}"
        rows.append([row["method"], f"{row['lambda1']:g}", int(row["l"]), int(row["runs"]), acc, nmi])
    return rows


SUMMARY_HEADERS = ["Method", "lambda1", "l", "Runs", "ACC", "NMI"]


def format_summary_markdown(summary: pd.DataFrame, alpha: float) -> str:
    lines = ["# Benchmark summary", ""]
    lines.append(f"Best grid point per method and task (highest mean ACC, ties by NMI). Bold entries are the best method or not significantly worse than it (Welch t-test on ACC, alpha = {alpha:g}).")
    for task in sorted(summary["task"].unique()):
        lines += ["", f"## Task {task}", ""]
        lines.append(tabulate(summary_rows(summary, task), headers=SUMMARY_HEADERS, tablefmt="github"))
    return "\n".join(lines) + "\n"


def _write_csv(frame: pd.DataFrame, path: Path) -> None:
    try:
        frame.to_csv(path, index=False, float_format="%.17g", lineterminator="\n")
    except OSError as e:
        raise DataIOError(f"cannot write {path}: {e}") from e


def write_bench_outputs(results: "BenchResults", directory: str | Path, alpha: float = 0.05) -> Path:
    directory = Path(directory)
    try:
        directory.mkdir(parents=True, exist_ok=True)
        (directory / SUMMARY_FILE).write_text(format_summary_markdown(results.summary, alpha))
    except OSError as e:
        raise DataIOError(f"cannot write benchmark output to {directory}: {e}") from e
    _write_csv(results.runs, directory / RUNS_FILE)
    if not results.failures.empty:
        _write_csv(results.failures, directory / FAILURES_FILE)
    logger.info("benchmark output written to %s", directory)
    return directory


def write_sensitivity(table: pd.DataFrame, directory: str | Path) -> Path:
    directory = Path(directory)
    try:
        directory.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise DataIOError(f"cannot create {directory}: {e}") from e
    _write_csv(table, directory / SENSITIVITY_FILE)
    return directory / SENSITIVITY_FILE
