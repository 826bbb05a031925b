from typing import Optional, Sequence

import pandas as pd
from colorama import Fore, Style
from tabulate import tabulate

from src.mtc.types import MetricReport, RunResult


def _metric_color(value: float) -> str:
    if value >= 0.9:
        return Fore.GREEN
    if value >= 0.6:
        return Fore.YELLOW
    return Fore.RED


def print_metric_reports(reports: Sequence[MetricReport], title: str = "CLUSTERING QUALITY") -> None:
    """Per-task ACC / NMI table."""
    rows = []
    for k, report in enumerate(reports):
        rows.append(
            [
                f"{Fore.CYAN}Task {k}{Style.RESET_ALL}",
                f"{_metric_color(report.acc)}{report.acc:.4f}{Style.RESET_ALL}",
                f"{_metric_color(report.nmi)}{report.nmi:.4f}{Style.RESET_ALL}",
                report.n,
                f"{report.c_pred}/{report.c_true}",
            ]
        )
    print(f"\n{Fore.WHITE}{Style.BRIGHT}{title}:{Style.RESET_ALL}")
    print(
        tabulate(
            rows,
            headers=[f"{Fore.WHITE}Task", "ACC", "NMI", "Examples", "Clusters (pred/true)"],
            tablefmt="grid",
            colalign=("left", "right", "right", "right", "center"),
        )
    )


def print_fit_result(result: RunResult, output_dir: Optional[str] = None) -> None:
    print(f"\n{Fore.WHITE}{Style.BRIGHT}FIT COMPLETE{Style.RESET_ALL} [{Fore.CYAN}{result.method}{Style.RESET_ALL}]")
    rows = [
        ["Seed", result.seed],
        ["lambda1", f"{result.config.lambda1:g}"],
        ["l", result.config.l],
        ["Outer rounds", result.outer_rounds],
        ["Sweeps", len(result.trace)],
        ["Final objective", f"{result.final_objective:.6g}"],
        ["Wall time", f"{result.wall_time:.2f}s"],
    ]
    if output_dir:
        rows.append(["Output", f"{Fore.CYAN}{output_dir}{Style.RESET_ALL}"])
    print(tabulate(rows, tablefmt="grid", colalign=("left", "right")))
    if result.metrics:
        print_metric_reports(result.metrics)


def print_bench_summary(summary: pd.DataFrame) -> None:
    """Best grid point per method and task; comparable methods in green."""
    for task in sorted(summary["task"].unique()):
        rows = []
        for _, row in summary[summary["task"] == task].iterrows():
            color = Fore.GREEN + Style.BRIGHT if row["comparable"] else Fore.WHITE
            rows.append(
                [
                    f"{Fore.CYAN}{row['method']}{Style.RESET_ALL}",
                    f"{row['lambda1']:g}",
                    int(row["l"]),
                    int(row["runs"]),
                    f"{color}{row['acc_mean']:.4f} ± {row['acc_sd']:.4f}{Style.RESET_ALL}",
                    f"{color}{row['nmi_mean']:.4f} ± {row['nmi_sd']:.4f}{Style.RESET_ALL}",
                ]
            )
        print(f"\n{Fore.WHITE}{Style.BRIGHT}TASK {task}:{Style.RESET_ALL}")
        print(
            tabulate(
                rows,
                headers=[f"{Fore.WHITE}Method", "lambda1", "l", "Runs", "ACC", "NMI"],
                tablefmt="grid",
                colalign=("left", "right", "right", "right", "right", "right"),
            )
        )


def print_sensitivity(table: pd.DataFrame) -> None:
    rows = [
        [f"{Fore.CYAN}{row['method']}{Style.RESET_ALL}", int(row["l"]), int(row["task"]), f"{row['acc_mean']:.4f}", f"{row['nmi_mean']:.4f}"]
        for _, row in table.iterrows()
    ]
    print(f"\n{Fore.WHITE}{Style.BRIGHT}SUBSPACE DIMENSION SENSITIVITY (lambda1 = 0.5):{Style.RESET_ALL}")
    print(tabulate(rows, headers=[f"{Fore.WHITE}Method", "l", "Task", "Mean ACC", "Mean NMI"], tablefmt="grid", colalign=("left", "right", "right", "right", "right")))


def print_failures(failures: pd.DataFrame) -> None:
    if failures.empty:
        return
    print(f"\n{Fore.RED}{Style.BRIGHT}{len(failures)} run(s) failed:{Style.RESET_ALL}")
    for _, row in failures.iterrows():
        print(f"  {row['method']} lambda1={row['lambda1']:g} l={row['l']} seed={row['seed']}: {Fore.RED}{row['error']}{Style.RESET_ALL}")
