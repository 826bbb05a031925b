from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

import questionary
from colorama import Fore, Style, init

from src.config import LOG_LEVELS, settings
from src.data.loaders import load_problem, read_labels, split_list, validate_model, write_problem
from src.data.models import SynthSpec
from src.data.results import read_assignments, save_result
from src.data.synthetic import synth_multitask
from src.mtc.driver import fit_method
from src.mtc.errors import InvalidConfigError, InvalidInputError, SpmtcError
from src.mtc.metrics import evaluate
from src.mtc.types import FitConfig, Method, MultiTaskProblem, WeightingMode
from src.utils.display import print_bench_summary, print_failures, print_fit_result, print_metric_reports, print_sensitivity
from src.utils.progress import BenchProgress

from .output import write_sensitivity
from .plan import DEFAULT_L_GRID, DEFAULT_SEEDS, BenchPlan, load_fit_config, load_plan, load_synth_spec
from .runner import bench_run, sensitivity_table

logger = logging.getLogger(__name__)

METHOD_CHOICES = [
    ("SPMTC, soft weighting", Method.SPMTC_S.value),
    ("SPMTC, hard weighting", Method.SPMTC_H.value),
    ("LSSMTC (no self-paced weighting)", Method.LSSMTC.value),
    ("k-means per task (KM)", Method.KM.value),
    ("k-means on pooled tasks (All-KM)", Method.ALL_KM.value),
]
SENSITIVITY_METHODS = [Method.LSSMTC, Method.SPMTC_H, Method.SPMTC_S]
MODE_METHODS = {WeightingMode.NONE: Method.LSSMTC, WeightingMode.HARD: Method.SPMTC_H, WeightingMode.SOFT: Method.SPMTC_S}


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--log-level", type=str.upper, choices=LOG_LEVELS, default=None, help="Logging level (default: SPMTC_LOG_LEVEL or WARNING)")
    common.add_argument("--quiet", action="store_true", help="No progress bars or tables")
    return common


def _data_flags(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--manifest", type=Path, help="Problem manifest (key = value file)")
    source.add_argument("--synth", type=Path, help="Synthetic problem spec (key = value file)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spmtc", description="Self-paced multi-task clustering toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common_flags()

    generate = sub.add_parser("generate", parents=[common], help="Write a synthetic multi-task problem to a directory")
    generate.add_argument("--synth", type=Path, help="Synthetic problem spec; built-in defaults when omitted")
    generate.add_argument("--seed", type=int, help="Override the spec's seed")
    generate.add_argument("--out", type=Path, required=True, help="Output directory")

    fit = sub.add_parser("fit", parents=[common], help="Fit one method and save its result files")
    _data_flags(fit)
    fit.add_argument("--method", choices=[m.value for m in Method], help="Method to run (prompted when omitted)")
    fit.add_argument("--config", type=Path, help="Fit configuration (key = value file)")
    fit.add_argument("--mode", choices=[m.value for m in WeightingMode], help="Weighting mode; selects lssmtc / spmtc-h / spmtc-s")
    fit.add_argument("--seed", type=int)
    fit.add_argument("--lambda1", type=float)
    fit.add_argument("--l", type=int)
    fit.add_argument("--out", type=Path, help="Result directory (default: SPMTC_OUTPUT_DIR/<method>)")

    bench = sub.add_parser("bench", parents=[common], help="Run a benchmark plan")
    bench.add_argument("--config", type=Path, required=True, help="Benchmark plan (key = value file)")
    bench.add_argument("--workers", type=int, default=None, help="Parallel runs (default: SPMTC_WORKERS)")
    bench.add_argument("--out", type=Path, help="Override the plan's output directory")

    evaluate_cmd = sub.add_parser("eval", parents=[common], help="Score saved assignments against labels")
    evaluate_cmd.add_argument("--assignments", type=Path, required=True, help="Result directory written by fit")
    labels = evaluate_cmd.add_mutually_exclusive_group(required=True)
    labels.add_argument("--manifest", type=Path, help="Manifest whose tasks carry label files")
    labels.add_argument("--labels", type=str, help="Comma-separated label files, one per task")

    sensitivity = sub.add_parser("sensitivity", parents=[common], help="Mean ACC/NMI per subspace dimension l at lambda1 = 0.5")
    _data_flags(sensitivity)
    sensitivity.add_argument("--l", dest="l_grid", type=str, help="Comma-separated l values (default: 2,4,8,16)")
    sensitivity.add_argument("--seeds", type=str, help="Comma-separated seeds (default: 0..19)")
    sensitivity.add_argument("--config", type=Path, help="Base fit configuration")
    sensitivity.add_argument("--workers", type=int, default=None)
    sensitivity.add_argument("--out", type=Path, help="Output directory for sensitivity.csv")
    return parser


def _load_problem(args: argparse.Namespace) -> MultiTaskProblem:
    if args.manifest is not None:
        return load_problem(args.manifest)
    if args.synth is not None:
        problem, _ = synth_multitask(load_synth_spec(args.synth))
        return problem
    raise InvalidInputError("give the data with --manifest or --synth")


def _select_method(args: argparse.Namespace) -> Optional[str]:
    if args.method:
        return args.method
    if args.mode:
        return MODE_METHODS[WeightingMode(args.mode)].value
    method = questionary.select(
        "Select the clustering method:",
        choices=[questionary.Choice(display, value=value) for display, value in METHOD_CHOICES],
        style=questionary.Style(
            [
                ("selected", "fg:green bold"),
                ("pointer", "fg:green bold"),
                ("highlighted", "fg:green"),
                ("answer", "fg:green bold"),
            ]
        ),
    ).ask()
    if method:
        print(f"\nSelected method: {Fore.GREEN + Style.BRIGHT}{method}{Style.RESET_ALL}\n")
    return method


def _base_config(args: argparse.Namespace) -> FitConfig:
    config = load_fit_config(args.config) if getattr(args, "config", None) else FitConfig()
    return config.with_overrides(seed=getattr(args, "seed", None), lambda1=getattr(args, "lambda1", None), l=getattr(args, "l", None))


def cmd_generate(args: argparse.Namespace) -> int:
    spec = load_synth_spec(args.synth) if args.synth else SynthSpec()
    if args.seed is not None:
        spec = validate_model(SynthSpec, {**spec.model_dump(), "seed": args.seed}, "--seed")
    problem, truth = synth_multitask(spec)
    manifest = write_problem(problem, args.out, truth={"spec": spec.model_dump(mode="json"), **truth.to_dict()})
    if not args.quiet:
        print(f"Wrote {problem.m} tasks ({', '.join(str(n) for n in problem.n_per_task)} examples, d={problem.d}, c={problem.c}) to {Fore.CYAN}{manifest}{Style.RESET_ALL}")
    return 0


def cmd_fit(args: argparse.Namespace) -> int:
    problem = _load_problem(args)
    method = _select_method(args)
    if not method:
        print("\n\nInterrupt received. Exiting...")
        return 1
    result = fit_method(problem, method, _base_config(args))
    out = args.out or Path(settings.output_dir) / method
    save_result(result, out)
    if not args.quiet:
        print_fit_result(result, str(out))
    return 0


def _run_plan(plan: BenchPlan, workers: int, quiet: bool):
    per_method = len(plan.grid()) * len(plan.seeds)
    with BenchProgress(totals={m.value: per_method for m in plan.methods}, enabled=not quiet) as progress:
        return bench_run(plan, workers=workers, on_job_done=lambda job, error: progress.update(job.method, error))


def cmd_bench(args: argparse.Namespace) -> int:
    plan = load_plan(args.config)
    if args.out is not None:
        plan = plan.model_copy(update={"output_dir": args.out})
    results = _run_plan(plan, args.workers or settings.workers, args.quiet)
    if not args.quiet:
        print_bench_summary(results.summary)
        print_failures(results.failures)
        print(f"\nResults written to {Fore.CYAN}{plan.output_dir}{Style.RESET_ALL}")
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    predicted = read_assignments(args.assignments)
    if args.manifest is not None:
        truth = load_problem(args.manifest).labels
        if truth is None:
            raise InvalidInputError(f"{args.manifest} has no label files")
    else:
        truth = [read_labels(path) for path in split_list(args.labels)]
    if len(truth) != len(predicted):
        raise InvalidInputError(f"{len(predicted)} assignment files but {len(truth)} label sets")
    reports = [evaluate(y, pred) for y, pred in zip(truth, predicted)]
    print_metric_reports(reports)
    return 0


def cmd_sensitivity(args: argparse.Namespace) -> int:
    l_grid = split_list(args.l_grid) if args.l_grid else list(DEFAULT_L_GRID)
    seeds = split_list(args.seeds) if args.seeds else list(DEFAULT_SEEDS)
    out = args.out or Path(settings.output_dir) / "sensitivity"
    source = {"manifest": args.manifest} if args.manifest is not None else {"synth": load_synth_spec(args.synth) if args.synth else SynthSpec()}
    values = {"methods": SENSITIVITY_METHODS, "lambda1_grid": [0.5], "l_grid": l_grid, "seeds": seeds, "output_dir": out, "fit": _base_config(args), **source}
    plan = validate_model(BenchPlan, values, "sensitivity")
    results = _run_plan(plan, args.workers or settings.workers, args.quiet)
    table = sensitivity_table(results.runs)
    path = write_sensitivity(table, out)
    if not args.quiet:
        print_sensitivity(table)
        print(f"\nResults written to {Fore.CYAN}{path}{Style.RESET_ALL}")
    return 0


COMMANDS = {
    "generate": cmd_generate,
    "fit": cmd_fit,
    "bench": cmd_bench,
    "eval": cmd_eval,
    "sensitivity": cmd_sensitivity,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    init(autoreset=True)

    try:
        problems = settings.validate()
        if problems:
            raise InvalidConfigError("; ".join(problems))
        logging.basicConfig(level=args.log_level or settings.logging_level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")
        return COMMANDS[args.command](args)
    except SpmtcError as e:
        print(f"{Fore.RED}Error: {e}{Style.RESET_ALL}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
