from __future__ import annotations

import logging
import re
from pathlib import Path
from typing import Dict, List

import numpy as np

from src.mtc.errors import DataFormatError, DataIOError
from src.mtc.types import RunResult

from .loaders import read_labels, write_labels

logger = logging.getLogger(__name__)

TRACE_FILE = "trace.csv"
HEADER_FILE = "run_header.txt"
_ASSIGNMENT_FILE = re.compile(r"^assignments_task(\d+)\.txt$")


def _header_lines(result: RunResult) -> List[str]:
    lines = [
        f"method: {result.method}",
        f"seed: {result.seed}",
        f"wall_time: {result.wall_time:.6f}",
        f"outer_rounds: {result.outer_rounds}",
        f"final_objective: {result.final_objective!r}",
    ]
    for key, value in result.config.model_dump(mode="json").items():
        lines.append(f"config.{key}: {value}")
    for k, report in enumerate(result.metrics or []):
        lines.append(f"task{k}.acc: {report.acc!r}")
        lines.append(f"task{k}.nmi: {report.nmi!r}")
    return lines


def save_result(result: RunResult, path: str | Path) -> Path:
    """Write assignments_task<k>.txt, trace.csv and run_header.txt under `path`."""
    path = Path(path)
    try:
        path.mkdir(parents=True, exist_ok=True)
        for k, assignments in enumerate(result.assignments):
            write_labels(path / f"assignments_task{k}.txt", assignments)
        result.trace.to_frame().to_csv(path / TRACE_FILE, index=False, float_format="%.17g", lineterminator="\n")
        (path / HEADER_FILE).write_text("\n".join(_header_lines(result)) + "\n")
    except OSError as e:
        raise DataIOError(f"cannot write results to {path}: {e}") from e
    logger.info("saved %s result to %s", result.method, path)
    return path


def read_assignments(path: str | Path) -> List[np.ndarray]:
    path = Path(path)
    if not path.is_dir():
        raise DataIOError(f"result directory not found: {path}")
    files: Dict[int, Path] = {}
    for file in path.iterdir():
        match = _ASSIGNMENT_FILE.match(file.name)
        if match:
            files[int(match.group(1))] = file
    if sorted(files) != list(range(len(files))):
        raise DataFormatError(f"{path}: assignment files are not numbered 0..{len(files) - 1}")
    return [read_labels(files[k]) for k in range(len(files))]


def read_run_header(path: str | Path) -> Dict[str, str]:
    """Parse a run header; `path` may be the header itself or its result directory."""
    path = Path(path)
    if path.is_dir():
        path = path / HEADER_FILE
    try:
        text = path.read_text()
    except OSError as e:
        raise DataIOError(f"cannot read {path}: {e}") from e
    header: Dict[str, str] = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise DataFormatError(f"{path}: expected 'key: value', got {line!r}")
        header[key.strip()] = value.strip()
    return header
