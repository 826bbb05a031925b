"""Reading and writing task matrices, label files and problem manifests.

Dense files hold a "d n" header followed by d rows of n values; sparse-triplet
files hold a "d n nnz" header followed by nnz "row col value" lines, 0-indexed.
Manifests, like every other settings file of the toolkit, are plain
`key = value` text.
"""

from __future__ import annotations

import json
import logging
import re
from pathlib import Path
from typing import Any, Dict, Mapping, Sequence, Type, TypeVar

import numpy as np
from dotenv import dotenv_values
from pydantic import BaseModel, ValidationError
from scipy import sparse

from src.mtc.errors import DataFormatError, DataIOError, InvalidConfigError
from src.mtc.types import MultiTaskProblem

from .models import MatrixFormat, ProblemManifest

logger = logging.getLogger(__name__)

ModelT = TypeVar("ModelT", bound=BaseModel)

MANIFEST_FILE = "manifest.env"
TRUTH_FILE = "truth.json"
_TASK_KEY = re.compile(r"^task\.(\d+)\.(data|labels|format)$")


def read_key_values(path: str | Path) -> Dict[str, str]:
    """Parse a `key = value` file; `#` starts a comment."""
    path = Path(path)
    if not path.is_file():
        raise DataIOError(f"settings file not found: {path}")
    values = dotenv_values(path)
    return {key: value for key, value in values.items() if value is not None}


def split_list(value: str | Sequence[Any]) -> list[str]:
    """`a,b,c` -> ["a", "b", "c"]; sequences pass through."""
    if isinstance(value, str):
        return [item.strip() for item in value.split(",") if item.strip()]
    return [str(item) for item in value]


def validate_model(model: Type[ModelT], values: Mapping[str, Any], source: str | Path) -> ModelT:
    try:
        return model(**values)
    except ValidationError as e:
        raise InvalidConfigError(f"{source}: {e}") from e


def _read_lines(path: Path) -> list[str]:
    try:
        with open(path) as fh:
            return [line for line in (raw.strip() for raw in fh) if line]
    except OSError as e:
        raise DataIOError(f"cannot read {path}: {e}") from e


def _header(path: Path, line: str, width: int) -> list[int]:
    fields = line.split()
    try:
        values = [int(value) for value in fields]
    except ValueError as e:
        raise DataFormatError(f"{path}: malformed header {line!r}") from e
    if len(values) != width or any(value < 0 for value in values):
        raise DataFormatError(f"{path}: header must hold {width} nonnegative integers, got {line!r}")
    return values


def read_dense(path: str | Path) -> np.ndarray:
    path = Path(path)
    lines = _read_lines(path)
    if not lines:
        raise DataFormatError(f"{path}: empty matrix file")
    d, n = _header(path, lines[0], 2)
    if d == 0 or n == 0:
        return np.zeros((d, n))
    try:
        matrix = np.loadtxt(path, dtype=float, skiprows=1, ndmin=2)
    except ValueError as e:
        raise DataFormatError(f"{path}: rows are not {n} numeric values each: {e}") from e
    if matrix.shape != (d, n):
        raise DataFormatError(f"{path}: header declares {d}x{n}, found {matrix.shape[0]}x{matrix.shape[1]}")
    return matrix


def read_sparse_triplet(path: str | Path) -> np.ndarray:
    path = Path(path)
    lines = _read_lines(path)
    if not lines:
        raise DataFormatError(f"{path}: empty matrix file")
    d, n, nnz = _header(path, lines[0], 3)
    entries = lines[1:]
    if len(entries) != nnz:
        raise DataFormatError(f"{path}: header declares {nnz} entries, found {len(entries)}")
    rows = np.empty(nnz, dtype=np.int64)
    cols = np.empty(nnz, dtype=np.int64)
    values = np.empty(nnz, dtype=float)
    for i, entry in enumerate(entries):
        fields = entry.split()
        if len(fields) != 3:
            raise DataFormatError(f"{path}: entry {i + 1} must be 'row col value', got {entry!r}")
        try:
            rows[i], cols[i], values[i] = int(fields[0]), int(fields[1]), float(fields[2])
        except ValueError as e:
            raise DataFormatError(f"{path}: entry {i + 1} is malformed: {entry!r}") from e
    if nnz and (rows.min() < 0 or rows.max() >= d or cols.min() < 0 or cols.max() >= n):
        raise DataFormatError(f"{path}: triplet index outside the declared {d}x{n} shape")
    # duplicate (row, col) pairs are summed
    return sparse.coo_matrix((values, (rows, cols)), shape=(d, n)).toarray()


def read_labels(path: str | Path) -> np.ndarray:
    path = Path(path)
    try:
        return np.array([int(line) for line in _read_lines(path)], dtype=np.int64)
    except ValueError as e:
        raise DataFormatError(f"{path}: labels must be one integer per line") from e


def read_matrix(path: str | Path, fmt: MatrixFormat | str = MatrixFormat.DENSE) -> np.ndarray:
    if MatrixFormat(fmt) is MatrixFormat.SPARSE_TRIPLET:
        return read_sparse_triplet(path)
    return read_dense(path)


def _write_text(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as e:
        raise DataIOError(f"cannot write {path}: {e}") from e


def _fmt(value: float) -> str:
    return "%.17g" % value


def write_dense(path: str | Path, X: np.ndarray) -> None:
    path = Path(path)
    X = np.atleast_2d(np.asarray(X, dtype=float))
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        np.savetxt(path, X, fmt="%.17g", header=f"{X.shape[0]} {X.shape[1]}", comments="")
    except OSError as e:
        raise DataIOError(f"cannot write {path}: {e}") from e


def write_sparse_triplet(path: str | Path, X: np.ndarray) -> None:
    coo = sparse.coo_matrix(np.atleast_2d(np.asarray(X, dtype=float)))
    order = np.lexsort((coo.col, coo.row))
    lines = [f"{coo.shape[0]} {coo.shape[1]} {coo.nnz}"]
    lines += [f"{coo.row[i]} {coo.col[i]} {_fmt(coo.data[i])}" for i in order]
    _write_text(Path(path), "\n".join(lines) + "\n")


def write_labels(path: str | Path, labels: Sequence[int] | np.ndarray) -> None:
    _write_text(Path(path), "".join(f"{int(label)}\n" for label in np.asarray(labels).ravel()))


def _manifest_values(values: Mapping[str, str], base_dir: Path) -> Dict[str, Any]:
    tasks: Dict[int, Dict[str, Any]] = {}
    fields: Dict[str, Any] = {}
    for key, value in values.items():
        match = _TASK_KEY.match(key)
        if match:
            index, name = int(match.group(1)), match.group(2)
            if name in ("data", "labels"):
                value = base_dir / value
            tasks.setdefault(index, {})[name] = value
        else:
            fields[key] = value
    fields["tasks"] = [tasks[index] for index in sorted(tasks)]
    return fields


def load_manifest(path: str | Path) -> ProblemManifest:
    """Read a manifest; task file paths are resolved against the manifest's directory."""
    path = Path(path)
    values = read_key_values(path)
    return validate_model(ProblemManifest, _manifest_values(values, path.parent), path)


def _normalize_columns(X: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(X, axis=0)
    scale = np.where(norms > 0, norms, 1.0)
    return X / scale


def load_problem(manifest: ProblemManifest | str | Path) -> MultiTaskProblem:
    if not isinstance(manifest, ProblemManifest):
        manifest = load_manifest(manifest)

    tasks = []
    labels = []
    for k, entry in enumerate(manifest.tasks):
        for file in (entry.data, entry.labels):
            if file is not None and not Path(file).is_file():
                raise DataIOError(f"task {k}: file not found: {file}")
        X = read_matrix(entry.data, entry.format)
        if X.shape[0] != manifest.d:
            raise DataFormatError(f"{entry.data}: has {X.shape[0]} features, manifest declares d={manifest.d}")
        if manifest.normalize:
            X = _normalize_columns(X)
        tasks.append(X)
        if entry.labels is not None:
            y = read_labels(entry.labels)
            if y.size != X.shape[1]:
                raise DataFormatError(f"{entry.labels}: {y.size} labels for {X.shape[1]} examples")
            labels.append(y)

    if labels and len(labels) != len(tasks):
        logger.warning("labels given for only %d of %d tasks; ignoring them", len(labels), len(tasks))
    problem = MultiTaskProblem(tasks=tasks, c=manifest.c, labels=labels if len(labels) == len(tasks) else None)
    logger.info("loaded %d tasks, d=%d, n=%s", problem.m, problem.d, problem.n_per_task)
    return problem


def write_problem(problem: MultiTaskProblem, directory: str | Path, truth: Mapping[str, Any] | None = None) -> Path:
    """Write dense task files, label files and a manifest; returns the manifest path."""
    directory = Path(directory)
    lines = [f"d = {problem.d}", f"c = {problem.c}", "normalize = false"]
    for k, X in enumerate(problem.tasks):
        write_dense(directory / f"task{k}.txt", X)
        lines += [f"task.{k}.data = task{k}.txt", f"task.{k}.format = {MatrixFormat.DENSE.value}"]
        if problem.has_labels:
            write_labels(directory / f"labels{k}.txt", problem.labels[k])
            lines.append(f"task.{k}.labels = labels{k}.txt")
    manifest_path = directory / MANIFEST_FILE
    _write_text(manifest_path, "\n".join(lines) + "\n")
    if truth is not None:
        _write_text(directory / TRUTH_FILE, json.dumps(truth, indent=2, sort_keys=True) + "\n")
    return manifest_path
