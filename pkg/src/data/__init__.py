"""Problem files, result files and synthetic problem generation."""

from .models import MatrixFormat, ProblemManifest, SynthSpec, TaskEntry
from .loaders import (
    load_manifest,
    load_problem,
    read_dense,
    read_key_values,
    read_labels,
    read_matrix,
    read_sparse_triplet,
    write_dense,
    write_labels,
    write_problem,
    write_sparse_triplet,
)
from .results import read_assignments, read_run_header, save_result
from .synthetic import GroundTruth, synth_multitask

__all__ = [
    "MatrixFormat",
    "ProblemManifest",
    "SynthSpec",
    "TaskEntry",
    "load_manifest",
    "load_problem",
    "read_dense",
    "read_key_values",
    "read_labels",
    "read_matrix",
    "read_sparse_triplet",
    "write_dense",
    "write_labels",
    "write_problem",
    "write_sparse_triplet",
    "read_assignments",
    "read_run_header",
    "save_result",
    "GroundTruth",
    "synth_multitask",
]
