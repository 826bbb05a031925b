import numpy as np
import pandas as pd
import pytest

from src.data.models import SynthSpec
from src.data.results import read_assignments, read_run_header, save_result
from src.data.synthetic import synth_multitask
from src.mtc.driver import spmtc_fit
from src.mtc.errors import DataIOError
from src.mtc.types import FitConfig


@pytest.fixture()
def fitted():
    problem, _ = synth_multitask(SynthSpec(m=2, d=6, c=2, n=20, seed=1))
    return spmtc_fit(problem, FitConfig(seed=13, inner_max_iters=5, warm_start_iters=2))


def test_saved_assignments_read_back(tmp_path, fitted):
    save_result(fitted, tmp_path / "run")
    for saved, original in zip(read_assignments(tmp_path / "run"), fitted.assignments):
        np.testing.assert_array_equal(saved, original)


def test_trace_file_has_one_row_per_sweep(tmp_path, fitted):
    save_result(fitted, tmp_path / "run")
    frame = pd.read_csv(tmp_path / "run" / "trace.csv", float_precision="round_trip")
    assert len(frame) == len(fitted.trace)
    assert list(frame.columns[:6]) == ["outer_round", "inner_iter", "within", "cross", "total", "reg"]
    np.testing.assert_array_equal(frame["total"].to_numpy(), fitted.trace.totals())


def test_run_header(tmp_path, fitted):
    save_result(fitted, tmp_path / "run")
    header = read_run_header(tmp_path / "run")
    assert header["method"] == "spmtc-s"
    assert header["seed"] == "13"
    assert header["config.mode"] == "soft"
    assert float(header["final_objective"]) == fitted.final_objective
    assert "task1.nmi" in header


def test_missing_result_directory(tmp_path):
    with pytest.raises(DataIOError):
        read_assignments(tmp_path / "nowhere")
    with pytest.raises(DataIOError):
        read_run_header(tmp_path / "nowhere")
