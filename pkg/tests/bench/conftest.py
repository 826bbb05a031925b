import pytest

from src.bench.plan import BenchPlan
from src.data.models import SynthSpec
from src.mtc.types import FitConfig

SMALL_SYNTH = SynthSpec(m=2, d=6, c=2, l_true=2, n=16, separation=6.0, noise_sd=0.5, seed=3)
SMALL_FIT = FitConfig(inner_max_iters=4, warm_start_iters=2)


@pytest.fixture()
def make_plan(tmp_path):
    """BenchPlan over a small planted problem writing under tmp_path."""

    def _make(**overrides) -> BenchPlan:
        values = {
            "synth": SMALL_SYNTH,
            "methods": ["km", "all-km"],
            "lambda1_grid": [0.5],
            "l_grid": [2],
            "seeds": [0, 1],
            "output_dir": tmp_path / "bench",
            "fit": SMALL_FIT,
        }
        values.update(overrides)
        return BenchPlan(**values)

    return _make


@pytest.fixture()
def synth_file(tmp_path):
    path = tmp_path / "planted.env"
    path.write_text("m = 2\nd = 6\nc = 2\nn = 16\nseparation = 6.0\nnoise_sd = 0.5\nseed = 3\n")
    return path
