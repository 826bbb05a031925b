import numpy as np
import pytest

from src.data.models import SynthSpec
from src.data.synthetic import synth_multitask
from src.mtc.types import ModelState, MultiTaskProblem
from tests.mtc.factories import random_problem, random_state


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture()
def small_problem(rng) -> MultiTaskProblem:
    return random_problem(rng)


@pytest.fixture()
def small_state(rng, small_problem) -> ModelState:
    return random_state(rng, small_problem)


@pytest.fixture()
def planted_problem() -> MultiTaskProblem:
    problem, _ = synth_multitask(SynthSpec(m=2, d=8, c=3, l_true=2, n=45, separation=8.0, noise_sd=0.5, seed=7))
    return problem
