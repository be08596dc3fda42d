import numpy as np
import pytest

from galilei_lab.config import RunConfig
from galilei_lab.lattice import PhysicalParams, SpinSpec, make_grid
from galilei_lab.sampling import random_admissible_state


@pytest.fixture(scope="session")
def cfg():
    return RunConfig()


@pytest.fixture(scope="session")
def params():
    return PhysicalParams()


@pytest.fixture(scope="session")
def line():
    return make_grid(1, 512, 80.0)


@pytest.fixture(scope="session")
def cube():
    return make_grid(3, 32, 12.0)


@pytest.fixture(scope="session")
def half():
    return SpinSpec(0.5)


@pytest.fixture(scope="session")
def states(cfg):
    return [random_admissible_state(cfg, 11, k) for k in range(8)]


@pytest.fixture(scope="session")
def cube_states(cfg):
    return [random_admissible_state(cfg, 11, k, dims=3) for k in range(2)]


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
