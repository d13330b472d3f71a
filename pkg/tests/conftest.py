import numpy as np
import pytest

from scaled_flp import LocationProfile, PiecewiseLinear

ACCEPTANCE_LINES = []


@pytest.fixture
def fig1_q():
    return PiecewiseLinear.from_segments([(0.0, 0.5, -3.0, 2.0), (0.5, 1.0, 3.0, -1.0)])


@pytest.fixture
def fig1_x():
    return LocationProfile([0.0, 0.0, 0.6])


@pytest.fixture
def median_q():
    return PiecewiseLinear.from_segments([(0.0, 0.5, -10.0, 6.0), (0.5, 1.0, 10.0, -4.0)])


@pytest.fixture
def rng():
    return np.random.default_rng(0)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
