import numpy as np
import pytest

from sharenf.compression import dft_combiner_bank
from sharenf.geometry import SPEED_OF_LIGHT, ArrayConfig

LAMBDA = SPEED_OF_LIGHT / 60.48e9


@pytest.fixture
def cfg():
    return ArrayConfig.default()


@pytest.fixture
def bank():
    return dft_combiner_bank(16, 16, 4)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
