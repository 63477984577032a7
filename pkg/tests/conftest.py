import numpy as np
import pytest

from coupled_tbp import SystemParams


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def default_params():
    return SystemParams()


#: one verdict line per acceptance criterion, filled by test_acceptance.py
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
