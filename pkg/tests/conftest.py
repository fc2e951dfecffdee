import numpy as np
import pytest

from handwriting_dmp import letters

ACCEPTANCE_RESULTS = []


@pytest.fixture(scope="session")
def bundled():
    return letters.bundled_letters()


@pytest.fixture(scope="session")
def letter_a(bundled):
    return bundled["a"]


@pytest.fixture
def rng():
    return np.random.default_rng(20240521)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(line)
