import numpy as np
import pytest

from gptshape import conformal

# one line per acceptance criterion, echoed in the terminal summary
CRITERIA_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if CRITERIA_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(CRITERIA_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def frames():
    """Boundary frames cached by (shape name, n)."""
    cache = {}

    def get(name, n=1024, **params):
        key = (name, n, tuple(sorted(params.items())))
        if key not in cache:
            cache[key] = conformal.boundary_frame(conformal.catalog(name, **params), n)
        return cache[key]

    return get


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)
