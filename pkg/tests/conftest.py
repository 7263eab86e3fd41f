import numpy as np
import pytest

from segcap.capacity import SegmentProblem
from segcap.oracles import chebyshev_preimage_set


@pytest.fixture(scope="session")
def chebyshev_problems():
    return {n: SegmentProblem(chebyshev_preimage_set(n)) for n in (2, 3, 4)}


@pytest.fixture(scope="session")
def e2(chebyshev_problems):
    return chebyshev_problems[2]


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance") or __import__("sys").modules.get("tests.test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for k in sorted(lines):
            terminalreporter.write_line(lines[k])
