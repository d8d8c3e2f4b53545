import numpy as np
import pytest


@pytest.fixture
def rng(request):
    # one stream per test, stable across runs
    seed = sum(map(ord, request.node.name))
    return np.random.default_rng(seed)


def pytest_terminal_summary(terminalreporter):
    from acceptance_report import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])
