import numpy as np
import pytest

from se3ad import scalars as sc
from se3ad.bench import BenchConfig, generate_problem

BACKEND_NAMES = sorted(sc.BACKENDS)

# acceptance results collected by test_acceptance.py, printed at the end
ACCEPTANCE_LINES = {}


@pytest.fixture(params=BACKEND_NAMES)
def backend(request):
    return request.param


@pytest.fixture(params=BACKEND_NAMES)
def impl(request):
    return sc.BACKENDS[request.param]


@pytest.fixture
def acceptance():
    """Record and print one pass/fail line for an acceptance criterion."""

    def record(number, title, passed, detail):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {title} ({detail})"
        ACCEPTANCE_LINES[number] = line
        print(line)
        return passed

    return record


@pytest.fixture(scope="session")
def bench_problem():
    return generate_problem(BenchConfig())


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
