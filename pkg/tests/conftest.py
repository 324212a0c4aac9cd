import time

import pytest

from qdot_numerov import RadialProblem, scan_spectrum
from qdot_numerov.reproduce import reproduce_table1, reproduce_table2

ACCEPTANCE_LINES = []
TIMINGS = {}


def record(criterion, passed, detail):
    ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] {criterion}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def table1():
    t0 = time.perf_counter()
    out = reproduce_table1()
    TIMINGS["table1"] = time.perf_counter() - t0
    return out


@pytest.fixture(scope="session")
def table2():
    t0 = time.perf_counter()
    out = reproduce_table2()
    TIMINGS["table2"] = time.perf_counter() - t0
    return out


@pytest.fixture(scope="session")
def table2_fine():
    return reproduce_table2(step_divisor=2)


@pytest.fixture(scope="session")
def oscillator_ladders():
    """First six Coulomb-free states per ell at omega = 0.01."""
    out = {}
    for ell in (0, 1, 2):
        top = 2 * (2 * 5 + ell + 1) * 0.01 + 0.02
        out[ell] = scan_spectrum(RadialProblem(0.01, ell, coulomb_enabled=False), 0.001, top)[:6]
    return out
