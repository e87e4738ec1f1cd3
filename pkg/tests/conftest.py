import sys

import pytest

from fixcofe.instances import natfun_from_table
from fixcofe.operators import nested_zero_operator

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))


def nested_zero_oracle(g, x):
    """Direct evaluation of one step of the nested-zero recurrence."""
    return 0 if x == 0 else g(g(x - 1))


@pytest.fixture
def T():
    return nested_zero_operator()


@pytest.fixture
def table_pair():
    return (natfun_from_table({0: 5, 5: 1}, 0), natfun_from_table({0: 5, 5: 2}, 0))


_acceptance: list[tuple[str, str]] = []


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and (report.when == "call" or report.failed):
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
