import sys

import pytest

import tables as _tables


@pytest.fixture(scope="session")
def ones_table():
    return _tables.ones()


@pytest.fixture(scope="session")
def tables():
    """Exact tables through 2e4 for the other presets, built on first use."""
    return _tables.table


def pytest_terminal_summary(terminalreporter):
    results = None
    for mod in list(sys.modules.values()):
        results = getattr(mod, "ACCEPTANCE_RESULTS", None)
        if results:
            break
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(results):
        terminalreporter.write_line(results[key])
