import pytest

from pifrac.table import fixture_table


def pytest_addoption(parser):
    parser.addoption(
        "--run-fulltable",
        action="store_true",
        default=False,
        help="run the hours-long 215,829-fraction table build",
    )


def pytest_configure(config):
    config._acceptance_lines = {}


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-fulltable"):
        return
    skip = pytest.mark.skip(reason="needs --run-fulltable")
    for item in items:
        if "fulltable" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config._acceptance_lines
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(lines):
        terminalreporter.write_line(lines[key])


@pytest.fixture(scope="session")
def table():
    return fixture_table()


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line for an acceptance criterion, then assert it."""

    def report(number, ok, detail):
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        request.config._acceptance_lines[(number, request.node.name)] = line
        print(line)
        assert ok, line

    return report
