import sys
from pathlib import Path

import pytest

from circus.formats import parse_file

FIXTURES = Path(__file__).parent / "fixtures"


def load(name):
    return parse_file(FIXTURES / name).payload


@pytest.fixture
def fixture_path():
    return lambda name: str(FIXTURES / name)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
