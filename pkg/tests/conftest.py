import json
from pathlib import Path

import pytest

ORACLES = json.loads((Path(__file__).parent / "data" / "oracles.json").read_text())

# criterion number -> "PASS/FAIL ..." line, filled by test_acceptance.py
REPORT = {}


@pytest.fixture(scope="session")
def oracles():
    return ORACLES


@pytest.fixture(scope="session")
def report():
    return REPORT


def pytest_terminal_summary(terminalreporter):
    if not REPORT:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(REPORT):
        terminalreporter.write_line(REPORT[num])
