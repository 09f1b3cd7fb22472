import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

ROOT = Path(__file__).resolve().parent.parent
PRESENTATIONS = ROOT / "presentations"

# acceptance lines, printed again in the terminal summary so they survive capture
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def pres_dir():
    return PRESENTATIONS


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
