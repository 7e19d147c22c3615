import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cm2.arith import make_order  # noqa: E402
from cm2.endo import HermitianForm  # noqa: E402

# filled by test_acceptance, printed at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)


def form(d, a, c, b1, b2):
    return HermitianForm(make_order(d), a, c, b1, b2)


@pytest.fixture
def O163():
    return make_order(163)


@pytest.fixture
def P163():
    # [6, 7, w]
    return form(163, 6, 7, 0, 1)
