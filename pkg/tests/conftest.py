from pathlib import Path

import pytest
from hypothesis import settings

from ursc.codes.matrix import read_code

FIXTURES = Path(__file__).parent / "fixtures"

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture
def t16_pass():
    return read_code(FIXTURES / "t16_pass.ursc")


@pytest.fixture
def t16_fail():
    return read_code(FIXTURES / "t16_fail.ursc")


@pytest.fixture(scope="session")
def beep4():
    return read_code(FIXTURES / "beep4.ursc")


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
