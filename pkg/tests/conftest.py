import pytest

ACCEPTANCE_LINES: dict[int, str] = {}


def record_criterion(number: int, passed: bool, text: str) -> None:
    line = f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {text}"
    ACCEPTANCE_LINES[number] = line
    print(line)


@pytest.fixture
def criterion():
    return record_criterion


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
