import pytest

_acceptance_lines: list[str] = []


@pytest.fixture
def criterion():
    """Record a one-line PASS/FAIL verdict for an acceptance criterion."""

    def record(number: int, name: str, passed: bool, detail: str) -> None:
        line = f"criterion {number:2d} [{'PASS' if passed else 'FAIL'}] {name}: {detail}"
        _acceptance_lines.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_acceptance_lines):
            terminalreporter.write_line(line)
