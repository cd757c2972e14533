from __future__ import annotations

from pathlib import Path

import pytest

GOLDEN = Path(__file__).parent / "golden"

# worked example -> subcommand producing its golden report
GOLDEN_COMMANDS = {
    "hyperelliptic_4": "analyze-cover",
    "fiber_01x01": "fiber-product",
    "fiber_01x0": "fiber-product",
    "lnm": "ends",
    "sin_product": "weval",
    "isom_reflection": "isom",
}

_acceptance_lines: list[str] = []


@pytest.fixture
def acceptance_log():
    """Append a criterion result line; all lines are echoed in the terminal summary."""

    def log(number: int, ok: bool, text: str) -> None:
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'} {text}"
        print(line)
        _acceptance_lines.append(line)

    return log


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_acceptance_lines):
            terminalreporter.write_line(line)
