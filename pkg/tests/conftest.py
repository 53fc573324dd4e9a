import random

import pytest

from tedkit.tree import parse_tree


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def fig6():
    return parse_tree("{c{a}{b}}"), parse_tree("{g{d}{e}{f}}")


_CRITERIA: list[str] = []


@pytest.fixture
def criterion(capsys):
    """Record one pass/fail line for an acceptance criterion and assert it."""

    def record(number: int, ok: bool, detail: str) -> None:
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        _CRITERIA.append(line)
        with capsys.disabled():
            print("\n" + line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_CRITERIA):
            terminalreporter.write_line(line)
