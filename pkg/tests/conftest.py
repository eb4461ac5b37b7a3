import itertools

import pytest
from hypothesis import settings

from lzgame import Word

settings.register_profile("default", max_examples=150, deadline=None)
settings.load_profile("default")


def w(text: str, A: int = 2) -> Word:
    """Word over ``{0..A-1}`` written with digits 0..A-1."""
    return Word.parse(text, A, base=0)


def binary_words(max_len: int, min_len: int = 0):
    for n in range(min_len, max_len + 1):
        for sym in itertools.product((0, 1), repeat=n):
            yield Word(sym, 2)


@pytest.fixture
def worked_word():
    return w("1000011101011")


ACCEPTANCE: list[tuple[int, str, bool, str]] = []


@pytest.fixture
def criterion():
    """Record one acceptance line: ``criterion(number, title, ok, detail)``."""

    def record(number: int, title: str, ok: bool, detail: str = "") -> bool:
        ACCEPTANCE.append((number, title, bool(ok), detail))
        print(f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {title} {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, detail in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {number:2d}  {title}  {detail}")
