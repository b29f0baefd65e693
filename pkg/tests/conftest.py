import contextlib
import random
import sys
from pathlib import Path

import pytest

HERE = Path(__file__).resolve().parent
DATA = HERE / "data"
sys.path.insert(0, str(HERE / "oracle"))

_criteria = []


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def rng():
    return random.Random(20240501)


@pytest.fixture
def criterion():
    """Context manager recording one PASS/FAIL line per acceptance criterion."""
    @contextlib.contextmanager
    def check(number, title):
        info = {}
        try:
            yield info
        except BaseException as exc:
            msg = (str(exc).splitlines() or [""])[0][:160]
            _criteria.append((number, "FAIL", title, f"{type(exc).__name__}: {msg}"))
            raise
        _criteria.append((number, "PASS", title, info.get("detail", "")))
    return check


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number, status, title, detail in sorted(_criteria, key=lambda c: c[0]):
        tr.write_line(f"[{number:>2}] {status}  {title}" + (f"  ({detail})" if detail else ""))
    bad = len(tr.stats.get("failed", [])) + len(tr.stats.get("error", []))
    good = len(tr.stats.get("passed", []))
    status = "PASS" if bad == 0 else "FAIL"
    tr.write_line(f"[10] {status}  test suite green offline  ({good} passed, {bad} failed or errored in this session)")
