import random

import pytest
from hypothesis import HealthCheck, settings, strategies as st
from fractions import Fraction

settings.register_profile(
    "repo",
    derandomize=True,
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

small_ints = st.integers(min_value=-20, max_value=20)
rationals = st.builds(Fraction, small_ints, st.integers(min_value=1, max_value=20))
nonzero_rationals = rationals.filter(bool)
seeds = st.integers(min_value=0, max_value=2**32 - 1)


@pytest.fixture
def rng():
    return random.Random(20240601)


_CRITERIA: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def criterion():
    """Record an acceptance verdict, then assert it."""
    def record(number: int, ok: bool, detail: str):
        _CRITERIA[number] = (bool(ok), detail)
        assert ok, f"criterion {number}: {detail}"
    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in range(1, 15):
        if number not in _CRITERIA:
            terminalreporter.write_line(f"criterion {number:2d}: NOT RUN  deselected, or raised before a verdict")
            continue
        ok, detail = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
