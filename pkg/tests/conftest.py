from fractions import Fraction

import pytest
from hypothesis import strategies as st

from parabola_lattice.counting import CountingInstance, Parabola


def rats(lo=-10, hi=10, max_den=100):
    return st.builds(
        lambda n, d: Fraction(n, d),
        st.integers(lo * max_den, hi * max_den),
        st.integers(1, max_den),
    ).filter(lambda q: lo <= q <= hi)


@st.composite
def instances(draw, a_max=200, b_max=300):
    alpha = draw(rats().filter(lambda q: q != 0))
    beta, gamma = draw(rats()), draw(rats())
    a = draw(rats(1, a_max, 50).filter(lambda q: q > 1))
    b = draw(rats(1, b_max, 50).filter(lambda q: q > 1))
    return CountingInstance(Parabola(alpha, beta, gamma), a, b)


@pytest.fixture
def half():
    return Fraction(1, 2)


ACCEPTANCE: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def record():
    """Store one pass/fail line per acceptance criterion for the terminal summary."""
    def _record(key: str, ok: bool, detail: str) -> None:
        ACCEPTANCE[key] = (bool(ok), detail)
        print(f"[{'PASS' if ok else 'FAIL'}] {key}: {detail}")
    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: (int(k[1:].rstrip("ab")), k)):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {key}  {detail}")
