from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from parabola_lattice.ratmath import (
    as_rat, dist_nearest_int, floor, format_rat, frac, parse_rat, psi,
)

from conftest import rats


@pytest.mark.parametrize("x, expected", [(F(7, 2), 3), (F(-1, 2), -1), (F(4), 4)])
def test_floor(x, expected):
    assert floor(x) == expected


@pytest.mark.parametrize("x, expected", [(F(7, 2), F(1, 2)), (F(-1, 3), F(2, 3)), (F(5), 0)])
def test_frac(x, expected):
    assert frac(x) == expected


@pytest.mark.parametrize("x, expected", [(F(7, 2), 0), (F(5), F(-1, 2)), (F(1, 4), F(-1, 4))])
def test_psi(x, expected):
    assert psi(x) == expected


@pytest.mark.parametrize("x, expected", [(F(7, 3), F(1, 3)), (F(1, 2), F(1, 2)), (F(6), 0)])
def test_dist_nearest_int(x, expected):
    assert dist_nearest_int(x) == expected


def test_canonical_form():
    x = F(6, -4)
    assert (x.numerator, x.denominator) == (-3, 2)
    assert F(2, 4) == F(1, 2)


@pytest.mark.parametrize("text, value", [
    ("1/4", F(1, 4)), ("0.25", F(1, 4)), ("-6/4", F(-3, 2)), ("12", F(12)), (" 3/1 ", F(3)),
])
def test_parse(text, value):
    assert parse_rat(text) == value


@pytest.mark.parametrize("bad", ["", "abc", "1/0", "1//2"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        parse_rat(bad)


def test_format_roundtrip():
    assert format_rat(F(3)) == "3"
    assert format_rat(F(-3, 7)) == "-3/7"
    assert parse_rat(format_rat(F(-22, 7))) == F(-22, 7)


def test_as_rat_rejects_float():
    with pytest.raises(TypeError):
        as_rat(0.5)
    assert as_rat("0.5") == F(1, 2)


@given(rats(-1000, 1000, 1000), st.integers(-10**6, 10**6))
def test_integer_shift_invariance(x, k):
    assert floor(x + k) == floor(x) + k
    assert frac(x + k) == frac(x)
    assert psi(x + k) == psi(x)
    assert dist_nearest_int(x + k) == dist_nearest_int(x)


@given(rats(-1000, 1000, 1000))
def test_identities(x):
    assert floor(x) + frac(x) == x
    assert psi(x) == x - floor(x) - F(1, 2)
    assert dist_nearest_int(x) == dist_nearest_int(-x)
    assert 0 <= frac(x) < 1
    assert F(-1, 2) <= psi(x) < F(1, 2)
    assert 0 <= dist_nearest_int(x) <= F(1, 2)
    assert dist_nearest_int(x) == min(abs(x - n) for n in (floor(x), floor(x) + 1))
