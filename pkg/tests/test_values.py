from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from valmult.values import (
    PI,
    SQRT2,
    ComparisonStalled,
    DepthExhausted,
    Value,
    ceil_ratio,
    compare_values,
    depth_limit,
    nth_root_bounds,
    parse_value,
    refine,
    register_generator,
)

mpmath.mp.dps = 80
MP = {"pi": mpmath.pi, "sqrt2": mpmath.sqrt(2)}


def mp_eval(v: Value):
    out = mpmath.mpf(v.rational.numerator) / v.rational.denominator
    for g, c in v.terms:
        out += mpmath.mpf(c.numerator) / c.denominator * MP[g.name]
    return out


def test_compare_examples():
    assert compare_values(2, parse_value("1+pi")) == -1
    assert compare_values(3, parse_value("pi")) == -1
    assert compare_values(5 - parse_value("1+pi"), 0) == 1


def test_refine_pi_hundredth():
    lo, hi = refine(PI, Fraction(1, 100))
    assert (lo, hi) == (Fraction(333, 106), Fraction(22, 7))


def test_refine_past_table_raises():
    with pytest.raises(DepthExhausted):
        refine(PI, Fraction(1, 10**60))


@pytest.mark.parametrize("r", [PI, SQRT2])
def test_every_interval_contains_true_value(r):
    # independent oracle: high-precision constants from mpmath
    x = MP[r.name]
    for d in range(r.max_depth + 1):
        lo, hi = r.interval_at(d)
        assert mpmath.mpf(lo.numerator) / lo.denominator <= x <= mpmath.mpf(hi.numerator) / hi.denominator


@pytest.mark.parametrize("r", [PI, SQRT2])
def test_intervals_nested(r):
    prev = r.interval_at(0)
    for d in range(1, r.max_depth + 1):
        cur = r.interval_at(d)
        assert prev[0] <= cur[0] and cur[1] <= prev[1]
        prev = cur
    assert prev[1] - prev[0] < Fraction(1, 10**50)


def test_parse_and_print():
    assert str(parse_value("1+2*pi - 3/2")) == "-1/2 + 2*pi"
    assert parse_value("4 - sqrt2").coefficient("sqrt2") == -1
    assert parse_value("7/2").as_fraction() == Fraction(7, 2)
    with pytest.raises(ValueError):
        parse_value("")


def test_to_json_shape():
    j = parse_value("1+pi").to_json()
    assert j["coeffs"] == [1, 1]
    assert j["basis"] == ["unit", "pi"]
    assert j["approx"] == "4.141592653590"


def test_ceil_floor():
    assert (4 - Value.generator("pi")).ceil() == 1
    assert Value.generator("pi").floor() == 3
    assert Value.generator("sqrt2", 10).ceil() == 15


def test_stalled_without_independence():
    # same number under two names; the difference is 0 but nothing certifies it
    register_generator("twin_sqrt2", (1,) + (2,) * 40, independent=False)
    d = Value.generator("twin_sqrt2") - Value.generator("sqrt2")
    with pytest.raises(ComparisonStalled):
        compare_values(d, 0)


def test_depth_limit_context():
    x = parse_value("pi") - Fraction(22, 7)
    with depth_limit(0):
        with pytest.raises(ComparisonStalled):
            compare_values(x, 0)
    assert compare_values(x, 0) == -1


coef = st.fractions(min_value=-50, max_value=50, max_denominator=30)
values = st.builds(
    lambda r, a, b: Value.of(r) + Value.generator("pi", a) + Value.generator("sqrt2", b),
    coef,
    coef,
    coef,
)


@given(values, values)
def test_compare_matches_high_precision(u, v):
    diff = mp_eval(u) - mp_eval(v)
    if u == v:
        assert compare_values(u, v) == 0
    else:
        assert compare_values(u, v) == (1 if diff > 0 else -1)


@given(values, values, values)
def test_ordering_is_transitive_and_antisymmetric(u, v, w):
    assert compare_values(u, v) == -compare_values(v, u)
    if compare_values(u, v) <= 0 and compare_values(v, w) <= 0:
        assert compare_values(u, w) <= 0


@given(values, st.fractions(min_value=Fraction(1, 10), max_value=20, max_denominator=20))
def test_ceil_ratio_certified(x, a):
    a = Value.of(a) + Value.generator("pi", Fraction(1, 7))
    k = ceil_ratio(x, a)
    assert compare_values(a * k, x) >= 0
    assert compare_values(a * (k - 1), x) < 0
    assert k == int(mpmath.ceil(mp_eval(x) / mp_eval(a)))


@given(st.fractions(min_value=0, max_value=1000, max_denominator=1000), st.integers(2, 4))
def test_nth_root_bounds(x, n):
    lo, hi = nth_root_bounds(x, n, 20)
    assert lo**n <= x <= hi**n
    assert hi - lo <= Fraction(1, 10**20)


@given(values, values)
def test_arithmetic_matches_high_precision(u, v):
    assert abs(mp_eval(u + v) - (mp_eval(u) + mp_eval(v))) < mpmath.mpf(10) ** -60
    assert abs(mp_eval(u - v) - (mp_eval(u) - mp_eval(v))) < mpmath.mpf(10) ** -60
    assert abs(mp_eval(u * 3) - 3 * mp_eval(u)) < mpmath.mpf(10) ** -60
