from fractions import Fraction
from math import isqrt, log

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fewdist.intervals import (
    IntervalValue,
    floor_rational_power,
    iroot,
    log_interval,
    power_bounds,
    root_interval,
    sqrt_interval,
)


@given(st.integers(0, 10 ** 40), st.integers(1, 9))
def test_iroot_is_floor(n, k):
    r = iroot(n, k)
    assert r ** k <= n < (r + 1) ** k


def test_iroot_small():
    assert iroot(0, 3) == 0 and iroot(1, 5) == 1 and iroot(27, 3) == 3 and iroot(26, 3) == 2
    assert iroot(10 ** 12, 2) == isqrt(10 ** 12)
    with pytest.raises(ValueError):
        iroot(-1, 2)


def test_floor_rational_power():
    assert floor_rational_power(16, Fraction(3, 4)) == 8
    assert floor_rational_power(64, Fraction(5, 6)) == 32
    assert floor_rational_power(10, 0) == 1


@given(st.fractions(min_value=0, max_value=10 ** 6, max_denominator=50),
       st.fractions(min_value=0, max_value=4, max_denominator=12),
       st.sampled_from([16, 64, 200]))
def test_power_bounds_enclose(x, e, bits):
    lo, hi = power_bounds(x, e, bits)
    assert lo <= hi
    # compare via integer powers: lo^q <= x^p <= hi^q
    p, q = e.numerator, e.denominator
    assert lo ** q <= x ** p <= hi ** q


def test_power_bounds_exact_cases():
    assert power_bounds(Fraction(9, 4), Fraction(1, 2), 64) == (Fraction(3, 2), Fraction(3, 2))
    assert power_bounds(Fraction(8), Fraction(2, 3), 64) == (4, 4)
    assert power_bounds(0, Fraction(1, 2), 64) == (0, 0)


@pytest.mark.parametrize("bits", [64, 128, 256, 1024])
def test_sqrt2_width_shrinks(bits):
    iv = sqrt_interval(2, bits)
    assert iv.lower ** 2 < 2 < iv.upper ** 2
    assert iv.width < Fraction(1, 2 ** (bits - 2))


def test_root_interval():
    iv = root_interval(10, 3, 128)
    assert iv.lower ** 3 < 10 < iv.upper ** 3


@pytest.mark.parametrize("n", [2, 3, Fraction(7, 3), 10 ** 9])
def test_log_interval_contains_mpmath(n):
    iv = log_interval(n, 128)
    with mpmath.workdps(80):
        ref = mpmath.log(mpmath.mpf(Fraction(n).numerator) / Fraction(n).denominator)
        assert mpmath.mpf(iv.lower.numerator) / iv.lower.denominator <= ref
        assert ref <= mpmath.mpf(iv.upper.numerator) / iv.upper.denominator
    assert iv.width < Fraction(1, 2 ** 100)
    assert iv.lower <= Fraction(log(float(n))) + Fraction(1, 10 ** 9)


def test_log_restores_context_precision():
    before = mpmath.iv.prec
    log_interval(5, 500)
    assert mpmath.iv.prec == before


def test_log_domain():
    assert log_interval(1).is_exact
    with pytest.raises(ValueError):
        log_interval(0)


class TestArithmetic:
    @given(st.fractions(-100, 100, max_denominator=30), st.fractions(-100, 100, max_denominator=30),
           st.fractions(-100, 100, max_denominator=30), st.fractions(-100, 100, max_denominator=30))
    def test_ops_enclose(self, a, b, c, d):
        x = IntervalValue(min(a, b), max(a, b), 32)
        y = IntervalValue(min(c, d), max(c, d), 32)
        for u in (x.lower, x.upper):
            for v in (y.lower, y.upper):
                assert (x + y).contains(u + v)
                assert (x - y).contains(u - v)
                assert (x * y).contains(u * v)
                if not y.contains(0):
                    assert (x / y).contains(u / v)

    def test_division_by_zero_interval(self):
        with pytest.raises(ZeroDivisionError):
            IntervalValue.exact(1) / IntervalValue(-1, 1)

    def test_negative_power(self):
        iv = IntervalValue.exact(4).rational_power(Fraction(-1, 2))
        assert iv.contains(Fraction(1, 2))

    def test_power_of_negative(self):
        with pytest.raises(ValueError):
            IntervalValue(-1, 1).rational_power(Fraction(1, 2))

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            IntervalValue(2, 1)

    def test_comparisons(self):
        a, b = IntervalValue(1, 2), IntervalValue(2, 3)
        assert a.certainly_le(b) and not a.certainly_lt(b)
        assert IntervalValue(4, 5).certainly_gt(b)

    def test_decimal_strings_round_outward(self):
        lo, hi = IntervalValue(Fraction(1, 3), Fraction(2, 3)).as_strs(4)
        assert (lo, hi) == ("0.3333", "0.6667")
        assert IntervalValue.exact(-7).as_strs() == ["-7", "-7"]
