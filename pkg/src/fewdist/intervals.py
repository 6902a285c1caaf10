"""Certified enclosures for irrational quantities built from exact integers.

Endpoints are dyadic rationals held as ``Fraction``.  Every operation rounds
its lower endpoint down and its upper endpoint up to ``precision`` significant
bits, so the true value always stays inside.  Roots of integers come from
integer Newton iteration (``iroot``); natural logarithms come from mpmath's
interval context.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor, isqrt

import mpmath

DEFAULT_PRECISION = 64
PRECISION_CAP = 1024


def iroot(n: int, k: int) -> int:
    """floor(n ** (1/k)) for integers n >= 0, k >= 1."""
    if n < 0:
        raise ValueError("iroot of a negative number")
    if k < 1:
        raise ValueError("root index must be >= 1")
    if n < 2 or k == 1:
        return n
    if k == 2:
        return isqrt(n)
    # start above the root so Newton decreases monotonically
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def floor_rational_power(n: int, exponent: Fraction) -> int:
    """floor(n ** exponent) for an integer n >= 1 and rational exponent >= 0."""
    exponent = Fraction(exponent)
    if exponent < 0:
        raise ValueError("negative exponent")
    return iroot(n ** exponent.numerator, exponent.denominator)


def _round_down(v: Fraction, bits: int) -> Fraction:
    if v == 0:
        return v
    if v < 0:
        return -_round_up(-v, bits)
    shift = bits - (v.numerator.bit_length() - v.denominator.bit_length()) - 1
    scaled = v * (Fraction(2) ** shift)
    return Fraction(floor(scaled)) / (Fraction(2) ** shift)


def _round_up(v: Fraction, bits: int) -> Fraction:
    if v == 0:
        return v
    if v < 0:
        return -_round_down(-v, bits)
    shift = bits - (v.numerator.bit_length() - v.denominator.bit_length()) - 1
    scaled = v * (Fraction(2) ** shift)
    return Fraction(-floor(-scaled)) / (Fraction(2) ** shift)


@dataclass(frozen=True)
class IntervalValue:
    """A closed interval [lower, upper] known to contain some real quantity."""

    lower: Fraction
    upper: Fraction
    precision: int = DEFAULT_PRECISION

    def __post_init__(self):
        lo, hi = Fraction(self.lower), Fraction(self.upper)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @classmethod
    def exact(cls, value, precision: int = DEFAULT_PRECISION) -> "IntervalValue":
        return cls(Fraction(value), Fraction(value), precision)

    @classmethod
    def _outward(cls, lo: Fraction, hi: Fraction, precision: int) -> "IntervalValue":
        return cls(_round_down(lo, precision), _round_up(hi, precision), precision)

    @property
    def is_exact(self) -> bool:
        return self.lower == self.upper

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def midpoint(self) -> float:
        return float((self.lower + self.upper) / 2)

    def contains(self, value) -> bool:
        return self.lower <= value <= self.upper

    def _coerce(self, other) -> "IntervalValue":
        if isinstance(other, IntervalValue):
            return other
        return IntervalValue.exact(other, self.precision)

    def __add__(self, other):
        o = self._coerce(other)
        p = min(self.precision, o.precision)
        return IntervalValue._outward(self.lower + o.lower, self.upper + o.upper, p)

    __radd__ = __add__

    def __neg__(self):
        return IntervalValue(-self.upper, -self.lower, self.precision)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        p = min(self.precision, o.precision)
        products = [a * b for a in (self.lower, self.upper) for b in (o.lower, o.upper)]
        return IntervalValue._outward(min(products), max(products), p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.lower <= 0 <= o.upper:
            raise ZeroDivisionError("interval divisor contains zero")
        return self * IntervalValue._outward(1 / o.upper, 1 / o.lower, o.precision)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, exponent):
        return self.rational_power(exponent)

    def rational_power(self, exponent) -> "IntervalValue":
        """Enclosure of x ** exponent for x >= 0 and rational exponent."""
        exponent = Fraction(exponent)
        if self.lower < 0:
            raise ValueError("rational power of an interval reaching below zero")
        if exponent < 0:
            return 1 / self.rational_power(-exponent)
        lo = power_bounds(self.lower, exponent, self.precision)[0]
        hi = power_bounds(self.upper, exponent, self.precision)[1]
        return IntervalValue(lo, hi, self.precision)

    def certainly_le(self, other) -> bool:
        return self.upper <= self._coerce(other).lower

    def certainly_lt(self, other) -> bool:
        return self.upper < self._coerce(other).lower

    def certainly_gt(self, other) -> bool:
        return self.lower > self._coerce(other).upper

    def as_strs(self, digits: int = 30) -> list[str]:
        """[lo, hi] as decimal strings, rounded outward."""
        return [_decimal(self.lower, digits, up=False), _decimal(self.upper, digits, up=True)]

    def __repr__(self) -> str:
        lo, hi = self.as_strs(12)
        return f"IntervalValue([{lo}, {hi}], {self.precision} bits)"


def _decimal(v: Fraction, digits: int, up: bool) -> str:
    if v == int(v):
        return str(int(v))
    scale = 10 ** digits
    n = v * scale
    n = -floor(-n) if up else floor(n)
    sign = "-" if n < 0 else ""
    n = abs(n)
    whole, frac = divmod(n, scale)
    return f"{sign}{whole}.{str(frac).rjust(digits, '0').rstrip('0') or '0'}"


def power_bounds(x: Fraction, exponent: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    """Dyadic bounds lo <= x**exponent <= hi for rational x >= 0, exponent >= 0.

    Exact (lo == hi) whenever the power is rational and representable.
    """
    x, exponent = Fraction(x), Fraction(exponent)
    if x == 0:
        return (Fraction(0), Fraction(0)) if exponent > 0 else (Fraction(1), Fraction(1))
    p, q = exponent.numerator, exponent.denominator
    num, den = x.numerator ** p, x.denominator ** p
    rn, rd = iroot(num, q), iroot(den, q)
    if rn ** q == num and rd ** q == den:
        v = Fraction(rn, rd)
        return v, v
    # shift so the floor keeps at least `bits` significant bits of the result
    log2_result = (num.bit_length() - den.bit_length()) // q
    shift = max(0, bits + 2 - log2_result)
    floor_val = iroot((num << (shift * q)) // den, q)
    lo = Fraction(floor_val, 1 << shift)
    hi = Fraction(floor_val + 1, 1 << shift)
    return _round_down(lo, bits), _round_up(hi, bits)


def sqrt_interval(n, precision: int = DEFAULT_PRECISION) -> IntervalValue:
    lo, hi = power_bounds(Fraction(n), Fraction(1, 2), precision)
    return IntervalValue(lo, hi, precision)


def root_interval(n, k: int, precision: int = DEFAULT_PRECISION) -> IntervalValue:
    lo, hi = power_bounds(Fraction(n), Fraction(1, k), precision)
    return IntervalValue(lo, hi, precision)


def log_interval(n, precision: int = DEFAULT_PRECISION) -> IntervalValue:
    """Enclosure of the natural logarithm of a positive rational."""
    n = Fraction(n)
    if n <= 0:
        raise ValueError("log of a nonpositive number")
    if n == 1:
        return IntervalValue.exact(0, precision)
    ctx = mpmath.iv
    saved = ctx.prec
    ctx.prec = precision + 8
    try:
        v = ctx.log(ctx.mpf(n.numerator) / ctx.mpf(n.denominator))
        lo, hi = (_mpf_fraction(t) for t in v._mpi_)
    finally:
        ctx.prec = saved
    return IntervalValue._outward(lo, hi, precision)


def _mpf_fraction(raw) -> Fraction:
    """Exact value of a raw mpf tuple (sign, mantissa, exponent, bitcount).

    Endpoints are read as raw tuples: converting through ``mpmath.mpf`` would
    round them to the global working precision and break the enclosure.
    """
    sign, man, exp, _ = raw
    v = Fraction(int(man)) * (Fraction(2) ** exp)
    return -v if sign else v
