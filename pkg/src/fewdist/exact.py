"""Exact scalars, points, canonical lines and the three planar distance forms.

Scalars are Python rationals: ``int`` when integral, ``fractions.Fraction``
otherwise.  The two compare and hash identically, so mixing them in sets and
dict keys is safe, and integer-only workloads never pay for Fraction overhead.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from numbers import Rational
from typing import Iterable, Iterator, Sequence, Union

Scalar = Union[int, Fraction]


def scalar(value) -> Scalar:
    """Coerce ``value`` to an exact scalar.

    Accepts ints, Fractions, other ``numbers.Rational`` instances and strings
    such as ``"3"``, ``"-1/2"`` or ``"−3/1"`` (unicode minus).  Floats are
    refused: they would silently import rounding error.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, str):
        value = Fraction(value.strip().replace("−", "-"))
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, Rational):
        return scalar(Fraction(value.numerator, value.denominator))
    raise TypeError(f"cannot build an exact scalar from {type(value).__name__}")


def scalar_str(value: Scalar) -> str:
    """Serialize as ``"num/den"`` (denominator always present)."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def exact_sqrt(value: Scalar) -> Scalar | None:
    """Return the rational square root of ``value`` or None if it is irrational."""
    if value < 0:
        return None
    value = Fraction(value)
    num, den = value.numerator, value.denominator
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn != num or rd * rd != den:
        return None
    return scalar(Fraction(rn, rd))


@dataclass(frozen=True, order=True)
class Point:
    x: Scalar
    y: Scalar

    def __post_init__(self):
        object.__setattr__(self, "x", scalar(self.x))
        object.__setattr__(self, "y", scalar(self.y))

    def __iter__(self) -> Iterator[Scalar]:
        yield self.x
        yield self.y

    def __sub__(self, other: "Point") -> "Point":
        return Point(self.x - other.x, self.y - other.y)

    def __add__(self, other: "Point") -> "Point":
        return Point(self.x + other.x, self.y + other.y)

    def to_json(self) -> list[str]:
        return [scalar_str(self.x), scalar_str(self.y)]

    @classmethod
    def from_json(cls, pair: Sequence) -> "Point":
        if len(pair) != 2:
            raise ValueError(f"point must have two coordinates, got {pair!r}")
        return cls(scalar(pair[0]), scalar(pair[1]))


def as_point(p) -> Point:
    return p if isinstance(p, Point) else Point(*p)


class PointSet(Sequence[Point]):
    """An immutable, duplicate-free point set kept in lexicographic (x, y) order."""

    __slots__ = ("_points", "_index", "meta")

    def __init__(self, points: Iterable = (), meta: dict | None = None):
        self._points: tuple[Point, ...] = tuple(sorted({as_point(p) for p in points}))
        self._index = frozenset(self._points)
        self.meta = dict(meta or {})

    def __len__(self) -> int:
        return len(self._points)

    def __getitem__(self, i):
        return self._points[i]

    def __iter__(self) -> Iterator[Point]:
        return iter(self._points)

    def __contains__(self, p) -> bool:
        return as_point(p) in self._index

    def __eq__(self, other) -> bool:
        if isinstance(other, PointSet):
            return self._points == other._points
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._points)

    def __repr__(self) -> str:
        if len(self) <= 6:
            return f"PointSet({[tuple(p) for p in self._points]})"
        return f"PointSet(<{len(self)} points>)"

    def issubset(self, other: "PointSet") -> bool:
        return self._index <= other._index

    def map(self, fn) -> "PointSet":
        return PointSet((fn(p) for p in self._points), meta=self.meta)

    def to_json(self) -> list[list[str]]:
        return [p.to_json() for p in self._points]

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data: Sequence) -> "PointSet":
        points = [Point.from_json(pair) for pair in data]
        if len(set(points)) != len(points):
            raise ValueError("point-set file contains duplicate points")
        return cls(points)

    @classmethod
    def loads(cls, text: str) -> "PointSet":
        return cls.from_json(json.loads(text))


# -- distance forms --------------------------------------------------------

def euclid_sq(p: Point, q: Point) -> Scalar:
    dx = p.x - q.x
    dy = p.y - q.y
    return dx * dx + dy * dy


def rect_dist(p: Point, q: Point) -> Scalar:
    """Signed area of the axis-parallel rectangle spanned by ``p`` and ``q``.

    Positive for a northeast/southwest pair, negative for northwest/southeast.
    """
    return (p.x - q.x) * (p.y - q.y)


def minkowski_sq(p: Point, q: Point) -> Scalar:
    dx = p.x - q.x
    dy = p.y - q.y
    return dx * dx - dy * dy


def rotate_scaled(p: Point) -> Point:
    """Scaled 45 degree rotation (x, y) -> (x + y, y - x).

    Stays integral on integer input; ``minkowski_sq(rotate_scaled(p),
    rotate_scaled(q)) == 4 * rect_dist(p, q)``.
    """
    return Point(p.x + p.y, p.y - p.x)


METRICS = {
    "euclidean": euclid_sq,
    "rectangular": rect_dist,
    "minkowski": minkowski_sq,
}

_METRIC_ALIASES = {
    "euclidean": "euclidean",
    "euclidean-squared": "euclidean",
    "euclid": "euclidean",
    "rectangular": "rectangular",
    "rect": "rectangular",
    "minkowski": "minkowski",
    "minkowski-squared": "minkowski",
}


def metric_name(metric: str) -> str:
    try:
        return _METRIC_ALIASES[metric.lower()]
    except KeyError:
        raise ValueError(f"unknown metric {metric!r}; expected one of {sorted(METRICS)}") from None


def metric_fn(metric: str):
    return METRICS[metric_name(metric)]


# -- lines -----------------------------------------------------------------

@dataclass(frozen=True, order=True)
class CanonicalLine:
    """The line a*x + b*y = c with integer, gcd-reduced, sign-normalized terms."""

    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.a == 0 and self.b == 0:
            raise ValueError("degenerate line: a = b = 0")
        g = gcd(gcd(self.a, self.b), self.c)
        lead = self.a if self.a != 0 else self.b
        if g != 1 or lead < 0:
            raise ValueError(f"non-canonical triple ({self.a}, {self.b}, {self.c}); use CanonicalLine.of")

    @classmethod
    def of(cls, a, b, c) -> "CanonicalLine":
        """Normalize any rational triple describing a*x + b*y = c."""
        a, b, c = (Fraction(v) for v in (a, b, c))
        den = 1
        for v in (a, b, c):
            den = den * v.denominator // gcd(den, v.denominator)
        ia, ib, ic = (int(v * den) for v in (a, b, c))
        g = gcd(gcd(ia, ib), ic)
        ia, ib, ic = ia // g, ib // g, ic // g
        if ia < 0 or (ia == 0 and ib < 0):
            ia, ib, ic = -ia, -ib, -ic
        return cls(ia, ib, ic)

    def contains(self, p: Point) -> bool:
        return self.a * p.x + self.b * p.y == self.c

    @property
    def is_horizontal(self) -> bool:
        return self.a == 0

    @property
    def is_vertical(self) -> bool:
        return self.b == 0

    @property
    def is_axis_parallel(self) -> bool:
        return self.a == 0 or self.b == 0

    @property
    def slope(self) -> Scalar | None:
        """dy/dx, or None for vertical lines."""
        if self.b == 0:
            return None
        return scalar(Fraction(-self.a, self.b))

    def direction(self) -> tuple[int, int]:
        """A primitive integer direction vector along the line."""
        dx, dy = self.b, -self.a
        if dx < 0 or (dx == 0 and dy < 0):
            dx, dy = -dx, -dy
        return dx, dy

    def __str__(self) -> str:
        return f"{self.a}x + {self.b}y = {self.c}"


def canonical_line(p: Point, q: Point) -> CanonicalLine:
    p, q = as_point(p), as_point(q)
    if p == q:
        raise ValueError(f"a line needs two distinct points, got {p} twice")
    a = q.y - p.y
    b = p.x - q.x
    return CanonicalLine.of(a, b, a * p.x + b * p.y)
