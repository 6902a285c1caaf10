from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fewdist import (
    CanonicalLine,
    Point,
    PointSet,
    canonical_line,
    euclid_sq,
    minkowski_sq,
    rect_dist,
    rotate_scaled,
)
from fewdist.exact import exact_sqrt, metric_name, scalar, scalar_str

from strategies import points, rationals

F = Fraction


class TestScalar:
    def test_integral_fraction_collapses_to_int(self):
        assert type(scalar(F(4, 2))) is int
        assert scalar("6/3") == 2

    def test_unicode_minus(self):
        assert scalar("−3/1") == -3

    def test_float_refused(self):
        with pytest.raises(TypeError):
            scalar(0.5)

    def test_str_roundtrip(self):
        assert scalar_str(F(-1, 2)) == "-1/2"
        assert scalar_str(0) == "0/1"
        assert scalar(scalar_str(F(7, 3))) == F(7, 3)

    def test_exact_sqrt(self):
        assert exact_sqrt(F(9, 4)) == F(3, 2)
        assert exact_sqrt(2) is None
        assert exact_sqrt(-1) is None

    @given(rationals, rationals, rationals)
    def test_field_laws(self, a, b, c):
        a, b, c = scalar(a), scalar(b), scalar(c)
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + b == b + a and a * b == b * a


class TestDistances:
    def test_euclid_examples(self):
        assert euclid_sq(Point(0, 0), Point(0, 0)) == 0
        assert euclid_sq(Point(0, 0), Point(3, 4)) == 25
        assert euclid_sq(Point(F(1, 2), 0), Point(0, F(1, 2))) == F(1, 2)

    def test_rect_examples(self):
        assert rect_dist(Point(0, 0), Point(2, 3)) == 6
        assert rect_dist(Point(0, 0), Point(2, -3)) == -6
        assert rect_dist(Point(5, 7), Point(-2, 7)) == 0

    def test_minkowski_examples(self):
        assert minkowski_sq(Point(0, 0), Point(1, 1)) == 0
        assert minkowski_sq(Point(0, 0), Point(2, 1)) == 3
        assert minkowski_sq(Point(0, 0), Point(1, 2)) == -3

    def test_rotation_examples(self):
        assert rotate_scaled(Point(0, 0)) == Point(0, 0)
        p, q = Point(0, 0), Point(2, 3)
        assert minkowski_sq(rotate_scaled(p), rotate_scaled(q)) == 24 == 4 * rect_dist(p, q)

    @given(points, points)
    def test_symmetry(self, p, q):
        for d in (euclid_sq, rect_dist, minkowski_sq):
            assert d(p, q) == d(q, p)

    @given(points, points)
    def test_euclid_zero_iff_equal(self, p, q):
        assert euclid_sq(p, q) >= 0
        assert (euclid_sq(p, q) == 0) == (p == q)

    @given(points, points)
    def test_rotation_identity(self, p, q):
        assert minkowski_sq(rotate_scaled(p), rotate_scaled(q)) == 4 * rect_dist(p, q)

    def test_metric_aliases(self):
        assert metric_name("euclidean-squared") == "euclidean"
        assert metric_name("Rect") == "rectangular"
        with pytest.raises(ValueError):
            metric_name("taxicab")


class TestLines:
    def test_examples(self):
        assert canonical_line(Point(0, 0), Point(1, 1)) == CanonicalLine(1, -1, 0)
        assert canonical_line(Point(0, 0), Point(0, 5)) == CanonicalLine(1, 0, 0)
        assert canonical_line(Point(0, 1), Point(2, 2)) == canonical_line(Point(2, 2), Point(0, 1))

    def test_equal_points(self):
        with pytest.raises(ValueError):
            canonical_line(Point(1, 1), Point(1, 1))

    def test_non_canonical_rejected(self):
        with pytest.raises(ValueError):
            CanonicalLine(2, 2, 0)
        with pytest.raises(ValueError):
            CanonicalLine(-1, 1, 0)
        with pytest.raises(ValueError):
            CanonicalLine(0, 0, 1)

    def test_of_normalizes_rationals(self):
        assert CanonicalLine.of(F(-1, 2), F(1, 3), 1) == CanonicalLine(3, -2, -6)

    @given(points, points)
    def test_through_both_and_swap_invariant(self, p, q):
        if p == q:
            return
        line = canonical_line(p, q)
        assert line.contains(p) and line.contains(q)
        assert line == canonical_line(q, p)
        lead = line.a if line.a else line.b
        assert lead > 0

    @given(points, points, st.fractions(min_value=F(1, 10), max_value=10))
    def test_scaling_membership(self, p, q, lam):
        if p == q:
            return
        sp, sq = Point(lam * p.x, lam * p.y), Point(lam * q.x, lam * q.y)
        line = canonical_line(sp, sq)
        assert line.contains(sp) and line.contains(sq)
        mid = Point((p.x + q.x) * lam / 2, (p.y + q.y) * lam / 2)
        assert line.contains(mid)

    def test_direction_and_slope(self):
        line = CanonicalLine.of(3, -1, 0)   # y = 3x
        assert line.slope == 3
        assert line.direction() == (1, 3)
        assert CanonicalLine(1, 0, 2).slope is None


class TestPointSet:
    def test_dedup_and_order(self):
        P = PointSet([(1, 0), (0, 5), (1, 0), (0, -1)])
        assert [tuple(p) for p in P] == [(0, -1), (0, 5), (1, 0)]

    def test_json_roundtrip(self):
        P = PointSet([(F(1, 2), -3), (0, 0)])
        assert P.to_json() == [["0/1", "0/1"], ["1/2", "-3/1"]]
        assert PointSet.loads(P.dumps()) == P

    def test_json_unicode_minus(self):
        P = PointSet.loads('[["1/2", "−3/1"]]')
        assert P[0] == Point(F(1, 2), -3)

    def test_duplicates_in_file_rejected(self):
        with pytest.raises(ValueError):
            PointSet.loads('[["1","1"],["1/1","1"]]')
