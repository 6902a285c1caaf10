"""Distinct-distance statistics: D(P), R(P), bipartite profiles, line richness.

Pair enumeration is quadratic.  Integer point sets with small coordinates go
through a vectorized numpy path; anything else uses exact Python arithmetic.
Both paths produce identical histograms.
"""

from __future__ import annotations

import csv
import io
import warnings
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exact import (
    CanonicalLine,
    Point,
    PointSet,
    Scalar,
    canonical_line,
    metric_fn,
    metric_name,
    scalar_str,
)

# |coordinate| below this keeps every squared/product form inside int64
_NUMPY_COORD_LIMIT = 1 << 30

CSV_SUMMARY_FIELDS = ["metric", "n", "distinct_count", "max_multiplicity"]


@dataclass
class DistanceProfile:
    metric: str
    distinct_count: int
    histogram: dict
    bipartite: bool = False
    sizes: tuple[int, ...] = ()
    # pairs whose value was dropped by the zero convention (unary profiles only)
    excluded_zero_pairs: int = 0
    include_zero: bool = True

    @property
    def pair_count(self) -> int:
        return sum(self.histogram.values())

    @property
    def max_multiplicity(self) -> int:
        return max(self.histogram.values(), default=0)

    def values(self) -> list[Scalar]:
        return sorted(self.histogram)

    def to_json(self) -> dict:
        return {
            "metric": self.metric,
            "bipartite": self.bipartite,
            "sizes": list(self.sizes),
            "include_zero": self.include_zero,
            "distinct_count": self.distinct_count,
            "histogram": [[scalar_str(k), v] for k, v in sorted(self.histogram.items())],
        }

    def csv_row(self) -> dict:
        return {
            "metric": self.metric,
            "n": self.sizes[-1] if self.sizes else 0,
            "distinct_count": self.distinct_count,
            "max_multiplicity": self.max_multiplicity,
        }


def profiles_to_csv(profiles) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_SUMMARY_FIELDS, lineterminator="\n")
    writer.writeheader()
    for prof in profiles:
        writer.writerow(prof.csv_row())
    return buf.getvalue()


def _integer_coords(points) -> np.ndarray | None:
    xs = []
    for p in points:
        if type(p.x) is not int or type(p.y) is not int:
            return None
        if abs(p.x) >= _NUMPY_COORD_LIMIT or abs(p.y) >= _NUMPY_COORD_LIMIT:
            return None
        xs.append((p.x, p.y))
    return np.array(xs, dtype=np.int64).reshape(-1, 2)


def _np_form(dx: np.ndarray, dy: np.ndarray, metric: str) -> np.ndarray:
    if metric == "euclidean":
        return dx * dx + dy * dy
    if metric == "rectangular":
        return dx * dy
    return dx * dx - dy * dy


def _histogram_numpy(left: np.ndarray, right: np.ndarray, metric: str, unary: bool) -> Counter:
    """Histogram of metric values over left x right (upper triangle if unary)."""
    counts: Counter = Counter()
    chunk = max(1, 2_000_000 // max(1, len(right)))
    for start in range(0, len(left), chunk):
        block = left[start:start + chunk]
        dx = block[:, None, 0] - right[None, :, 0]
        dy = block[:, None, 1] - right[None, :, 1]
        vals = _np_form(dx, dy, metric)
        if unary:
            rows = np.arange(start, start + len(block))[:, None]
            cols = np.arange(len(right))[None, :]
            vals = vals[cols > rows]
        uniq, mult = np.unique(vals, return_counts=True)
        counts.update(dict(zip(uniq.tolist(), mult.tolist())))
    return counts


def _histogram_exact(left, right, metric: str, unary: bool) -> Counter:
    fn = metric_fn(metric)
    counts: Counter = Counter()
    if unary:
        pts = list(left)
        for i, p in enumerate(pts):
            for q in pts[i + 1:]:
                counts[fn(p, q)] += 1
    else:
        for a in left:
            for p in right:
                counts[fn(p, a)] += 1
    return counts


def pair_histogram(left, right, metric: str, unary: bool, use_numpy: bool | None = None) -> Counter:
    metric = metric_name(metric)
    if use_numpy is not False:
        lc = _integer_coords(left)
        rc = lc if unary else _integer_coords(right)
        if lc is not None and rc is not None and len(lc) and len(rc):
            return _histogram_numpy(lc, rc, metric, unary)
        if use_numpy:
            raise ValueError("numpy path needs small integer coordinates")
    return _histogram_exact(left, right, metric, unary)


def distinct_distances(P: PointSet, metric: str = "euclidean", include_zero: bool | None = None,
                       use_numpy: bool | None = None) -> DistanceProfile:
    """Distinct metric values over unordered pairs of distinct points of ``P``.

    ``include_zero`` defaults to False for the Euclidean form (where distinct
    points never give zero anyway) and True for the rectangular and Minkowski
    forms, where zero is attained by distinct points on axis-parallel or null
    lines.
    """
    metric = metric_name(metric)
    if len(P) < 2:
        raise ValueError("distinct distances need at least two points")
    if include_zero is None:
        include_zero = metric != "euclidean"
    hist = pair_histogram(P, P, metric, unary=True, use_numpy=use_numpy)
    dropped = 0
    if not include_zero:
        dropped = hist.pop(0, 0)
    return DistanceProfile(
        metric=metric,
        distinct_count=len(hist),
        histogram=dict(hist),
        bipartite=False,
        sizes=(len(P),),
        excluded_zero_pairs=dropped,
        include_zero=include_zero,
    )


def bipartite_distinct(A: PointSet, P: PointSet, metric: str = "euclidean",
                       use_numpy: bool | None = None) -> DistanceProfile:
    """Profile of metric(p, a) over ordered pairs (a, p) in A x P.

    Histogram entries are the multiplicities M_i; they sum to |A| * |P|.  The
    zero value (a == p) is always kept.
    """
    metric = metric_name(metric)
    if len(A) == 0 or len(P) == 0:
        raise ValueError("bipartite profile needs nonempty A and P")
    if not A.issubset(P):
        warnings.warn("A is not a subset of P", stacklevel=2)
    hist = pair_histogram(A, P, metric, unary=False, use_numpy=use_numpy)
    return DistanceProfile(
        metric=metric,
        distinct_count=len(hist),
        histogram=dict(hist),
        bipartite=True,
        sizes=(len(A), len(P)),
    )


def _direction_key(p: Point, q: Point):
    dx = q.x - p.x
    dy = q.y - p.y
    if dx == 0:
        return None
    return Fraction(dy, dx)


def max_line_richness(P: PointSet, exclude_axis_parallel: bool = False) -> tuple[CanonicalLine | None, int]:
    """A line maximizing |P ∩ line| and that count.

    With ``exclude_axis_parallel`` only lines that are neither horizontal nor
    vertical are considered; if no pair spans such a line the result is
    ``(None, 1)``.  Ties go to the lexicographically smallest canonical triple.
    """
    if len(P) < 2:
        raise ValueError("line richness needs at least two points")
    pts = list(P)
    best_count = 0
    best_line: CanonicalLine | None = None
    for i, p in enumerate(pts):
        groups: dict = {}
        for q in pts[i + 1:]:
            key = _direction_key(p, q)
            if exclude_axis_parallel and (key is None or key == 0):
                continue
            entry = groups.get(key)
            if entry is None:
                groups[key] = [1, q]
            else:
                entry[0] += 1
        for count, q in groups.values():
            if count + 1 < best_count:
                continue
            line = canonical_line(p, q)
            if count + 1 > best_count or line < best_line:
                best_count, best_line = count + 1, line
    if best_line is None:
        return None, 1
    return best_line, best_count


def points_on_line(P: PointSet, line: CanonicalLine) -> PointSet:
    return PointSet(p for p in P if line.contains(p))


def product_set_count(a: int, b: int) -> int:
    """|{i*j : 1 <= i <= a, 1 <= j <= b}| by enumeration."""
    if a < 1 or b < 1:
        raise ValueError("product set sides must be positive")
    return len({i * j for i in range(1, a + 1) for j in range(1, b + 1)})
