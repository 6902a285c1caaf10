"""Quadruple census Q = {(a, b, p, q) in A^2 x P^2 : d(p, a) = d(q, b)}.

|Q| is computed as sum_i M_i^2 from the bipartite multiplicities, and the
split Q = Q1 + Q2 from per-point distance counters grouped by the Q1
predicate, so nothing here loops over quadruples.  ``q1_by_candidates``
gives an independent O(m^2 n) count of Q1 by solving for q explicitly.
"""

from __future__ import annotations

import warnings
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

from .exact import CanonicalLine, Point, PointSet, Scalar, exact_sqrt, metric_name, scalar, scalar_str
from .stats import DistanceProfile


class CensusInputError(ValueError):
    pass


@dataclass
class QuadrupleCensus:
    metric: str
    m: int
    n: int
    q_total: int
    q1: int
    q2: int
    mi_histogram: dict = field(repr=False)
    kappa: Scalar | None = None

    @property
    def distinct_count(self) -> int:
        return len(self.mi_histogram)

    def to_json(self) -> dict:
        return {
            "metric": self.metric,
            "kappa": None if self.kappa is None else scalar_str(self.kappa),
            "m": self.m,
            "n": self.n,
            "q_total": self.q_total,
            "q1": self.q1,
            "q2": self.q2,
        }


# -- normalizing transforms -------------------------------------------------

def align_line_to_x_axis(P: PointSet, line: CanonicalLine) -> PointSet:
    """Move ``line`` onto the x-axis with an exact rotation-scaling plus shift.

    Uses z -> z * conj(d) for the line's integer direction d, which multiplies
    every squared Euclidean distance by |d|^2.  Equal-distance relations, and
    hence D(P) and every census count, are unchanged.
    """
    dx, dy = line.direction()

    def move(p: Point) -> Point:
        x = p.x * dx + p.y * dy
        y = p.y * dx - p.x * dy
        return Point(x, y)

    # the whole line lands on y = const
    probe = move(_any_point_on(line))
    return P.map(lambda p: move(p) - Point(0, probe.y))


def _any_point_on(line: CanonicalLine) -> Point:
    if line.b != 0:
        return Point(0, Fraction(line.c, line.b))
    return Point(Fraction(line.c, line.a), 0)


def translate_line_to_origin(P: PointSet, line: CanonicalLine) -> tuple[PointSet, Scalar]:
    """Shift so that ``line`` passes through the origin; returns (P', kappa).

    Rectangular distance is translation invariant (but not rotation invariant),
    so a translation is the only normalization allowed here.
    """
    if line.is_axis_parallel:
        raise CensusInputError("rectangular census needs a line that is neither horizontal nor vertical")
    anchor = _any_point_on(line)
    return P.map(lambda p: p - anchor), line.slope


# -- census -----------------------------------------------------------------

def _check_common(A: PointSet, P: PointSet):
    if len(A) == 0 or len(P) == 0:
        raise CensusInputError("census needs nonempty A and P")
    if not A.issubset(P):
        warnings.warn("A is not a subset of P", stacklevel=3)


def _census(A: PointSet, P: PointSet, dist, split_key, metric: str, kappa) -> QuadrupleCensus:
    per_point = {}
    mi: Counter = Counter()
    for p in P:
        cnt = Counter(dist(p, a) for a in A)
        per_point[p] = cnt
        mi.update(cnt)
    q_total = sum(v * v for v in mi.values())
    # Q1: pairs (p, q) sharing the split key; sum over the group of counter products
    groups: dict = defaultdict(Counter)
    for p, cnt in per_point.items():
        groups[split_key(p)].update(cnt)
    q1 = sum(v * v for g in groups.values() for v in g.values())
    return QuadrupleCensus(
        metric=metric,
        m=len(A),
        n=len(P),
        q_total=q_total,
        q1=q1,
        q2=q_total - q1,
        mi_histogram=dict(mi),
        kappa=kappa,
    )


def _euclid_to_axis_point(p: Point, a: Point) -> Scalar:
    dx = p.x - a.x
    return dx * dx + p.y * p.y


def census_euclid(A: PointSet, P: PointSet) -> QuadrupleCensus:
    """Euclidean census for A on the x-axis; Q1 is the p_y^2 == q_y^2 part."""
    _check_common(A, P)
    if any(a.y != 0 for a in A):
        raise CensusInputError("Euclidean census expects A on the x-axis; align the line first")
    return _census(A, P, _euclid_to_axis_point, lambda p: p.y * p.y, "euclidean", None)


def census_rect(A: PointSet, P: PointSet, kappa) -> QuadrupleCensus:
    """Rectangular census for A on y = kappa * x.

    Q1 is the part with (q_y - kappa q_x)^2 == (p_y - kappa p_x)^2.
    """
    kappa = scalar(kappa)
    if kappa == 0:
        raise CensusInputError("kappa must be nonzero")
    _check_common(A, P)
    if any(a.y != kappa * a.x for a in A):
        raise CensusInputError(f"A is not contained in the line y = {kappa} x")

    def dist(p: Point, a: Point):
        return (p.x - a.x) * (p.y - a.y)

    def key(p: Point):
        u = p.y - kappa * p.x
        return u * u

    return _census(A, P, dist, key, "rectangular", kappa)


def census(A: PointSet, P: PointSet, metric: str, kappa=None) -> QuadrupleCensus:
    metric = metric_name(metric)
    if metric == "euclidean":
        return census_euclid(A, P)
    if metric == "rectangular":
        if kappa is None:
            raise CensusInputError("rectangular census needs kappa")
        return census_rect(A, P, kappa)
    raise CensusInputError(f"no census for metric {metric!r}")


# -- explicit Q1 candidates -------------------------------------------------

@dataclass
class CandidateSolve:
    real_solutions: int
    rational: list[Point]


def q1_candidates_euclid(a: Point, b: Point, p: Point) -> CandidateSolve:
    """All q with |q - b| = |p - a| and q_y^2 = p_y^2, for a, b on the x-axis."""
    r = p.x - a.x
    xs = {b.x + r, b.x - r}
    ys = {p.y, -p.y}
    sols = [Point(x, y) for x in xs for y in ys]
    return CandidateSolve(len(sols), sols)


def q1_candidates_rect(s: Point, t: Point, p: Point, kappa) -> CandidateSolve:
    """All q with R(q, t) = R(p, s) and (q_y - k q_x)^2 = (p_y - k p_x)^2.

    Writing u = q_y - k q_x = ±(p_y - k p_x) and w = q_x - t_x, the distance
    condition becomes k w^2 + u w - R(p, s) = 0: two quadratics, so at most
    four real q.  Irrational solutions are counted but not returned.
    """
    kappa = scalar(kappa)
    r = (p.x - s.x) * (p.y - s.y)
    d = p.y - kappa * p.x
    real = 0
    rational = []
    for u in {d, -d}:
        disc = u * u + 4 * kappa * r
        if disc < 0:
            continue
        root = exact_sqrt(disc)
        ws = []
        if disc == 0:
            real += 1
            ws = [scalar(Fraction(-u) / (2 * kappa))]
        else:
            real += 2
            if root is not None:
                ws = [scalar(Fraction(-u + root) / (2 * kappa)), scalar(Fraction(-u - root) / (2 * kappa))]
        for w in ws:
            qx = t.x + w
            rational.append(Point(qx, u + kappa * qx))
    return CandidateSolve(real, rational)


def q1_by_candidates(A: PointSet, P: PointSet, metric: str, kappa=None) -> tuple[int, int]:
    """Count Q1 by solving for q over every (a, b, p); returns (q1, max real solutions)."""
    metric = metric_name(metric)
    total = 0
    worst = 0
    for a in A:
        for b in A:
            for p in P:
                if metric == "euclidean":
                    sol = q1_candidates_euclid(a, b, p)
                else:
                    sol = q1_candidates_rect(a, b, p, kappa)
                worst = max(worst, sol.real_solutions)
                total += sum(1 for q in set(sol.rational) if q in P)
    return total, worst


# -- Cauchy-Schwarz report --------------------------------------------------

def cs_bound_report(census: QuadrupleCensus, profile: DistanceProfile) -> dict:
    """Exact checks linking the census to the bipartite profile of the same (A, P).

    * |Q| * D(A, P) >= m^2 n^2                      (Cauchy-Schwarz)
    * |Q1| <= 4 m^2 n
    * if D(A, P) <= n / 5 then |Q2| >= m^2 n must follow
    """
    if not profile.bipartite or profile.sizes != (census.m, census.n) or profile.metric != census.metric:
        raise CensusInputError("profile and census come from different inputs")
    if sum(v * v for v in profile.histogram.values()) != census.q_total:
        raise CensusInputError("profile multiplicities do not reproduce the census total")
    m, n = census.m, census.n
    cs_lhs = census.q_total * profile.distinct_count
    cs_rhs = (m * n) ** 2
    hypothesis = 5 * profile.distinct_count <= n
    q2_bound_ok = census.q2 >= m * m * n if hypothesis else None
    return {
        "metric": census.metric,
        "m": m,
        "n": n,
        "q_total": census.q_total,
        "q1": census.q1,
        "q2": census.q2,
        "cs_lhs": cs_lhs,
        "cs_rhs": cs_rhs,
        "cs_holds": cs_lhs >= cs_rhs,
        "cs_equality": cs_lhs == cs_rhs,
        "q1_bound": 4 * m * m * n,
        "q1_holds": census.q1 <= 4 * m * m * n,
        "hypothesis_flags": {"few_distances": hypothesis},
        "q2_lower_bound": m * m * n,
        "q2_holds": q2_bound_ok,
    }
