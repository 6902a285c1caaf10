"""Hyperbola families gamma_{p,q} and their incidences with Pi = A0 x A0.

Euclidean (A on the x-axis): gamma_{p,q} = {(x, y) : |p - (x, 0)|^2 = |q - (y, 0)|^2},
i.e. (x - p_x)^2 - (y - q_x)^2 = q_y^2 - p_y^2, keyed by
(p_x, q_x, q_y^2 - p_y^2).

Rectangular (A on y = k x): gamma_{p,q} = {(x, y) : (p_x - x)(p_y - k x) = (q_x - y)(q_y - k y)},
keyed by (p_y + k p_x, q_y + k q_x, (p_y - k p_x)^2 - (q_y - k q_x)^2).

Pairs with a zero third key component are degenerate (two lines) and are
left out.  Every curve, once normalized, reads x^2 - y^2 + D x + E y + F = 0.
"""

from __future__ import annotations

import random
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

from .exact import Point, PointSet, Scalar, exact_sqrt, metric_name, scalar, scalar_str
from .intervals import DEFAULT_PRECISION, IntervalValue, log_interval


class FamilyError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class HyperbolaKey:
    metric: str
    kappa: Scalar | None
    k1: Scalar
    k2: Scalar
    k3: Scalar

    def coefficients(self) -> tuple[Scalar, Scalar, Scalar]:
        """(D, E, F) of the normalized equation x^2 - y^2 + D x + E y + F = 0."""
        k1, k2, k3 = self.k1, self.k2, self.k3
        if self.metric == "euclidean":
            return -2 * k1, 2 * k2, k1 * k1 - k2 * k2 - k3
        kap = self.kappa
        return (
            scalar(Fraction(-k1) / kap),
            scalar(Fraction(k2) / kap),
            scalar(Fraction(k1 * k1 - k2 * k2 - k3) / (4 * kap * kap)),
        )

    def evaluate(self, x, y) -> Scalar:
        d, e, f = self.coefficients()
        return x * x - y * y + d * x + e * y + f

    def contains(self, x, y) -> bool:
        return self.evaluate(x, y) == 0

    def ys_at(self, x) -> tuple[Scalar, ...]:
        """Rational y with (x, y) on the curve."""
        d, e, f = self.coefficients()
        # y^2 - e y - (x^2 + d x + f) = 0
        rest = x * x + d * x + f
        disc = e * e + 4 * rest
        root = exact_sqrt(disc)
        if root is None:
            return ()
        if root == 0:
            return (scalar(Fraction(e) / 2),)
        return (scalar(Fraction(e + root) / 2), scalar(Fraction(e - root) / 2))

    def to_json(self) -> list[str]:
        return [scalar_str(self.k1), scalar_str(self.k2), scalar_str(self.k3)]


def hyperbola_key(p: Point, q: Point, metric: str = "euclidean", kappa=None) -> HyperbolaKey | None:
    """Key of gamma_{p,q}, or None when the pair is degenerate."""
    metric = metric_name(metric)
    if metric == "euclidean":
        k3 = q.y * q.y - p.y * p.y
        if k3 == 0:
            return None
        return HyperbolaKey("euclidean", None, p.x, q.x, k3)
    if metric == "rectangular":
        kappa = _nonzero_kappa(kappa)
        up = p.y - kappa * p.x
        uq = q.y - kappa * q.x
        k3 = up * up - uq * uq
        if k3 == 0:
            return None
        return HyperbolaKey("rectangular", kappa, p.y + kappa * p.x, q.y + kappa * q.x, k3)
    raise FamilyError(f"no hyperbola family for metric {metric!r}")


def _nonzero_kappa(kappa) -> Scalar:
    if kappa is None:
        raise FamilyError("rectangular family needs kappa")
    kappa = scalar(kappa)
    if kappa == 0:
        raise FamilyError("kappa must be nonzero")
    return kappa


@dataclass
class CurveFamily:
    """The multiset Gamma: each key with the ordered pairs that generate it."""

    metric: str
    kappa: Scalar | None
    keys: dict = field(repr=False)
    degenerate_pairs: int = 0

    @property
    def size(self) -> int:
        return sum(len(v) for v in self.keys.values())

    @property
    def distinct(self) -> int:
        return len(self.keys)

    @property
    def k_max(self) -> int:
        return max((len(v) for v in self.keys.values()), default=0)

    def multiplicity_histogram(self) -> dict[int, int]:
        return dict(sorted(Counter(len(v) for v in self.keys.values()).items()))

    def to_json(self) -> dict:
        return {
            "metric": self.metric,
            "kappa": None if self.kappa is None else scalar_str(self.kappa),
            "size": self.size,
            "distinct_keys": self.distinct,
            "k_max": self.k_max,
            "degenerate_pairs": self.degenerate_pairs,
            "multiplicity_histogram": {str(k): v for k, v in self.multiplicity_histogram().items()},
        }


def build_family(P: PointSet, metric: str = "euclidean", kappa=None) -> CurveFamily:
    metric = metric_name(metric)
    if metric == "rectangular":
        kappa = _nonzero_kappa(kappa)
    elif metric == "euclidean":
        kappa = None
    else:
        raise FamilyError(f"no hyperbola family for metric {metric!r}")
    keys: dict = defaultdict(list)
    degenerate = 0
    for p in P:
        for q in P:
            key = hyperbola_key(p, q, metric, kappa)
            if key is None:
                degenerate += 1
            else:
                keys[key].append((p, q))
    return CurveFamily(metric, kappa, dict(keys), degenerate)


def line_coordinates(A: PointSet, metric: str, kappa=None) -> list[Scalar]:
    """A0: x-coordinates of A, after checking A lies on the family's base line."""
    metric = metric_name(metric)
    if metric == "euclidean":
        if any(a.y != 0 for a in A):
            raise FamilyError("A must lie on the x-axis for a Euclidean family")
    else:
        kappa = _nonzero_kappa(kappa)
        if any(a.y != kappa * a.x for a in A):
            raise FamilyError(f"A must lie on y = {kappa} x for this family")
    return [a.x for a in A]


def incidences(A: PointSet, family: CurveFamily) -> int:
    """I(Pi, Gamma) with multiplicity, for Pi = A0 x A0.

    For each curve and each x in A0 the defining quadratic is solved for y
    and the rational roots are looked up in A0.
    """
    a0 = line_coordinates(A, family.metric, family.kappa)
    a0_set = set(a0)
    total = 0
    for key, pairs in family.keys.items():
        hits = 0
        for x in a0:
            hits += sum(1 for y in key.ys_at(x) if y in a0_set)
        total += hits * len(pairs)
    return total


# -- coincidence structure --------------------------------------------------

def _on_predicted_line(pt: Point, c, metric: str, kappa) -> bool:
    if metric == "euclidean":
        return pt.x == c
    return pt.y + kappa * pt.x == c


def coincidence_structure(family: CurveFamily) -> dict:
    """Check the structure of every key class with multiplicity >= 2.

    * all generating p lie on the predicted line (x = k1, resp. y = -k x + k1),
      all q on x = k2, resp. y = -k x + k2;
    * a fixed p meets at most two distinct q in one class, and vice versa;
    * a class of multiplicity k has at least k/2 distinct p and k/2 distinct q.
    """
    metric, kappa = family.metric, family.kappa
    violations = []
    classes = 0
    partner_max = 0
    best_key = None
    for key, pairs in sorted(family.keys.items()):
        k = len(pairs)
        if k < 2:
            continue
        classes += 1
        ps = {p for p, _ in pairs}
        qs = {q for _, q in pairs}
        if not all(_on_predicted_line(p, key.k1, metric, kappa) for p in ps):
            violations.append({"key": key.to_json(), "kind": "p_off_line"})
        if not all(_on_predicted_line(q, key.k2, metric, kappa) for q in qs):
            violations.append({"key": key.to_json(), "kind": "q_off_line"})
        by_p: dict = defaultdict(set)
        by_q: dict = defaultdict(set)
        for p, q in pairs:
            by_p[p].add(q)
            by_q[q].add(p)
        worst = max(max(len(v) for v in by_p.values()), max(len(v) for v in by_q.values()))
        partner_max = max(partner_max, worst)
        if worst > 2:
            violations.append({"key": key.to_json(), "kind": "partner_bound", "partners": worst})
        if 2 * len(ps) < k or 2 * len(qs) < k:
            violations.append({"key": key.to_json(), "kind": "distinct_points"})
        if best_key is None or k > len(family.keys[best_key]):
            best_key = key
    b_side = sorted({q for _, q in family.keys[best_key]}) if best_key is not None else []
    k_max = family.k_max
    return {
        "metric": metric,
        "k_max": k_max,
        "classes_checked": classes,
        "partner_max": partner_max,
        "b_side_points": len(b_side),
        "b_side_ok": 2 * len(b_side) >= k_max if best_key is not None else True,
        "max_key": best_key.to_json() if best_key is not None else None,
        "violations": violations,
        "holds": not violations,
    }


def max_multiplicity_class(family: CurveFamily):
    """(key, pairs) of a class with the largest multiplicity; smallest key on ties."""
    if not family.keys:
        return None, []
    key = min(family.keys, key=lambda k: (-len(family.keys[k]), k))
    return key, family.keys[key]


# -- pairwise intersections -------------------------------------------------

def _real_roots(a, b, c) -> int | None:
    """Number of distinct real roots of a X^2 + b X + c, None if identically zero."""
    if a == 0:
        if b != 0:
            return 1
        return None if c == 0 else 0
    disc = b * b - 4 * a * c
    return 2 if disc > 0 else (1 if disc == 0 else 0)


def intersection_count(k1: HyperbolaKey, k2: HyperbolaKey) -> int | None:
    """Number of real common points of two curves; None for infinitely many.

    Both share the x^2 - y^2 part, so their difference is a line; the
    intersection is that line meeting either curve.
    """
    d1, e1, f1 = k1.coefficients()
    d2, e2, f2 = k2.coefficients()
    dd, de, df = d1 - d2, e1 - e2, f1 - f2
    if dd == 0 and de == 0:
        return None if df == 0 else 0
    if de != 0:
        alpha = Fraction(-dd) / de
        beta = Fraction(-df) / de
        # x^2 - (alpha x + beta)^2 + d1 x + e1 (alpha x + beta) + f1
        return _real_roots(1 - alpha * alpha, -2 * alpha * beta + d1 + e1 * alpha, -beta * beta + e1 * beta + f1)
    x = Fraction(-df) / dd
    # -y^2 + e1 y + (x^2 + d1 x + f1)
    return _real_roots(-1, e1, x * x + d1 * x + f1)


def pseudoparabola_check(family: CurveFamily, sample: int = 1000, seed: int = 0) -> dict:
    """Sample distinct key pairs and check each meets in at most two points."""
    keys = sorted(family.keys)
    pairs = []
    total_pairs = len(keys) * (len(keys) - 1) // 2
    if total_pairs <= sample:
        pairs = [(keys[i], keys[j]) for i in range(len(keys)) for j in range(i + 1, len(keys))]
    else:
        rng = random.Random(seed)
        while len(pairs) < sample:
            i, j = rng.sample(range(len(keys)), 2)
            pairs.append((keys[i], keys[j]))
    counts: Counter = Counter()
    violations = 0
    for a, b in pairs:
        c = intersection_count(a, b)
        counts["inf" if c is None else c] += 1
        if c is None or c > 2:
            violations += 1
    return {
        "metric": family.metric,
        "pairs_checked": len(pairs),
        "intersection_histogram": {str(k): v for k, v in sorted(counts.items(), key=lambda kv: str(kv[0]))},
        "max_intersections": max((k for k in counts if k != "inf"), default=0),
        "violations": violations,
        "holds": violations == 0,
    }


# -- incidence bound ratio --------------------------------------------------

def incidence_bound(k: int, pi: int, gamma: int, precision: int = DEFAULT_PRECISION) -> IntervalValue:
    """k^(1/3)|Pi|^(2/3)|G|^(2/3) + k^(2/11)|Pi|^(6/11)|G|^(9/11) ln^(2/11)|G| + k|Pi| + |G|."""
    iv = lambda v: IntervalValue.exact(v, precision)  # noqa: E731
    t1 = iv(k).rational_power(Fraction(1, 3)) * iv(pi).rational_power(Fraction(2, 3)) \
        * iv(gamma).rational_power(Fraction(2, 3))
    t2 = iv(0)
    if gamma >= 1:
        t2 = iv(k).rational_power(Fraction(2, 11)) * iv(pi).rational_power(Fraction(6, 11)) \
            * iv(gamma).rational_power(Fraction(9, 11)) \
            * log_interval(gamma, precision).rational_power(Fraction(2, 11))
    return t1 + t2 + iv(k * pi) + iv(gamma)


def incidence_ratio_report(A: PointSet, P: PointSet, family: CurveFamily,
                           precision: int = DEFAULT_PRECISION) -> dict:
    """Measured I(Pi, Gamma) against the multiplicity-aware incidence bound.

    The bound's constant is unspecified, so this only reports the ratio.
    """
    measured = incidences(A, family)
    m = len(A)
    pi, gamma, k = m * m, family.size, family.k_max
    report = {
        "metric": family.metric,
        "n": len(P),
        "m": m,
        "pi": pi,
        "gamma": gamma,
        "k": k,
        "incidences": measured,
        "log": "natural",
    }
    if gamma == 0:
        report.update(bound=None, ratio=None, note="vacuous: every pair is degenerate, family is empty")
        return report
    bound = incidence_bound(k, pi, gamma, precision)
    ratio = IntervalValue.exact(measured, precision) / bound
    report.update(bound=bound.as_strs(12), ratio=ratio.as_strs(12), note=None)
    return report
