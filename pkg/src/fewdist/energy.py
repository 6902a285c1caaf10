"""Representation functions, E_k energies and the sum-product inequality checks.

Integer-exponent energies are exact integers.  Fractional ones (E_1.5 above
all) are ``IntervalValue`` enclosures built term by term from integer roots,
and every inequality that involves them is decided by certified comparison
with adaptive precision: it either HOLDS, is certifiably VIOLATED, or stays
UNDECIDED at the precision cap.
"""

from __future__ import annotations

import hashlib
import json
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .exact import Scalar, scalar, scalar_str
from .intervals import DEFAULT_PRECISION, PRECISION_CAP, IntervalValue, log_interval, power_bounds

HOLDS = "HOLDS"
UNDECIDED = "UNDECIDED"
VIOLATED = "VIOLATED"
MEASURED = "MEASURED"


def _as_set(values: Iterable) -> frozenset:
    return frozenset(scalar(v) for v in values)


def instance_digest(*parts) -> str:
    """Short stable digest of a check's inputs."""
    def enc(v):
        if isinstance(v, ConvexFn):
            return v.describe()
        if isinstance(v, (set, frozenset)):
            return sorted(scalar_str(x) for x in v)
        if isinstance(v, (list, tuple)):
            return [enc(x) for x in v]
        if isinstance(v, (int, Fraction)):
            return scalar_str(v)
        return v

    blob = json.dumps([enc(p) for p in parts], sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


# -- representation functions and energies ------------------------------------

@dataclass
class RepProfile:
    A: frozenset
    B: frozenset
    rep: dict = field(repr=False)

    @property
    def support(self) -> frozenset:
        return frozenset(self.rep)

    def at_least(self, t) -> list[Scalar]:
        return sorted(x for x, r in self.rep.items() if r >= t)

    def to_json(self) -> dict:
        return {"rep": [[scalar_str(x), r] for x, r in sorted(self.rep.items())]}


def rep_function(A, B=None) -> RepProfile:
    """r_{A-B}(x) = |{(a, b) in A x B : a - b = x}|."""
    A = _as_set(A)
    B = A if B is None else _as_set(B)
    if not A or not B:
        raise ValueError("representation function needs nonempty sets")
    rep = Counter(a - b for a in A for b in B)
    return RepProfile(A, B, dict(rep))


def difference_set(A, B=None) -> frozenset:
    A = _as_set(A)
    B = A if B is None else _as_set(B)
    return frozenset(a - b for a in A for b in B)


def energy(A, B=None, k=2, precision: int = DEFAULT_PRECISION):
    """E_k(A, B) = sum_x r_{A-B}(x)^k.

    Returns an int for integer k and an ``IntervalValue`` otherwise.
    """
    k = Fraction(k)
    if k <= 0:
        raise ValueError("energy exponent must be positive")
    rep = rep_function(A, B).rep
    if k.denominator == 1:
        e = k.numerator
        return sum(r ** e for r in rep.values())
    lo = hi = Fraction(0)
    for r, mult in Counter(rep.values()).items():
        a, b = power_bounds(Fraction(r), k, precision + 8)
        lo += mult * a
        hi += mult * b
    return IntervalValue._outward(lo, hi, precision)


# -- convex functions -------------------------------------------------------

@dataclass(frozen=True)
class ConvexFn:
    """f(x) = kappa x^2 - c x + d, with kappa != 0 (strictly convex or concave).

    ``square()`` is x^2; ``quad(kappa, c)`` is kappa x^2 - c x.
    """

    kappa: Scalar = 1
    c: Scalar = 0
    d: Scalar = 0
    tag: str = "square"

    def __post_init__(self):
        for name in ("kappa", "c", "d"):
            object.__setattr__(self, name, scalar(getattr(self, name)))
        if self.kappa == 0:
            raise ValueError("degenerate function: kappa = 0 is affine, not strictly convex")

    @classmethod
    def square(cls) -> "ConvexFn":
        return cls(1, 0, 0, "square")

    @classmethod
    def quad(cls, kappa, c) -> "ConvexFn":
        return cls(kappa, c, 0, "quad")

    @classmethod
    def quadratic(cls, a, b, c0=0) -> "ConvexFn":
        """Hook for an arbitrary exact quadratic a x^2 + b x + c0."""
        return cls(a, -scalar(b), c0, "quadratic")

    def __call__(self, x) -> Scalar:
        return self.kappa * x * x - self.c * x + self.d

    def describe(self) -> str:
        if self.tag == "square":
            return "x^2"
        return f"{scalar_str(self.kappa)}*x^2 - {scalar_str(self.c)}*x + {scalar_str(self.d)}"


def sumset_image(f: ConvexFn, U, V, op: str = "plus") -> frozenset:
    """f(U) + V or f(U) - V as an exact set."""
    fu = {f(u) for u in _as_set(U)}
    V = _as_set(V)
    if op == "plus":
        return frozenset(a + v for a in fu for v in V)
    if op == "minus":
        return frozenset(a - v for a in fu for v in V)
    raise ValueError(f"op must be 'plus' or 'minus', got {op!r}")


# -- certified comparison driver --------------------------------------------

def _certify(build, start_bits: int, cap: int):
    """Evaluate ``build(bits) -> (lhs, rhs)`` at doubling precision until decided."""
    bits = start_bits
    while True:
        lhs, rhs = build(bits)
        if lhs.certainly_le(rhs):
            return HOLDS, lhs, rhs, bits
        if lhs.certainly_gt(rhs):
            return VIOLATED, lhs, rhs, bits
        if bits >= cap:
            return UNDECIDED, lhs, rhs, bits
        bits = min(cap, bits * 2)


def _report(check: str, digest: str, lhs, rhs, verdict: str, bits, **extra) -> dict:
    def enc(v):
        if isinstance(v, IntervalValue):
            return v.as_strs()
        if isinstance(v, int):
            return [str(v), str(v)]
        return v

    out = {
        "check": check,
        "instance_digest": digest,
        "lhs": enc(lhs),
        "rhs": enc(rhs),
        "verdict": verdict,
        "precision_bits": bits,
    }
    out.update(extra)
    return out


def li_inequality_check(A, B, precision: int = DEFAULT_PRECISION, cap: int = PRECISION_CAP) -> dict:
    """E_1.5(A)^2 |B|^2 <= E_3(A)^(2/3) E_3(B)^(1/3) E(A, A - B), certified."""
    A, B = _as_set(A), _as_set(B)
    if not A or not B:
        raise ValueError("Li inequality needs nonempty sets")
    e3a = energy(A, k=3)
    e3b = energy(B, k=3)
    e_mixed = energy(A, difference_set(A, B), k=2)
    cube = e3a * e3a * e3b

    def build(bits):
        e15 = energy(A, k=Fraction(3, 2), precision=bits)
        lhs = e15 * e15 * (len(B) ** 2)
        rhs = IntervalValue.exact(cube, bits).rational_power(Fraction(1, 3)) * e_mixed
        return lhs, rhs

    verdict, lhs, rhs, bits = _certify(build, precision, cap)
    return _report(
        "li_inequality", instance_digest(A, B), lhs, rhs, verdict, bits,
        e3_a=e3a, e3_b=e3b, e_a_amb=e_mixed,
    )


def holder_chain_check(U, precision: int = DEFAULT_PRECISION, cap: int = PRECISION_CAP) -> dict:
    """|U|^8 <= E_3(U) E(U, U-U) |U-U| exactly, and |U|^6 <= E_1.5(U)^2 |U-U| certified."""
    U = _as_set(U)
    if not U:
        raise ValueError("Holder chain needs a nonempty set")
    n = len(U)
    dd = difference_set(U)
    e3 = energy(U, k=3)
    e_udd = energy(U, dd, k=2)
    lhs = n ** 8
    rhs = e3 * e_udd * len(dd)
    integer_verdict = HOLDS if lhs <= rhs else VIOLATED

    def build(bits):
        e15 = energy(U, k=Fraction(3, 2), precision=bits)
        return IntervalValue.exact(n ** 6, bits), e15 * e15 * len(dd)

    holder_verdict, h_lhs, h_rhs, bits = _certify(build, precision, cap)
    # the integer chain decides alone; the certified step can only downgrade it
    verdict = integer_verdict
    if VIOLATED in (integer_verdict, holder_verdict):
        verdict = VIOLATED
    elif holder_verdict == UNDECIDED:
        verdict = UNDECIDED
    return _report(
        "holder_chain", instance_digest(U), lhs, rhs, verdict, bits,
        integer_verdict=integer_verdict,
        slack=str(Fraction(rhs, lhs)),
        slack_float=float(Fraction(rhs, lhs)),
        holder={"lhs": h_lhs.as_strs(), "rhs": h_rhs.as_strs(), "verdict": holder_verdict},
    )


# -- the curve family l_{s,b}: y = -f(x + b) + s ------------------------------

@dataclass
class ConvexCurveFamily:
    f: ConvexFn
    shifts: frozenset  # f(A) + C
    B: frozenset
    curves: list = field(repr=False)  # sorted (s, b)

    @property
    def size(self) -> int:
        return len(self.curves)

    def y(self, curve, x) -> Scalar:
        s, b = curve
        return s - self.f(x + b)

    def through(self, x, y) -> int:
        """Number of curves containing (x, y)."""
        return sum(1 for b in self.B if y + self.f(x + b) in self.shifts)


def convex_curve_family(f: ConvexFn, A, B, C) -> ConvexCurveFamily:
    shifts = sumset_image(f, A, C, "plus")
    B = _as_set(B)
    curves = sorted((s, b) for s in shifts for b in B)
    return ConvexCurveFamily(f, shifts, B, curves)


def curve_difference(L: ConvexCurveFamily, c1, c2):
    """(slope, intercept) of h(x) = f(x + b') - f(x + b) + s - s', with c1 = (s, b), c2 = (s', b').

    Read off from h(0) and h(1); h(2) confirms h is affine.
    """
    (s, b), (s2, b2) = c1, c2
    f = L.f

    def h(x):
        return f(x + b2) - f(x + b) + s - s2

    h0, h1, h2 = h(0), h(1), h(2)
    if h2 - h1 != h1 - h0:
        raise ValueError("h is not affine; only quadratic f are supported")
    return h1 - h0, h0


def curve_intersection(L: ConvexCurveFamily, c1, c2):
    """Common points of two distinct curves: [] or [(x, y)]."""
    slope, intercept = curve_difference(L, c1, c2)
    if slope == 0:
        if intercept == 0:
            raise ValueError("identical curves")
        return []
    x = scalar(Fraction(-intercept) / slope)
    return [(x, L.y(c1, x))]


def pseudoline_check(L: ConvexCurveFamily, sample: int | None = None, seed: int = 0) -> dict:
    """Every checked pair of distinct curves meets in at most one point."""

    curves = L.curves
    n = len(curves)
    if sample is None or n * (n - 1) // 2 <= sample:
        pairs = [(curves[i], curves[j]) for i in range(n) for j in range(i + 1, n)]
    else:
        rng = random.Random(seed)
        pairs = []
        while len(pairs) < sample:
            i, j = rng.sample(range(n), 2)
            pairs.append((curves[i], curves[j]))
    worst = 0
    disjoint_same_b = 0
    violations = 0
    for c1, c2 in pairs:
        slope, intercept = curve_difference(L, c1, c2)
        roots = 0 if slope == 0 else 1
        if slope == 0 and intercept == 0:
            violations += 1
        if c1[1] == c2[1] and roots:
            violations += 1
        if c1[1] == c2[1]:
            disjoint_same_b += 1
        worst = max(worst, roots)
    return {
        "check": "pseudoline",
        "function": L.f.describe(),
        "curves": n,
        "pairs_checked": len(pairs),
        "same_b_pairs": disjoint_same_b,
        "max_intersections": worst,
        "violations": violations,
        "verdict": HOLDS if violations == 0 and worst <= 1 else VIOLATED,
    }


def rich_points(L: ConvexCurveFamily, t: int) -> dict:
    """P_t: every point on at least t curves, mapped to its exact curve count."""
    if t < 2:
        raise ValueError("t must be at least 2")
    if t > L.size:
        return {}
    by_b: dict = {}
    for s, b in L.curves:
        by_b.setdefault(b, []).append(s)
    bs = sorted(by_b)
    f = L.f
    # a curve with shift b through (x, y) has s = y + f(x + b), so it is unique
    # per b; the incidence count of a point is the number of b's meeting there
    seen: dict = {}
    for i, b in enumerate(bs):
        for b2 in bs[i + 1:]:
            # h(x) = f(x + b2) - f(x + b) + s - s2 is affine in x with slope fixed by (b, b2)
            base0 = f(b2) - f(b)
            slope = Fraction((f(1 + b2) - f(1 + b)) - base0)
            for s in by_b[b]:
                for s2 in by_b[b2]:
                    x = (s2 - s - base0) / slope
                    pt = (scalar(x), scalar(s - f(x + b)))
                    bset = seen.get(pt)
                    if bset is None:
                        seen[pt] = {b, b2}
                    else:
                        bset.add(b)
                        bset.add(b2)
    return {pt: len(bset) for pt, bset in seen.items() if len(bset) >= t}


def rich_containment_check(f: ConvexFn, A, B, C, t: int) -> dict:
    """|C| * |{x : r_{A-B}(x) >= t}| <= |P_t| exactly, with (x, c) in P_t for each such x, c."""
    A, B, C = _as_set(A), _as_set(B), _as_set(C)
    if not 2 <= t <= min(len(A), len(B)):
        raise ValueError(f"t must lie in [2, min(|A|, |B|)] = [2, {min(len(A), len(B))}]")
    L = convex_curve_family(f, A, B, C)
    pt = rich_points(L, t)
    rich_x = rep_function(A, B).at_least(t)
    lhs = len(C) * len(rich_x)
    rhs = len(pt)
    witnesses_ok = all((x, c) in pt for x in rich_x for c in C)
    verdict = HOLDS if lhs <= rhs and witnesses_ok else VIOLATED
    return _report(
        "rich_containment", instance_digest(f, A, B, C, t), lhs, rhs, verdict, None,
        t=t,
        curves=L.size,
        witnesses_in_pt=witnesses_ok,
        # measured constant of |P_t| = O(|L|^2 / t^3)
        st_ratio=float(Fraction(rhs * t ** 3, L.size ** 2)) if L.size else None,
    )


# -- dyadic decomposition -----------------------------------------------------

def _dyadic_bands(rep_values, delta_sq: Fraction, top: int) -> tuple[int, list[int]]:
    """Split sum r^2 (delta) into r < delta and bands 2^j delta <= r < 2^(j+1) delta, j=0..J.

    J = floor(log2(top / delta)), compared exactly through squares.
    """
    low = sum(r * r for r in rep_values if r * r < delta_sq)
    bands = []
    j = 0
    while 4 ** j * delta_sq <= top * top:
        lo_sq, hi_sq = 4 ** j * delta_sq, 4 ** (j + 1) * delta_sq
        bands.append(sum(r * r for r in rep_values if lo_sq <= r * r < hi_sq))
        j += 1
    return low, bands


def dyadic_decomposition_check(A, F=None, delta=None, f: ConvexFn | None = None, C=None,
                               precision: int = DEFAULT_PRECISION) -> dict:
    """Exact re-summation of E_3(A) over dyadic bands, and of E(A, F) split at delta.

    With ``f`` and ``C`` the balancing threshold
    delta* = |f(A)+C| |F|^(1/2) / (|A|^(1/2) |C|^(1/2)) is enclosed, checked to
    be >= 1 and used as the split when ``delta`` is not given.
    """
    A = _as_set(A)
    rep = rep_function(A).rep
    e3 = sum(r ** 3 for r in rep.values())
    bands3 = []
    j = 0
    while 2 ** j <= len(A):
        bands3.append(sum(r ** 3 for r in rep.values() if 2 ** j <= r < 2 ** (j + 1)))
        j += 1
    out = {
        "check": "dyadic_decomposition",
        "instance_digest": instance_digest(A, F or (), f, C or ()),
        "e3": e3,
        "e3_bands": bands3,
        "e3_identity": sum(bands3) == e3,
    }
    ok = out["e3_identity"]
    if F is not None:
        F = _as_set(F)
        delta_star_sq = None
        if f is not None and C is not None:
            C = _as_set(C)
            size = len(sumset_image(f, A, C))
            delta_star_sq = Fraction(size * size * len(F), len(A) * len(C))
            star = IntervalValue.exact(delta_star_sq, precision).rational_power(Fraction(1, 2))
            out["delta_star"] = star.as_strs()
            out["delta_star_ge_1"] = delta_star_sq >= 1
            ok = ok and out["delta_star_ge_1"]
        if delta is not None:
            delta = Fraction(delta)
            if delta < 1:
                raise ValueError("delta must be at least 1")
            delta_sq = delta * delta
        elif delta_star_sq is not None:
            delta_sq = delta_star_sq
        else:
            delta_sq = Fraction(1)
        rep_f = rep_function(A, F).rep
        e_af = sum(r * r for r in rep_f.values())
        low, bands = _dyadic_bands(list(rep_f.values()), delta_sq, len(A))
        out.update(
            e_af=e_af,
            delta_sq=str(delta_sq),
            e_af_low=low,
            e_af_bands=bands,
            e_af_identity=low + sum(bands) == e_af,
        )
        ok = ok and out["e_af_identity"]
    out["verdict"] = HOLDS if ok else VIOLATED
    return out


# -- the unbalanced convexity estimate -----------------------------------------

def lr_ratio_report(f: ConvexFn, U, V, precision: int = DEFAULT_PRECISION) -> dict:
    """|U-U|^5 |f(U)+V|^6 against |U|^11 |V|^3 / ln^2 |U|; ratio only, no verdict."""
    U, V = _as_set(U), _as_set(V)
    if len(U) < 2 or not V:
        raise ValueError("need |U| >= 2 and V nonempty")
    dd = len(difference_set(U))
    image = len(sumset_image(f, U, V))
    lhs = dd ** 5 * image ** 6
    ln = log_interval(len(U), precision)
    rhs = IntervalValue.exact(len(U) ** 11 * len(V) ** 3, precision) / (ln * ln)
    ratio = IntervalValue.exact(lhs, precision) / rhs
    return _report(
        "lr_ratio", instance_digest(f, U, V), lhs, rhs, MEASURED, precision,
        ratio=ratio.as_strs(12),
        ratio_float=ratio.midpoint(),
        u=len(U),
        v=len(V),
        diff_set=dd,
        image=image,
        log="natural",
    )
