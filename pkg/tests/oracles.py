"""Brute-force reference computations, written independently of the package.

Nothing here imports fewdist; points are plain (x, y) tuples of int/Fraction.
"""

from collections import Counter
from fractions import Fraction
from itertools import combinations, product


def d_euclid(p, q):
    return (p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2


def d_rect(p, q):
    return (p[0] - q[0]) * (p[1] - q[1])


def d_mink(p, q):
    return (p[0] - q[0]) ** 2 - (p[1] - q[1]) ** 2


DIST = {"euclidean": d_euclid, "rectangular": d_rect, "minkowski": d_mink}


def distinct_values(points, metric, include_zero):
    vals = {DIST[metric](p, q) for p, q in combinations(points, 2)}
    if not include_zero:
        vals.discard(0)
    return vals


def quadruples(A, P, metric, kappa=None):
    """(q_total, q1) by looping over all of A^2 x P^2."""
    dist = DIST[metric]
    if metric == "euclidean":
        def split(p):
            return p[1] ** 2
    else:
        def split(p):
            return (p[1] - kappa * p[0]) ** 2
    total = q1 = 0
    for a, b, p, q in product(A, A, P, P):
        if dist(p, a) == dist(q, b):
            total += 1
            if split(p) == split(q):
                q1 += 1
    return total, q1


def incidences_by_pairs(A, P, metric, kappa=None):
    """Count (s, t, p, q) with p, q non-degenerate directly from the curve equation.

    The curve through (p, q) is evaluated at every point of Pi = A0 x A0 using
    the defining relation dist(p, s) = dist(q, t) rewritten in line coordinates.
    """
    dist = DIST[metric]
    if metric == "euclidean":
        line_pts = [(x, Fraction(0)) for x in sorted({a[0] for a in A})]
        def split(p):
            return p[1] ** 2
    else:
        line_pts = [(x, kappa * x) for x in sorted({a[0] for a in A})]
        def split(p):
            return (p[1] - kappa * p[0]) ** 2
    count = 0
    for p, q in product(P, P):
        if split(p) == split(q):
            continue
        for s, t in product(line_pts, line_pts):
            if dist(p, s) == dist(q, t):
                count += 1
    return count


def rep(A, B):
    return Counter(a - b for a in A for b in B)


def energy2_brute(A):
    return sum(1 for a, b, c, d in product(A, repeat=4) if a - b == c - d)


def energy_k_brute(A, B, k):
    return sum(r ** k for r in rep(A, B).values())


def curve_points_brute(f, A, B, C, t):
    """P_t for l_{s,b}: y = s - f(x + b) by pairwise intersection enumeration."""
    shifts = sorted({f(a) + c for a in A for c in C})
    curves = [(s, b) for s in shifts for b in sorted(set(B))]
    points = set()
    for (s1, b1), (s2, b2) in combinations(curves, 2):
        # s1 - f(x+b1) = s2 - f(x+b2); f quadratic so scan via exact solve of affine h
        h0 = f(b2) - f(b1) + s1 - s2
        h1 = f(1 + b2) - f(1 + b1) + s1 - s2
        slope = h1 - h0
        if slope == 0:
            continue
        x = Fraction(-h0) / slope
        points.add((x, s1 - f(x + b1)))
    out = {}
    for x, y in points:
        c = sum(1 for s, b in curves if s - f(x + b) == y)
        if c >= t:
            out[(x, y)] = c
    return out


def richest_line_count(points):
    best = min(len(points), 1)
    for p, q in combinations(points, 2):
        c = sum(1 for r in points
                if (q[0] - p[0]) * (r[1] - p[1]) == (q[1] - p[1]) * (r[0] - p[0]))
        best = max(best, c)
    return best
