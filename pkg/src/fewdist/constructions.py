"""Point-set generators: lattices, a rich line plus bulk, and uniform random sets.

Every generator is deterministic for fixed arguments.  Random ones use
``random.Random(seed)`` (Mersenne Twister) and record the seed in ``meta``.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .exact import CanonicalLine, Point, PointSet
from .intervals import floor_rational_power

PRNG_NAME = "python-random-mt19937"


class InfeasibleError(ValueError):
    """Raised when a generator cannot satisfy its size/bound constraints."""


def grid(a: int, b: int) -> PointSet:
    """The integer lattice {0..a-1} x {0..b-1}."""
    if a < 1 or b < 1:
        raise ValueError(f"grid dimensions must be positive, got {a} x {b}")
    return PointSet(
        ((x, y) for x in range(a) for y in range(b)),
        meta={"generator": "grid", "dims": [a, b]},
    )


def unbalanced_dims(n: int, eps) -> tuple[int, int]:
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    if n < 1:
        raise ValueError("n must be positive")
    return floor_rational_power(n, 1 - eps), floor_rational_power(n, eps)


def unbalanced_lattice(n: int, eps) -> PointSet:
    """{1..floor(n^(1-eps))} x {1..floor(n^eps)}.

    The dimensions are rounded down, so the set can have fewer than n points;
    the actual dimensions are stored in ``meta["dims"]``.
    """
    wide, tall = unbalanced_dims(n, eps)
    if wide * tall < 1:
        raise InfeasibleError(f"degenerate unbalanced lattice for n={n}, eps={eps}")
    return PointSet(
        ((x, y) for x in range(1, wide + 1) for y in range(1, tall + 1)),
        meta={"generator": "unbalanced", "n": n, "eps": str(Fraction(eps)), "dims": [wide, tall]},
    )


def _box_points(bound: int):
    for x in range(-bound, bound + 1):
        for y in range(-bound, bound + 1):
            yield x, y


def integer_points_on_line(line: CanonicalLine, bound: int) -> list[Point]:
    """Integer points of ``line`` inside [-bound, bound]^2, in lexicographic order."""
    pts = []
    if line.b == 0:
        if line.c % line.a == 0 and abs(line.c // line.a) <= bound:
            x = line.c // line.a
            pts = [Point(x, y) for y in range(-bound, bound + 1)]
        return pts
    for x in range(-bound, bound + 1):
        num = line.c - line.a * x
        if num % line.b == 0 and abs(num // line.b) <= bound:
            pts.append(Point(x, num // line.b))
    return pts


def line_plus_bulk(line: CanonicalLine, m: int, n: int, seed: int, coord_bound: int) -> PointSet:
    """n distinct integer points in the box, exactly m of them on ``line``."""
    if m < 1:
        raise ValueError("m must be at least 1: the on-line set A may not be empty")
    if m > n:
        raise ValueError(f"m={m} exceeds n={n}")
    on_line = integer_points_on_line(line, coord_bound)
    if len(on_line) < m:
        raise InfeasibleError(
            f"{line} has only {len(on_line)} integer points within bound {coord_bound}, need {m}"
        )
    side = 2 * coord_bound + 1
    off_capacity = side * side - len(on_line)
    if off_capacity < n - m:
        raise InfeasibleError(f"box of bound {coord_bound} cannot hold {n - m} off-line points")
    rng = random.Random(seed)
    chosen = rng.sample(on_line, m)
    taken = set(chosen)
    bulk = []
    if n - m > off_capacity // 2:
        pool = [Point(x, y) for x, y in _box_points(coord_bound) if not line.contains(Point(x, y))]
        bulk = rng.sample(pool, n - m)
    else:
        while len(bulk) < n - m:
            p = Point(rng.randint(-coord_bound, coord_bound), rng.randint(-coord_bound, coord_bound))
            if p in taken or line.contains(p):
                continue
            taken.add(p)
            bulk.append(p)
    return PointSet(
        chosen + bulk,
        meta={
            "generator": "line_plus_bulk",
            "line": [line.a, line.b, line.c],
            "m": m,
            "n": n,
            "seed": seed,
            "coord_bound": coord_bound,
            "prng": PRNG_NAME,
        },
    )


def random_set(n: int, coord_bound: int, seed: int) -> PointSet:
    """n distinct integer points drawn uniformly from [-coord_bound, coord_bound]^2."""
    side = 2 * coord_bound + 1
    if n < 1:
        raise ValueError("n must be positive")
    if side * side < n:
        raise InfeasibleError(f"cannot place {n} distinct points in a box of {side * side} cells")
    rng = random.Random(seed)
    cells = rng.sample(range(side * side), n)
    return PointSet(
        ((c // side - coord_bound, c % side - coord_bound) for c in cells),
        meta={"generator": "random", "n": n, "coord_bound": coord_bound, "seed": seed, "prng": PRNG_NAME},
    )
