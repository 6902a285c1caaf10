"""Random (A, P) instances with A on the normalized line, shared by several test files."""

import random
from fractions import Fraction

from fewdist import PointSet


def line_instance(rng: random.Random, metric: str, m: int, n: int, kappa=None, bound: int = 20):
    """A: m points on y = 0 (euclidean) or y = kappa x (rectangular); P: A plus n - m others.

    Coordinates are integers in [-bound, bound]; for a non-integral kappa the
    line points use x-multiples of its denominator so they stay integral.
    """
    if metric == "euclidean":
        xs = rng.sample(range(-bound, bound + 1), m)
        A = [(x, 0) for x in xs]
    else:
        kappa = Fraction(kappa)
        step = kappa.denominator
        cand = [x for x in range(-bound, bound + 1, 1) if x % step == 0 and abs(kappa * x) <= bound]
        xs = rng.sample(cand, min(m, len(cand)))
        A = [(x, int(kappa * x)) for x in xs]
    on_line = set(A)
    others = set()
    while len(others) < n - len(A):
        p = (rng.randint(-bound, bound), rng.randint(-bound, bound))
        if p in on_line:
            continue
        if metric == "euclidean" and p[1] == 0:
            continue
        if metric != "euclidean" and p[1] == kappa * p[0]:
            continue
        others.add(p)
    return PointSet(A), PointSet(A + sorted(others))


def random_instances(seed: int, count: int, metric: str, kappas=(1, Fraction(1, 2), -3),
                     m_range=(2, 15), n_max=40):
    rng = random.Random(seed)
    for i in range(count):
        kappa = None if metric == "euclidean" else kappas[i % len(kappas)]
        m = rng.randint(*m_range)
        n = rng.randint(m, n_max)
        A, P = line_instance(rng, metric, m, n, kappa)
        yield A, P, kappa
