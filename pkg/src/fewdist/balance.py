"""Monomial bookkeeping in m and n, polylog factors suppressed.

Used to redo the final exponent arithmetic: substitute the multiplicity bound
into the incidence bound, drop dominated terms, and solve m^2 n = term for
m = n^e.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class BalanceError(ValueError):
    pass


@dataclass(frozen=True)
class PowerTerm:
    """coefficient-free monomial m^m_exp n^n_exp; ``tag`` records hidden factors."""

    m_exp: Fraction
    n_exp: Fraction
    tag: str = "O*"

    def __post_init__(self):
        object.__setattr__(self, "m_exp", Fraction(self.m_exp))
        object.__setattr__(self, "n_exp", Fraction(self.n_exp))

    def __mul__(self, other: "PowerTerm") -> "PowerTerm":
        return PowerTerm(self.m_exp + other.m_exp, self.n_exp + other.n_exp, self.tag)

    def __pow__(self, e) -> "PowerTerm":
        e = Fraction(e)
        return PowerTerm(self.m_exp * e, self.n_exp * e, self.tag)

    def __truediv__(self, other: "PowerTerm") -> "PowerTerm":
        return self * other ** -1

    def dominates(self, other: "PowerTerm") -> bool:
        """self >= other for every 1 <= m <= n (checked at the endpoints in log scale)."""
        q = self / other
        return q.n_exp >= 0 and q.m_exp + q.n_exp >= 0

    def __str__(self) -> str:
        return f"m^{self.m_exp} n^{self.n_exp}"


ONE = PowerTerm(0, 0)
M = PowerTerm(1, 0)
N = PowerTerm(0, 1)


def solve_exponent(lhs: PowerTerm, term: PowerTerm) -> Fraction:
    """e such that lhs = term when m = n^e."""
    dm = lhs.m_exp - term.m_exp
    if dm == 0:
        raise BalanceError(f"cannot solve {lhs} = {term} for m: equal m-exponents")
    return (term.n_exp - lhs.n_exp) / dm


def balance_exponents(lhs: PowerTerm, terms) -> Fraction:
    """Largest e over terms, where lhs = term at m = n^e; m = O*(n^e) overall."""
    terms = list(terms)
    if not terms:
        raise BalanceError("no terms to balance against")
    return max(solve_exponent(lhs, t) for t in terms)


def per_term_exponents(lhs: PowerTerm, terms) -> list[Fraction]:
    return [solve_exponent(lhs, t) for t in terms]


def prune_dominated(terms) -> list[PowerTerm]:
    """Drop terms dominated by another term over 1 <= m <= n (first of equals kept)."""
    terms = list(terms)
    keep = []
    for i, t in enumerate(terms):
        if any(j != i and o.dominates(t) and not (t.dominates(o) and j > i) for j, o in enumerate(terms)):
            continue
        keep.append(t)
    return keep


def incidence_bound_terms(k: PowerTerm, pi: PowerTerm, gamma: PowerTerm) -> list[PowerTerm]:
    """k^(1/3) Pi^(2/3) G^(2/3), k^(2/11) Pi^(6/11) G^(9/11), k Pi, G (logs dropped)."""
    return [
        k ** Fraction(1, 3) * pi ** Fraction(2, 3) * gamma ** Fraction(2, 3),
        k ** Fraction(2, 11) * pi ** Fraction(6, 11) * gamma ** Fraction(9, 11),
        k * pi,
        gamma,
    ]


def multiplicity_bound(diff_bound: PowerTerm, sum_bound: PowerTerm) -> PowerTerm:
    """|B| from |U-U|^5 |f(U)+V|^6 >~ |U|^11 |V|^3 with |U| = m and V of size |B|.

    For Euclidean distances |U-U| is |A-A| and |f(U)+V| is |A^2+B^2|; for
    rectangular ones R(A) >= |A0-A0|/2 and R(A,B) >= |f(A0)-f(B0)|.  Either
    way both are bounded by powers of n, and k <= 2|B|.
    """
    return (diff_bound ** 5 * sum_bound ** 6 / M ** 11) ** Fraction(1, 3)


@dataclass
class Derivation:
    metric: str
    k: PowerTerm
    terms: list
    kept: list
    exponents: list
    exponent: Fraction

    def to_json(self) -> dict:
        return {
            "metric": self.metric,
            "k": str(self.k),
            "terms": [str(t) for t in self.terms],
            "kept": [str(t) for t in self.kept],
            "per_term": [str(e) for e in self.exponents],
            "exponent": str(self.exponent),
        }


def derive_line_exponent(metric: str = "euclidean") -> Derivation:
    """Redo the end of either proof symbolically and return the final exponent.

    Both metrics bound the difference and sum/image sets by O(n), take
    |Pi| <= m^2 and |Gamma| <= n^2, and balance against |Q2| >= m^2 n.
    """
    if metric not in ("euclidean", "rectangular"):
        raise BalanceError(f"unknown metric {metric!r}")
    # |A-A| <= 2 D(A) = O(n) and |A^2+B^2| = O(n); resp. R(A), R(A,B) <= R(P) = O(n)
    k = multiplicity_bound(N, N)
    terms = incidence_bound_terms(k, M ** 2, N ** 2)
    kept = prune_dominated(terms)
    lhs = M ** 2 * N
    exps = per_term_exponents(lhs, kept)
    return Derivation(metric, k, terms, kept, exps, max(exps))
