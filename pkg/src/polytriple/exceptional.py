"""Exceptional square classes ``lCoeff*n + shift = t*r^2``.

A missed ``n`` can only come from targets of the form ``t * r^2`` with ``t`` a
squarefree divisor of the level. This module tests membership and records
which congruence arguments rule a class out for every ``n``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import gcd, isqrt, prod

from .arith import factorization, odd_part, padic_order, small_prime_factors
from .errors import DomainError
from .localfield import quadratic_residue_symbol
from .polynum import TripleInvariants, _as_triple, target_number

__all__ = [
    "ExceptionalWitness",
    "SquareClassExclusion",
    "squarefree_divisors",
    "exceptional_membership",
    "exceptional_union",
    "square_class_exclusion",
    "ALWAYS",
    "ON_CLASS",
    "NEVER",
]

ALWAYS = "always"
ON_CLASS = "on-class"
NEVER = "never"


@dataclass(frozen=True)
class ExceptionalWitness:
    """``target == t * r**2`` with ``t`` squarefree and dividing the level."""

    t: int
    r: int

    def to_dict(self) -> dict:
        return {"t": self.t, "r": self.r}

    @classmethod
    def from_dict(cls, data: dict) -> "ExceptionalWitness":
        return cls(int(data["t"]), int(data["r"]))


def squarefree_divisors(N: int) -> list[int]:
    """All squarefree positive divisors of ``N``, ascending."""
    if N < 1:
        raise DomainError(f"need N >= 1, got {N}")
    primes = list(factorization(N))
    out = [prod(c) for k in range(len(primes) + 1) for c in combinations(primes, k)]
    return sorted(out)


def _is_squarefree(n: int) -> bool:
    return n >= 1 and all(e == 1 for e in factorization(n).values())


def exceptional_membership(t: TripleInvariants, t_div: int, n: int) -> ExceptionalWitness | None:
    """Witness ``r`` with ``target_number(t, n) == t_div * r**2``, if one exists."""
    t = _as_triple(t)
    if not _is_squarefree(t_div) or t.level % t_div:
        raise DomainError(f"{t_div} is not a squarefree divisor of the level {t.level}")
    target = target_number(t, n)
    q, rem = divmod(target, t_div)
    if rem:
        return None
    r = isqrt(q)
    if r * r != q:
        return None
    witness = ExceptionalWitness(t_div, r)
    assert t_div * r * r == target
    return witness


def exceptional_union(t: TripleInvariants, n: int, divisors: list[int] | None = None) -> list[ExceptionalWitness]:
    """Witnesses over every squarefree divisor of the level (or ``divisors``)."""
    t = _as_triple(t)
    if divisors is None:
        divisors = squarefree_divisors(t.level)
    found = (exceptional_membership(t, d, n) for d in divisors)
    return [w for w in found if w is not None]


@dataclass(frozen=True)
class SquareClassExclusion:
    """Which exceptional classes are empty for every ``n``, and why.

    ``mod3_excludes_squares`` is ``"always"``, ``"on-class"`` (only for
    ``n = mod3_class (mod 3)``) or ``"never"``.
    """

    odd_primes_clean: bool
    mod3_excludes_squares: str
    mod3_class: int | None
    ord2_excludes_2r2: bool
    details: dict = field(default_factory=dict)

    @property
    def excludes_squares(self) -> bool:
        return self.mod3_excludes_squares == ALWAYS or bool(self.details.get("nonresidue_primes_squares"))

    @property
    def excludes_twice_squares(self) -> bool:
        return self.ord2_excludes_2r2 or bool(self.details.get("nonresidue_primes_twice_squares"))


def _pairwise_gcds_powers_of_two(factors) -> bool:
    for x, y in combinations(factors, 2):
        g = gcd(x, y)
        if g & (g - 1):
            return False
    return True


def square_class_exclusion(t: TripleInvariants) -> SquareClassExclusion:
    """Congruence reasons that ``target`` is never ``r^2`` or ``2 r^2``.

    Only three arguments are tried: odd primes of the level never dividing the
    target, the target's class mod 3, and a constant even 2-adic order.
    Targets that are a constant non-residue modulo an odd prime of the level
    are listed in ``details`` as well (primes below 10**6 only).
    """
    t = _as_triple(t)
    a, b, c = t.triple
    fa, fb, fc = t.factors
    # no odd prime of the level divides shift iff the gcd with its odd part is 1
    clean = _pairwise_gcds_powers_of_two(t.factors) and gcd(t.shift, odd_part(t.level)) == 1
    odd_level_primes = [p for p in small_prime_factors(t.level) if p != 2]

    # target mod 3 has period 3 in n
    residues = [target_number(t, r) % 3 for r in range(3)]
    mod3_class = None
    if all(x == 2 for x in residues):
        mod3 = ALWAYS
    elif a % 3 == b % 3 == c % 3 != 2 and residues[(a + 1) % 3] == 2:
        mod3, mod3_class = ON_CLASS, (a + 1) % 3
    else:
        mod3 = NEVER

    e_l, e_s = padic_order(t.l_coeff, 2), padic_order(t.shift, 2)
    ord2 = e_s < e_l and e_s % 2 == 0

    # on odd p | level with p | lCoeff the target is constant mod p
    nr_sq, nr_2sq = [], []
    for p in odd_level_primes:
        sym = quadratic_residue_symbol(t.shift, p)
        if sym == -1:
            nr_sq.append(p)
        if sym != 0 and quadratic_residue_symbol(2 * t.shift, p) == -1:
            nr_2sq.append(p)
    details = {
        "mod3_residues_by_class": residues,
        "ord2_lcoeff": int(e_l),
        "ord2_shift": None if e_s == float("inf") else int(e_s),
        "nonresidue_primes_squares": nr_sq,
        "nonresidue_primes_twice_squares": nr_2sq,
    }
    return SquareClassExclusion(clean, mod3, mod3_class, ord2, details)
