"""Local arithmetic at a place of Q.

Valuations, Legendre symbols, Hilbert and Hasse symbols, the isotropy test
for ternary diagonal forms, and the local questions about a polygonal triple
(anisotropic primes, divisibility of targets, residue obstructions).

The Hasse symbol is pinned to ``prod_{i<j} (d_i, d_j)_p``; with that choice a
ternary form is isotropic at ``p`` exactly when
``hasse_symbol == hilbert_symbol(-1, -d1*d2*d3, p)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import inf

import numpy as np

from . import oracles
from .arith import isprime, padic_order, prime_factors
from .errors import DomainError
from .polynum import TripleInvariants, _as_triple, eval_polygonal, target_number

__all__ = [
    "Place",
    "REAL",
    "PadicDiagForm",
    "padic_order",
    "quadratic_residue_symbol",
    "hilbert_symbol",
    "hasse_symbol",
    "is_isotropic_ternary",
    "anisotropic_primes",
    "DivisibilityProfile",
    "divisibility_profile",
    "local_coset_represents",
    "ResidueObstruction",
    "residue_obstruction",
    "polygonal_residues",
]


@dataclass(frozen=True)
class Place:
    """A place of Q: a finite prime, or the real place when ``prime is None``."""

    prime: int | None = None

    def __post_init__(self) -> None:
        if self.prime is not None:
            if not isprime(int(self.prime)):
                raise DomainError(f"{self.prime} is not prime")
            object.__setattr__(self, "prime", int(self.prime))

    @property
    def is_real(self) -> bool:
        return self.prime is None

    @classmethod
    def parse(cls, value) -> "Place":
        if isinstance(value, Place):
            return value
        if isinstance(value, str) and value.lower() in {"inf", "infinity", "real", "r", "oo"}:
            return REAL
        try:
            return cls(int(value))
        except (TypeError, ValueError) as exc:
            raise DomainError(f"cannot interpret {value!r} as a place") from exc

    def __str__(self) -> str:
        return "inf" if self.is_real else str(self.prime)


REAL = Place(None)


@dataclass(frozen=True)
class PadicDiagForm:
    """A non-singular diagonal ternary form ``<d1, d2, d3>`` at a finite prime."""

    prime: int
    entries: tuple[int, int, int]

    def __post_init__(self) -> None:
        place = Place.parse(self.prime)
        if place.is_real:
            raise DomainError("PadicDiagForm needs a finite prime")
        entries = tuple(int(d) for d in self.entries)
        if len(entries) != 3:
            raise DomainError("a ternary form has exactly three entries")
        if any(d == 0 for d in entries):
            raise DomainError("diagonal entries must be nonzero")
        object.__setattr__(self, "prime", place.prime)
        object.__setattr__(self, "entries", entries)

    @property
    def discriminant(self) -> int:
        d1, d2, d3 = self.entries
        return d1 * d2 * d3


def quadratic_residue_symbol(u: int, p: int) -> int:
    """Legendre symbol ``(u | p)`` for an odd prime ``p``."""
    if p == 2:
        raise DomainError("Legendre symbol needs an odd prime; use the 2-adic unit classes")
    if p < 2 or not isprime(p):
        raise DomainError(f"{p} is not prime")
    u %= p
    if u == 0:
        return 0
    return 1 if pow(u, (p - 1) // 2, p) == 1 else -1


def _square_class(x) -> int:
    """An integer in the same square class as the nonzero rational ``x``."""
    x = Fraction(x)
    if x == 0:
        raise DomainError("Hilbert symbol arguments must be nonzero")
    return x.numerator * x.denominator


def _split(x: int, p: int) -> tuple[int, int]:
    e = padic_order(x, p)
    return e, x // p**e


def hilbert_symbol(x, y, place) -> int:
    """Hilbert symbol ``(x, y)_v`` of nonzero rationals at ``place``."""
    place = Place.parse(place)
    x, y = _square_class(x), _square_class(y)
    if place.is_real:
        return -1 if x < 0 and y < 0 else 1
    p = place.prime
    a, u = _split(x, p)
    b, v = _split(y, p)
    if p == 2:
        eps_u, eps_v = ((u - 1) // 2) % 2, ((v - 1) // 2) % 2
        om_u, om_v = ((u * u - 1) // 8) % 2, ((v * v - 1) // 8) % 2
        return -1 if (eps_u * eps_v + a * om_v + b * om_u) % 2 else 1
    sign = -1 if (a * b * ((p - 1) // 2)) % 2 else 1
    lu = quadratic_residue_symbol(u, p) ** (b % 2)
    lv = quadratic_residue_symbol(v, p) ** (a % 2)
    return sign * lu * lv


def _form(f, p=None) -> PadicDiagForm:
    if isinstance(f, PadicDiagForm):
        return f
    return PadicDiagForm(p, tuple(f))


def hasse_symbol(f: PadicDiagForm) -> int:
    """``prod_{i<j} (d_i, d_j)_p``."""
    out = 1
    for di, dj in combinations(f.entries, 2):
        out *= hilbert_symbol(di, dj, f.prime)
    return out


def is_isotropic_ternary(f: PadicDiagForm, verify: bool = False) -> bool:
    """Whether ``f`` has a nontrivial zero over Q_p.

    With ``verify=True`` the answer is cross-checked against the modular
    search oracle and a mismatch raises ``AssertionError``.
    """
    iso = hasse_symbol(f) == hilbert_symbol(-1, -f.discriminant, f.prime)
    if verify:
        brute = oracles.isotropic_by_search(f.entries, f.prime)
        if brute != iso:
            raise AssertionError(f"isotropy mismatch for {f}: symbol {iso}, search {brute}")
    return iso


def anisotropic_primes(t: TripleInvariants) -> list[int]:
    """Primes at which ``<a-2, b-2, c-2>`` is anisotropic.

    Only divisors of ``2(a-2)(b-2)(c-2)`` can qualify; everywhere else the
    form is unimodular up to scaling and hence isotropic.
    """
    t = _as_triple(t)
    fa, fb, fc = t.factors
    candidates = prime_factors(2 * fa * fb * fc)
    return [p for p in candidates if not is_isotropic_ternary(PadicDiagForm(p, (fa, fb, fc)))]


@dataclass(frozen=True)
class DivisibilityProfile:
    """Observed and predicted ``p``-adic orders of ``lCoeff*n + shift``.

    ``bounded`` is exact: the order is constant (equal to ``ord_p(shift)``)
    when ``ord_p(shift) < ord_p(lCoeff)``, and unbounded otherwise.
    """

    prime: int
    n_max: int
    max_order: int | float
    bounded: bool
    constant_order: int | None
    anisotropic: bool


def divisibility_profile(
    t: TripleInvariants, p: int, n_max: int, strict: bool = True
) -> DivisibilityProfile:
    """Scan ``ord_p(target_number(t, n))`` for ``0 <= n <= n_max``.

    ``strict`` refuses primes where the form is isotropic, since the bound is
    only meaningful at anisotropic primes; pass ``strict=False`` to profile
    any prime.
    """
    t = _as_triple(t)
    place = Place.parse(p)
    if place.is_real:
        raise DomainError("divisibility profile needs a finite prime")
    p = place.prime
    aniso = p in anisotropic_primes(t)
    if strict and not aniso:
        raise DomainError(f"{p} is an isotropic prime for {t.original}")
    observed = max(padic_order(target_number(t, n), p) for n in range(int(n_max) + 1))
    e_l, e_s = padic_order(t.l_coeff, p), padic_order(t.shift, p)
    bounded = e_s < e_l
    return DivisibilityProfile(
        prime=p,
        n_max=int(n_max),
        max_order=observed,
        bounded=bounded,
        constant_order=int(e_s) if bounded else None,
        anisotropic=aniso,
    )


def _coset_residue_values(modulus_axis, residue, coeff, p, k):
    mod = p**k
    e = min(padic_order(modulus_axis, p), k)
    step = p**e
    us = np.arange(residue % step, mod, step, dtype=np.int64)
    return (coeff % mod) * (us * us % mod) % mod


def local_coset_represents(t: TripleInvariants, p: int, n: int, verify: bool = False) -> bool:
    """Is ``target_number(t, n)`` represented by the coset over Z_p?

    When one of ``a, b, c`` is not divisible by 4 every target is locally
    represented and that answer is returned directly unless ``verify`` is
    set. Otherwise coset vectors are searched modulo ``p^k`` with
    ``k = ord_p(target) + 3`` (``+ 5`` at ``p = 2``).
    """
    t = _as_triple(t)
    p = Place.parse(p).prime
    if p is None:
        raise DomainError("local representation needs a finite prime")
    shortcut = any(m % 4 for m in t.triple)
    if shortcut and not verify:
        return True
    target = target_number(t, n)
    if target == 0:
        return True
    k = int(padic_order(target, p)) + (5 if p == 2 else 3)
    mod = p**k
    inds = []
    for (axis_mod, res), coeff in zip(t.cosets, t.coefficients):
        ind = np.zeros(mod)
        ind[_coset_residue_values(axis_mod, res, coeff, p, k)] = 1.0
        inds.append(ind)
    acc = oracles.sumset_mod(oracles.sumset_mod(inds[0], inds[1]).astype(float), inds[2])
    found = bool(acc[target % mod])
    if verify and shortcut and not found:
        raise AssertionError(f"local search failed for {t.original} at p={p}, n={n}")
    return found


def polygonal_residues(m: int, modulus: int) -> set[int]:
    """Residues of ``P_m(x)`` modulo ``modulus`` (``x`` over a full period)."""
    return {eval_polygonal(m, x) % modulus for x in range(2 * modulus)}


@dataclass(frozen=True)
class ResidueObstruction:
    """Residues modulo ``modulus`` that the sum never attains."""

    modulus: int
    attained_count: int
    missed: tuple[int, ...]

    def to_dict(self) -> dict:
        return {"modulus": self.modulus, "attained": self.attained_count, "missed": list(self.missed)}

    @classmethod
    def from_dict(cls, data: dict) -> "ResidueObstruction":
        return cls(data["modulus"], data["attained"], tuple(data["missed"]))


def attained_residues(t: TripleInvariants, modulus: int) -> set[int]:
    t = _as_triple(t)
    acc = {0}
    for m in t.triple:
        vals = polygonal_residues(m, modulus)
        acc = {(s + v) % modulus for s in acc for v in vals}
    return acc


def residue_obstruction(t: TripleInvariants) -> ResidueObstruction | None:
    """Congruence obstruction for triples with ``a = b = c = 0 (mod 4)``.

    The modulus is 8 when the three orders agree modulo 8 and 16 otherwise.
    The attained residues are enumerated; ``None`` is returned when nothing
    is missed, which is what happens in the mixed mod-8 case.
    """
    t = _as_triple(t)
    if any(m % 4 for m in t.triple):
        return None
    modulus = 8 if len({m % 8 for m in t.triple}) == 1 else 16
    hit = attained_residues(t, modulus)
    if len(hit) == modulus:
        return None
    missed = tuple(r for r in range(modulus) if r not in hit)
    return ResidueObstruction(modulus=modulus, attained_count=len(hit), missed=missed)


