"""Generalized polygonal numbers and the shifted-lattice reduction.

Every generalized m-gonal sum ``P_a(x) + P_b(y) + P_c(z) = n`` is turned,
by completing the square, into a question about a diagonal ternary form
evaluated on a coset:

    8(m-2) P_m(x) = (2(m-2)x - (m-4))**2 - (m-4)**2

so that ``n`` is represented exactly when ``lCoeff*n + shift`` is a sum
``c1*u**2 + c2*w**2 + c3*s**2`` with each ``u`` confined to a residue class.
All arithmetic is exact Python integers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import isqrt

import numpy as np

from .errors import DomainError

__all__ = [
    "PolygonalOrder",
    "TripleInvariants",
    "eval_polygonal",
    "polygonal_index_range",
    "polygonal_values",
    "is_generalized_polygonal",
    "triple_invariants",
    "target_number",
    "direct_representation_count",
    "direct_representation_counts",
    "coset_representation_count",
    "coset_representation_counts",
]


@dataclass(frozen=True)
class PolygonalOrder:
    """The polygon order ``m`` (number of sides), validated ``m >= 3``."""

    m: int

    def __post_init__(self) -> None:
        if not isinstance(self.m, (int, np.integer)) or isinstance(self.m, bool):
            raise DomainError(f"polygonal order must be an integer, got {self.m!r}")
        if self.m < 3:
            raise DomainError(f"polygonal order must be >= 3, got {self.m}")
        object.__setattr__(self, "m", int(self.m))


def _order(m: int | PolygonalOrder) -> int:
    if isinstance(m, PolygonalOrder):
        return m.m
    return PolygonalOrder(m).m


def eval_polygonal(m: int | PolygonalOrder, x: int) -> int:
    """Return the generalized m-gonal number ``((m-2)x^2 - (m-4)x) / 2``.

    >>> eval_polygonal(5, -1)
    2
    """
    m = _order(m)
    x = int(x)
    return ((m - 2) * x * x - (m - 4) * x) // 2


def polygonal_index_range(m: int | PolygonalOrder, bound: int) -> tuple[int, int]:
    """Smallest and largest integer ``x`` with ``P_m(x) <= bound``.

    Solved exactly with an integer square root. Returns ``(1, 0)`` (an empty
    range) when ``bound < 0``.
    """
    m = _order(m)
    if bound < 0:
        return 1, 0
    disc = (m - 4) ** 2 + 8 * (m - 2) * bound
    r = isqrt(disc)
    # integer x satisfies |2(m-2)x - (m-4)| <= sqrt(disc) iff it is <= isqrt(disc)
    den = 2 * (m - 2)
    lo = -((r - (m - 4)) // den)
    hi = (r + (m - 4)) // den
    return lo, hi


def polygonal_values(m: int | PolygonalOrder, bound: int, unique: bool = True) -> list[int]:
    """All values ``P_m(x) <= bound`` over integer ``x``, ascending.

    With ``unique=False`` each value is repeated once per index producing it,
    which is what representation counting needs.
    """
    m = _order(m)
    lo, hi = polygonal_index_range(m, bound)
    vals = [eval_polygonal(m, x) for x in range(lo, hi + 1)]
    return sorted(set(vals)) if unique else sorted(vals)


def polygonal_roots(m: int | PolygonalOrder, k: int) -> list[int]:
    """Every integer ``x`` with ``P_m(x) = k`` (zero, one or two of them)."""
    m = _order(m)
    disc = (m - 4) ** 2 + 8 * (m - 2) * k
    if disc < 0:
        return []
    r = isqrt(disc)
    if r * r != disc:
        return []
    den = 2 * (m - 2)
    roots = set()
    for num in ((m - 4) + r, (m - 4) - r):
        if num % den == 0:
            roots.add(num // den)
    return sorted(roots)


def is_generalized_polygonal(m: int | PolygonalOrder, k: int) -> int | None:
    """Return some ``x`` with ``P_m(x) = k``, or ``None`` if ``k`` is not m-gonal.

    The test is exact: the discriminant ``(m-4)^2 + 8(m-2)k`` has to be a
    perfect square and the resulting root an integer.
    """
    roots = polygonal_roots(m, k)
    if not roots:
        return None
    # prefer the nonnegative witness when both exist
    return max(roots) if max(roots) >= 0 else roots[0]


@dataclass(frozen=True)
class TripleInvariants:
    """Derived data of ``P_a + P_b + P_c`` for the canonical (sorted) triple.

    ``original`` keeps the caller's order for reporting; every scalar is
    symmetric in ``(a, b, c)``.

    ``cosets[i] = (modulus, residue)`` gives the class of the substituted
    variable on axis ``i``: ``u = 2(a-2)x - (a-4)`` when ``delta == 0`` and
    the halved ``u = (a-2)x - (a-4)/2`` when ``delta == 2``.
    ``coefficients[i]`` is the product of the other two ``m - 2`` factors,
    so ``target_number(t, n) == sum(coefficients[i] * u_i**2)``.
    """

    a: int
    b: int
    c: int
    original: tuple[int, int, int]
    delta: int
    l_coeff: int
    shift: int
    level: int
    cosets: tuple[tuple[int, int], ...]
    coefficients: tuple[int, int, int]
    factors: tuple[int, int, int] = field(repr=False)

    @property
    def triple(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def to_dict(self) -> dict:
        return {"triple": list(self.original)}

    @classmethod
    def from_dict(cls, data: dict) -> "TripleInvariants":
        return triple_invariants(*data["triple"])


def triple_invariants(a: int, b: int, c: int) -> TripleInvariants:
    """Compute ``delta``, ``lCoeff``, ``shift``, ``level`` and coset data.

    >>> t = triple_invariants(3, 4, 5)
    >>> (t.delta, t.l_coeff, t.shift, t.level)
    (0, 48, 8, 12)
    """
    original = tuple(_order(m) for m in (a, b, c))
    a, b, c = sorted(original)
    fa, fb, fc = a - 2, b - 2, c - 2
    prod = fa * fb * fc
    delta = 2 if a % 2 == 0 and b % 2 == 0 and c % 2 == 0 else 0
    l_coeff = 2 ** (3 - delta) * prod
    numerator = (a - 4) ** 2 * fb * fc + fa * (b - 4) ** 2 * fc + fa * fb * (c - 4) ** 2
    shift, rem = divmod(numerator, 2**delta)
    assert rem == 0
    level = (2 if delta == 0 else 1) * prod
    if delta == 0:
        cosets = tuple((2 * f, (-(m - 4)) % (2 * f)) for m, f in ((a, fa), (b, fb), (c, fc)))
    else:
        cosets = tuple((f, (-(m - 4) // 2) % f) for m, f in ((a, fa), (b, fb), (c, fc)))
    return TripleInvariants(
        a=a,
        b=b,
        c=c,
        original=original,
        delta=delta,
        l_coeff=l_coeff,
        shift=shift,
        level=level,
        cosets=cosets,
        coefficients=(fb * fc, fa * fc, fa * fb),
        factors=(fa, fb, fc),
    )


def _as_triple(t) -> TripleInvariants:
    if isinstance(t, TripleInvariants):
        return t
    return triple_invariants(*t)


def target_number(t: TripleInvariants, n: int) -> int:
    """``lCoeff * n + shift``, the integer the coset has to represent."""
    t = _as_triple(t)
    return t.l_coeff * int(n) + t.shift


def direct_representation_count(t: TripleInvariants, n: int) -> int:
    """Number of ``(x, y, z)`` in Z^3 with ``P_a(x) + P_b(y) + P_c(z) = n``.

    The search box comes from solving ``P_m(x) <= n`` exactly, since every
    generalized polygonal value is nonnegative.
    """
    t = _as_triple(t)
    n = int(n)
    if n < 0:
        return 0
    a, b, c = t.triple
    count = 0
    lo_a, hi_a = polygonal_index_range(a, n)
    lo_b, hi_b = polygonal_index_range(b, n)
    for x in range(lo_a, hi_a + 1):
        rest_x = n - eval_polygonal(a, x)
        if rest_x < 0:
            continue
        for y in range(lo_b, hi_b + 1):
            rest = rest_x - eval_polygonal(b, y)
            if rest >= 0:
                count += len(polygonal_roots(c, rest))
    return count


def direct_representation_counts(t: TripleInvariants, n_max: int) -> np.ndarray:
    """Counts for every ``0 <= n <= n_max`` by convolving value histograms."""
    t = _as_triple(t)
    total = np.zeros(1, dtype=np.int64)
    total[0] = 1
    for m in t.triple:
        hist = np.bincount(polygonal_values(m, n_max, unique=False), minlength=n_max + 1)
        total = np.convolve(total, hist.astype(np.int64))[: n_max + 1]
    return total


def _coset_axis_values(modulus: int, residue: int, coeff: int, limit: int) -> list[int]:
    """All ``u = residue (mod modulus)`` with ``coeff * u^2 <= limit``."""
    if limit < 0:
        return []
    umax = isqrt(limit // coeff)
    start = -umax + ((residue + umax) % modulus)
    return list(range(start, umax + 1, modulus))


def coset_representation_count(t: TripleInvariants, n: int) -> int:
    """Count coset vectors ``(u, w, s)`` representing ``target_number(t, n)``.

    Counts solutions of ``c1*u^2 + c2*w^2 + c3*s^2 = lCoeff*n + shift`` with
    each coordinate in its residue class from ``t.cosets``. Equal to
    :func:`direct_representation_count` for every ``n``.
    """
    t = _as_triple(t)
    n = int(n)
    if n < 0:
        return 0
    target = target_number(t, n)
    (m1, r1), (m2, r2), (m3, r3) = t.cosets
    c1, c2, c3 = t.coefficients
    count = 0
    for u in _coset_axis_values(m1, r1, c1, target):
        rest_u = target - c1 * u * u
        for w in _coset_axis_values(m2, r2, c2, rest_u):
            rest = rest_u - c2 * w * w
            if rest % c3:
                continue
            sq = rest // c3
            s = isqrt(sq)
            if s * s != sq:
                continue
            count += sum(1 for v in {s, -s} if (v - r3) % m3 == 0)
    return count


def coset_representation_counts(t: TripleInvariants, n_max: int) -> np.ndarray:
    """Vectorised :func:`coset_representation_count` for all ``n <= n_max``.

    Enumerates pair sums ``c1 u^2 + c2 w^2`` and completes them with the third
    axis, keeping totals ``T == shift (mod lCoeff)``.
    """
    t = _as_triple(t)
    tmax = target_number(t, n_max)
    (m1, r1), (m2, r2), (m3, r3) = t.cosets
    c1, c2, c3 = t.coefficients
    q1 = c1 * np.array(_coset_axis_values(m1, r1, c1, tmax), dtype=np.int64) ** 2
    q2 = c2 * np.array(_coset_axis_values(m2, r2, c2, tmax), dtype=np.int64) ** 2
    q3 = c3 * np.array(_coset_axis_values(m3, r3, c3, tmax), dtype=np.int64) ** 2
    pair = (q1[:, None] + q2[None, :]).ravel()
    pair = pair[pair <= tmax]
    out = np.zeros(n_max + 1, dtype=np.int64)
    q3 = np.sort(q3)
    for chunk in np.array_split(pair, max(1, pair.size // 200_000 + 1)):
        tot = (chunk[:, None] + q3[None, :]).ravel()
        tot = tot[(tot <= tmax) & (tot >= t.shift)]
        tot = tot[(tot - t.shift) % t.l_coeff == 0]
        out += np.bincount((tot - t.shift) // t.l_coeff, minlength=n_max + 1)[: n_max + 1]
    return out
