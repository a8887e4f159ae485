"""Brute-force p-adic oracles.

These search for zeros modulo ``p**k`` directly and deliberately share no
code with the closed-form symbols in :mod:`polytriple.localfield`, so the two
can be checked against each other.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import numpy as np

__all__ = [
    "sumset_mod",
    "has_primitive_zero",
    "isotropic_by_search",
    "hilbert_symbol_by_search",
    "oracle_precision",
]


def _indicator(values, modulus: int) -> np.ndarray:
    ind = np.zeros(modulus, dtype=np.float64)
    ind[np.asarray(sorted(values), dtype=np.int64) % modulus] = 1.0
    return ind


def sumset_mod(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Cyclic sumset of two 0/1 indicator vectors of equal length."""
    conv = np.fft.irfft(np.fft.rfft(a) * np.fft.rfft(b), n=a.size)
    return conv > 0.5


@lru_cache(maxsize=16384)
def _square_multiples(d: int, p: int, modulus: int) -> tuple[frozenset, frozenset]:
    """``{d x^2 mod M}`` over all ``x`` and over ``p``-adic units ``x``."""
    xs = np.arange(modulus, dtype=np.int64)
    vals = (d % modulus) * (xs * xs % modulus) % modulus
    units = xs % p != 0
    return frozenset(vals.tolist()), frozenset(vals[units].tolist())


def _valuation(n: int, p: int) -> int:
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def oracle_precision(entries, p: int) -> int:
    """Exponent ``k``: max valuation plus 3 (odd ``p``) or plus 5 (``p = 2``)."""
    top = max(_valuation(abs(int(d)), p) for d in entries)
    return top + (5 if p == 2 else 3)


def has_primitive_zero(entries, p: int, k: int) -> bool:
    """Is there ``x`` not all divisible by ``p`` with ``sum d_i x_i^2 = 0 mod p^k``?"""
    modulus = p**k
    full, unit = zip(*(_square_multiples(int(d), p, modulus) for d in entries))
    inds = [_indicator(v, modulus) for v in full]
    for i in range(len(entries)):
        others = [inds[j] for j in range(len(entries)) if j != i]
        acc = others[0]
        for nxt in others[1:]:
            acc = sumset_mod(acc, nxt)
        need = np.fromiter(((-v) % modulus for v in unit[i]), dtype=np.int64)
        if acc[need].any():
            return True
    return False


@lru_cache(maxsize=65536)
def _isotropic_sorted(entries: tuple[int, ...], p: int) -> bool:
    return has_primitive_zero(entries, p, oracle_precision(entries, p))


def isotropic_by_search(entries, p: int) -> bool:
    """Isotropy of the diagonal form over Q_p, decided by a mod ``p^k`` search."""
    entries = tuple(sorted(int(d) for d in entries))
    if any(d == 0 for d in entries):
        raise ValueError("form must be non-singular")
    return _isotropic_sorted(entries, p)


def _to_int_class(x) -> int:
    x = Fraction(x)
    return x.numerator * x.denominator


def hilbert_symbol_by_search(x, y, p: int) -> int:
    """``+1`` iff ``z^2 = x w^2 + y t^2`` has a nonzero solution over Q_p."""
    x, y = _to_int_class(x), _to_int_class(y)
    if x == 0 or y == 0:
        raise ValueError("Hilbert symbol needs nonzero arguments")
    return 1 if isotropic_by_search((1, -x, -y), p) else -1
