"""Small exact-integer helpers: valuations, factoring, square tests."""

from __future__ import annotations

from functools import lru_cache
from math import inf, isqrt

from sympy import factorint as _factorint
from sympy import isprime, primerange

__all__ = ["padic_order", "prime_factors", "is_square", "isprime", "odd_part", "small_prime_factors"]


def padic_order(n: int, p: int) -> float | int:
    """Largest ``e`` with ``p**e | n``; ``math.inf`` for ``n == 0``."""
    n = int(n)
    if n == 0:
        return inf
    n = abs(n)
    if p == 2:
        return (n & -n).bit_length() - 1
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


@lru_cache(maxsize=4096)
def _factor(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(sorted(_factorint(n).items()))


def factorization(n: int) -> dict[int, int]:
    """Prime factorisation of ``|n|`` (``{}`` for 0 and 1)."""
    n = abs(int(n))
    if n < 2:
        return {}
    return dict(_factor(n))


def prime_factors(n: int) -> list[int]:
    """Distinct primes dividing ``n``, ascending."""
    return list(factorization(n))


def small_prime_factors(n: int, limit: int = 10**6) -> list[int]:
    """Primes ``< limit`` dividing ``n``, found by trial division."""
    n = abs(int(n))
    if n < 2:
        return []
    return [p for p in _primes_below(limit) if n % p == 0]


@lru_cache(maxsize=4)
def _primes_below(limit: int) -> tuple[int, ...]:
    return tuple(primerange(2, limit))


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def odd_part(n: int) -> int:
    n = int(n)
    if n == 0:
        return 0
    return n >> ((n & -n).bit_length() - 1)
