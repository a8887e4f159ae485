"""Decide the strongest almost-universality verdict for a polygonal triple.

The cascade, first match wins:

1. a congruence obstruction (all three orders divisible by 4);
2. the non-residue criterion: pairwise gcds of ``a-2, b-2, c-2`` are powers
   of two, an odd prime ``p`` dividing one factor sees the product of the
   other two as a non-residue, and (when ``abc`` is even) some odd ``q`` sees
   twice that product as a non-residue;
3. the mod-3 / parity criterion with ``a, b, c`` distinct mod 3;
4. the same parity patterns with ``a = b = c (mod 3)``, giving one class mod 3;
5. representability of large ``n`` outside the exceptional square classes;
6. inconclusive.

Every verdict carries a witness chain: a list of primitive checks that
:func:`replay_witness_chain` re-evaluates without consulting the classifier.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from math import gcd

from .arith import isprime, prime_factors
from .errors import DomainError
from .exceptional import ALWAYS, square_class_exclusion, squarefree_divisors
from .localfield import quadratic_residue_symbol, residue_obstruction
from .polynum import triple_invariants

__all__ = [
    "Verdict",
    "ClassificationResult",
    "VACUOUS",
    "check_gcd_power_of_two",
    "find_condition_i_prime",
    "find_condition_ii_prime",
    "parity_pattern",
    "classify",
    "classify_consecutive",
    "classify_power_family",
    "fermat_mersenne_guarantee",
    "replay_witness_chain",
]

VACUOUS = "vacuous"

# Facts proved elsewhere, kept apart from derived verdicts.
KNOWN_RESULTS = {
    (3, 4, 5): "Z.-W. Sun: represents every natural number (universal)",
    (3, 3, 3): "Gauss: every natural number is a sum of three triangular numbers",
}


class Verdict(str, enum.Enum):
    LOCAL_OBSTRUCTION = "LocalObstruction"
    ALMOST_UNIVERSAL = "AlmostUniversal"
    ALMOST_UNIVERSAL_ON_CLASS = "AlmostUniversalOnClass"
    ALMOST_UNIVERSAL_OUTSIDE_S = "AlmostUniversalOutsideS"
    INCONCLUSIVE = "Inconclusive"


@dataclass
class ClassificationResult:
    triple: tuple[int, int, int]
    verdict: Verdict
    matched_statement: str
    residue_class: int | None = None
    witnesses: dict = field(default_factory=dict)
    witness_chain: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    # the guarantee holds only beyond an ineffective threshold
    sufficiently_large: bool = False

    def to_dict(self) -> dict:
        return {
            "triple": list(self.triple),
            "verdict": self.verdict.value,
            "residue_class": self.residue_class,
            "matched_statement": self.matched_statement,
            "witnesses": self.witnesses,
            "witness_chain": self.witness_chain,
            "notes": list(self.notes),
            "sufficiently_large": self.sufficiently_large,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ClassificationResult":
        return cls(
            triple=tuple(data["triple"]),
            verdict=Verdict(data["verdict"]),
            matched_statement=data["matched_statement"],
            residue_class=data.get("residue_class"),
            witnesses=dict(data.get("witnesses", {})),
            witness_chain=list(data.get("witness_chain", [])),
            notes=list(data.get("notes", [])),
            sufficiently_large=bool(data.get("sufficiently_large", False)),
        )


def _validate(a: int, b: int, c: int) -> tuple[int, int, int]:
    # triple_invariants performs the m >= 3 validation
    t = triple_invariants(a, b, c)
    return t.original


def check_gcd_power_of_two(a: int, b: int, c: int) -> bool:
    """True iff each pairwise gcd of ``a-2, b-2, c-2`` is a power of two."""
    a, b, c = _validate(a, b, c)
    fs = (a - 2, b - 2, c - 2)
    for i in range(3):
        for j in range(i + 1, 3):
            g = gcd(fs[i], fs[j])
            if g & (g - 1):
                return False
    return True


def _nonresidue_prime(factors, multiplier: int) -> int | None:
    candidates = sorted({p for f in factors for p in prime_factors(f) if p != 2})
    for p in candidates:
        for i, f in enumerate(factors):
            if f % p:
                continue
            rest = multiplier
            for j, g in enumerate(factors):
                if j != i:
                    rest *= g
            if quadratic_residue_symbol(rest, p) == -1:
                return p
    return None


def find_condition_i_prime(a: int, b: int, c: int) -> int | None:
    """Smallest odd ``p | (m-2)`` for which the other two factors multiply to a non-residue."""
    a, b, c = _validate(a, b, c)
    return _nonresidue_prime((a - 2, b - 2, c - 2), 1)


def find_condition_ii_prime(a: int, b: int, c: int) -> int | str | None:
    """As :func:`find_condition_i_prime` with an extra factor 2.

    Returns :data:`VACUOUS` when ``abc`` is odd, where the condition is not
    required.
    """
    a, b, c = _validate(a, b, c)
    if (a * b * c) % 2:
        return VACUOUS
    return _nonresidue_prime((a - 2, b - 2, c - 2), 2)


def parity_pattern(a: int, b: int, c: int) -> str | None:
    """Which of the three parity patterns ``(a, b, c)`` fits, if any.

    ``"i"``: all odd. ``"ii"``: one is 2 mod 4 and the others are both odd or
    both 0 mod 4. ``"iii"``: one is 0 mod 4 and the other two are odd and
    congruent mod 4.
    """
    ms = (a, b, c)
    if all(m % 2 for m in ms):
        return "i"
    for i, m in enumerate(ms):
        rest = [ms[j] for j in range(3) if j != i]
        if m % 4 == 2 and (all(x % 2 for x in rest) or all(x % 4 == 0 for x in rest)):
            return "ii"
    for i, m in enumerate(ms):
        rest = [ms[j] for j in range(3) if j != i]
        if m % 4 == 0 and all(x % 2 for x in rest) and rest[0] % 4 == rest[1] % 4:
            return "iii"
    return None


# --- witness chains ---------------------------------------------------------


def _chk(check: str, args: list, expect) -> dict:
    return {"check": check, "args": list(args), "expect": expect}


def _not_all_div4(a, b, c):
    return any(m % 4 for m in (a, b, c))


def _divides(d, n):
    return n % d == 0


def _odd_primes_clean(a, b, c):
    return square_class_exclusion(triple_invariants(a, b, c)).odd_primes_clean


def _mod3_squares(a, b, c):
    return square_class_exclusion(triple_invariants(a, b, c)).mod3_excludes_squares


def _mod3_class(a, b, c):
    return square_class_exclusion(triple_invariants(a, b, c)).mod3_class


def _ord2_excludes(a, b, c):
    return square_class_exclusion(triple_invariants(a, b, c)).ord2_excludes_2r2


def _obstruction_modulus(a, b, c):
    obs = residue_obstruction(triple_invariants(a, b, c))
    return None if obs is None else obs.modulus


def _product_odd(*xs):
    p = 1
    for x in xs:
        p *= x
    return p % 2 == 1


CHECKS = {
    "not_all_divisible_by_4": _not_all_div4,
    "pairwise_gcd_power_of_two": lambda a, b, c: check_gcd_power_of_two(a, b, c),
    "divides": _divides,
    "is_prime": lambda p: isprime(p),
    "legendre": lambda u, p: quadratic_residue_symbol(u, p),
    "product_odd": _product_odd,
    "odd_primes_clean": _odd_primes_clean,
    "mod3_excludes_squares": _mod3_squares,
    "mod3_class": _mod3_class,
    "ord2_excludes_twice_squares": _ord2_excludes,
    "parity_pattern": lambda a, b, c: parity_pattern(a, b, c),
    "residue_obstruction_modulus": _obstruction_modulus,
    "gcd": lambda x, y: gcd(x, y),
}


def replay_witness_chain(chain: list[dict]) -> bool:
    """Re-evaluate every check of a witness chain; True iff all agree."""
    for step in chain:
        fn = CHECKS[step["check"]]
        if fn(*step["args"]) != step["expect"]:
            return False
    return True


def _nonresidue_chain(triple, p: int, multiplier: int) -> list[dict]:
    factors = [m - 2 for m in triple]
    for i, f in enumerate(factors):
        if f % p == 0:
            rest = multiplier
            for j, g in enumerate(factors):
                if j != i:
                    rest *= g
            if quadratic_residue_symbol(rest, p) == -1:
                return [
                    _chk("is_prime", [p], True),
                    _chk("divides", [p, f], True),
                    _chk("legendre", [rest, p], -1),
                ]
    raise AssertionError("no non-residue witness to record")


def _annotate(result: ClassificationResult) -> ClassificationResult:
    key = tuple(sorted(result.triple))
    if key in KNOWN_RESULTS:
        result.notes.append(KNOWN_RESULTS[key])
    lo = key[0]
    if key == (lo, lo + 1, lo + 2) and lo % 4 == 1:
        result.notes.append("consecutive orders m, m+1, m+2 with m = 1 (mod 4)")
    return result


def classify(a: int, b: int, c: int) -> ClassificationResult:
    """Map a triple to the strongest verdict the criteria support."""
    triple = _validate(a, b, c)
    a, b, c = triple
    t = triple_invariants(a, b, c)
    base = [_chk("not_all_divisible_by_4", [a, b, c], True)]

    obs = residue_obstruction(t)
    if obs is not None:
        return _annotate(
            ClassificationResult(
                triple=triple,
                verdict=Verdict.LOCAL_OBSTRUCTION,
                matched_statement="residue-obstruction",
                witnesses={"obstruction": obs.to_dict()},
                witness_chain=[_chk("residue_obstruction_modulus", [a, b, c], obs.modulus)],
            )
        )

    if _not_all_div4(a, b, c):
        gcd_ok = check_gcd_power_of_two(a, b, c)
        gcd_chain = [_chk("pairwise_gcd_power_of_two", [a, b, c], True)]
        p = find_condition_i_prime(a, b, c) if gcd_ok else None
        q = find_condition_ii_prime(a, b, c) if p is not None else None
        if p is not None and q is not None:
            chain = base + gcd_chain + _nonresidue_chain(triple, p, 1)
            if q == VACUOUS:
                chain.append(_chk("product_odd", [a, b, c], True))
            else:
                chain += _nonresidue_chain(triple, q, 2)
            notes = []
            if p % 8 in (1, 7):
                notes.append(f"p = {p} is +-1 mod 8, so 2 is a residue and the factor-2 condition is automatic")
            return _annotate(
                ClassificationResult(
                    triple=triple,
                    verdict=Verdict.ALMOST_UNIVERSAL,
                    matched_statement="nonresidue-criterion",
                    witnesses={"p": p, "q": q},
                    witness_chain=chain,
                    notes=notes,
                    sufficiently_large=True,
                )
            )

        pattern = parity_pattern(a, b, c)
        if gcd_ok and pattern is not None:
            chain = base + gcd_chain + [_chk("parity_pattern", [a, b, c], pattern)]
            chain += [
                _chk("odd_primes_clean", [a, b, c], True),
                _chk("ord2_excludes_twice_squares", [a, b, c], True),
            ]
            if len({a % 3, b % 3, c % 3}) == 3:
                return _annotate(
                    ClassificationResult(
                        triple=triple,
                        verdict=Verdict.ALMOST_UNIVERSAL,
                        matched_statement=f"mod3-parity-criterion({pattern})",
                        witnesses={"parity_pattern": pattern},
                        witness_chain=chain + [_chk("mod3_excludes_squares", [a, b, c], ALWAYS)],
                        sufficiently_large=True,
                    )
                )
            if a % 3 == b % 3 == c % 3 != 2:
                cls_ = (a + 1) % 3
                return _annotate(
                    ClassificationResult(
                        triple=triple,
                        verdict=Verdict.ALMOST_UNIVERSAL_ON_CLASS,
                        matched_statement=f"mod3-parity-class-criterion({pattern})",
                        residue_class=cls_,
                        witnesses={"parity_pattern": pattern, "n_mod_3": cls_},
                        witness_chain=chain + [_chk("mod3_class", [a, b, c], cls_)],
                        sufficiently_large=True,
                    )
                )

        return _annotate(
            ClassificationResult(
                triple=triple,
                verdict=Verdict.ALMOST_UNIVERSAL_OUTSIDE_S,
                matched_statement="outside-exceptional-classes",
                witnesses={"exceptional_divisors": squarefree_divisors(t.level), "level": t.level},
                witness_chain=base,
                sufficiently_large=True,
            )
        )

    return _annotate(
        ClassificationResult(
            triple=triple,
            verdict=Verdict.INCONCLUSIVE,
            matched_statement="none",
            notes=["all orders divisible by 4 and no congruence obstruction found"],
        )
    )


def classify_consecutive(m: int) -> ClassificationResult:
    """Classify ``(m, m+1, m+2)``.

    Outside the almost-universal cases the exceptional divisors shrink to
    ``[2]``: consecutive factors make every odd prime of the level clean, and
    distinct residues mod 3 exclude perfect squares.
    """
    if m < 3:
        raise DomainError(f"need m >= 3, got {m}")
    a, b, c = m, m + 1, m + 2
    result = classify(a, b, c)
    if result.verdict == Verdict.ALMOST_UNIVERSAL_OUTSIDE_S:
        result.witnesses["exceptional_divisors"] = [2]
        result.matched_statement = "consecutive-outside-twice-squares"
        result.witness_chain += [
            _chk("pairwise_gcd_power_of_two", [a, b, c], True),
            _chk("odd_primes_clean", [a, b, c], True),
            _chk("mod3_excludes_squares", [a, b, c], ALWAYS),
        ]
    return result


def _odd_coprime(*xs) -> bool:
    if any(x < 1 or x % 2 == 0 for x in xs):
        return False
    return all(gcd(x, y) == 1 for i, x in enumerate(xs) for y in xs[i + 1 :])


def classify_power_family(alpha: int, beta: int, gamma: int, k: int, l: int, m: int) -> ClassificationResult:
    """Orders ``2^k alpha + 2, 2^l beta + 2, 2^m gamma + 2``.

    Hypotheses: ``alpha, beta, gamma`` odd and pairwise coprime,
    ``k >= l >= m >= 2``. Conditions:

    * (i) ``alpha, beta, gamma`` distinct mod 3 and ``k = l = m``;
    * (ii) distinct mod 3, ``k > l`` and ``k = l = m (mod 2)``;
    * (iii) ``3 | gamma``, ``alpha = beta = 1 (mod 12)``, ``k = l > m``,
      ``k - m > 1`` and ``k != m (mod 2)``.

    A matched condition yields AlmostUniversal only if the replay of its
    2-adic and mod-3 exclusions succeeds. Otherwise the generic cascade's
    verdict is returned with a note explaining why.
    """
    if not _odd_coprime(alpha, beta, gamma):
        raise DomainError("alpha, beta, gamma must be positive, odd and pairwise coprime")
    if not (k >= l >= m >= 2):
        raise DomainError("exponents must satisfy k >= l >= m >= 2")
    a, b, c = 2**k * alpha + 2, 2**l * beta + 2, 2**m * gamma + 2
    distinct3 = len({alpha % 3, beta % 3, gamma % 3}) == 3
    if distinct3 and k == l == m:
        cond = "i"
    elif distinct3 and k > l and k % 2 == l % 2 == m % 2:
        cond = "ii"
    elif gamma % 3 == 0 and alpha % 12 == 1 and beta % 12 == 1 and k == l > m and k - m > 1 and (k - m) % 2:
        cond = "iii"
    else:
        cond = None

    generic = classify(a, b, c)
    if cond is None:
        generic.notes.append("no power-family condition matched")
        return generic

    excl = square_class_exclusion(triple_invariants(a, b, c))
    chain = [
        _chk("odd_primes_clean", [a, b, c], True),
        _chk("ord2_excludes_twice_squares", [a, b, c], True),
        _chk("mod3_excludes_squares", [a, b, c], ALWAYS),
    ]
    if excl.odd_primes_clean and excl.ord2_excludes_2r2 and excl.mod3_excludes_squares == ALWAYS:
        return _annotate(
            ClassificationResult(
                triple=(a, b, c),
                verdict=Verdict.ALMOST_UNIVERSAL,
                matched_statement=f"power-family({cond})",
                witnesses={"condition": cond, "alpha": alpha, "beta": beta, "gamma": gamma, "k": k, "l": l, "m": m},
                witness_chain=chain,
                sufficiently_large=True,
            )
        )
    failed = [s["check"] for s in chain if not replay_witness_chain([s])]
    generic.notes.append(f"power-family condition ({cond}) matched but its exclusion replay failed: {', '.join(failed)}")
    generic.witnesses["power_family_condition"] = cond
    return generic


def fermat_mersenne_guarantee(kind: str, orders: tuple[int, int, int]) -> ClassificationResult:
    """One residue class mod 3 for Fermat (``F_k + 2``) or Mersenne (``2^p + 1``) orders.

    Fermat: distinct ``k >= 1``; the class is ``n = 2 (mod 3)``.
    Mersenne: distinct odd primes ``p``; the class is ``n = 1 (mod 3)``.
    """
    kind = kind.lower()
    idx = tuple(int(x) for x in orders)
    if len(idx) != 3 or len(set(idx)) != 3:
        raise DomainError("three distinct indices are required")
    if kind == "fermat":
        if min(idx) < 1:
            raise DomainError("Fermat indices must be >= 1")
        values = [2 ** (2**i) + 1 for i in idx]
    elif kind == "mersenne":
        if any(p == 2 or not isprime(p) for p in idx):
            raise DomainError("Mersenne indices must be distinct odd primes")
        values = [2**p - 1 for p in idx]
    else:
        raise DomainError(f"unknown kind {kind!r}")
    if any(gcd(x, y) != 1 for i, x in enumerate(values) for y in values[i + 1 :]):
        raise DomainError("the numbers are not pairwise coprime")
    a, b, c = (v + 2 for v in values)
    pattern = parity_pattern(a, b, c)
    same3 = a % 3 == b % 3 == c % 3 != 2
    if pattern is None or not same3:
        raise DomainError("class hypotheses fail for these orders")
    cls_ = (a + 1) % 3
    chain = [
        _chk("not_all_divisible_by_4", [a, b, c], True),
        _chk("pairwise_gcd_power_of_two", [a, b, c], True),
        _chk("parity_pattern", [a, b, c], pattern),
        _chk("odd_primes_clean", [a, b, c], True),
        _chk("ord2_excludes_twice_squares", [a, b, c], True),
        _chk("mod3_class", [a, b, c], cls_),
    ]
    if not replay_witness_chain(chain):
        raise AssertionError("class criterion replay failed")
    return ClassificationResult(
        triple=(a, b, c),
        verdict=Verdict.ALMOST_UNIVERSAL_ON_CLASS,
        matched_statement=f"{kind}-class-criterion",
        residue_class=cls_,
        witnesses={"kind": kind, "indices": list(idx), "values": [str(v) for v in values], "n_mod_3": cls_},
        witness_chain=chain,
        sufficiently_large=True,
    )
