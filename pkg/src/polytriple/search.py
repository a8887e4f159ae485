"""Empirical sieve of the integers represented by ``P_a + P_b + P_c``.

Bit sets are Python integers, so shifting and OR-ing run word-at-a-time in
C. The sieve marks pair sums of the first two value lists once, then ORs a
shifted copy for every value of the third list. Work on the third list can be
split across processes; the merge is a plain OR, so the result does not
depend on the partition.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ResourceLimitError
from .exceptional import ExceptionalWitness, exceptional_membership, exceptional_union, squarefree_divisors
from .localfield import local_coset_represents, residue_obstruction
from .polynum import TripleInvariants, _as_triple, direct_representation_count, polygonal_values, triple_invariants

__all__ = [
    "DEFAULT_MEMORY_CAP",
    "RepresentedSet",
    "GapAnnotation",
    "RepresentationReport",
    "represented_sieve",
    "gap_report",
    "verify_consecutive_finiteness",
]

log = logging.getLogger(__name__)

DEFAULT_MEMORY_CAP = 256 * 2**20  # bytes


def _mask(values, bound: int) -> int:
    buf = np.zeros(bound + 1, dtype=np.uint8)
    buf[np.asarray(values, dtype=np.int64)] = 1
    return int.from_bytes(np.packbits(buf, bitorder="little").tobytes(), "little")


def _or_shifts(base: int, shifts, full: int) -> int:
    acc = 0
    for s in shifts:
        acc |= base << s
    return acc & full


@dataclass(frozen=True)
class RepresentedSet:
    """Bits ``0..bound``; bit ``n`` is set iff ``n`` is represented."""

    bound: int
    bits: int

    def __contains__(self, n: int) -> bool:
        return 0 <= n <= self.bound and (self.bits >> n) & 1 == 1

    def to_array(self) -> np.ndarray:
        raw = self.bits.to_bytes((self.bound + 8) // 8, "little")
        return np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[: self.bound + 1].astype(bool)

    def gaps(self) -> list[int]:
        return np.flatnonzero(~self.to_array()).tolist()

    def count(self) -> int:
        return self.bits.bit_count() if hasattr(int, "bit_count") else bin(self.bits).count("1")

    def restrict(self, bound: int) -> "RepresentedSet":
        if bound > self.bound:
            raise ValueError("can only restrict to a smaller bound")
        return RepresentedSet(bound, self.bits & ((1 << (bound + 1)) - 1))


def represented_sieve(
    t: TripleInvariants,
    bound: int,
    workers: int = 1,
    memory_cap: int = DEFAULT_MEMORY_CAP,
) -> RepresentedSet:
    """Mark every ``n <= bound`` written as ``P_a(x) + P_b(y) + P_c(z)``."""
    t = _as_triple(t)
    bound = int(bound)
    if bound < 1:
        raise DomainError("bound must be >= 1")
    need = 3 * (bound + 8) // 8
    if need > memory_cap:
        raise ResourceLimitError(f"bound {bound} needs ~{need} bytes of bit sets, cap is {memory_cap}")
    # smallest value lists go to the inner pair sum
    va, vb, vc = sorted((polygonal_values(m, bound) for m in t.triple), key=len, reverse=True)
    full = (1 << (bound + 1)) - 1
    pair = _or_shifts(_mask(vb, bound), va, full)
    workers = max(1, int(workers))
    if workers == 1 or len(vc) < 2 * workers:
        bits = _or_shifts(pair, vc, full)
    else:
        chunks = [vc[i::workers] for i in range(workers)]
        bits = 0
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_or_shifts, [pair] * workers, chunks, [full] * workers):
                bits |= part
    return RepresentedSet(bound, bits)


@dataclass
class GapAnnotation:
    n: int
    witnesses: list[ExceptionalWitness]
    obstruction: str | None
    tension: bool

    @property
    def in_s(self) -> bool:
        return bool(self.witnesses)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "in_S": self.in_s,
            "witnesses": [w.to_dict() for w in self.witnesses],
            "obstruction": self.obstruction,
            "tension": self.tension,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GapAnnotation":
        return cls(
            n=int(data["n"]),
            witnesses=[ExceptionalWitness.from_dict(w) for w in data["witnesses"]],
            obstruction=data["obstruction"],
            tension=bool(data["tension"]),
        )


@dataclass
class RepresentationReport:
    """Gaps up to ``bound`` with their exceptional-class annotations.

    ``tension`` marks gaps at or above ``ignore_below`` that sit outside every
    exceptional class and have no congruence explanation. They are flagged
    for review and never fail a run by themselves.
    """

    triple: TripleInvariants
    bound: int
    gaps: list[int]
    annotations: list[GapAnnotation]
    represented_count: int
    ignore_below: int
    elapsed_seconds: float
    verified_sample: list[int] = field(default_factory=list)

    @property
    def largest_gap(self) -> int | None:
        return self.gaps[-1] if self.gaps else None

    @property
    def tension_items(self) -> list[int]:
        return [a.n for a in self.annotations if a.tension]

    def to_dict(self) -> dict:
        return {
            "triple": self.triple.to_dict()["triple"],
            "bound": self.bound,
            "gaps": list(self.gaps),
            "annotations": [a.to_dict() for a in self.annotations],
            "largest_gap": self.largest_gap,
            "represented_count": self.represented_count,
            "ignore_below": self.ignore_below,
            "tension_items": self.tension_items,
            "elapsed_seconds": self.elapsed_seconds,
            "verified_sample": list(self.verified_sample),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RepresentationReport":
        return cls(
            triple=triple_invariants(*data["triple"]),
            bound=int(data["bound"]),
            gaps=[int(g) for g in data["gaps"]],
            annotations=[GapAnnotation.from_dict(a) for a in data["annotations"]],
            represented_count=int(data["represented_count"]),
            ignore_below=int(data["ignore_below"]),
            elapsed_seconds=float(data["elapsed_seconds"]),
            verified_sample=[int(x) for x in data.get("verified_sample", [])],
        )


def _obstruction_label(t: TripleInvariants, n: int, obs) -> str | None:
    if obs is not None and n % obs.modulus in obs.missed:
        return f"residue-mod-{obs.modulus}"
    if all(m % 4 == 0 for m in t.triple) and not local_coset_represents(t, 2, n):
        return "2-adic"
    return None


def gap_report(
    t: TripleInvariants,
    bound: int,
    ignore_below: int = 1000,
    workers: int = 1,
    memory_cap: int = DEFAULT_MEMORY_CAP,
    verify_sample: int = 20,
) -> RepresentationReport:
    """Sieve to ``bound`` and annotate every gap."""
    t = _as_triple(t)
    start = time.perf_counter()
    rep = represented_sieve(t, bound, workers=workers, memory_cap=memory_cap)
    gaps = rep.gaps()
    divisors = squarefree_divisors(t.level)
    obs = residue_obstruction(t)
    annotations = []
    for n in gaps:
        witnesses = exceptional_union(t, n, divisors)
        label = _obstruction_label(t, n, obs)
        tension = not witnesses and label is None and n >= ignore_below
        annotations.append(GapAnnotation(n, witnesses, label, tension))
    elapsed = time.perf_counter() - start

    # spot check: spread the sample over the gap list
    sample = gaps[:: max(1, len(gaps) // verify_sample)][:verify_sample] if gaps and verify_sample else []
    small = [g for g in sample if g <= 50_000]
    for g in small:
        if direct_representation_count(t, g) != 0:
            raise AssertionError(f"sieve reported gap {g} but a representation exists")
    log.info("sieve %s to %d: %d gaps in %.2fs", t.original, bound, len(gaps), elapsed)
    return RepresentationReport(
        triple=t,
        bound=int(bound),
        gaps=gaps,
        annotations=annotations,
        represented_count=rep.count(),
        ignore_below=int(ignore_below),
        elapsed_seconds=elapsed,
        verified_sample=small,
    )


def verify_consecutive_finiteness(
    m: int, bound: int, window_start: int = 1000, workers: int = 1
) -> tuple[bool, list[int]]:
    """Check that gaps of ``(m, m+1, m+2)`` in ``[window_start, bound]`` are twice squares.

    Returns ``(ok, offending)`` where ``offending`` lists windowed gaps whose
    target is not ``2 r^2``.
    """
    if window_start >= bound:
        raise DomainError("window_start must be below bound")
    t = triple_invariants(m, m + 1, m + 2)
    rep = represented_sieve(t, bound, workers=workers)
    offending = [n for n in rep.gaps() if n >= window_start and exceptional_membership(t, 2, n) is None]
    return not offending, offending
