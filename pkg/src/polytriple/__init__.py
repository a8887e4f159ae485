"""Almost-universality of sums of three generalized polygonal numbers."""

from .classifier import ClassificationResult, Verdict, classify, classify_consecutive
from .errors import DomainError, ResourceLimitError
from .polynum import TripleInvariants, eval_polygonal, target_number, triple_invariants
from .search import gap_report, represented_sieve

__all__ = [
    "ClassificationResult",
    "DomainError",
    "ResourceLimitError",
    "TripleInvariants",
    "Verdict",
    "classify",
    "classify_consecutive",
    "eval_polygonal",
    "gap_report",
    "represented_sieve",
    "target_number",
    "triple_invariants",
]

__version__ = "0.1.0"
