"""Splitting data, direct sums and Krull-Schmidt decompositions."""

from .decompose import (
    Decomposition,
    IndecomposabilityReport,
    MatchResult,
    StrategyResult,
    count_identity_idempotents,
    ks_decompose,
    match_decompositions,
    permute_decomposition,
    strong_indecomposability_report,
)
from .directsum import DirectSumDiagram, adjointify, correction, twist, twisted_diagram, verify_direct_sum
from .equivalence import (
    CutDown,
    Refusal,
    SplittingEquivalence,
    composite_datum,
    cut_down_summand,
    equivalence_from_idempotents,
)
from .report import Verdict, VerificationReport
from .splitting import (
    FrobeniusMonadData,
    KSError,
    SplittingDatum,
    associated_idempotent,
    chain,
    datum_from_corner,
    frobenius_from_splitting,
    sandwich_counit,
    sandwich_unit,
    split_by_idempotent,
    triangle_left,
    triangle_right,
    trivial_splitting,
    verify_frobenius,
    verify_splitting_datum,
)

__all__ = [
    "Decomposition", "IndecomposabilityReport", "MatchResult", "StrategyResult", "count_identity_idempotents",
    "ks_decompose", "match_decompositions", "permute_decomposition", "strong_indecomposability_report",
    "DirectSumDiagram", "adjointify", "correction", "twist", "twisted_diagram", "verify_direct_sum",
    "CutDown", "Refusal", "SplittingEquivalence", "composite_datum", "cut_down_summand",
    "equivalence_from_idempotents", "Verdict", "VerificationReport",
    "FrobeniusMonadData", "KSError", "SplittingDatum", "associated_idempotent", "chain", "datum_from_corner",
    "frobenius_from_splitting", "sandwich_counit", "sandwich_unit", "split_by_idempotent", "triangle_left",
    "triangle_right", "trivial_splitting", "verify_frobenius", "verify_splitting_datum",
]
