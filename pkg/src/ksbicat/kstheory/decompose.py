"""Krull-Schmidt decompositions of algebras and the two uniqueness routes."""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Sequence

import numpy as np

from ..algebra import (
    FDAlgebra,
    Subalgebra,
    canonical_key,
    center,
    connectivity_report,
    corner_algebra,
    primitive_idempotents,
)
from ..bimodule import compose, hom_basis, identity_1cell, is_equivalence
from ..instances import random_invertible
from ..linalg import Subspace
from .directsum import DirectSumDiagram
from .equivalence import CutDown, Refusal, SplittingEquivalence, cut_down_summand, equivalence_from_idempotents
from .report import VerificationReport
from .splitting import KSError, associated_idempotent, datum_from_corner, trivial_splitting


@dataclass(frozen=True, eq=False)
class Decomposition:
    """A direct sum diagram with the aligned primitive central idempotents."""

    diagram: DirectSumDiagram
    idempotents: tuple
    complete: bool
    center: Subalgebra | None = None

    @property
    def X(self) -> FDAlgebra:
        return self.diagram.X

    @property
    def summands(self) -> tuple:
        return self.diagram.summands

    def __len__(self):
        return len(self.diagram.summands)

    @cached_property
    def report(self) -> VerificationReport:
        rep = VerificationReport()
        rep.extend(self.diagram.report)
        for k, (s, e) in enumerate(zip(self.summands, self.idempotents)):
            rep.add("idempotent-aligned", associated_idempotent(s, verify=False).coords == e, f"summand[{k}]")
        return rep


def _corner_basis(A: FDAlgebra, e: tuple, rng: random.Random | None):
    if rng is None:
        return None
    B = corner_algebra(A, e).inclusion.columns()
    T = random_invertible(A.field, len(B), rng)
    F = A.field
    return [tuple(F.norm(sum(T.data[i][j] * B[i][k] for i in range(len(B)))) for k in range(A.dim))
            for j in range(len(B))]


def ks_decompose(A: FDAlgebra, basis_seed: int | None = None) -> Decomposition:
    """Decompose A into strongly indecomposable summands, one per primitive central idempotent.

    With ``basis_seed`` the corner bases are scrambled by a seeded random
    change of basis, which yields a different but equivalent decomposition.
    """
    if A.dim < 1:
        raise KSError("the zero algebra is not an object")
    Z = center(A)
    dec = primitive_idempotents(Z.algebra)
    ids = sorted((Z.to_parent(e.coords) for e in dec), key=canonical_key)
    rng = random.Random(basis_seed) if basis_seed is not None else None
    summands = []
    for k, e in enumerate(ids):
        basis = _corner_basis(A, e, rng)
        if len(ids) == 1 and basis is None:
            summands.append(trivial_splitting(A))
        else:
            summands.append(datum_from_corner(corner_algebra(A, e, basis), name=f"{A.name}[{k}]" if A.name else ""))
    return Decomposition(DirectSumDiagram(A, tuple(summands)), tuple(ids), dec.complete, Z)


def permute_decomposition(D: Decomposition, perm: Sequence[int]) -> Decomposition:
    """Summand ``i`` of the result is summand ``perm[i]`` of ``D``."""
    if sorted(perm) != list(range(len(D))):
        raise KSError("not a permutation of the summands")
    summands = tuple(D.summands[p] for p in perm)
    ids = tuple(D.idempotents[p] for p in perm)
    return Decomposition(DirectSumDiagram(D.X, summands), ids, D.complete, D.center)


# -- matching ------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class StrategyResult:
    strategy: str
    sigma: tuple
    report: VerificationReport
    certificates: tuple


@dataclass(frozen=True, eq=False)
class MatchResult:
    sigma: tuple
    results: dict
    report: VerificationReport

    @property
    def verified(self) -> bool:
        return self.report.passed


def _match_idempotent(D1: Decomposition, D2: Decomposition) -> StrategyResult:
    rep = VerificationReport()
    f = [associated_idempotent(t).coords for t in D2.summands]
    sigma, certs = [], []
    for k, s in enumerate(D1.summands):
        e = associated_idempotent(s).coords
        hits = [l for l, fl in enumerate(f) if fl == e]
        if len(hits) != 1:
            raise KSError(f"internal consistency: summand {k} matches {len(hits)} idempotents")
        l = hits[0]
        sigma.append(l)
        eq = equivalence_from_idempotents(s, D2.summands[l])
        ok = isinstance(eq, SplittingEquivalence) and eq.verified
        rep.add("equivalence-verified", ok, f"Y[{k}]~Z[{l}]")
        if isinstance(eq, SplittingEquivalence):
            rep.extend(eq.report, f"Y[{k}]~Z[{l}]")
        certs.append(eq)
    rep.add("bijection", sorted(sigma) == list(range(len(D2))))
    return StrategyResult("idempotent", tuple(sigma), rep, tuple(certs))


def _match_recursive(D1: Decomposition, D2: Decomposition) -> StrategyResult:
    rep = VerificationReport()
    remaining = list(range(len(D2)))
    sigma, certs = [], []
    for k, s in enumerate(D1.summands):
        found = None
        for l in remaining:
            t = D2.summands[l]
            if is_equivalence(compose(compose(s.P, t.I), compose(t.P, s.I))) is not None:
                found = l
                break
        if found is None:
            raise KSError(f"internal consistency: no Z summand cuts down Y[{k}]")
        l = found
        t = D2.summands[l]
        cut: CutDown = cut_down_summand(s, t)
        rep.extend(cut.report, f"Y[{k}]->Z[{l}]")
        rep.add("complement-zero", cut.complement is None, f"Y[{k}]->Z[{l}]")
        for l2 in remaining:
            if l2 != l:
                u = D2.summands[l2]
                rep.add("off-diagonal-zero", compose(u.P, s.I).dim == 0 and compose(s.P, u.I).dim == 0,
                        f"Y[{k}],Z[{l2}]")
        remaining.remove(l)
        sigma.append(l)
        certs.append(cut)
    rep.add("bijection", not remaining and len(sigma) == len(D2))
    return StrategyResult("recursive", tuple(sigma), rep, tuple(certs))


def match_decompositions(D1: Decomposition, D2: Decomposition, strategy: str = "both") -> MatchResult:
    """Match summands of two complete decompositions of the same algebra.

    ``sigma[k]`` is the index of the summand of ``D2`` equivalent to summand
    ``k`` of ``D1``.  With ``both``, the two strategies must agree.
    """
    if not (D1.complete and D2.complete):
        raise KSError("matching needs complete decompositions")
    if not (D1.X is D2.X or D1.X == D2.X):
        raise KSError("decompositions of different algebras")
    if len(D1) != len(D2):
        raise KSError("internal consistency: decompositions have different lengths")
    if strategy not in ("idempotent", "recursive", "both"):
        raise KSError(f"unknown strategy {strategy!r}")
    results = {}
    rep = VerificationReport()
    if strategy in ("idempotent", "both"):
        results["idempotent"] = _match_idempotent(D1, D2)
    if strategy in ("recursive", "both"):
        results["recursive"] = _match_recursive(D1, D2)
    for name, r in results.items():
        rep.extend(r.report, name)
    sigmas = {r.sigma for r in results.values()}
    rep.add("strategies-agree", len(sigmas) == 1)
    sigma = next(iter(results.values())).sigma
    return MatchResult(sigma, results, rep)


# -- strong indecomposability --------------------------------------------------

ENUMERATION_LIMIT = 10 ** 6


@dataclass(frozen=True)
class IndecomposabilityReport:
    connected_center: bool
    components: int
    complete: bool
    idempotent_count: int | None
    method: str
    agree: bool
    identity_indecomposable: bool

    @property
    def strongly_indecomposable(self) -> bool:
        return self.connected_center and self.complete

    def to_json(self) -> dict:
        return {
            "strongly_indecomposable": self.strongly_indecomposable,
            "connected_center": self.connected_center,
            "components": self.components,
            "complete": self.complete,
            "identity_indecomposable": self.identity_indecomposable,
            "idempotent_count": self.idempotent_count,
            "method": self.method,
            "checks_agree": self.agree,
        }


def count_identity_idempotents(A: FDAlgebra) -> int | None:
    """Number of idempotent 2-cells ``Id_A => Id_A`` by exhaustive search, or None if infeasible."""
    F = A.field
    Id = identity_1cell(A)
    mats = [f.matrix for f in hom_basis(Id, Id)]
    r = len(mats)
    if not F.is_prime_field or F.p ** r > ENUMERATION_LIMIT:
        return None
    p = F.p
    sub = Subspace(F, A.dim * A.dim, [M.flatten() for M in mats])
    gamma = np.zeros((r, r, r), dtype=np.int64)
    for i in range(r):
        for j in range(r):
            gamma[i, j] = sub.coordinates((mats[i] @ mats[j]).flatten())
    count = 0
    coeffs = np.array(list(product(range(p), repeat=r)), dtype=np.int64)
    for start in range(0, len(coeffs), 1 << 15):
        x = coeffs[start:start + (1 << 15)]
        outer = (x[:, :, None] * x[:, None, :]) % p
        sq = np.einsum("nij,ijk->nk", outer, gamma) % p
        count += int(np.all(sq == x, axis=1).sum())
    return count


def strong_indecomposability_report(A: FDAlgebra) -> IndecomposabilityReport:
    """Compare connectivity of the center with a direct count of idempotent 2-cells on ``Id_A``."""
    if A.dim < 1:
        raise KSError("the zero algebra is not an object")
    conn = connectivity_report(center(A).algebra)
    count = count_identity_idempotents(A)
    if count is None:
        method = "center-connectivity"
        agree = True
        ident_indec = conn.connected
    else:
        method = "exhaustive"
        agree = count == 2 ** conn.component_count
        ident_indec = count == 2
    return IndecomposabilityReport(conn.connected, conn.component_count, conn.complete, count, method,
                                   agree and ident_indec == conn.connected, ident_indec)


__all__ = [
    "Decomposition", "ks_decompose", "permute_decomposition", "match_decompositions", "MatchResult",
    "StrategyResult", "strong_indecomposability_report", "IndecomposabilityReport", "count_identity_idempotents",
    "Refusal",
]
