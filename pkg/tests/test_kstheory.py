import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ksbicat.algebra import center
from ksbicat.bimodule import identity_1cell
from ksbicat.instances import (
    builtin_group,
    group_algebra,
    matrix_algebra,
    path_algebra,
    polynomial_algebra,
    scrambled,
    split_algebra,
)
from ksbicat.kstheory import (
    DirectSumDiagram,
    KSError,
    Refusal,
    adjointify,
    associated_idempotent,
    correction,
    count_identity_idempotents,
    cut_down_summand,
    equivalence_from_idempotents,
    frobenius_from_splitting,
    ks_decompose,
    match_decompositions,
    permute_decomposition,
    split_by_idempotent,
    strong_indecomposability_report,
    trivial_splitting,
    twist,
    twisted_diagram,
    verify_direct_sum,
    verify_frobenius,
    verify_splitting_datum,
)
from ksbicat.linalg import GF, QQ

from curated import commutative_fp, qs3
from oracles import all_idempotents, primitive_from


def k3():
    return split_algebra(QQ, 3, "k^3")


# -- splitting data -----------------------------------------------------------

def test_split_by_zero_and_unit():
    X = k3()
    none, whole = split_by_idempotent(X, (0, 0, 0))
    assert none is None and whole.Y is X
    whole, none = split_by_idempotent(X, X.unit)
    assert none is None and whole.report.passed
    assert associated_idempotent(whole).coords == X.unit


def test_trivial_splitting_is_identity():
    A = qs3()
    s = trivial_splitting(A)
    assert s.I is identity_1cell(A) and s.P is identity_1cell(A)
    assert s.report.passed


def test_broken_counit_is_detected():
    X = k3()
    s, _ = split_by_idempotent(X, (1, 1, 0))
    bad = s.replace(eps=s.eps.scale(2))
    rep = verify_splitting_datum(bad)
    assert not rep.passed
    assert "counit-inverts-coreflection-unit" in {v.name for v in rep.failures}
    with pytest.raises(KSError):
        associated_idempotent(bad)
    with pytest.raises(KSError):
        frobenius_from_splitting(bad)
    assert associated_idempotent(bad, verify=False).coords == (1, 1, 0)


def test_wrongly_shaped_datum_rejected():
    X = k3()
    s, t = split_by_idempotent(X, (1, 0, 0))
    with pytest.raises(KSError, match="wrong source"):
        verify_splitting_datum(s.replace(eps=s.eta))
    with pytest.raises(KSError, match="1-cell"):
        verify_splitting_datum(s.replace(I=t.I))


def test_broken_frobenius_is_detected():
    A = qs3()
    Z = center(A)
    e = Z.to_parent(Z.algebra.unit)
    s, _ = split_by_idempotent(A, e)
    fm = frobenius_from_splitting(s)
    assert verify_frobenius(fm).passed
    bad = type(fm)(fm.E, fm.mu.scale(3), fm.iota, fm.delta, fm.epsilon)
    names = {v.name for v in verify_frobenius(bad).failures}
    assert {"monad-left-unit", "monad-right-unit"} <= names


# -- direct sums and adjointification ------------------------------------------

def test_adjointify_rejects_non_sums():
    X = k3()
    D = ks_decompose(X)
    partial = DirectSumDiagram(X, D.summands[:2])
    assert "direct-sum-completeness" in {v.name for v in verify_direct_sum(partial).failures}
    with pytest.raises(KSError, match="direct sum relations"):
        adjointify(partial)
    dup = DirectSumDiagram(X, (D.summands[0], D.summands[0], D.summands[1], D.summands[2]))
    with pytest.raises(KSError):
        adjointify(dup)


def test_ambient_mismatch_rejected():
    with pytest.raises(KSError):
        DirectSumDiagram(k3(), ks_decompose(qs3()).summands)


def test_twist_breaks_and_adjointify_restores():
    X = k3()
    s, _ = split_by_idempotent(X, (1, 1, 0))
    t = twist(s, 3, central_X=(2, 5, 7))
    assert not verify_splitting_datum(t).passed
    assert not correction(t).is_identity()
    assert correction(s).is_identity()
    D = ks_decompose(X)
    bad = twisted_diagram(D.diagram, [2, 3, 5], central_X=(2, 3, 4))
    assert verify_direct_sum(bad, adjunctions=False).passed
    assert not verify_direct_sum(bad).passed
    fixed = adjointify(bad)
    assert verify_direct_sum(fixed).passed
    # the associated idempotents do not move
    assert [associated_idempotent(f).coords for f in fixed.summands] == list(D.idempotents)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_adjointify_random_twists_of_qs3(seed):
    rng = random.Random(seed)
    D = ks_decompose(qs3())
    scalars = [rng.choice([1, 2, -1, 3, "1/2"]) for _ in D.summands]
    Z = center(D.X)
    cx = None
    while cx is None:
        z = Z.to_parent([QQ(rng.randint(-3, 3)) for _ in range(Z.algebra.dim)])
        if D.X.left_matrix(z).is_invertible():
            cx = z
    fixed = adjointify(twisted_diagram(D.diagram, scalars, cx))
    assert verify_direct_sum(fixed).passed


# -- equivalences and cutting down ---------------------------------------------

def test_refusal_records_both_idempotents():
    X = k3()
    s, _ = split_by_idempotent(X, (1, 0, 0))
    t, _ = split_by_idempotent(X, (1, 1, 0))
    r = equivalence_from_idempotents(s, t)
    assert isinstance(r, Refusal)
    assert r.source_idempotent == (1, 0, 0) and r.target_idempotent == (1, 1, 0)
    with pytest.raises(KSError, match="different objects"):
        equivalence_from_idempotents(s, trivial_splitting(qs3()))


def test_equivalence_with_twisted_partner():
    A = qs3()
    D = ks_decompose(A)
    s = D.summands[0]
    t = adjointify(twisted_diagram(D.diagram, [5, 5, 5])).summands[0]
    assert t.report.passed and t.eps != s.eps
    eq = equivalence_from_idempotents(s, t)
    assert eq.verified
    assert eq.F.dim == s.Y.dim


def test_cut_down_whole_object():
    X = k3()
    whole = trivial_splitting(X)
    s, _ = split_by_idempotent(X, (0, 1, 1))
    cut = cut_down_summand(s, whole)
    assert cut.verified
    assert cut.idempotent == (0, 1, 1)
    assert cut.complement is not None and cut.complement.Y.dim == 1
    assert cut.equivalence is not None


def test_cut_down_matrix_block():
    A = group_algebra(QQ, builtin_group("S3"))
    D = ks_decompose(A)
    big = next(s for s in D.summands if s.Y.dim == 4)
    cut = cut_down_summand(big, trivial_splitting(A))
    assert cut.verified and cut.summand.Y.dim == 4 and cut.complement.Y.dim == 2


# -- decompositions -------------------------------------------------------------

@pytest.mark.parametrize("A", commutative_fp()[:12], ids=lambda A: A.name)
def test_decomposition_idempotents_match_oracle(A):
    D = ks_decompose(A)
    assert set(D.idempotents) == primitive_from(A, all_idempotents(A))
    assert sum(s.Y.dim for s in D.summands) == A.dim
    assert D.report.passed


def test_decomposition_of_group_algebras():
    expected = {("S3", QQ): 3, ("S3", GF(2)): 2, ("S3", GF(3)): 1, ("C4", GF(5)): 4, ("C4", QQ): 3}
    for (g, F), n in expected.items():
        D = ks_decompose(group_algebra(F, builtin_group(g)))
        assert D.complete and len(D) == n, (g, F)


def test_seeded_decomposition_differs_but_matches():
    A = qs3()
    D1, D2 = ks_decompose(A), ks_decompose(A, basis_seed=4)
    assert D1.idempotents == D2.idempotents
    assert any(a.corner.inclusion != b.corner.inclusion for a, b in zip(D1.summands, D2.summands))
    assert ks_decompose(A, basis_seed=4).summands[0].corner.inclusion == D2.summands[0].corner.inclusion
    m = match_decompositions(D1, D2)
    assert m.verified and m.sigma == (0, 1, 2)


def test_incomplete_decomposition_cannot_be_matched():
    A = polynomial_algebra(QQ, [1, 0, 0, 0, 1])
    D = ks_decompose(A)
    assert not D.complete
    with pytest.raises(KSError, match="complete"):
        match_decompositions(D, D)


def test_match_errors():
    D = ks_decompose(k3())
    with pytest.raises(KSError, match="strategy"):
        match_decompositions(D, D, "greedy")
    with pytest.raises(KSError, match="different algebras"):
        match_decompositions(D, ks_decompose(qs3()))
    with pytest.raises(KSError, match="permutation"):
        permute_decomposition(D, [0, 0, 1])


@pytest.mark.parametrize("strategy", ["idempotent", "recursive"])
def test_single_strategies(strategy):
    A = scrambled(group_algebra(GF(5), builtin_group("C4")), 9)
    D1 = ks_decompose(A)
    D2 = permute_decomposition(ks_decompose(A, basis_seed=2), [3, 1, 0, 2])
    m = match_decompositions(D1, D2, strategy)
    assert list(m.results) == [strategy]
    assert m.verified and m.sigma == (2, 1, 3, 0)


# -- strong indecomposability ----------------------------------------------------

def test_indecomposability_reports():
    r = strong_indecomposability_report(matrix_algebra(GF(2), 2))
    assert r.strongly_indecomposable and r.idempotent_count == 2 and r.method == "exhaustive"
    r = strong_indecomposability_report(split_algebra(GF(2), 3))
    assert not r.strongly_indecomposable and r.idempotent_count == 8 and r.components == 3
    r = strong_indecomposability_report(path_algebra(QQ, 3, [(0, 1), (1, 2)]))
    assert r.strongly_indecomposable and r.method == "center-connectivity"
    r = strong_indecomposability_report(polynomial_algebra(QQ, [1, 0, 0, 0, 1]))
    assert not r.complete and not r.strongly_indecomposable
    assert set(r.to_json()) >= {"strongly_indecomposable", "checks_agree", "method"}


def test_identity_idempotent_count_limit():
    assert count_identity_idempotents(group_algebra(QQ, builtin_group("C2"))) is None
    assert count_identity_idempotents(group_algebra(GF(3), builtin_group("C2"))) == 4


def _complete_orthogonal_sets(A, prims):
    """All sets of pairwise orthogonal primitive idempotents summing to 1 (brute force)."""
    F = A.field
    prims = sorted(prims)
    found = []

    def extend(start, chosen, total):
        if total == A.unit:
            found.append(tuple(chosen))
        for k in range(start, len(prims)):
            e = prims[k]
            if all(not any(A.multiply(e, f)) for f in chosen):
                extend(k + 1, chosen + [e], tuple(F.norm(a + b) for a, b in zip(total, e)))

    extend(0, [], A.zero_vector)
    return found


@pytest.mark.parametrize("A", commutative_fp(), ids=lambda A: A.name)
def test_primitive_decomposition_of_one_is_unique(A):
    prims = primitive_from(A, all_idempotents(A))
    sets = _complete_orthogonal_sets(A, prims)
    assert len(sets) == 1
    assert set(sets[0]) == set(ks_decompose(A).idempotents)


def test_recursive_equivalences_recover_equal_idempotents():
    for A in (qs3(), scrambled(group_algebra(GF(5), builtin_group("C4")), 3), k3()):
        D1 = ks_decompose(A)
        D2 = permute_decomposition(ks_decompose(A, basis_seed=8), list(reversed(range(len(D1)))))
        m = match_decompositions(D1, D2, "recursive")
        assert m.verified
        for k, j in enumerate(m.sigma):
            assert associated_idempotent(D1.summands[k]).coords == associated_idempotent(D2.summands[j]).coords


def test_identical_and_reversed_decompositions():
    D = ks_decompose(qs3())
    assert match_decompositions(D, D).sigma == (0, 1, 2)
    assert match_decompositions(D, permute_decomposition(D, [2, 1, 0])).sigma == (2, 1, 0)
