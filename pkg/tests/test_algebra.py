import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ksbicat.algebra import (
    AlgebraError,
    AlgebraElement,
    FDAlgebra,
    center,
    change_basis,
    connectivity_report,
    corner_algebra,
    element_minimal_polynomial,
    is_algebra_homomorphism,
    lift_idempotent,
    primitive_idempotents,
    product_algebra,
    quotient_algebra,
    radical,
    _frobenius_fixed,
)
from ksbicat.instances import (
    builtin_group,
    field_algebra,
    group_algebra,
    matrix_algebra,
    path_algebra,
    polynomial_algebra,
    random_invertible,
    scrambled,
    split_algebra,
)
from ksbicat.linalg import GF, QQ, Matrix, Subspace

from oracles import all_idempotents, center_dim_oracle, conjugacy_class_count, nilpotent_elements, primitive_from
from oracles import span_elements

from curated import commutative_fp


# -- structure constants ------------------------------------------------------

def test_structure_constants_validation():
    F = QQ
    with pytest.raises(AlgebraError):
        FDAlgebra.from_structure_constants(F, {(0, 0, 1): 1, (0, 1, 1): 1, (1, 0, 1): 1}, [0, 1])
    with pytest.raises(AlgebraError):
        FDAlgebra(F, 0, (), ())
    A = FDAlgebra.from_structure_constants(F, [[[1]]], [1], name="k")
    assert A.dim == 1 and A.is_commutative()


def test_sparse_and_dense_constants_agree():
    A = polynomial_algebra(QQ, [0, 0, 1])
    sparse = {(i, j, k): c for i, r in enumerate(A.mul) for j, col in enumerate(r) for k, c in enumerate(col) if c}
    B = FDAlgebra.from_structure_constants(QQ, sparse, A.unit)
    assert A == B


def test_element_arithmetic():
    A = group_algebra(GF(5), builtin_group("C4"))
    g = A.element(A.basis_vector(1))
    assert (g * g * g * g).coords == A.unit
    one = A.one()
    assert (one * g).coords == g.coords
    assert (g - g).is_zero()
    assert element_minimal_polynomial(A, g.coords).degree == 4


def test_regular_representations():
    A = matrix_algebra(QQ, 2)
    x, y = A.basis_vector(1), A.basis_vector(2)
    assert A.left_matrix(x).apply(y) == A.multiply(x, y)
    assert A.right_matrix(x).apply(y) == A.multiply(y, x)


# -- center -------------------------------------------------------------------

@pytest.mark.parametrize("group", ["C4", "S3", "D4", "Q8", "A4", "D5", "C2xS3", "S4"])
def test_group_algebra_center_dim_is_class_count(group):
    table = builtin_group(group)
    for F in (QQ, GF(2)):
        A = group_algebra(F, table)
        Z = center(A)
        assert Z.algebra.dim == conjugacy_class_count(table)


@pytest.mark.parametrize("A", [
    matrix_algebra(QQ, 3),
    path_algebra(GF(3), 3, [(0, 1), (1, 2)]),
    product_algebra(matrix_algebra(GF(2), 2), polynomial_algebra(GF(2), [0, 0, 1])),
    scrambled(group_algebra(QQ, builtin_group("S3")), 9),
])
def test_center_dim_matches_sympy(A):
    Z = center(A)
    assert Z.algebra.dim == center_dim_oracle(A)
    for b in Z.inclusion.columns():
        assert A.is_central(b)
    assert Z.to_parent(Z.algebra.unit) == A.unit


# -- radical ------------------------------------------------------------------

@pytest.mark.parametrize("A", [
    polynomial_algebra(GF(2), [0, 0, 1]),
    group_algebra(GF(3), builtin_group("C3")),
    group_algebra(GF(2), builtin_group("C2xC2")),
    polynomial_algebra(GF(5), [-2, 5, -4, 1]),
    center(group_algebra(GF(2), builtin_group("D4"))).algebra,
    group_algebra(GF(2), builtin_group("C4")),
])
def test_radical_of_commutative_algebra_is_nilradical(A):
    J = radical(A)
    assert span_elements(A.field, J, A.dim) == nilpotent_elements(A)


@pytest.mark.parametrize("A", [
    group_algebra(GF(2), builtin_group("S3")),
    group_algebra(GF(3), builtin_group("S3")),
    path_algebra(GF(2), 3, [(0, 1), (1, 2)]),
    matrix_algebra(GF(3), 2),
])
def test_radical_noncommutative(A):
    J = radical(A)
    # every radical element is nilpotent, J is an ideal, and A/J has zero radical
    for v in span_elements(A.field, J, A.dim):
        assert not any(A.power(v, A.dim))
    S = Subspace(A.field, A.dim, J) if J else None
    for j in J:
        for i in range(A.dim):
            b = A.basis_vector(i)
            assert S.contains(A.multiply(b, j)) and S.contains(A.multiply(j, b))
    if J:
        assert radical(quotient_algebra(A, J).algebra) == []
    # J^dim = 0 as an ideal: products of dim radical elements vanish
    power = list(J)
    for _ in range(A.dim - 1):
        power = [A.multiply(x, j) for x in power for j in J]
        power = [v for v in power if any(v)][:64]
    assert not power


def test_radical_char_zero():
    assert len(radical(polynomial_algebra(QQ, [0, 0, 0, 1]))) == 2
    assert radical(group_algebra(QQ, builtin_group("S3"))) == []
    # the arrows of a path algebra
    assert len(radical(path_algebra(QQ, 3, [(0, 1), (1, 2), (0, 2)]))) == 4


def test_radical_of_modular_group_algebras():
    # F_p G for a p-group is local: radical is the augmentation ideal
    for p, g in ((2, "C2xC2"), (3, "C3"), (2, "Q8"), (2, "D4")):
        A = group_algebra(GF(p), builtin_group(g))
        assert len(radical(A)) == A.dim - 1
    # F_3 S_3 has only the trivial and sign simple modules, so dim J = 6 - 2
    assert len(radical(group_algebra(GF(3), builtin_group("S3")))) == 4


# -- idempotents --------------------------------------------------------------

def test_lift_idempotent():
    A = polynomial_algebra(QQ, [0, 0, 1])   # Q[x]/(x^2)
    J = radical(A)
    e = lift_idempotent(A, J, A.unit)
    assert e.coords == A.unit
    # x is idempotent modulo J (it lies in J), and lifts to 0
    assert lift_idempotent(A, J, (0, 1)).is_zero()
    with pytest.raises(AlgebraError):
        lift_idempotent(A, [], (Fraction(1, 2), 0))


def test_lift_in_local_product():
    F = GF(3)
    A = product_algebra(polynomial_algebra(F, [0, 0, 1]), polynomial_algebra(F, [0, 0, 0, 1]))
    J = radical(A)
    e = lift_idempotent(A, J, (1, 1, 0, 1, 0))  # (1 + x, 0 + y) is 1 mod J in the first block
    assert e.is_idempotent()
    assert e.coords == (1, 0, 0, 0, 0)


def test_primitive_idempotents_requires_commutative():
    with pytest.raises(AlgebraError):
        primitive_idempotents(matrix_algebra(QQ, 2))


def test_rational_blocks_of_s3():
    A = group_algebra(QQ, builtin_group("S3"))
    Z = center(A)
    dec = primitive_idempotents(Z.algebra)
    assert dec.complete and len(dec) == 3
    dims = sorted(corner_algebra(A, Z.to_parent(e.coords)).algebra.dim for e in dec)
    assert dims == [1, 1, 4]


def test_rational_certification():
    # Q(sqrt(-2)) is certified, Q[x]/(x^4 + 1) is not
    d = primitive_idempotents(polynomial_algebra(QQ, [2, 0, 1]))
    assert d.complete and len(d) == 1
    d = primitive_idempotents(polynomial_algebra(QQ, [1, 0, 0, 0, 1]))
    assert not d.complete and len(d) == 1
    # Q[x]/(x^3 - 1) = Q x Q(zeta_3)
    d = primitive_idempotents(polynomial_algebra(QQ, [-1, 0, 0, 1]))
    assert d.complete and len(d) == 2


def test_blocks_with_extension_field_residues():
    # F_2 C_7 = F_2 x F_8 x F_8: two blocks have residue field F_8
    A = group_algebra(GF(2), builtin_group("C7"))
    got = {e.coords for e in primitive_idempotents(A)}
    assert got == primitive_from(A, all_idempotents(A))


@pytest.mark.parametrize("A", [
    group_algebra(GF(2), builtin_group("C7")),
    group_algebra(GF(2), builtin_group("C5")),
    group_algebra(GF(3), builtin_group("C4")),
    product_algebra(polynomial_algebra(GF(2), [1, 1, 1]), polynomial_algebra(GF(2), [1, 1, 0, 1])),
    polynomial_algebra(GF(3), [1, 0, 1]),
])
def test_frobenius_fixed_space_counts_components(A):
    # semisimple commutative: ker(x^p - x) is F_p^(number of blocks)
    assert radical(A) == []
    basis = [A.basis_vector(i) for i in range(A.dim)]
    fixed = _frobenius_fixed(A, basis)
    assert len(fixed) == len(primitive_from(A, all_idempotents(A)))
    for v in fixed:
        assert A.power(v, A.field.p) == v


def small_commutative():
    F = GF(3)
    atoms = st.sampled_from([
        field_algebra(F), polynomial_algebra(F, [0, 0, 1]), polynomial_algebra(F, [1, 0, 1]),
        polynomial_algebra(F, [2, 0, 1]), group_algebra(F, builtin_group("C2")),
    ])
    return st.lists(atoms, min_size=1, max_size=3)


@settings(max_examples=25, deadline=None)
@given(small_commutative(), st.integers(0, 10 ** 6))
def test_idempotents_of_products_and_scrambles(factors, seed):
    A = product_algebra(*factors)
    expected = sum(len(primitive_idempotents(B)) for B in factors)
    dec = primitive_idempotents(A)
    assert len(dec) == expected
    S = scrambled(A, seed)
    assert len(primitive_idempotents(S)) == expected
    # orthogonal, complete, idempotent
    ids = [e.coords for e in dec]
    assert tuple(sum(c) % 3 for c in zip(*ids)) == A.unit
    for i, e in enumerate(ids):
        assert A.multiply(e, e) == e
        for f in ids[i + 1:]:
            assert not any(A.multiply(e, f))


def test_connectivity_report():
    r = connectivity_report(group_algebra(GF(5), builtin_group("C4")))
    assert (r.connected, r.component_count, r.complete) == (False, 4, True)
    r = connectivity_report(group_algebra(GF(2), builtin_group("C4")))
    assert r.connected


# -- corners, products, bases -------------------------------------------------

def test_corner_algebra():
    A = split_algebra(QQ, 3)
    c = corner_algebra(A, (1, 1, 0))
    assert c.algebra.dim == 2 and c.to_parent(c.algebra.unit) == (1, 1, 0)
    assert c.projection.apply((5, 6, 7)) == c.from_parent((5, 6, 0))
    with pytest.raises(AlgebraError):
        corner_algebra(A, (0, 0, 0))
    with pytest.raises(AlgebraError):
        corner_algebra(A, (2, 0, 0))
    with pytest.raises(AlgebraError):
        corner_algebra(matrix_algebra(QQ, 2), (1, 0, 0, 0))  # E_11 is not central
    with pytest.raises(AlgebraError):
        corner_algebra(A, (1, 1, 0), basis=[(1, 0, 0), (0, 0, 1)])


def test_corner_with_custom_basis_is_isomorphic():
    A = split_algebra(QQ, 3)
    c1 = corner_algebra(A, (1, 1, 0))
    c2 = corner_algebra(A, (1, 1, 0), basis=[(1, 1, 0), (1, -1, 0)])
    phi = c2.coords @ c1.inclusion
    assert is_algebra_homomorphism(c1.algebra, c2.algebra, phi)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_change_basis_is_an_isomorphism(seed):
    A = group_algebra(GF(5), builtin_group("S3"))
    T = random_invertible(A.field, A.dim, random.Random(seed))
    B = change_basis(A, T)
    B.validate()
    assert is_algebra_homomorphism(A, B, T.inverse())
    assert is_algebra_homomorphism(B, A, T)


def test_product_algebra_errors():
    with pytest.raises(AlgebraError):
        product_algebra()
    with pytest.raises(AlgebraError):
        product_algebra(field_algebra(QQ), field_algebra(GF(2)))


def test_quotient_algebra():
    A = polynomial_algebra(QQ, [0, 0, 0, 1])
    Q = quotient_algebra(A, radical(A))
    assert Q.algebra.dim == 1
    with pytest.raises(AlgebraError):
        quotient_algebra(A, [A.basis_vector(i) for i in range(3)])


def test_algebra_element_idempotent_checks():
    A = split_algebra(GF(2), 2)
    e = AlgebraElement(A, (1, 0))
    assert e.is_idempotent() and e.is_central()


@pytest.mark.parametrize("A", commutative_fp(), ids=lambda A: A.name)
def test_all_idempotents_are_subset_sums_of_primitives(A):
    dec = primitive_idempotents(A)
    F = A.field
    sums = set()
    for mask in range(1 << len(dec)):
        acc = A.zero_vector
        for k, e in enumerate(dec):
            if mask >> k & 1:
                acc = tuple(F.norm(a + b) for a, b in zip(acc, e.coords))
        sums.add(acc)
    assert sums == all_idempotents(A)
    assert len(sums) == 2 ** len(dec)
    # every block is connected
    for e in dec:
        assert connectivity_report(corner_algebra(A, e.coords).algebra).connected


@pytest.mark.parametrize("A", [
    group_algebra(QQ, builtin_group("S3")),
    group_algebra(GF(5), builtin_group("C4")),
    product_algebra(matrix_algebra(GF(2), 2), path_algebra(GF(2), 2, [(0, 1)])),
])
def test_corner_splits_the_algebra_as_a_product(A):
    Z = center(A)
    dec = primitive_idempotents(Z.algebra)
    e = Z.to_parent(dec[0].coords)
    F = A.field
    f = tuple(F.norm(u - c) for u, c in zip(A.unit, e))
    c1, c2 = corner_algebra(A, e), corner_algebra(A, f)
    P = product_algebra(c1.algebra, c2.algebra)
    # a -> (ae, a(1-e)) in corner coordinates
    phi = Matrix.from_columns(F, [c1.from_parent(A.multiply(A.basis_vector(i), e))
                                  + c2.from_parent(A.multiply(A.basis_vector(i), f)) for i in range(A.dim)])
    assert phi.is_invertible()
    assert is_algebra_homomorphism(A, P, phi)
