from fractions import Fraction
from itertools import product

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from ksbicat.linalg import (
    GF,
    QQ,
    Field,
    FieldError,
    Matrix,
    Polynomial,
    QuotientSpace,
    ShapeError,
    SingularMatrixError,
    Subspace,
    characteristic_polynomial,
    crt_idempotent_polys,
    factor_split,
    minimal_polynomial,
    poly_gcd,
    poly_xgcd,
    solve_linear,
    span_basis,
)

from oracles import sym

small_q = st.integers(-4, 4).map(Fraction)


def q_matrices(rows=None, cols=None):
    r = st.integers(1, 4) if rows is None else st.just(rows)
    c = st.integers(1, 4) if cols is None else st.just(cols)
    return st.tuples(r, c).flatmap(
        lambda rc: st.lists(st.lists(small_q, min_size=rc[1], max_size=rc[1]), min_size=rc[0], max_size=rc[0])
    ).map(lambda rows_: Matrix.from_rows(QQ, rows_))


def fp_matrices(p, n):
    return st.lists(st.lists(st.integers(0, p - 1), min_size=n, max_size=n), min_size=n, max_size=n).map(
        lambda rows_: Matrix.from_rows(GF(p), rows_))


# -- fields -------------------------------------------------------------------

def test_field_arithmetic_and_parsing():
    F = GF(7)
    assert F("3/2") == 3 * pow(2, -1, 7) % 7
    assert F.parse(" -1 ") == 6
    assert F.fmt(F(-1)) == "6"
    assert F.inv(3) * 3 % 7 == 1
    assert QQ.parse("-4/6") == Fraction(-2, 3)
    assert QQ.fmt(Fraction(5, 1)) == "5"
    assert str(QQ) == "Q" and str(F) == "F_7"
    assert F.char == 7 and QQ.char == 0


def test_field_errors():
    with pytest.raises(FieldError):
        GF(6)
    with pytest.raises(FieldError):
        GF(5)(Fraction(1, 5))
    with pytest.raises(ZeroDivisionError):
        GF(5).inv(0)
    with pytest.raises(FieldError):
        QQ.parse("x")


def test_field_json_round_trip():
    for F in (QQ, GF(2), GF(13)):
        assert Field.from_json(F.to_json()) == F
    assert Field.from_json("F_5") == GF(5)


# -- matrices -----------------------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(q_matrices())
def test_rank_and_kernel_match_sympy(M):
    S = sym(M)
    assert M.rank() == S.rank()
    K = M.kernel()
    assert len(K) == M.cols - S.rank()
    for v in K:
        assert not any(M.apply(v))


@settings(max_examples=60, deadline=None)
@given(q_matrices(3, 3))
def test_inverse_matches_sympy(M):
    S = sym(M)
    if S.det() == 0:
        assert not M.is_invertible()
        with pytest.raises(SingularMatrixError):
            M.inverse()
    else:
        assert sym(M.inverse()) == S.inv()
        assert (M @ M.inverse()).is_identity()


@settings(max_examples=40, deadline=None)
@given(fp_matrices(5, 3))
def test_inverse_over_fp(M):
    if M.is_invertible():
        assert (M.inverse() @ M).is_identity()
    else:
        assert M.rank() < 3


@settings(max_examples=60, deadline=None)
@given(q_matrices(3, 3), q_matrices(3, 3), q_matrices(3, 3))
def test_matrix_ring_axioms(A, B, C):
    assert (A @ B) @ C == A @ (B @ C)
    assert A @ (B + C) == A @ B + A @ C
    assert (A @ B).T == B.T @ A.T
    assert sym(A.kron(B)) == sympy.kronecker_product(sym(A), sym(B))


@settings(max_examples=60, deadline=None)
@given(q_matrices(3, 4), st.lists(small_q, min_size=3, max_size=3))
def test_solve_linear(A, b):
    sol = solve_linear(A, b)
    S = sym(A)
    aug = S.row_join(sympy.Matrix([sympy.Rational(x.numerator, x.denominator) for x in b]))
    assert sol.consistent == (aug.rank() == S.rank())
    if sol.consistent:
        assert A.apply(sol.particular) == tuple(b)
        for k in sol.kernel:
            assert A.apply([x + y for x, y in zip(sol.particular, k)]) == tuple(b)
    assert len(sol.kernel) == 4 - S.rank()


def test_solve_shape_error():
    with pytest.raises(ShapeError):
        solve_linear(Matrix.identity(QQ, 2), [1, 2, 3])


def test_empty_matrices():
    Z = Matrix.zeros(QQ, 0, 0)
    assert Z.inverse().shape == (0, 0)
    assert Matrix.zeros(QQ, 2, 0).kernel() == []
    assert Matrix.zeros(QQ, 0, 3).rank() == 0


def test_stacking_and_blocks():
    A = Matrix.identity(QQ, 2)
    B = Matrix.from_rows(QQ, [[1, 2]])
    assert A.vstack(B).shape == (3, 2)
    assert A.hstack(A).shape == (2, 4)
    D = Matrix.block_diag(QQ, [A, B])
    assert D.shape == (3, 4)
    assert D.submatrix([2], [2, 3]) == B


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(0, 2), min_size=4, max_size=4), min_size=1, max_size=5))
def test_subspace_coordinates(vectors):
    F = GF(3)
    basis = span_basis(F, vectors, 4)
    S = Subspace(F, 4, basis)
    for v in vectors:
        assert S.contains(v)
        assert S.basis.apply(S.coordinates(v)) == tuple(v)
    # exhaustive membership check
    members = {tuple(sum(c * b[k] for c, b in zip(cs, basis)) % 3 for k in range(4))
               for cs in product(range(3), repeat=len(basis))}
    for w in product(range(3), repeat=4):
        assert S.contains(w) == (w in members)


def test_subspace_rejects_dependent_vectors():
    with pytest.raises(ValueError):
        Subspace(QQ, 2, [(1, 0), (2, 0)])


def test_quotient_space():
    F = QQ
    Q = QuotientSpace(F, 3, [{0: 1, 1: -1}])
    assert Q.dim == 2
    assert (Q.projection @ Q.section).is_identity()
    # relation vectors project to zero
    assert not any(Q.projection.apply((1, -1, 0)))
    assert Q.projection.apply((1, 0, 0)) == Q.projection.apply((0, 1, 0))


# -- polynomials --------------------------------------------------------------

def _poly(F, coeffs):
    return Polynomial.make(F, coeffs)


def test_polynomial_arithmetic():
    F = QQ
    f = _poly(F, [1, 0, 1])
    g = _poly(F, [-1, 1])
    q, r = f.divmod(g)
    assert q * g + r == f
    assert f(2) == 5
    assert str(_poly(F, [0])) in ("0", "")
    assert (g ** 3).degree == 3
    assert f.derivative() == _poly(F, [0, 2])


def test_gcd_and_xgcd():
    F = GF(5)
    a = _poly(F, [1, 1]) * _poly(F, [2, 1])
    b = _poly(F, [1, 1]) * _poly(F, [3, 0, 1])
    g = poly_gcd(a, b)
    assert g == _poly(F, [1, 1])
    d, s, t = poly_xgcd(a, b)
    assert s * a + t * b == d


@settings(max_examples=60, deadline=None)
@given(fp_matrices(3, 3))
def test_minimal_polynomial_divides_charpoly(M):
    mp = minimal_polynomial(M)
    cp = characteristic_polynomial(M)
    assert cp.degree == 3
    assert (cp % mp).is_zero()
    # Cayley-Hamilton and minimality
    assert _eval_matrix(mp, M).is_zero()
    assert _eval_matrix(cp, M).is_zero()


@settings(max_examples=40, deadline=None)
@given(q_matrices(3, 3))
def test_charpoly_matches_sympy(M):
    lam = sympy.Symbol("t")
    expected = sympy.Poly(sym(M).charpoly(lam).as_expr(), lam).all_coeffs()[::-1]
    got = characteristic_polynomial(M).coeffs
    assert [Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1])) for c in expected] == list(got)


def _eval_matrix(f, M):
    out = Matrix.zeros(M.field, M.rows, M.cols)
    P = Matrix.identity(M.field, M.rows)
    for c in f.coeffs:
        out = out + P.scale(c)
        P = P @ M
    return out


def _irreducible_fp(g):
    """Brute force: no monic factor of degree 1..deg/2."""
    F = g.field
    for d in range(1, g.degree // 2 + 1):
        for tail in product(range(F.p), repeat=d):
            h = Polynomial(F, tuple(tail) + (1,))
            if (g % h).is_zero():
                return False
    return True


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.lists(st.integers(0, 4), min_size=1, max_size=6))
def test_factor_split_fp(p, tail):
    F = GF(p)
    f = Polynomial(F, tuple(F(c) for c in tail) + (1,))
    fac = factor_split(f)
    assert fac.complete
    assert fac.product() == f
    for g, _ in fac.factors:
        assert _irreducible_fp(g)
    gs = [g for g, _ in fac.factors]
    assert len(set(gs)) == len(gs)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=1, max_size=5))
def test_factor_split_q(tail):
    F = QQ
    f = Polynomial(F, tuple(F(c) for c in tail) + (F.one,))
    fac = factor_split(f)
    assert fac.product() == f
    x = sympy.Symbol("x")
    sf = sympy.factor_list(sum(int(c) * x ** k for k, c in enumerate(f.coeffs)))[1]
    if fac.complete:
        assert sorted((sympy.degree(g, x), m) for g, m in sf) == sorted((g.degree, m) for g, m in fac.factors)


def test_factor_split_partial_flag():
    f = _poly(QQ, [1, 0, 0, 0, 1])
    fac = factor_split(f)
    assert not fac.complete
    fac = factor_split(_poly(QQ, [2, 0, 1]))
    assert fac.complete and len(fac.factors) == 1


def test_crt_idempotents():
    F = GF(7)
    hs = [_poly(F, [-1, 1]), _poly(F, [-2, 1]), _poly(F, [1, 0, 1])]
    Es = crt_idempotent_polys(hs)
    for k, E in enumerate(Es):
        for j, h in enumerate(hs):
            r = E % h
            assert r.is_one() if j == k else r.is_zero()
