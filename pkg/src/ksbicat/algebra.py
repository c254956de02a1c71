"""Finite-dimensional associative algebras given by structure constants.

An :class:`FDAlgebra` is an object of the bimodule bicategory.  This module
computes centers, Jacobson radicals, corner algebras ``Ae`` and complete
families of primitive idempotents of commutative algebras.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from .linalg import (
    Field,
    Matrix,
    Polynomial,
    QuotientSpace,
    Subspace,
    crt_idempotent_polys,
    factor_split,
    first_dependency,
    span_basis,
)


class AlgebraError(ValueError):
    pass


@dataclass(frozen=True)
class FDAlgebra:
    """``mul[i][j][k]`` is the coefficient of ``b_k`` in ``b_i * b_j``."""

    field: Field
    dim: int
    mul: tuple
    unit: tuple
    name: str = dc_field(default="", compare=False)

    def __post_init__(self):
        if self.dim < 1:
            raise AlgebraError("an algebra needs dimension >= 1")
        n = self.dim
        if len(self.mul) != n or any(len(r) != n or any(len(c) != n for c in r) for r in self.mul):
            raise AlgebraError("structure constants must form a dim x dim x dim array")
        if len(self.unit) != n:
            raise AlgebraError("unit vector has the wrong length")

    @classmethod
    def from_structure_constants(cls, field: Field, mul, unit: Sequence, name: str = "", check: bool = True) -> "FDAlgebra":
        """Build from a nested ``mul[i][j][k]`` array or a sparse ``{(i, j, k): c}`` dict."""
        n = len(unit)
        if isinstance(mul, dict):
            dense = [[[field.zero] * n for _ in range(n)] for _ in range(n)]
            for (i, j, k), c in mul.items():
                dense[i][j][k] = field.norm(dense[i][j][k] + field(c))
            mul = dense
        A = cls(field, n, tuple(tuple(tuple(field(c) for c in col) for col in row) for row in mul),
                tuple(field(c) for c in unit), name)
        if check:
            A.validate()
        return A

    # -- arithmetic ---------------------------------------------------
    @cached_property
    def _table(self):
        return [[[(k, c) for k, c in enumerate(self.mul[i][j]) if c] for j in range(self.dim)] for i in range(self.dim)]

    def multiply(self, x: Sequence, y: Sequence) -> tuple:
        F = self.field
        acc = [F.zero] * self.dim
        ys = [(j, b) for j, b in enumerate(y) if b]
        for i, a in enumerate(x):
            if a:
                row = self._table[i]
                for j, b in ys:
                    ab = a * b
                    for k, c in row[j]:
                        acc[k] += ab * c
        return tuple(F.norm(v) for v in acc)

    def power(self, x: Sequence, n: int) -> tuple:
        out = self.unit
        for _ in range(n):
            out = self.multiply(out, x)
        return out

    def basis_vector(self, i: int) -> tuple:
        F = self.field
        return tuple(F.one if k == i else F.zero for k in range(self.dim))

    @property
    def zero_vector(self) -> tuple:
        return (self.field.zero,) * self.dim

    def left_matrix(self, x: Sequence) -> Matrix:
        """Matrix of ``y -> x*y``."""
        return Matrix.from_columns(self.field, [self.multiply(x, self.basis_vector(j)) for j in range(self.dim)], rows=self.dim)

    def right_matrix(self, x: Sequence) -> Matrix:
        """Matrix of ``y -> y*x``."""
        return Matrix.from_columns(self.field, [self.multiply(self.basis_vector(j), x) for j in range(self.dim)], rows=self.dim)

    @cached_property
    def left_regular(self) -> tuple:
        return tuple(self.left_matrix(self.basis_vector(i)) for i in range(self.dim))

    @cached_property
    def right_regular(self) -> tuple:
        return tuple(self.right_matrix(self.basis_vector(i)) for i in range(self.dim))

    def element(self, coords: Sequence) -> "AlgebraElement":
        return AlgebraElement(self, tuple(self.field(c) for c in coords))

    def one(self) -> "AlgebraElement":
        return AlgebraElement(self, self.unit)

    def is_commutative(self) -> bool:
        return all(self.mul[i][j] == self.mul[j][i] for i in range(self.dim) for j in range(i + 1, self.dim))

    def is_central(self, x: Sequence) -> bool:
        return all(self.multiply(x, self.basis_vector(i)) == self.multiply(self.basis_vector(i), x) for i in range(self.dim))

    def validate(self) -> None:
        n = self.dim
        for i in range(n):
            bi = self.basis_vector(i)
            if self.multiply(self.unit, bi) != bi or self.multiply(bi, self.unit) != bi:
                raise AlgebraError(f"unit is not two-sided on basis element {i}")
        for i in range(n):
            for j in range(n):
                ij = self.mul[i][j]
                for k in range(n):
                    if self.multiply(ij, self.basis_vector(k)) != self.multiply(self.basis_vector(i), self.mul[j][k]):
                        raise AlgebraError(f"associativity fails on basis triple ({i}, {j}, {k})")

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"FDAlgebra<{self.field} dim {self.dim}{label}>"


@dataclass(frozen=True)
class AlgebraElement:
    parent: FDAlgebra
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != self.parent.dim:
            raise AlgebraError("coordinate vector length differs from the algebra dimension")

    def _wrap(self, coords):
        return AlgebraElement(self.parent, coords)

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        n = self.parent.field.norm
        return self._wrap(tuple(n(a + b) for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        n = self.parent.field.norm
        return self._wrap(tuple(n(a - b) for a, b in zip(self.coords, other.coords)))

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return self._wrap(self.parent.multiply(self.coords, other.coords))
        F = self.parent.field
        c = F(other)
        return self._wrap(tuple(F.norm(c * a) for a in self.coords))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_idempotent(self) -> bool:
        return self.parent.multiply(self.coords, self.coords) == self.coords

    def is_central(self) -> bool:
        return self.parent.is_central(self.coords)

    def minimal_polynomial(self) -> Polynomial:
        return element_minimal_polynomial(self.parent, self.coords)

    def __repr__(self):
        F = self.parent.field
        return "(" + ", ".join(F.fmt(c) for c in self.coords) + ")"


def element_minimal_polynomial(A: FDAlgebra, x: Sequence, unit: Sequence | None = None) -> Polynomial:
    """Minimal polynomial of ``x`` inside the unital algebra ``A`` (or a corner with ``unit``)."""
    F = A.field
    unit = tuple(unit) if unit is not None else A.unit

    def powers():
        p = unit
        while True:
            yield p
            p = A.multiply(p, x)

    c = first_dependency(F, powers())
    return Polynomial(F, tuple(F.norm(-a) for a in c) + (F.one,))


def evaluate_polynomial(A: FDAlgebra, f: Polynomial, x: Sequence, unit: Sequence | None = None) -> tuple:
    F = A.field
    acc = (F.zero,) * A.dim
    p = tuple(unit) if unit is not None else A.unit
    for c in f.coeffs:
        if c:
            acc = tuple(F.norm(a + c * b) for a, b in zip(acc, p))
        p = A.multiply(p, x)
    return acc


# -- subalgebras, quotients, corners -------------------------------------

@dataclass(frozen=True)
class Subalgebra:
    """A unital algebra ``S`` with a linear embedding into ``A``.

    ``inclusion`` is dim(A) x dim(S); ``coords`` is a left inverse of it.
    For corners the embedding sends the unit of ``S`` to an idempotent.
    """

    algebra: FDAlgebra
    parent: FDAlgebra
    inclusion: Matrix
    coords: Matrix

    def to_parent(self, y: Sequence) -> tuple:
        return self.inclusion.apply(y)

    def from_parent(self, a: Sequence) -> tuple:
        return self.coords.apply(a)


def _subalgebra(A: FDAlgebra, vectors: Sequence[tuple], unit: tuple, name: str) -> Subalgebra:
    F = A.field
    sub = Subspace(F, A.dim, vectors)
    n = len(vectors)
    mul = [[sub.coordinates(A.multiply(vectors[i], vectors[j])) for j in range(n)] for i in range(n)]
    S = FDAlgebra(F, n, tuple(tuple(tuple(c) for c in r) for r in mul), sub.coordinates(unit), name)
    return Subalgebra(S, A, sub.basis, sub.coords)


def center(A: FDAlgebra) -> Subalgebra:
    """Z(A) with its embedding; basis from the kernel of the commutator equations."""
    F = A.field
    rows = []
    for i in range(A.dim):
        D = A.right_regular[i] - A.left_regular[i]  # z -> z b_i - b_i z
        rows.extend(D.sparse_rows())
    basis = Matrix._raw(F, len(rows), A.dim, [[r.get(j, F.zero) for j in range(A.dim)] for r in rows]).kernel() if rows else []
    basis = span_basis(F, basis, A.dim)
    Z = _subalgebra(A, basis, A.unit, f"Z({A.name})" if A.name else "")
    if not Z.algebra.is_commutative():
        raise AlgebraError("center computation produced a noncommutative algebra")
    return Z


@dataclass(frozen=True)
class Quotient:
    algebra: FDAlgebra
    parent: FDAlgebra
    projection: Matrix
    section: Matrix


def quotient_algebra(A: FDAlgebra, ideal: Sequence[tuple]) -> Quotient:
    F = A.field
    Q = QuotientSpace(F, A.dim, [{j: v for j, v in enumerate(x) if v} for x in ideal])
    if Q.dim == 0:
        raise AlgebraError("quotient by the whole algebra")
    reps = Q.section.columns()
    mul = [[Q.projection.apply(A.multiply(reps[i], reps[j])) for j in range(Q.dim)] for i in range(Q.dim)]
    B = FDAlgebra(F, Q.dim, tuple(tuple(tuple(c) for c in r) for r in mul), Q.projection.apply(A.unit),
                  f"{A.name}/J" if A.name else "")
    return Quotient(B, A, Q.projection, Q.section)


def radical(A: FDAlgebra) -> list[tuple]:
    """RREF basis of the Jacobson radical.

    Characteristic 0: kernel of the trace form (x, y) -> tr L_{xy}.
    Characteristic p: the iterated p-power trace criterion on the left
    regular representation, one refinement step per p-power up to dim A.
    """
    F = A.field
    n = A.dim
    if not F.is_prime_field:
        tr = [F.norm(sum((A.mul[k][r][r] for r in range(n)), F.zero)) for k in range(n)]
        gram = [[F.norm(sum((c * t for c, t in zip(A.mul[i][j], tr) if c), F.zero)) for j in range(n)] for i in range(n)]
        G = Matrix._raw(F, n, n, gram)
        return span_basis(F, G.kernel(), n)
    return _radical_char_p(A)


def _radical_char_p(A: FDAlgebra) -> list[tuple]:
    F, n, p = A.field, A.dim, A.field.p
    levels = 0
    while p ** (levels + 1) <= n:
        levels += 1
    gamma = np.array([[[int(c) for c in col] for col in row] for row in A.mul], dtype=object)
    # left regular matrices of the basis: Lb[k][r][c] = gamma[k][c][r]
    Lb = np.transpose(gamma, (0, 2, 1))
    current = [A.basis_vector(i) for i in range(n)]
    for i in range(levels + 1):
        if not current:
            break
        modulus = p ** (i + 1)
        dtype = np.int64 if modulus * modulus * n < 2 ** 62 else object
        L = (Lb % modulus).astype(dtype)
        X = np.array([[int(c) for c in v] for v in current], dtype=object)
        # coefficients of v*b_j in the basis, for every v and j
        prods = np.einsum("vi,ijk->vjk", X, gamma) % modulus
        values = [[0] * len(current) for _ in range(n)]
        for a in range(len(current)):
            for j in range(n):
                M = np.tensordot(prods[a, j].astype(dtype), L, axes=1) % modulus
                values[j][a] = _p_power_trace(M, p, i, modulus)
        kern = Matrix._raw(F, n, len(current), values).kernel()
        current = [tuple(F.norm(sum(c * v[k] for c, v in zip(w, current))) for k in range(n)) for w in kern]
        current = span_basis(F, current, n)
    return current


def _p_power_trace(M, p: int, i: int, modulus: int) -> int:
    """(tr(M^(p^i)) mod p^(i+1)) / p^i for an integer matrix M."""
    R = None
    e = p ** i
    while e:
        if e & 1:
            R = M if R is None else (R @ M) % modulus
        e >>= 1
        if e:
            M = (M @ M) % modulus
    tr = int(np.trace(R)) % modulus
    if tr % (p ** i):
        raise AlgebraError("p-power trace is not divisible as required")
    return (tr // p ** i) % p


def lift_idempotent(A: FDAlgebra, J: Sequence[tuple], e: Sequence) -> AlgebraElement:
    """Lift an idempotent modulo the nilpotent ideal ``J`` by ``e <- 3e^2 - 2e^3``."""
    F = A.field
    e = tuple(F(c) for c in e)
    J = list(J)
    sub = Subspace(F, A.dim, J) if J else None

    def defect(x):
        return tuple(F.norm(a - b) for a, b in zip(A.multiply(x, x), x))

    d = defect(e)
    if any(d) and (sub is None or not sub.contains(d)):
        raise AlgebraError("element is not idempotent modulo the radical")
    steps = 0
    limit = max(1, (A.dim - 1).bit_length()) + 1
    while any(defect(e)):
        if steps >= limit:
            raise AlgebraError("idempotent lifting did not converge; ideal is not nilpotent")
        e2 = A.multiply(e, e)
        e3 = A.multiply(e2, e)
        e = tuple(F.norm(3 * a - 2 * b) for a, b in zip(e2, e3))
        steps += 1
    return AlgebraElement(A, e)


@dataclass(frozen=True)
class CentralDecomposition:
    """Orthogonal primitive idempotents summing to 1, in canonical order.

    ``complete`` is False when some piece could only be declared connected
    relative to the available rational factorization.
    """

    idempotents: tuple
    complete: bool = True

    def __len__(self):
        return len(self.idempotents)

    def __iter__(self):
        return iter(self.idempotents)

    def __getitem__(self, k):
        return self.idempotents[k]


def canonical_key(coords: Sequence):
    piv = next((i for i, c in enumerate(coords) if c), len(coords))
    return piv, tuple(Fraction(c) for c in coords)


def primitive_idempotents(C: FDAlgebra) -> CentralDecomposition:
    """Complete orthogonal family of primitive idempotents of a commutative algebra.

    Works in C/J: splits corners on the first basis element whose minimal
    polynomial has coprime factors, builds the pieces by CRT, and lifts the
    results back to C.  Over F_p the Frobenius-fixed subalgebra certifies
    connectedness (and supplies a splitting element when the basis has none).
    """
    if not C.is_commutative():
        raise AlgebraError("primitive_idempotents needs a commutative algebra")
    J = radical(C)
    if J:
        quot = quotient_algebra(C, J)
        Q = quot.algebra
    else:
        quot, Q = None, C
    pieces, complete = _split_semisimple(Q)
    out = []
    for eps in pieces:
        if quot is None:
            out.append(AlgebraElement(C, eps))
        else:
            out.append(lift_idempotent(C, J, quot.section.apply(eps)))
    out.sort(key=lambda e: canonical_key(e.coords))
    return CentralDecomposition(tuple(out), complete)


def _corner_basis(Q: FDAlgebra, eps: tuple) -> list[tuple]:
    return span_basis(Q.field, [Q.multiply(Q.basis_vector(i), eps) for i in range(Q.dim)], Q.dim)


def _split_semisimple(Q: FDAlgebra) -> tuple[list[tuple], bool]:
    F = Q.field
    work = [Q.unit]
    done = []
    complete = True
    while work:
        eps = work.pop(0)
        basis = _corner_basis(Q, eps)
        if len(basis) == 1:
            done.append(eps)
            continue
        candidates = [Q.multiply(Q.basis_vector(i), eps) for i in range(Q.dim)]
        split, certified = _try_split(Q, eps, candidates, len(basis))
        if split is None and F.is_prime_field:
            fixed = _frobenius_fixed(Q, basis)
            if len(fixed) > 1:
                split, _ = _try_split(Q, eps, fixed, len(basis))
                if split is None:
                    raise AlgebraError("Frobenius-fixed subalgebra failed to split a disconnected corner")
            else:
                certified = True
        if split is not None:
            work = split + work
            continue
        if not certified:
            complete = False
        done.append(eps)
    return done, complete


def _try_split(Q: FDAlgebra, eps: tuple, candidates, corner_dim: int):
    """First candidate whose minimal polynomial has >= 2 coprime factors."""
    certified = False
    seen = set()
    for x in candidates:
        if not any(x) or x in seen:
            continue
        seen.add(x)
        mp = element_minimal_polynomial(Q, x, eps)
        if mp.degree < 1:
            continue
        fac = factor_split(mp)
        if len(fac.factors) >= 2:
            polys = crt_idempotent_polys([g ** m for g, m in fac.factors])
            return [evaluate_polynomial(Q, E, x, eps) for E in polys], certified
        (g, m), = fac.factors
        if fac.complete and m == 1 and g.degree == corner_dim:
            certified = True  # x generates a field of full degree
    return None, certified


def _frobenius_fixed(Q: FDAlgebra, basis: list[tuple]) -> list[tuple]:
    """Kernel of x -> x^p - x on the span of ``basis`` (commutative, char p)."""
    F = Q.field
    p = F.p
    images = []
    for b in basis:
        xp = b
        for _ in range(p - 1):
            xp = Q.multiply(xp, b)
        images.append(tuple(F.norm(a - c) for a, c in zip(xp, b)))
    M = Matrix.from_columns(F, images, rows=Q.dim)
    out = []
    for w in M.kernel():
        out.append(tuple(F.norm(sum(c * v[k] for c, v in zip(w, basis))) for k in range(Q.dim)))
    return out


@dataclass(frozen=True)
class ConnectivityReport:
    connected: bool
    component_count: int
    complete: bool


def connectivity_report(C: FDAlgebra) -> ConnectivityReport:
    dec = primitive_idempotents(C)
    return ConnectivityReport(len(dec) == 1, len(dec), dec.complete)


@dataclass(frozen=True)
class Corner(Subalgebra):
    """``Ae`` for a central idempotent ``e``; ``projection`` is ``a -> ae`` in corner coordinates."""

    idempotent: tuple = ()

    @property
    def projection(self) -> Matrix:
        A = self.parent
        return self.coords @ A.right_matrix(self.idempotent)


def corner_algebra(A: FDAlgebra, e, basis: Sequence[tuple] | None = None, name: str = "") -> Corner:
    """The corner algebra ``Ae`` with unit ``e``.

    ``basis`` optionally fixes the corner basis (vectors of A spanning Ae);
    by default the RREF basis is used.
    """
    F = A.field
    e = tuple(F(c) for c in (e.coords if isinstance(e, AlgebraElement) else e))
    if not any(e):
        raise AlgebraError("corner by the zero idempotent")
    if A.multiply(e, e) != e:
        raise AlgebraError("corner needs an idempotent")
    if not A.is_central(e):
        raise AlgebraError("corner needs a central idempotent")
    default = span_basis(F, [A.multiply(A.basis_vector(i), e) for i in range(A.dim)], A.dim)
    if basis is None:
        basis = default
    else:
        basis = [tuple(F(c) for c in b) for b in basis]
        span = Subspace(F, A.dim, default)
        if len(basis) != len(default) or not all(span.contains(b) for b in basis):
            raise AlgebraError("supplied vectors are not a basis of Ae")
    sub = _subalgebra(A, basis, e, name)
    return Corner(sub.algebra, A, sub.inclusion, sub.coords, e)


def product_algebra(*algebras: FDAlgebra, name: str = "") -> FDAlgebra:
    """Direct product with block-diagonal structure constants."""
    if not algebras:
        raise AlgebraError("the empty product is the zero algebra, which is not an object here")
    F = algebras[0].field
    if any(B.field != F for B in algebras):
        raise AlgebraError("factors live over different fields")
    n = sum(B.dim for B in algebras)
    mul = {}
    unit = []
    off = 0
    for B in algebras:
        for i in range(B.dim):
            for j in range(B.dim):
                for k, c in enumerate(B.mul[i][j]):
                    if c:
                        mul[(off + i, off + j, off + k)] = c
        unit.extend(B.unit)
        off += B.dim
    dense = [[[F.zero] * n for _ in range(n)] for _ in range(n)]
    for (i, j, k), c in mul.items():
        dense[i][j][k] = c
    return FDAlgebra(F, n, tuple(tuple(tuple(c) for c in r) for r in dense), tuple(unit), name)


def change_basis(A: FDAlgebra, T: Matrix, name: str = "") -> FDAlgebra:
    """Re-express ``A`` in the basis given by the columns of the invertible ``T``."""
    F = A.field
    Tinv = T.inverse()
    cols = T.columns()
    n = A.dim
    mul = tuple(tuple(Tinv.apply(A.multiply(cols[i], cols[j])) for j in range(n)) for i in range(n))
    return FDAlgebra(F, n, mul, Tinv.apply(A.unit), name)


def monogenic_algebra(f: Polynomial, name: str = "") -> FDAlgebra:
    """``k[t]/(f)`` in the basis 1, t, ..., t^(n-1) for monic ``f`` of degree n."""
    F = f.field
    if not f.is_monic() or f.degree < 1:
        raise AlgebraError("need a monic polynomial of degree >= 1")
    n = f.degree
    mul = []
    for i in range(n):
        row = []
        for j in range(n):
            r = Polynomial(F, (F.zero,) * (i + j) + (F.one,)) % f
            row.append(tuple(r.coeffs) + (F.zero,) * (n - len(r.coeffs)))
        mul.append(tuple(row))
    unit = (F.one,) + (F.zero,) * (n - 1)
    return FDAlgebra(F, n, tuple(mul), unit, name)


def is_algebra_homomorphism(A: FDAlgebra, B: FDAlgebra, phi: Matrix) -> bool:
    """``phi`` (dim B x dim A) is unital and multiplicative on basis pairs."""
    if phi.apply(A.unit) != B.unit:
        return False
    for i in range(A.dim):
        for j in range(A.dim):
            if phi.apply(A.mul[i][j]) != B.multiply(phi.column(i), phi.column(j)):
                return False
    return True
