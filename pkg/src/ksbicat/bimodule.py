"""1-cells and 2-cells of the bicategory of algebras and bimodules.

A 1-cell ``A -> B`` is a (B, A)-bimodule; composition is ``N o M = N (x)_B M``.
Right actions are stored as matrices of ``v -> v*a``, so
``R(a_i a_j) = R(a_j) R(a_i)``.

The bicategory is not strictified: unitors and associators are explicit
2-cells computed in the quotient bases chosen by row reduction.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .algebra import Corner, FDAlgebra, Subalgebra
from .linalg import Field, Matrix, QuotientSpace, SingularMatrixError, Subspace, rref_rows
from .linalg.matrix import kernel_from_rref

DEBUG = os.environ.get("KSBICAT_DEBUG", "") not in ("", "0")


class BimoduleError(ValueError):
    pass


def _same(X: FDAlgebra, Y: FDAlgebra) -> bool:
    return X is Y or X == Y


# -- 1-cells ------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Bimodule:
    """A (left_alg, right_alg)-bimodule, i.e. a 1-cell right_alg -> left_alg."""

    left_alg: FDAlgebra
    right_alg: FDAlgebra
    dim: int
    left_action: tuple
    right_action: tuple
    name: str = ""
    factors: tuple | None = dc_field(default=None, repr=False)
    tensor: QuotientSpace | None = dc_field(default=None, repr=False)

    def __post_init__(self):
        if len(self.left_action) != self.left_alg.dim or len(self.right_action) != self.right_alg.dim:
            raise BimoduleError("one action matrix per basis element is required")
        for X in (*self.left_action, *self.right_action):
            if X.shape != (self.dim, self.dim):
                raise BimoduleError("action matrices must be dim x dim")
        if DEBUG:
            self.validate()

    @property
    def field(self) -> Field:
        return self.left_alg.field

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Bimodule):
            return NotImplemented
        return (self.dim == other.dim and _same(self.left_alg, other.left_alg) and _same(self.right_alg, other.right_alg)
                and self.left_action == other.left_action and self.right_action == other.right_action)

    def __hash__(self):
        return hash((self.dim, self.left_alg.dim, self.right_alg.dim))

    def left(self, b: Sequence) -> Matrix:
        return _combine(self.field, self.dim, self.left_action, b)

    def right(self, a: Sequence) -> Matrix:
        return _combine(self.field, self.dim, self.right_action, a)

    def validate(self) -> None:
        B, A = self.left_alg, self.right_alg
        I = Matrix.identity(self.field, self.dim)
        if self.left(B.unit) != I or self.right(A.unit) != I:
            raise BimoduleError("actions are not unital")
        for i in range(B.dim):
            for j in range(B.dim):
                if self.left_action[i] @ self.left_action[j] != self.left(B.mul[i][j]):
                    raise BimoduleError(f"left action is not multiplicative on ({i}, {j})")
        for i in range(A.dim):
            for j in range(A.dim):
                if self.right_action[j] @ self.right_action[i] != self.right(A.mul[i][j]):
                    raise BimoduleError(f"right action is not multiplicative on ({i}, {j})")
        for L in self.left_action:
            for R in self.right_action:
                if L @ R != R @ L:
                    raise BimoduleError("left and right actions do not commute")

    def is_zero(self) -> bool:
        return self.dim == 0

    def __repr__(self):
        label = f"{self.name} " if self.name else ""
        return f"Bimodule<{label}dim {self.dim}: {self.right_alg.dim}-dim -> {self.left_alg.dim}-dim>"


def _combine(F: Field, n: int, mats: Sequence[Matrix], coeffs: Sequence) -> Matrix:
    acc = [[F.zero] * n for _ in range(n)]
    for c, M in zip(coeffs, mats):
        if c:
            for r in range(n):
                row, src = acc[r], M.data[r]
                for k in range(n):
                    if src[k]:
                        row[k] += c * src[k]
    return Matrix._raw(F, n, n, [[F.norm(x) for x in r] for r in acc])


# -- 2-cells ------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class BimoduleMap:
    """A bimodule homomorphism; ``matrix`` is dim(target) x dim(source)."""

    source: Bimodule
    target: Bimodule
    matrix: Matrix

    def __post_init__(self):
        if self.matrix.shape != (self.target.dim, self.source.dim):
            raise BimoduleError("2-cell matrix has the wrong shape")
        if not (_same(self.source.left_alg, self.target.left_alg) and _same(self.source.right_alg, self.target.right_alg)):
            raise BimoduleError("2-cell between bimodules over different algebra pairs")
        if DEBUG:
            self.check()

    @property
    def field(self) -> Field:
        return self.source.field

    def is_natural(self) -> bool:
        f, M, N = self.matrix, self.source, self.target
        return (all(f @ a == b @ f for a, b in zip(M.left_action, N.left_action))
                and all(f @ a == b @ f for a, b in zip(M.right_action, N.right_action)))

    def check(self) -> None:
        if not self.is_natural():
            raise BimoduleError("matrix does not intertwine the bimodule actions")

    def __matmul__(self, other: "BimoduleMap") -> "BimoduleMap":
        """Vertical composition: ``(self @ other)`` is other followed by self."""
        if not (other.target is self.source or other.target == self.source):
            raise BimoduleError("vertical composition of non-composable 2-cells")
        return BimoduleMap(other.source, self.target, self.matrix @ other.matrix)

    def __add__(self, other: "BimoduleMap") -> "BimoduleMap":
        self._parallel(other)
        return BimoduleMap(self.source, self.target, self.matrix + other.matrix)

    def __sub__(self, other: "BimoduleMap") -> "BimoduleMap":
        self._parallel(other)
        return BimoduleMap(self.source, self.target, self.matrix - other.matrix)

    def scale(self, c) -> "BimoduleMap":
        return BimoduleMap(self.source, self.target, self.matrix.scale(c))

    def _parallel(self, other):
        if not (self.source == other.source and self.target == other.target):
            raise BimoduleError("2-cells are not parallel")

    def __eq__(self, other):
        if not isinstance(other, BimoduleMap):
            return NotImplemented
        return self.matrix == other.matrix and self.source == other.source and self.target == other.target

    __hash__ = None

    def is_invertible(self) -> bool:
        return self.matrix.is_invertible()

    def inverse(self) -> "BimoduleMap":
        try:
            return BimoduleMap(self.target, self.source, self.matrix.inverse())
        except SingularMatrixError as exc:
            raise BimoduleError("2-cell is not invertible") from exc

    def is_identity(self) -> bool:
        return self.source == self.target and self.matrix.is_identity()

    def is_zero(self) -> bool:
        return self.matrix.is_zero()


def identity_map(M: Bimodule) -> BimoduleMap:
    return BimoduleMap(M, M, Matrix.identity(M.field, M.dim))


def zero_map(M: Bimodule, N: Bimodule) -> BimoduleMap:
    return BimoduleMap(M, N, Matrix.zeros(M.field, N.dim, M.dim))


# -- identities and composition -----------------------------------------------

_IDENTITY_CACHE: dict[int, tuple] = {}
_COMPOSE_CACHE: dict[tuple[int, int], tuple] = {}


def identity_1cell(A: FDAlgebra) -> Bimodule:
    """``A`` as an (A, A)-bimodule."""
    hit = _IDENTITY_CACHE.get(id(A))
    if hit is not None and hit[0] is A:
        return hit[1]
    M = Bimodule(A, A, A.dim, A.left_regular, A.right_regular, name=f"Id_{A.name}" if A.name else "Id")
    _IDENTITY_CACHE[id(A)] = (A, M)
    return M


def clear_caches() -> None:
    _IDENTITY_CACHE.clear()
    _COMPOSE_CACHE.clear()


def _tensor_relations(N: Bimodule, M: Bimodule) -> list[dict]:
    """Rows n*b (x) m - n (x) b*m over the basis of the middle algebra."""
    F = N.field
    dM = M.dim
    rels = []
    for Rb, Lb in zip(N.right_action, M.left_action):
        Rcols = [[(r, v) for r, v in enumerate(Rb.column(p)) if v] for p in range(N.dim)]
        Lcols = [[(s, v) for s, v in enumerate(Lb.column(q)) if v] for q in range(dM)]
        for p in range(N.dim):
            for q in range(dM):
                row: dict = {}
                for r, v in Rcols[p]:
                    row[r * dM + q] = v
                for s, v in Lcols[q]:
                    k = p * dM + s
                    nv = F.norm(row.get(k, 0) - v)
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
                if row:
                    rels.append(row)
    return rels


def compose(N: Bimodule, M: Bimodule) -> Bimodule:
    """Horizontal composite ``N o M = N (x)_B M`` for M: A -> B, N: B -> C.

    The basis consists of the cosets of pure tensors ``n_p (x) m_q`` at the
    non-pivot positions of the reduced relation matrix.  Results are cached
    per pair of operand objects, so repeated calls return the same object.
    """
    key = (id(N), id(M))
    hit = _COMPOSE_CACHE.get(key)
    if hit is not None and hit[0] is N and hit[1] is M:
        return hit[2]
    if not _same(N.right_alg, M.left_alg):
        raise BimoduleError("middle algebras of the composite do not match")
    F = N.field
    Q = QuotientSpace(F, N.dim * M.dim, _tensor_relations(N, M))
    dM = M.dim
    proj = Q.projection.columns() if Q.dim else [()] * (N.dim * M.dim)
    pairs = [divmod(f, dM) for f in Q.free]

    def induced(act_n, act_m):
        cols = []
        for p, q in pairs:
            acc = [F.zero] * Q.dim
            if act_n is not None:
                terms = [(r * dM + q, v) for r, v in enumerate(act_n.column(p)) if v]
            else:
                terms = [(p * dM + s, v) for s, v in enumerate(act_m.column(q)) if v]
            for k, v in terms:
                for t, w in enumerate(proj[k]):
                    if w:
                        acc[t] += v * w
            cols.append(tuple(F.norm(x) for x in acc))
        return Matrix.from_columns(F, cols, rows=Q.dim) if cols else Matrix.zeros(F, Q.dim, 0)

    left = tuple(induced(L, None) for L in N.left_action)
    right = tuple(induced(None, R) for R in M.right_action)
    name = f"{N.name}{M.name}" if N.name and M.name else ""
    out = Bimodule(N.left_alg, M.right_alg, Q.dim, left, right, name=name, factors=(N, M), tensor=Q)
    _COMPOSE_CACHE[key] = (N, M, out)
    return out


def compose_many(*cells: Bimodule) -> Bimodule:
    """Right-nested composite ``c1 o (c2 o (... o cn))``."""
    out = cells[-1]
    for c in reversed(cells[:-1]):
        out = compose(c, out)
    return out


def _tensor_parts(T: Bimodule):
    if T.factors is None:
        raise BimoduleError("bimodule is not a composite produced by compose()")
    return T.factors[0], T.factors[1], T.tensor


def _pure_map(T_src: Bimodule, T_tgt: Bimodule, g: Matrix, f: Matrix) -> Matrix:
    """Matrix of the map induced by ``g (x) f`` between two tensor composites."""
    N, M, Qs = _tensor_parts(T_src)
    N2, M2, Qt = _tensor_parts(T_tgt)
    F = N.field
    dM, dM2 = M.dim, M2.dim
    proj = Qt.projection.columns() if Qt.dim else []
    gcols = [[(r, v) for r, v in enumerate(g.column(p)) if v] for p in range(N.dim)]
    fcols = [[(s, v) for s, v in enumerate(f.column(q)) if v] for q in range(dM)]
    cols = []
    for idx in Qs.free:
        p, q = divmod(idx, dM)
        acc = [F.zero] * Qt.dim
        for r, v in gcols[p]:
            for s, w in fcols[q]:
                vw = v * w
                for t, u in enumerate(proj[r * dM2 + s]):
                    if u:
                        acc[t] += vw * u
        cols.append(tuple(F.norm(x) for x in acc))
    return Matrix.from_columns(F, cols, rows=Qt.dim) if cols else Matrix.zeros(F, Qt.dim, 0)


def hcomp(g: BimoduleMap, f: BimoduleMap) -> BimoduleMap:
    """Horizontal composite ``g * f : N o M => N' o M'``."""
    src = compose(g.source, f.source)
    tgt = compose(g.target, f.target)
    return BimoduleMap(src, tgt, _pure_map(src, tgt, g.matrix, f.matrix))


def whisker_left(N: Bimodule, f: BimoduleMap) -> BimoduleMap:
    """``N * f : N o M => N o M'``."""
    return hcomp(identity_map(N), f)


def whisker_right(g: BimoduleMap, M: Bimodule) -> BimoduleMap:
    """``g * M : N o M => N' o M``."""
    return hcomp(g, identity_map(M))


def _from_pure(T: Bimodule, target: Bimodule, image) -> Matrix:
    """Matrix of a map out of a composite given on pure tensors ``(p, q) -> vector``."""
    N, M, Q = _tensor_parts(T)
    cols = [image(*divmod(idx, M.dim)) for idx in Q.free]
    return Matrix.from_columns(T.field, cols, rows=target.dim) if cols else Matrix.zeros(T.field, target.dim, 0)


def _into_pure(T: Bimodule, vectors: Sequence[dict]) -> Matrix:
    """Matrix into a composite given by sparse tensor-space vectors per source basis element."""
    F = T.field
    _, _, Q = _tensor_parts(T)
    proj = Q.projection.columns() if Q.dim else []
    cols = []
    for vec in vectors:
        acc = [F.zero] * Q.dim
        for k, v in vec.items():
            for t, u in enumerate(proj[k]):
                if u:
                    acc[t] += v * u
        cols.append(tuple(F.norm(x) for x in acc))
    return Matrix.from_columns(F, cols, rows=Q.dim) if cols else Matrix.zeros(F, Q.dim, 0)


def left_unitor(M: Bimodule) -> BimoduleMap:
    """``Id_B o M => M``, ``b (x) m -> b*m``."""
    B = M.left_alg
    T = compose(identity_1cell(B), M)
    return BimoduleMap(T, M, _from_pure(T, M, lambda j, q: M.left_action[j].column(q)))


def left_unitor_inverse(M: Bimodule) -> BimoduleMap:
    B = M.left_alg
    T = compose(identity_1cell(B), M)
    u = [(j, c) for j, c in enumerate(B.unit) if c]
    return BimoduleMap(M, T, _into_pure(T, [{j * M.dim + q: c for j, c in u} for q in range(M.dim)]))


def right_unitor(M: Bimodule) -> BimoduleMap:
    """``M o Id_A => M``, ``m (x) a -> m*a``."""
    A = M.right_alg
    T = compose(M, identity_1cell(A))
    return BimoduleMap(T, M, _from_pure(T, M, lambda q, j: M.right_action[j].column(q)))


def right_unitor_inverse(M: Bimodule) -> BimoduleMap:
    A = M.right_alg
    T = compose(M, identity_1cell(A))
    u = [(j, c) for j, c in enumerate(A.unit) if c]
    return BimoduleMap(M, T, _into_pure(T, [{q * A.dim + j: c for j, c in u} for q in range(M.dim)]))


def associator(L: Bimodule, M: Bimodule, N: Bimodule) -> BimoduleMap:
    """``(L o M) o N => L o (M o N)``, ``(l (x) m) (x) n -> l (x) (m (x) n)``."""
    LM = compose(L, M)
    S = compose(LM, N)
    MN = compose(M, N)
    T = compose(L, MN)
    _, _, Qlm = _tensor_parts(LM)
    _, _, Qmn = _tensor_parts(MN)
    mn_proj = Qmn.projection.columns() if Qmn.dim else []
    vectors = []
    for idx in S.tensor.free:
        u, r = divmod(idx, N.dim)
        p, q = divmod(Qlm.free[u], M.dim)
        vectors.append({p * MN.dim + t: c for t, c in enumerate(mn_proj[q * N.dim + r]) if c})
    return BimoduleMap(S, T, _into_pure(T, vectors))


def associator_inverse(L: Bimodule, M: Bimodule, N: Bimodule) -> BimoduleMap:
    """``L o (M o N) => (L o M) o N``."""
    LM = compose(L, M)
    S = compose(LM, N)
    MN = compose(M, N)
    T = compose(L, MN)
    _, _, Qlm = _tensor_parts(LM)
    _, _, Qmn = _tensor_parts(MN)
    lm_proj = Qlm.projection.columns() if Qlm.dim else []
    vectors = []
    for idx in T.tensor.free:
        p, v = divmod(idx, MN.dim)
        q, r = divmod(Qmn.free[v], N.dim)
        vectors.append({t * N.dim + r: c for t, c in enumerate(lm_proj[p * M.dim + q]) if c})
    return BimoduleMap(T, S, _into_pure(S, vectors))


def coherence_iso(kind: str, *cells: Bimodule) -> BimoduleMap:
    if kind == "left-unitor":
        return left_unitor(*cells)
    if kind == "right-unitor":
        return right_unitor(*cells)
    if kind == "associator":
        return associator(*cells)
    raise BimoduleError(f"unknown coherence isomorphism {kind!r}")


# -- hom spaces ---------------------------------------------------------------

def hom_basis(M: Bimodule, N: Bimodule) -> list[BimoduleMap]:
    """Basis of the space of bimodule maps ``M => N``."""
    if not (_same(M.left_alg, N.left_alg) and _same(M.right_alg, N.right_alg)):
        raise BimoduleError("hom space between bimodules over different algebra pairs")
    F = M.field
    m, n = M.dim, N.dim
    if m == 0 or n == 0:
        return []
    rows = []
    for acts_m, acts_n in ((M.left_action, N.left_action), (M.right_action, N.right_action)):
        for Am, An in zip(acts_m, acts_n):
            rows.extend(_intertwiner_rows(F, Am, An, m, n))
    red, piv = rref_rows(F, rows)
    out = []
    for vec in kernel_from_rref(F, red, piv, n * m):
        X = Matrix._raw(F, n, m, [vec[r * m:(r + 1) * m] for r in range(n)])
        out.append(BimoduleMap(M, N, X))
    return out


def _intertwiner_rows(F: Field, Am: Matrix, An: Matrix, m: int, n: int) -> list[dict]:
    """Equations X Am - An X = 0 in the unknowns X[r][k] at index r*m + k."""
    rows = []
    Acols = [[(k, v) for k, v in enumerate(Am.column(c)) if v] for c in range(m)]
    for r in range(n):
        nrow = [(k, v) for k, v in enumerate(An.data[r]) if v]
        for c in range(m):
            row: dict = {}
            for k, v in Acols[c]:
                row[r * m + k] = v
            for k, v in nrow:
                idx = k * m + c
                nv = F.norm(row.get(idx, 0) - v)
                if nv:
                    row[idx] = nv
                else:
                    row.pop(idx, None)
            if row:
                rows.append(row)
    return rows


def endomorphism_of_identity(A: FDAlgebra, z: Sequence) -> BimoduleMap:
    """The 2-cell ``Id_A => Id_A`` given by multiplication with a central ``z``."""
    Id = identity_1cell(A)
    return BimoduleMap(Id, Id, A.right_matrix(tuple(A.field(c) for c in z)))


def central_element_of(f: BimoduleMap) -> tuple:
    """Inverse of :func:`endomorphism_of_identity`: evaluate at the unit."""
    A = f.source.left_alg
    return f.matrix.apply(A.unit)


# -- direct sums --------------------------------------------------------------

def direct_sum(*mods: Bimodule) -> Bimodule:
    if not mods:
        raise BimoduleError("empty direct sum needs an algebra pair; use zero_bimodule")
    B, A = mods[0].left_alg, mods[0].right_alg
    if any(not (_same(M.left_alg, B) and _same(M.right_alg, A)) for M in mods):
        raise BimoduleError("direct sum of non-parallel 1-cells")
    F = B.field
    left = tuple(Matrix.block_diag(F, [M.left_action[i] for M in mods]) for i in range(B.dim))
    right = tuple(Matrix.block_diag(F, [M.right_action[i] for M in mods]) for i in range(A.dim))
    return Bimodule(B, A, sum(M.dim for M in mods), left, right)


def zero_bimodule(B: FDAlgebra, A: FDAlgebra) -> Bimodule:
    F = B.field
    z = Matrix.zeros(F, 0, 0)
    return Bimodule(B, A, 0, (z,) * B.dim, (z,) * A.dim, name="0")


def row_map(maps: Sequence[BimoduleMap], source: Bimodule) -> BimoduleMap:
    """``[f_1 ... f_n] : M_1 + ... + M_n => N``."""
    target = maps[0].target
    M = maps[0].matrix.hstack(*[f.matrix for f in maps[1:]]) if len(maps) > 1 else maps[0].matrix
    return BimoduleMap(source, target, M)


def column_map(maps: Sequence[BimoduleMap], target: Bimodule) -> BimoduleMap:
    """``t[g_1 ... g_n] : N => N_1 + ... + N_n``."""
    source = maps[0].source
    M = maps[0].matrix.vstack(*[g.matrix for g in maps[1:]]) if len(maps) > 1 else maps[0].matrix
    return BimoduleMap(source, target, M)


def direct_sum_maps(*maps: BimoduleMap) -> BimoduleMap:
    F = maps[0].field
    src = direct_sum(*[f.source for f in maps])
    tgt = direct_sum(*[f.target for f in maps])
    return BimoduleMap(src, tgt, Matrix.block_diag(F, [f.matrix for f in maps]))


# -- corners: the canonical splitting 1-cells and 2-cells ---------------------

@dataclass(frozen=True, eq=False)
class CornerCells:
    """1-cells ``I: Y -> X``, ``P: X -> Y`` for a corner ``Y = Xe`` and the four canonical 2-cells.

    ``eta: Id_X => IP`` is ``a -> ae (x) e``; ``epsbar: IP => Id_X`` multiplies;
    ``eps: PI => Id_Y`` multiplies; ``etabar: Id_Y => PI`` is ``y -> y (x) e``.
    """

    corner: Corner
    I: Bimodule
    P: Bimodule
    eta: BimoduleMap
    eps: BimoduleMap
    etabar: BimoduleMap
    epsbar: BimoduleMap


def corner_bimodules(c: Subalgebra) -> tuple[Bimodule, Bimodule]:
    X, Y = c.parent, c.algebra
    Bm, Cm = c.inclusion, c.coords
    if Y is X and Bm.is_identity():
        return identity_1cell(X), identity_1cell(X)
    incl = Bm.columns()
    I_left = tuple(Cm @ X.left_regular[i] @ Bm for i in range(X.dim))
    I_right = tuple(Cm @ X.right_matrix(incl[j]) @ Bm for j in range(Y.dim))
    P_left = tuple(Cm @ X.left_matrix(incl[j]) @ Bm for j in range(Y.dim))
    P_right = tuple(Cm @ X.right_regular[i] @ Bm for i in range(X.dim))
    tag = Y.name or "Y"
    I = Bimodule(X, Y, Y.dim, I_left, I_right, name=f"I[{tag}]")
    P = Bimodule(Y, X, Y.dim, P_left, P_right, name=f"P[{tag}]")
    return I, P


def corner_cells(c: Corner) -> CornerCells:
    X, Y = c.parent, c.algebra
    F = X.field
    I, P = corner_bimodules(c)
    IP, PI = compose(I, P), compose(P, I)
    IdX, IdY = identity_1cell(X), identity_1cell(Y)
    e = c.idempotent
    incl = c.inclusion.columns()
    d = Y.dim
    unit = [(q, u) for q, u in enumerate(Y.unit) if u]

    eta_vecs = []
    for i in range(X.dim):
        ae = c.coords.apply(X.multiply(X.basis_vector(i), e))
        eta_vecs.append({p * d + q: F.norm(v * u) for p, v in enumerate(ae) if v for q, u in unit})
    eta = BimoduleMap(IdX, IP, _into_pure(IP, eta_vecs))
    epsbar = BimoduleMap(IP, IdX, _from_pure(IP, IdX, lambda p, q: X.multiply(incl[p], incl[q])))
    eps = BimoduleMap(PI, IdY, _from_pure(PI, IdY, lambda p, q: Y.mul[p][q]))
    etabar_vecs = [{j * d + q: u for q, u in unit} for j in range(d)]
    etabar = BimoduleMap(IdY, PI, _into_pure(PI, etabar_vecs))
    return CornerCells(c, I, P, eta, eps, etabar, epsbar)


# -- equivalences -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class EquivalenceData:
    """Certificate that ``M: A -> B`` is an equivalence with inverse ``N``.

    ``counit: M o N => Id_B`` and ``unit_inverse: N o M => Id_A`` are invertible.
    """

    M: Bimodule
    N: Bimodule
    counit: BimoduleMap
    unit_inverse: BimoduleMap

    @property
    def unit(self) -> BimoduleMap:
        return self.unit_inverse.inverse()


def left_dual(M: Bimodule) -> tuple[Bimodule, list[Matrix]]:
    """``Hom_B(M, B)`` for a (B, A)-bimodule M, as an (A, B)-bimodule.

    Returns the dual and its basis of left B-linear maps (dim B x dim M).
    """
    B, A = M.left_alg, M.right_alg
    F = M.field
    m, n = M.dim, B.dim
    rows = []
    for Lm, Lb in zip(M.left_action, B.left_regular):
        rows.extend(_intertwiner_rows(F, Lm, Lb, m, n))
    red, piv = rref_rows(F, rows)
    vecs = kernel_from_rref(F, red, piv, n * m) if m else []
    basis = [Matrix._raw(F, n, m, [v[r * m:(r + 1) * m] for r in range(n)]) for v in vecs]
    sub = Subspace(F, n * m, [f.flatten() for f in basis]) if basis else None

    def coords_of(g: Matrix) -> tuple:
        return sub.coordinates(g.flatten())

    k = len(basis)

    def action(fn):
        if k == 0:
            return Matrix.zeros(F, 0, 0)
        return Matrix.from_columns(F, [coords_of(fn(f)) for f in basis], rows=k)

    left = tuple(action(lambda f, R=R: f @ R) for R in M.right_action)
    right = tuple(action(lambda f, R=R: R @ f) for R in B.right_regular)
    return Bimodule(A, B, k, left, right, name=f"{M.name}*" if M.name else ""), basis


def is_equivalence(M: Bimodule) -> EquivalenceData | None:
    """Morita test: both canonical maps with the dual must be isomorphisms."""
    B, A = M.left_alg, M.right_alg
    F = M.field
    if M.dim == 0:
        return None
    # A -> End_B(M), a -> R_M(a), must be bijective
    end_b = hom_basis_left(M)
    if len(end_b) != A.dim:
        return None
    R = Matrix.from_columns(F, [R_.flatten() for R_ in M.right_action], rows=M.dim * M.dim)
    if R.rank() != A.dim:
        return None
    N, basis = left_dual(M)
    if N.dim == 0:
        return None
    MN = compose(M, N)
    ev = BimoduleMap(MN, identity_1cell(B), _from_pure(MN, identity_1cell(B), lambda p, q: basis[q].column(p)))
    if not ev.is_invertible():
        return None
    NM = compose(N, M)
    Rsub = Subspace(F, M.dim * M.dim, R.columns())

    def psi(fi, p):
        # x -> f(x) . m_p as a matrix over the basis of M
        f = basis[fi]
        E = Matrix.from_columns(F, [M.left(f.column(x)).column(p) for x in range(M.dim)], rows=M.dim)
        if not Rsub.contains(E.flatten()):
            raise BimoduleError("endomorphism outside the image of the right action")
        return Rsub.coordinates(E.flatten())

    psi_map = BimoduleMap(NM, identity_1cell(A), _from_pure(NM, identity_1cell(A), psi))
    if not psi_map.is_invertible():
        return None
    return EquivalenceData(M, N, ev, psi_map)


def hom_basis_left(M: Bimodule) -> list[Matrix]:
    """Basis of the left-module endomorphisms of M."""
    F = M.field
    m = M.dim
    rows = []
    for L in M.left_action:
        rows.extend(_intertwiner_rows(F, L, L, m, m))
    red, piv = rref_rows(F, rows)
    return [Matrix._raw(F, m, m, [v[r * m:(r + 1) * m] for r in range(m)]) for v in kernel_from_rref(F, red, piv, m * m)]


# -- isomorphism search -------------------------------------------------------

DEFAULT_SEED = 20240611
EXHAUSTIVE_LIMIT = 10 ** 6
RATIONAL_TRIALS = 64


@dataclass(frozen=True, eq=False)
class IsoResult:
    status: str  # "found", "not-isomorphic" or "inconclusive"
    map: BimoduleMap | None
    seed: int
    trials: int

    @property
    def found(self) -> bool:
        return self.status == "found"


def find_isomorphism(M: Bimodule, N: Bimodule, seed: int = DEFAULT_SEED) -> IsoResult:
    """Search the hom space for an invertible 2-cell.

    Over F_p with p^r <= 10^6 the search is exhaustive, so a negative answer
    is certified; otherwise it is seeded random and a miss is inconclusive.
    """
    if not (_same(M.left_alg, N.left_alg) and _same(M.right_alg, N.right_alg)):
        raise BimoduleError("isomorphism search between bimodules over different algebra pairs")
    if M.dim != N.dim:
        return IsoResult("not-isomorphic", None, seed, 0)
    if M == N:
        return IsoResult("found", BimoduleMap(M, N, Matrix.identity(M.field, M.dim)), seed, 0)
    if M.dim == 0:
        return IsoResult("found", zero_map(M, N), seed, 0)
    basis = hom_basis(M, N)
    if not basis:
        return IsoResult("not-isomorphic", None, seed, 0)
    F = M.field
    mats = [f.matrix for f in basis]
    trials = 0

    def attempt(coeffs):
        X = mats[0].scale(coeffs[0])
        for c, Y in zip(coeffs[1:], mats[1:]):
            if c:
                X = X + Y.scale(c)
        return X if X.is_invertible() else None

    for f in mats:  # cheap first guesses
        trials += 1
        if f.is_invertible():
            return IsoResult("found", BimoduleMap(M, N, f), seed, trials)
    rng = random.Random(seed)
    for _ in range(RATIONAL_TRIALS):
        trials += 1
        X = attempt([F.random_element(rng) for _ in mats])
        if X is not None:
            return IsoResult("found", BimoduleMap(M, N, X), seed, trials)
    if F.is_prime_field and F.p ** len(mats) <= EXHAUSTIVE_LIMIT:
        from itertools import product

        for coeffs in product(range(F.p), repeat=len(mats)):
            if not any(coeffs):
                continue
            trials += 1
            X = attempt(coeffs)
            if X is not None:
                return IsoResult("found", BimoduleMap(M, N, X), seed, trials)
        return IsoResult("not-isomorphic", None, seed, trials)
    return IsoResult("inconclusive", None, seed, trials)
