"""Dense exact matrices and sparse row reduction.

Row reduction picks the leftmost pivot column and, within it, the first row
with a nonzero entry, so every basis produced here is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .field import Field


class ShapeError(ValueError):
    pass


class SingularMatrixError(ArithmeticError):
    pass


def rref_rows(field: Field, rows: Iterable[dict]) -> tuple[list[dict], list[int]]:
    """Reduced row echelon form of sparse rows ``{col: value}``.

    Returns the nonzero reduced rows (pivot entry 1) ordered by pivot column,
    together with the pivot columns.
    """
    norm, inv = field.norm, field.inv
    pending = [{c: v for c, v in r.items() if v} for r in rows]
    basis: dict[int, dict] = {}
    for row in pending:
        if not row:
            continue
        # basis rows vanish on every other pivot column, so one pass suffices
        for c in [c for c in row if c in basis]:
            coef = row[c]
            for k, v in basis[c].items():
                nv = norm(row.get(k, 0) - coef * v)
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
        if not row:
            continue
        piv = min(row)
        scale = inv(row[piv])
        row = {k: norm(v * scale) for k, v in row.items()}
        for other in basis.values():
            coef = other.get(piv)
            if coef:
                for k, v in row.items():
                    nv = norm(other.get(k, 0) - coef * v)
                    if nv:
                        other[k] = nv
                    else:
                        other.pop(k, None)
        basis[piv] = row
    pivots = sorted(basis)
    return [basis[c] for c in pivots], pivots


@dataclass(frozen=True)
class Matrix:
    field: Field
    rows: int
    cols: int
    data: tuple

    def __post_init__(self):
        if len(self.data) != self.rows or any(len(r) != self.cols for r in self.data):
            raise ShapeError("entry count does not match the declared shape")

    # -- construction -------------------------------------------------
    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        data = tuple(tuple(field(x) for x in r) for r in rows)
        if cols is None:
            cols = len(data[0]) if data else 0
        return cls(field, len(data), cols, data)

    @classmethod
    def _raw(cls, field, rows, cols, data):
        return cls(field, rows, cols, tuple(tuple(r) for r in data))

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        z = field.zero
        return cls(field, rows, cols, tuple((z,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        z, o = field.zero, field.one
        return cls(field, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    @classmethod
    def from_columns(cls, field: Field, columns: Sequence[Sequence], rows: int | None = None) -> "Matrix":
        if rows is None:
            rows = len(columns[0]) if columns else 0
        cols = [tuple(field(x) for x in c) for c in columns]
        data = tuple(tuple(c[i] for c in cols) for i in range(rows))
        return cls(field, rows, len(cols), data)

    @classmethod
    def from_sparse_columns(cls, field: Field, rows: int, columns: Sequence[dict]) -> "Matrix":
        z = field.zero
        data = [[z] * len(columns) for _ in range(rows)]
        for j, col in enumerate(columns):
            for i, v in col.items():
                data[i][j] = v
        return cls._raw(field, rows, len(columns), data)

    # -- access -------------------------------------------------------
    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.data)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.cols)]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def T(self) -> "Matrix":
        return Matrix(self.field, self.cols, self.rows, tuple(zip(*self.data)) if self.rows else tuple(() for _ in range(self.cols)))

    def flatten(self) -> tuple:
        return tuple(x for r in self.data for x in r)

    def sparse_rows(self) -> list[dict]:
        return [{j: v for j, v in enumerate(r) if v} for r in self.data]

    # -- arithmetic ---------------------------------------------------
    def _check_field(self, other: "Matrix"):
        if other.field != self.field:
            raise ShapeError("matrices over different fields")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_field(other)
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        n = self.field.norm
        return Matrix(self.field, self.rows, self.cols,
                      tuple(tuple(n(a + b) for a, b in zip(r, s)) for r, s in zip(self.data, other.data)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_field(other)
        if self.shape != other.shape:
            raise ShapeError(f"cannot subtract {other.shape} from {self.shape}")
        n = self.field.norm
        return Matrix(self.field, self.rows, self.cols,
                      tuple(tuple(n(a - b) for a, b in zip(r, s)) for r, s in zip(self.data, other.data)))

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def scale(self, c) -> "Matrix":
        c = self.field(c)
        n = self.field.norm
        return Matrix(self.field, self.rows, self.cols, tuple(tuple(n(c * a) for a in r) for r in self.data))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check_field(other)
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        n = self.field.norm
        z = self.field.zero
        orows = [[(k, v) for k, v in enumerate(r) if v] for r in other.data]
        out = []
        for r in self.data:
            acc = [z] * other.cols
            for k, a in enumerate(r):
                if a:
                    for j, b in orows[k]:
                        acc[j] += a * b
            out.append(tuple(n(x) for x in acc))
        return Matrix(self.field, self.rows, other.cols, tuple(out))

    def apply(self, v: Sequence) -> tuple:
        if len(v) != self.cols:
            raise ShapeError(f"vector of length {len(v)} for a {self.shape} matrix")
        n = self.field.norm
        nz = [(k, x) for k, x in enumerate(v) if x]
        return tuple(n(sum((r[k] * x for k, x in nz), self.field.zero)) for r in self.data)

    def kron(self, other: "Matrix") -> "Matrix":
        self._check_field(other)
        n = self.field.norm
        z = self.field.zero
        out = []
        for r in self.data:
            for s in other.data:
                row = []
                for a in r:
                    if a:
                        row.extend(n(a * b) for b in s)
                    else:
                        row.extend([z] * other.cols)
                out.append(tuple(row))
        return Matrix(self.field, self.rows * other.rows, self.cols * other.cols, tuple(out))

    def hstack(self, *others: "Matrix") -> "Matrix":
        mats = (self,) + others
        if any(m.rows != self.rows for m in mats):
            raise ShapeError("hstack needs equal row counts")
        data = tuple(sum((m.data[i] for m in mats), ()) for i in range(self.rows))
        return Matrix(self.field, self.rows, sum(m.cols for m in mats), data)

    def vstack(self, *others: "Matrix") -> "Matrix":
        mats = (self,) + others
        if any(m.cols != self.cols for m in mats):
            raise ShapeError("vstack needs equal column counts")
        return Matrix(self.field, sum(m.rows for m in mats), self.cols, sum((m.data for m in mats), ()))

    @staticmethod
    def block_diag(field: Field, blocks: Sequence["Matrix"]) -> "Matrix":
        rows = sum(b.rows for b in blocks)
        cols = sum(b.cols for b in blocks)
        z = field.zero
        data = []
        off = 0
        for b in blocks:
            for r in b.data:
                data.append((z,) * off + tuple(r) + (z,) * (cols - off - b.cols))
            off += b.cols
        return Matrix(field, rows, cols, tuple(data))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix(self.field, len(rows), len(cols), tuple(tuple(self.data[i][j] for j in cols) for i in rows))

    # -- predicates ---------------------------------------------------
    def is_zero(self) -> bool:
        return not any(x for r in self.data for x in r)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_identity(self) -> bool:
        return self.is_square() and all(
            (x == 1) if i == j else (not x) for i, r in enumerate(self.data) for j, x in enumerate(r))

    # -- elimination --------------------------------------------------
    def rref(self) -> tuple["Matrix", list[int]]:
        red, piv = rref_rows(self.field, self.sparse_rows())
        z = self.field.zero
        data = [[z] * self.cols for _ in range(self.rows)]
        for i, r in enumerate(red):
            for j, v in r.items():
                data[i][j] = v
        return Matrix._raw(self.field, self.rows, self.cols, data), piv

    def rank(self) -> int:
        return len(rref_rows(self.field, self.sparse_rows())[1])

    def kernel(self) -> list[tuple]:
        """Basis of the right null space, one vector per free column."""
        red, piv = rref_rows(self.field, self.sparse_rows())
        return kernel_from_rref(self.field, red, piv, self.cols)

    def is_invertible(self) -> bool:
        return self.is_square() and self.rank() == self.rows

    def inverse(self) -> "Matrix":
        if not self.is_square():
            raise ShapeError(f"cannot invert a {self.shape} matrix")
        n = self.rows
        rows = [{**{j: v for j, v in enumerate(r) if v}, n + i: self.field.one} for i, r in enumerate(self.data)]
        red, piv = rref_rows(self.field, rows)
        if n and (len(piv) < n or piv[n - 1] >= n):
            raise SingularMatrixError("matrix is singular")
        z = self.field.zero
        data = [[z] * n for _ in range(n)]
        for i, r in enumerate(red[:n]):
            for j, v in r.items():
                if j >= n:
                    data[i][j - n] = v
        return Matrix._raw(self.field, n, n, data)

    def __repr__(self):
        body = "; ".join(" ".join(self.field.fmt(x) for x in r) for r in self.data)
        return f"Matrix<{self.field} {self.rows}x{self.cols}>[{body}]"


def kernel_from_rref(field: Field, red: list[dict], piv: list[int], ncols: int) -> list[tuple]:
    pivset = set(piv)
    z, o = field.zero, field.one
    out = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [z] * ncols
        v[f] = o
        for r, p in zip(red, piv):
            c = r.get(f)
            if c:
                v[p] = field.norm(-c)
        out.append(tuple(v))
    return out


@dataclass(frozen=True)
class Solution:
    """Outcome of :func:`solve_linear`; ``particular`` is None when inconsistent."""

    particular: tuple | None
    kernel: tuple

    @property
    def consistent(self) -> bool:
        return self.particular is not None


def solve_linear(A: Matrix, b: Sequence) -> Solution:
    """Solve ``A x = b`` exactly; always reports a kernel basis."""
    if isinstance(b, Matrix):
        if b.cols != 1:
            raise ShapeError("right-hand side must be a column")
        b = b.column(0)
    if len(b) != A.rows:
        raise ShapeError(f"right-hand side of length {len(b)} for {A.rows} equations")
    F = A.field
    n = A.cols
    rows = []
    for r, rhs in zip(A.data, b):
        row = {j: v for j, v in enumerate(r) if v}
        rhs = F(rhs)
        if rhs:
            row[n] = rhs
        rows.append(row)
    red, piv = rref_rows(F, rows)
    kernel = kernel_from_rref(F, [{k: v for k, v in r.items() if k < n} for r in red],
                              [p for p in piv if p < n], n)
    if piv and piv[-1] == n:
        return Solution(None, tuple(kernel))
    x = [F.zero] * n
    for r, p in zip(red, piv):
        x[p] = r.get(n, F.zero)
    return Solution(tuple(x), tuple(kernel))


class Subspace:
    """A subspace given by basis columns, with an exact coordinate map."""

    def __init__(self, field: Field, ambient: int, vectors: Sequence[Sequence]):
        self.field = field
        self.ambient = ambient
        red, piv = rref_rows(field, [{j: v for j, v in enumerate(vec) if v} for vec in vectors])
        if len(piv) != len(vectors):
            raise ValueError("vectors are linearly dependent")
        self.basis = Matrix.from_columns(field, vectors, rows=ambient) if vectors else Matrix.zeros(field, ambient, 0)
        # rows of the basis at these ambient positions form an invertible block
        self._rows = _independent_rows(field, self.basis)
        if vectors:
            block = self.basis.submatrix(self._rows, range(self.basis.cols)).inverse()
            sel = [[field.zero] * ambient for _ in self._rows]
            for i, r in enumerate(self._rows):
                sel[i][r] = field.one
            self.coords = block @ Matrix._raw(field, len(self._rows), ambient, sel)
        else:
            self.coords = Matrix.zeros(field, 0, ambient)

    @property
    def dim(self) -> int:
        return self.basis.cols

    def coordinates(self, v: Sequence) -> tuple:
        return self.coords.apply(v)

    def contains(self, v: Sequence) -> bool:
        return self.basis.apply(self.coordinates(v)) == tuple(self.field(x) for x in v)


def _independent_rows(field: Field, B: Matrix) -> list[int]:
    _, piv = rref_rows(field, B.T.sparse_rows())
    return piv


def span_basis(field: Field, vectors: Iterable[Sequence], ambient: int) -> list[tuple]:
    """RREF basis of the span of ``vectors``."""
    red, piv = rref_rows(field, [{j: v for j, v in enumerate(vec) if v} for vec in vectors])
    z = field.zero
    out = []
    for r in red:
        v = [z] * ambient
        for j, x in r.items():
            v[j] = x
        out.append(tuple(v))
    return out


class QuotientSpace:
    """``K^n / W`` with coset representatives at the non-pivot coordinates.

    ``projection`` (dim x n) sends a vector to its coset coordinates and
    ``section`` (n x dim) picks the representative supported on free columns.
    """

    def __init__(self, field: Field, ambient: int, relations: Iterable[dict]):
        self.field = field
        self.ambient = ambient
        red, piv = rref_rows(field, relations)
        self.relation_basis = red
        self.pivots = piv
        pivset = set(piv)
        self.free = [j for j in range(ambient) if j not in pivset]
        index = {j: i for i, j in enumerate(self.free)}
        z = field.zero
        cols: list[dict] = [dict() for _ in range(ambient)]
        for j in self.free:
            cols[j] = {index[j]: field.one}
        for r, p in zip(red, piv):
            cols[p] = {index[f]: field.norm(-v) for f, v in r.items() if f != p}
        self.projection = Matrix.from_sparse_columns(field, len(self.free), cols)
        data = [[z] * len(self.free) for _ in range(ambient)]
        for i, j in enumerate(self.free):
            data[j][i] = field.one
        self.section = Matrix._raw(field, ambient, len(self.free), data)

    @property
    def dim(self) -> int:
        return len(self.free)
