"""Generators for curated test algebras."""

from __future__ import annotations

import random
from graphlib import CycleError, TopologicalSorter
from itertools import permutations, product
from typing import Sequence

from .algebra import AlgebraError, FDAlgebra, change_basis, monogenic_algebra, product_algebra
from .linalg import Field, Matrix, Polynomial

MAX_GROUP_ORDER = 24
MAX_MATRIX_SIZE = 4
MAX_PATHS = 8


class InstanceError(ValueError):
    pass


# -- groups ----------------------------------------------------------------

def validate_cayley_table(table: Sequence[Sequence[int]]) -> int:
    """Check the group axioms; return the index of the identity."""
    n = len(table)
    if n == 0 or n > MAX_GROUP_ORDER:
        raise InstanceError(f"group order must be between 1 and {MAX_GROUP_ORDER}")
    if any(len(r) != n or any(not isinstance(x, int) or not 0 <= x < n for x in r) for r in table):
        raise InstanceError("Cayley table entries must be indices into the group")
    ids = [e for e in range(n) if all(table[e][g] == g and table[g][e] == g for g in range(n))]
    if not ids:
        raise InstanceError("Cayley table has no identity element")
    e = ids[0]
    for g in range(n):
        if sorted(table[g]) != list(range(n)) or sorted(table[h][g] for h in range(n)) != list(range(n)):
            raise InstanceError("Cayley table is not a Latin square")
    for a in range(n):
        for b in range(n):
            ab = table[a][b]
            for c in range(n):
                if table[ab][c] != table[a][table[b][c]]:
                    raise InstanceError(f"Cayley table is not associative at ({a}, {b}, {c})")
    return e


def group_algebra(field: Field, table: Sequence[Sequence[int]], name: str = "") -> FDAlgebra:
    e = validate_cayley_table(table)
    n = len(table)
    mul = {(i, j, table[i][j]): 1 for i in range(n) for j in range(n)}
    unit = [1 if k == e else 0 for k in range(n)]
    return FDAlgebra.from_structure_constants(field, mul, unit, name)


def _table_from_elements(elements: list, op) -> list[list[int]]:
    index = {g: i for i, g in enumerate(elements)}
    return [[index[op(a, b)] for b in elements] for a in elements]


def cyclic_table(n: int) -> list[list[int]]:
    return [[(i + j) % n for j in range(n)] for i in range(n)]


def dihedral_table(n: int) -> list[list[int]]:
    """D_n of order 2n, elements (r^k s^f) encoded as (k, f)."""
    elements = [(k, f) for f in (0, 1) for k in range(n)]

    def op(a, b):
        k1, f1 = a
        k2, f2 = b
        return ((k1 + (-k2 if f1 else k2)) % n, f1 ^ f2)

    return _table_from_elements(elements, op)


def _perm_compose(a, b):
    return tuple(a[b[i]] for i in range(len(a)))


def _parity(p) -> int:
    inv = sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j])
    return inv % 2


def symmetric_table(n: int) -> list[list[int]]:
    return _table_from_elements(sorted(permutations(range(n))), _perm_compose)


def alternating_table(n: int) -> list[list[int]]:
    return _table_from_elements([p for p in sorted(permutations(range(n))) if _parity(p) == 0], _perm_compose)


def quaternion_table() -> list[list[int]]:
    """Q8 as unit quaternions (sign, axis) with axis in 1, i, j, k."""
    mult = {  # axis products without sign
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }
    elements = [(s, a) for s in (1, -1) for a in range(4)]

    def op(x, y):
        s, a = mult[(x[1], y[1])]
        return (x[0] * y[0] * s, a)

    return _table_from_elements(elements, op)


def direct_product_table(t1: Sequence[Sequence[int]], t2: Sequence[Sequence[int]]) -> list[list[int]]:
    n2 = len(t2)
    elements = list(product(range(len(t1)), range(n2)))
    return _table_from_elements(elements, lambda a, b: (t1[a[0]][b[0]], t2[a[1]][b[1]]))


def builtin_group(label: str) -> list[list[int]]:
    """Cayley table for names like ``C4``, ``D5``, ``S3``, ``A4``, ``Q8`` or ``C2xC2``."""
    parts = label.replace("×", "x").split("x") if "x" in label.replace("×", "x")[1:] else [label]
    if len(parts) > 1:
        table = builtin_group(parts[0])
        for part in parts[1:]:
            table = direct_product_table(table, builtin_group(part))
        if len(table) > MAX_GROUP_ORDER:
            raise InstanceError(f"group order exceeds {MAX_GROUP_ORDER}")
        return table
    kind, arg = label[:1].upper(), label[1:]
    if label.upper() == "Q8":
        return quaternion_table()
    if not arg.isdigit():
        raise InstanceError(f"unknown group {label!r}")
    n = int(arg)
    if kind == "C" and n >= 1:
        table = cyclic_table(n)
    elif kind == "D" and n >= 1:
        table = dihedral_table(n)
    elif kind == "S" and 1 <= n <= 4:
        table = symmetric_table(n)
    elif kind == "A" and 1 <= n <= 4:
        table = alternating_table(n)
    else:
        raise InstanceError(f"unknown group {label!r}")
    if len(table) > MAX_GROUP_ORDER:
        raise InstanceError(f"group order exceeds {MAX_GROUP_ORDER}")
    return table


# -- other families --------------------------------------------------------

def field_algebra(field: Field, name: str = "") -> FDAlgebra:
    return FDAlgebra.from_structure_constants(field, [[[1]]], [1], name)


def split_algebra(field: Field, n: int, name: str = "") -> FDAlgebra:
    """k^n with orthogonal idempotent basis."""
    return product_algebra(*[field_algebra(field) for _ in range(n)], name=name)


def matrix_algebra(field: Field, n: int, name: str = "") -> FDAlgebra:
    """M_n(k) in the matrix-unit basis E_ij at index i*n + j."""
    if not 1 <= n <= MAX_MATRIX_SIZE:
        raise InstanceError(f"matrix size must be between 1 and {MAX_MATRIX_SIZE}")
    mul = {(i * n + j, j * n + l, i * n + l): 1 for i in range(n) for j in range(n) for l in range(n)}
    unit = [1 if k // n == k % n else 0 for k in range(n * n)]
    return FDAlgebra.from_structure_constants(field, mul, unit, name)


def path_algebra(field: Field, vertices: int, arrows: Sequence[tuple[int, int]], name: str = "") -> FDAlgebra:
    """Path algebra of an acyclic quiver.

    Basis: the trivial paths first, then longer paths.  The product ``p*q``
    is ``p`` after ``q`` (q's target equals p's source) and zero otherwise.
    """
    if vertices < 1:
        raise InstanceError("a quiver needs at least one vertex")
    arrows = [tuple(a) for a in arrows]
    if any(not (0 <= s < vertices and 0 <= t < vertices) for s, t in arrows):
        raise InstanceError("arrow endpoint out of range")
    graph = {v: set() for v in range(vertices)}
    for s, t in arrows:
        graph[t].add(s)
    try:
        tuple(TopologicalSorter(graph).static_order())
    except CycleError as exc:
        raise InstanceError("quiver has an oriented cycle") from exc
    # a path is (source, target, arrow indices in traversal order)
    paths = [(v, v, ()) for v in range(vertices)]
    frontier = [(s, t, (k,)) for k, (s, t) in enumerate(arrows)]
    while frontier:
        paths.extend(frontier)
        if len(paths) - vertices > MAX_PATHS:
            raise InstanceError(f"quiver has more than {MAX_PATHS} nontrivial paths")
        frontier = [(s, arrows[k][1], w + (k,)) for s, t, w in frontier for k in range(len(arrows)) if arrows[k][0] == t]
    index = {p: i for i, p in enumerate(paths)}
    mul = {}
    for i, (ps, pt, pw) in enumerate(paths):
        for j, (qs, qt, qw) in enumerate(paths):
            if qt == ps:
                mul[(i, j, index[(qs, pt, qw + pw)])] = 1
    unit = [1 if i < vertices else 0 for i in range(len(paths))]
    return FDAlgebra.from_structure_constants(field, mul, unit, name)


def polynomial_algebra(field: Field, coeffs: Sequence, name: str = "") -> FDAlgebra:
    """k[t]/(f) for ``f`` given by coefficients low to high (made monic)."""
    f = Polynomial.make(field, coeffs)
    if f.degree < 1:
        raise InstanceError("polynomial must have degree >= 1")
    return monogenic_algebra(f.monic(), name)


def random_invertible(field: Field, n: int, rng: random.Random) -> Matrix:
    while True:
        M = Matrix.from_rows(field, [[field.random_element(rng) for _ in range(n)] for _ in range(n)])
        if M.is_invertible():
            return M


def scrambled(A: FDAlgebra, seed: int, name: str = "") -> FDAlgebra:
    """``A`` in a seeded random basis; isomorphic to ``A`` as an algebra."""
    T = random_invertible(A.field, A.dim, random.Random(seed))
    return change_basis(A, T, name)


__all__ = [
    "AlgebraError", "InstanceError", "builtin_group", "group_algebra", "field_algebra", "split_algebra",
    "matrix_algebra", "path_algebra", "polynomial_algebra", "scrambled", "random_invertible",
    "validate_cayley_table", "direct_product_table",
]
