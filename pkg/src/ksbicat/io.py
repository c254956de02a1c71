"""JSON instance files holding named algebras, bimodules and the data built on them.

Scalars are stored as exact strings ("3", "-1/2", or residues for F_p).
Algebras may be given explicitly or by a ``generate`` recipe; 1-cells may be
named, inline, ``{"compose": [...]}`` or ``{"identity": ALG}``.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .algebra import AlgebraError, FDAlgebra, center, connectivity_report, corner_algebra, product_algebra
from .bimodule import Bimodule, BimoduleError, BimoduleMap, compose_many, identity_1cell
from .instances import (
    InstanceError,
    builtin_group,
    field_algebra,
    group_algebra,
    matrix_algebra,
    path_algebra,
    polynomial_algebra,
    scrambled,
    split_algebra,
)
from .kstheory import (
    Decomposition,
    DirectSumDiagram,
    KSError,
    SplittingDatum,
    associated_idempotent,
    datum_from_corner,
    ks_decompose,
    twist,
)
from .linalg import Field, FieldError, Matrix

FORMAT_VERSION = 1


class InstanceFormatError(ValueError):
    """Malformed or inconsistent instance file."""


@dataclass
class InstanceFile:
    field: Field
    algebras: dict[str, FDAlgebra] = field(default_factory=dict)
    bimodules: dict[str, Bimodule] = field(default_factory=dict)
    maps: dict[str, BimoduleMap] = field(default_factory=dict)
    elements: dict[str, tuple] = field(default_factory=dict)
    splittings: dict[str, SplittingDatum] = field(default_factory=dict)
    diagrams: dict[str, DirectSumDiagram] = field(default_factory=dict)
    decompositions: dict[str, Decomposition] = field(default_factory=dict)

    def get(self, section: str, name: str):
        table = getattr(self, section)
        if name not in table:
            raise InstanceFormatError(f"no {section[:-1]} named {name!r}")
        return table[name]


# -- scalars and matrices -----------------------------------------------------

def _scalar(F: Field, s) -> Any:
    if isinstance(s, bool) or not isinstance(s, (str, int)):
        raise InstanceFormatError(f"scalar must be an exact string or integer, got {s!r}")
    try:
        return F.parse(str(s))
    except (ValueError, ZeroDivisionError, FieldError) as exc:
        raise InstanceFormatError(f"bad scalar {s!r}: {exc}") from None


def _vector(F: Field, v, n: int | None = None) -> tuple:
    if not isinstance(v, list) or (n is not None and len(v) != n):
        raise InstanceFormatError(f"expected a list of {n} scalars")
    return tuple(_scalar(F, s) for s in v)


def _matrix(F: Field, rows, shape: tuple[int, int]) -> Matrix:
    r, c = shape
    if not isinstance(rows, list) or len(rows) != r:
        raise InstanceFormatError(f"expected a {r}x{c} matrix")
    return Matrix.from_rows(F, [_vector(F, row, c) for row in rows], cols=c) if r else Matrix.zeros(F, 0, c)


def _fmt_vector(F: Field, v) -> list[str]:
    return [F.fmt(x) for x in v]


def _fmt_matrix(M: Matrix) -> list[list[str]]:
    return [_fmt_vector(M.field, row) for row in M.data]


# -- loading ------------------------------------------------------------------

class _Loader:
    def __init__(self, raw: dict):
        if not isinstance(raw, dict):
            raise InstanceFormatError("instance file must be a JSON object")
        try:
            self.F = Field.from_json(raw.get("field", "Q"))
        except (FieldError, KeyError, TypeError) as exc:
            raise InstanceFormatError(f"bad field: {exc}") from None
        self.raw = raw
        self.out = InstanceFile(self.F)
        self._busy: set = set()

    def section(self, name: str) -> dict:
        sec = self.raw.get(name, {})
        if not isinstance(sec, dict):
            raise InstanceFormatError(f"section {name!r} must be an object")
        return sec

    def _named(self, section: str, name: str, build):
        table = getattr(self.out, section)
        if name in table:
            return table[name]
        defs = self.section(section)
        if name not in defs:
            raise InstanceFormatError(f"unresolved reference to {section[:-1]} {name!r}")
        key = (section, name)
        if key in self._busy:
            raise InstanceFormatError(f"circular definition of {section[:-1]} {name!r}")
        self._busy.add(key)
        try:
            obj = build(defs[name], name)
        finally:
            self._busy.discard(key)
        table[name] = obj
        return obj

    # algebras
    def algebra(self, ref, name: str = "") -> FDAlgebra:
        if isinstance(ref, str):
            return self._named("algebras", ref, self._build_algebra)
        return self._build_algebra(ref, name)

    def _build_algebra(self, d, name: str) -> FDAlgebra:
        if not isinstance(d, dict):
            raise InstanceFormatError(f"algebra {name!r} must be an object")
        F = self.F
        if "generate" in d:
            return generate_algebra(F, d["generate"], name, resolve=self.algebra)
        try:
            n = int(d["dim"])
            unit = _vector(F, d["unit"], n)
            mul = {}
            for entry in d["mul"]:
                i, j, k, c = entry
                if not all(isinstance(t, int) and 0 <= t < n for t in (i, j, k)):
                    raise InstanceFormatError(f"algebra {name!r}: structure constant index out of range")
                mul[(i, j, k)] = F.norm(mul.get((i, j, k), F.zero) + _scalar(F, c))
            return FDAlgebra.from_structure_constants(F, mul, unit, name)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InstanceFormatError):
                raise
            raise InstanceFormatError(f"algebra {name!r}: {exc}") from None

    # 1-cells
    def bimodule(self, ref, name: str = "") -> Bimodule:
        if isinstance(ref, str):
            return self._named("bimodules", ref, self._build_bimodule)
        return self._build_bimodule(ref, name)

    def _build_bimodule(self, d, name: str) -> Bimodule:
        if not isinstance(d, dict):
            raise InstanceFormatError(f"bimodule {name!r} must be an object")
        try:
            if "identity" in d:
                return identity_1cell(self.algebra(d["identity"]))
            if "compose" in d:
                parts = [self.bimodule(p) for p in d["compose"]]
                if not parts:
                    raise InstanceFormatError("empty composite")
                return compose_many(*parts)
            B, A = self.algebra(d["left"]), self.algebra(d["right"])
            n = int(d["dim"])
            F = self.F
            left = tuple(_matrix(F, m, (n, n)) for m in d["left_action"])
            right = tuple(_matrix(F, m, (n, n)) for m in d["right_action"])
            M = Bimodule(B, A, n, left, right, name)
            M.validate()
            return M
        except BimoduleError as exc:
            raise InstanceFormatError(f"bimodule {name!r}: {exc}") from None
        except (KeyError, TypeError) as exc:
            raise InstanceFormatError(f"bimodule {name!r}: missing or malformed field {exc}") from None

    # 2-cells
    def map(self, ref, name: str = "", source: Bimodule | None = None, target: Bimodule | None = None) -> BimoduleMap:
        if isinstance(ref, str):
            f = self._named("maps", ref, self._build_map)
            if (source is not None and f.source != source) or (target is not None and f.target != target):
                raise InstanceFormatError(f"2-cell {ref!r} has the wrong source or target")
            return f
        if isinstance(ref, list):
            if source is None or target is None:
                raise InstanceFormatError("a bare matrix needs a known source and target")
            return self._checked_map(source, target, _matrix(self.F, ref, (target.dim, source.dim)), name)
        return self._build_map(ref, name)

    def _checked_map(self, S: Bimodule, T: Bimodule, M: Matrix, name: str) -> BimoduleMap:
        f = BimoduleMap(S, T, M)
        if not f.is_natural():
            raise InstanceFormatError(f"2-cell {name!r} does not commute with the actions")
        return f

    def _build_map(self, d, name: str) -> BimoduleMap:
        if not isinstance(d, dict):
            raise InstanceFormatError(f"2-cell {name!r} must be an object")
        try:
            S, T = self.bimodule(d["source"]), self.bimodule(d["target"])
            return self._checked_map(S, T, _matrix(self.F, d["matrix"], (T.dim, S.dim)), name)
        except (KeyError, TypeError) as exc:
            raise InstanceFormatError(f"2-cell {name!r}: missing or malformed field {exc}") from None

    # elements
    def element(self, ref, A: FDAlgebra) -> tuple:
        if isinstance(ref, str):
            elems = self.section("elements")
            if ref not in elems:
                raise InstanceFormatError(f"no element named {ref!r}")
            ref = elems[ref]
        return _vector(self.F, ref, A.dim)

    # splittings
    def splitting(self, ref, name: str = "") -> SplittingDatum:
        if isinstance(ref, str):
            return self._named("splittings", ref, self._build_splitting)
        return self._build_splitting(ref, name)

    def _build_splitting(self, d, name: str) -> SplittingDatum:
        if not isinstance(d, dict):
            raise InstanceFormatError(f"splitting {name!r} must be an object")
        try:
            if "twist" in d:
                t = d["twist"]
                s = self.splitting(t["of"])
                cx = self.element(t["central_X"], s.X) if "central_X" in t else None
                cy = self.element(t["central_Y"], s.Y) if "central_Y" in t else None
                return twist(s, _scalar(self.F, t.get("scalar", "1")), cx, cy).replace(name=name)
            if "corner" in d:
                c = d["corner"]
                A = self.algebra(c["algebra"])
                e = self.element(c["idempotent"], A)
                basis = [_vector(self.F, b, A.dim) for b in c["basis"]] if "basis" in c else None
                return datum_from_corner(corner_algebra(A, e, basis), name=name)
            X, Y = self.algebra(d["X"]), self.algebra(d["Y"])
            I, P = self.bimodule(d["I"]), self.bimodule(d["P"])
            if not (I.left_alg == X and I.right_alg == Y and P.left_alg == Y and P.right_alg == X):
                raise InstanceFormatError(f"splitting {name!r}: I must be Y -> X and P must be X -> Y")
            IP, PI = compose_many(I, P), compose_many(P, I)
            IdX, IdY = identity_1cell(X), identity_1cell(Y)
            eta = self.map(d["eta"], "eta", IdX, IP)
            eps = self.map(d["eps"], "eps", PI, IdY)
            etabar = self.map(d["etabar"], "etabar", IdY, PI)
            epsbar = self.map(d["epsbar"], "epsbar", IP, IdX)
            return SplittingDatum(X, Y, I, P, eta, eps, etabar, epsbar, name=name)
        except AlgebraError as exc:
            raise InstanceFormatError(f"splitting {name!r}: {exc}") from None
        except (KeyError, TypeError) as exc:
            raise InstanceFormatError(f"splitting {name!r}: missing or malformed field {exc}") from None

    # diagrams and decompositions
    def diagram(self, ref, name: str = "") -> DirectSumDiagram:
        if isinstance(ref, str):
            return self._named("diagrams", ref, self._build_diagram)
        return self._build_diagram(ref, name)

    def _build_diagram(self, d, name: str) -> DirectSumDiagram:
        try:
            X = self.algebra(d["X"])
            return DirectSumDiagram(X, tuple(self.splitting(s) for s in d["summands"]))
        except KSError as exc:
            raise InstanceFormatError(f"diagram {name!r}: {exc}") from None
        except (KeyError, TypeError) as exc:
            raise InstanceFormatError(f"diagram {name!r}: missing or malformed field {exc}") from None

    def decomposition(self, ref, name: str = "") -> Decomposition:
        if isinstance(ref, str):
            return self._named("decompositions", ref, self._build_decomposition)
        return self._build_decomposition(ref, name)

    def _build_decomposition(self, d, name: str) -> Decomposition:
        try:
            A = self.algebra(d["algebra"])
            if "summands" not in d:
                seed = d.get("basis_seed")
                if seed is not None and not isinstance(seed, int):
                    raise InstanceFormatError(f"decomposition {name!r}: basis_seed must be an integer")
                return ks_decompose(A, basis_seed=seed)
            summands = tuple(self.splitting(s) for s in d["summands"])
            return explicit_decomposition(A, summands)
        except (KSError, AlgebraError) as exc:
            raise InstanceFormatError(f"decomposition {name!r}: {exc}") from None
        except (KeyError, TypeError) as exc:
            raise InstanceFormatError(f"decomposition {name!r}: missing or malformed field {exc}") from None

    def load_all(self) -> InstanceFile:
        for name in self.section("algebras"):
            self.algebra(name)
        for name in self.section("bimodules"):
            self.bimodule(name)
        for name in self.section("maps"):
            self.map(name)
        for name in self.section("elements"):
            v = self.section("elements")[name]
            if not isinstance(v, list):
                raise InstanceFormatError(f"element {name!r} must be a list of scalars")
            self.out.elements[name] = tuple(_scalar(self.F, s) for s in v)
        for name in self.section("splittings"):
            self.splitting(name)
        for name in self.section("diagrams"):
            self.diagram(name)
        for name in self.section("decompositions"):
            self.decomposition(name)
        return self.out


def explicit_decomposition(A: FDAlgebra, summands: tuple) -> Decomposition:
    """Wrap given splitting data as a decomposition; complete iff every summand is certified connected."""
    diagram = DirectSumDiagram(A, summands)
    ids = tuple(associated_idempotent(s, verify=False).coords for s in summands)
    complete = True
    for s in summands:
        conn = connectivity_report(center(s.Y).algebra)
        complete = complete and conn.connected and conn.complete
    return Decomposition(diagram, ids, complete, center(A))


def loads(text: str) -> InstanceFile:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"invalid JSON: {exc}") from None
    try:
        return _Loader(raw).load_all()
    except (AlgebraError, InstanceError, BimoduleError) as exc:
        raise InstanceFormatError(str(exc)) from None


def load(path: str | os.PathLike) -> InstanceFile:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InstanceFormatError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text)


# -- generators ---------------------------------------------------------------

GENERATOR_KINDS = ("group-algebra", "matrix-algebra", "path-algebra", "product", "scrambled",
                   "split", "field", "polynomial")


def generate_algebra(F: Field, recipe: dict, name: str = "", resolve=None) -> FDAlgebra:
    """Build an algebra from a recipe such as ``{"kind": "group-algebra", "group": "S3"}``.

    ``product`` and ``scrambled`` take nested recipes (or, with ``resolve``,
    names of other algebras in the same file).
    """
    if not isinstance(recipe, dict) or "kind" not in recipe:
        raise InstanceFormatError("a recipe needs a 'kind'")
    kind = recipe["kind"]

    def sub(r, label=""):
        if isinstance(r, str) and resolve is not None:
            return resolve(r)
        return generate_algebra(F, r, label, resolve)

    try:
        if kind == "group-algebra":
            table = recipe.get("table") or builtin_group(recipe["group"])
            return group_algebra(F, table, name)
        if kind == "matrix-algebra":
            return matrix_algebra(F, int(recipe["n"]), name)
        if kind == "path-algebra":
            return path_algebra(F, int(recipe["vertices"]), [tuple(a) for a in recipe.get("arrows", [])], name)
        if kind == "split":
            return split_algebra(F, int(recipe["n"]), name)
        if kind == "field":
            return field_algebra(F, name)
        if kind == "polynomial":
            return polynomial_algebra(F, [_scalar(F, c) for c in recipe["coeffs"]], name)
        if kind == "product":
            factors = [sub(r) for r in recipe["factors"]]
            if not factors:
                raise InstanceFormatError("product needs at least one factor")
            return product_algebra(*factors, name=name)
        if kind == "scrambled":
            return scrambled(sub(recipe["of"]), int(recipe["seed"]), name)
    except (KeyError, TypeError) as exc:
        raise InstanceFormatError(f"recipe {kind!r}: missing or malformed parameter {exc}") from None
    except (InstanceError, AlgebraError) as exc:
        raise InstanceFormatError(f"recipe {kind!r}: {exc}") from None
    raise InstanceFormatError(f"unknown generator kind {kind!r}")


def generate(kind: str, F: Field, params: dict, name: str = "A") -> InstanceFile:
    inst = InstanceFile(F)
    inst.algebras[name] = generate_algebra(F, {"kind": kind, **params}, name)
    return inst


# -- saving -------------------------------------------------------------------

class _Saver:
    def __init__(self, inst: InstanceFile):
        self.inst = inst
        self.F = inst.field
        self.alg_names = {id(A): n for n, A in inst.algebras.items()}
        self.mod_names = {id(M): n for n, M in inst.bimodules.items()}
        self.split_names = {id(s): n for n, s in inst.splittings.items()}

    def algebra_def(self, A: FDAlgebra) -> dict:
        F = self.F
        mul = [[i, j, k, F.fmt(c)] for i, row in enumerate(A.mul) for j, col in enumerate(row)
               for k, c in enumerate(col) if c]
        return {"dim": A.dim, "unit": _fmt_vector(F, A.unit), "mul": mul}

    def algebra(self, A: FDAlgebra):
        n = self.alg_names.get(id(A))
        if n is None:
            n = next((k for k, B in self.inst.algebras.items() if B == A), None)
        return n if n is not None else self.algebra_def(A)

    def bimodule_def(self, M: Bimodule) -> dict:
        if M.factors is not None:
            return {"compose": [self.bimodule(p) for p in M.factors]}
        if M is identity_1cell(M.left_alg):
            return {"identity": self.algebra(M.left_alg)}
        return {"left": self.algebra(M.left_alg), "right": self.algebra(M.right_alg), "dim": M.dim,
                "left_action": [_fmt_matrix(X) for X in M.left_action],
                "right_action": [_fmt_matrix(X) for X in M.right_action]}

    def bimodule(self, M: Bimodule):
        n = self.mod_names.get(id(M))
        return n if n is not None else self.bimodule_def(M)

    def map_def(self, f: BimoduleMap) -> dict:
        return {"source": self.bimodule(f.source), "target": self.bimodule(f.target), "matrix": _fmt_matrix(f.matrix)}

    def splitting_def(self, s: SplittingDatum) -> dict:
        return {"X": self.algebra(s.X), "Y": self.algebra(s.Y), "I": self.bimodule(s.I), "P": self.bimodule(s.P),
                "eta": _fmt_matrix(s.eta.matrix), "eps": _fmt_matrix(s.eps.matrix),
                "etabar": _fmt_matrix(s.etabar.matrix), "epsbar": _fmt_matrix(s.epsbar.matrix)}

    def splitting(self, s: SplittingDatum):
        n = self.split_names.get(id(s))
        return n if n is not None else self.splitting_def(s)

    def dump(self) -> dict:
        inst = self.inst
        out: dict = {"format": FORMAT_VERSION, "field": self.F.to_json()}
        out["algebras"] = {n: self.algebra_def(A) for n, A in inst.algebras.items()}
        if inst.bimodules:
            out["bimodules"] = {n: self.bimodule_def(M) for n, M in inst.bimodules.items()}
        if inst.maps:
            out["maps"] = {n: self.map_def(f) for n, f in inst.maps.items()}
        if inst.elements:
            out["elements"] = {n: _fmt_vector(self.F, v) for n, v in inst.elements.items()}
        if inst.splittings:
            out["splittings"] = {n: self.splitting_def(s) for n, s in inst.splittings.items()}
        if inst.diagrams:
            out["diagrams"] = {n: {"X": self.algebra(d.X), "summands": [self.splitting(s) for s in d.summands]}
                               for n, d in inst.diagrams.items()}
        if inst.decompositions:
            out["decompositions"] = {n: {"algebra": self.algebra(D.X),
                                         "summands": [self.splitting(s) for s in D.summands]}
                                     for n, D in inst.decompositions.items()}
        return out


def dumps(inst: InstanceFile) -> str:
    return json.dumps(_Saver(inst).dump(), indent=1)


def atomic_write(path: str | os.PathLike, text: str) -> None:
    """Write via a temporary file in the same directory and an atomic rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save(inst: InstanceFile, path: str | os.PathLike) -> None:
    atomic_write(path, dumps(inst) + "\n")


__all__ = [
    "InstanceFile", "InstanceFormatError", "load", "loads", "save", "dumps", "generate", "generate_algebra",
    "explicit_decomposition", "atomic_write", "GENERATOR_KINDS",
]
