"""Splitting data of an algebra, their idempotents and Frobenius monads."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from ..algebra import AlgebraElement, Corner, FDAlgebra, corner_algebra
from ..bimodule import (
    Bimodule,
    BimoduleError,
    BimoduleMap,
    associator,
    associator_inverse,
    central_element_of,
    compose,
    corner_cells,
    identity_1cell,
    identity_map,
    left_unitor,
    left_unitor_inverse,
    right_unitor,
    right_unitor_inverse,
    whisker_left,
    whisker_right,
)
from ..linalg import Matrix
from .report import VerificationReport


class KSError(ValueError):
    pass


def chain(*maps: BimoduleMap) -> BimoduleMap:
    """Vertical composite, applying the maps left to right."""
    out = maps[0]
    for f in maps[1:]:
        out = f @ out
    return out


# -- generic adjunction and monad shapes --------------------------------------

def triangle_left(L: Bimodule, R: Bimodule, unit: BimoduleMap, counit: BimoduleMap) -> BimoduleMap:
    """For ``L -| R``: ``L => L Id => L(RL) => (LR)L => Id L => L``; the identity iff the triangle holds."""
    return chain(right_unitor_inverse(L), whisker_left(L, unit), associator_inverse(L, R, L),
                 whisker_right(counit, L), left_unitor(L))


def triangle_right(L: Bimodule, R: Bimodule, unit: BimoduleMap, counit: BimoduleMap) -> BimoduleMap:
    """For ``L -| R``: ``R => Id R => (RL)R => R(LR) => R Id => R``."""
    return chain(left_unitor_inverse(R), whisker_right(unit, R), associator(R, L, R),
                 whisker_left(R, counit), right_unitor(R))


def sandwich_counit(I: Bimodule, P: Bimodule, counit: BimoduleMap) -> BimoduleMap:
    """``I counit P : (IP)(IP) => IP`` for ``counit: PI => Id``."""
    E = compose(I, P)
    return chain(associator(I, P, E), whisker_left(I, associator_inverse(P, I, P)),
                 whisker_left(I, whisker_right(counit, P)), whisker_left(I, left_unitor(P)))


def sandwich_unit(I: Bimodule, P: Bimodule, unit: BimoduleMap) -> BimoduleMap:
    """``I unit P : IP => (IP)(IP)`` for ``unit: Id => PI``."""
    E = compose(I, P)
    return chain(whisker_left(I, left_unitor_inverse(P)), whisker_left(I, whisker_right(unit, P)),
                 whisker_left(I, associator(P, I, P)), associator_inverse(I, P, E))


# -- splitting data -----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SplittingDatum:
    """A summand ``Y`` of ``X`` with ``I: Y -> X``, ``P: X -> Y`` and two adjunctions.

    ``P -| I`` has unit ``eta: Id_X => IP`` and counit ``eps: PI => Id_Y``;
    ``I -| P`` has unit ``etabar: Id_Y => PI`` and counit ``epsbar: IP => Id_X``.
    """

    X: FDAlgebra
    Y: FDAlgebra
    I: Bimodule
    P: Bimodule
    eta: BimoduleMap
    eps: BimoduleMap
    etabar: BimoduleMap
    epsbar: BimoduleMap
    name: str = ""
    corner: Corner | None = None

    @property
    def E(self) -> Bimodule:
        return compose(self.I, self.P)

    @cached_property
    def report(self) -> VerificationReport:
        return verify_splitting_datum(self)

    def replace(self, **changes) -> "SplittingDatum":
        fields = dict(X=self.X, Y=self.Y, I=self.I, P=self.P, eta=self.eta, eps=self.eps,
                      etabar=self.etabar, epsbar=self.epsbar, name=self.name, corner=self.corner)
        fields.update(changes)
        return SplittingDatum(**fields)

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"SplittingDatum<{self.Y.dim}-dim summand of {self.X.dim}-dim{label}>"


def _check_shapes(s: SplittingDatum) -> None:
    X, Y = s.X, s.Y
    if X.dim < 1 or Y.dim < 1:
        raise KSError("splitting data need nonzero objects")
    if not (s.I.left_alg == X and s.I.right_alg == Y and s.P.left_alg == Y and s.P.right_alg == X):
        raise KSError("I must be a 1-cell Y -> X and P a 1-cell X -> Y")
    IP, PI = compose(s.I, s.P), compose(s.P, s.I)
    IdX, IdY = identity_1cell(X), identity_1cell(Y)
    for f, src, tgt, label in ((s.eta, IdX, IP, "eta"), (s.eps, PI, IdY, "eps"),
                               (s.etabar, IdY, PI, "etabar"), (s.epsbar, IP, IdX, "epsbar")):
        if not (f.source == src and f.target == tgt):
            raise KSError(f"2-cell {label} has the wrong source or target")


def verify_splitting_datum(s: SplittingDatum) -> VerificationReport:
    """Check both defining equations, the four triangles and their consequences."""
    _check_shapes(s)
    rep = VerificationReport()
    I, P = s.I, s.P
    for M, label in ((I, "I"), (P, "P")):
        try:
            M.validate()
            rep.add("one-cell-valid", True, label)
        except BimoduleError as exc:
            rep.add("one-cell-valid", False, label, str(exc))
    for f, label in ((s.eta, "eta"), (s.eps, "eps"), (s.etabar, "etabar"), (s.epsbar, "epsbar")):
        rep.add("two-cell-natural", f.is_natural(), label)
    rep.add("counit-inverts-coreflection-unit",
            (s.eps @ s.etabar).is_identity() and (s.etabar @ s.eps).is_identity())
    rep.add("unit-section", (s.eta @ s.epsbar).is_identity())
    rep.add("triangular-identity-PI-left", triangle_left(P, I, s.eta, s.eps).is_identity())
    rep.add("triangular-identity-PI-right", triangle_right(P, I, s.eta, s.eps).is_identity())
    rep.add("triangular-identity-IP-left", triangle_left(I, P, s.etabar, s.epsbar).is_identity())
    rep.add("triangular-identity-IP-right", triangle_right(I, P, s.etabar, s.epsbar).is_identity())
    # whiskering eta and epsbar by P or I gives mutually inverse isos
    P_eta = chain(right_unitor_inverse(P), whisker_left(P, s.eta))
    P_epsbar = chain(whisker_left(P, s.epsbar), right_unitor(P))
    rep.add("almost-iso-P", (P_epsbar @ P_eta).is_identity() and (P_eta @ P_epsbar).is_identity())
    eta_I = chain(left_unitor_inverse(I), whisker_right(s.eta, I))
    epsbar_I = chain(whisker_right(s.epsbar, I), left_unitor(I))
    rep.add("almost-iso-I", (epsbar_I @ eta_I).is_identity() and (eta_I @ epsbar_I).is_identity())
    e = s.epsbar @ s.eta
    rep.add("associated-idempotent-idempotent", e @ e == e)
    return rep


def associated_idempotent(s: SplittingDatum, verify: bool = True) -> AlgebraElement:
    """The central element ``epsbar o eta`` of X."""
    if verify and not s.report.passed:
        raise KSError("associated idempotent of an unverified splitting datum")
    return AlgebraElement(s.X, central_element_of(s.epsbar @ s.eta))


def datum_from_corner(c: Corner, name: str = "") -> SplittingDatum:
    cells = corner_cells(c)
    return SplittingDatum(c.parent, c.algebra, cells.I, cells.P, cells.eta, cells.eps, cells.etabar, cells.epsbar,
                          name=name, corner=c)


def trivial_splitting(A: FDAlgebra) -> SplittingDatum:
    """``Y = X`` with ``I = P = Id_X``."""
    F = A.field
    ident = Matrix.identity(F, A.dim)
    return datum_from_corner(Corner(A, A, ident, ident, A.unit), name=A.name)


def split_by_idempotent(A: FDAlgebra, e, basis=None, complement_basis=None, name: str = ""):
    """Splitting data for the corners ``Ae`` and ``A(1-e)``.

    Returns ``(datum, complement)``; a zero summand is reported as None.
    """
    F = A.field
    coords = tuple(F(c) for c in (e.coords if isinstance(e, AlgebraElement) else e))
    if not any(coords):
        return None, trivial_splitting(A)
    if coords == A.unit:
        if basis is None:
            return trivial_splitting(A), None
        return datum_from_corner(corner_algebra(A, coords, basis), name=name), None
    f = tuple(F.norm(u - c) for u, c in zip(A.unit, coords))
    first = datum_from_corner(corner_algebra(A, coords, basis), name=name)
    second = datum_from_corner(corner_algebra(A, f, complement_basis))
    return first, second


# -- Frobenius monads ---------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FrobeniusMonadData:
    E: Bimodule
    mu: BimoduleMap
    iota: BimoduleMap
    delta: BimoduleMap
    epsilon: BimoduleMap


def frobenius_from_splitting(s: SplittingDatum, verify: bool = True) -> FrobeniusMonadData:
    """Monad ``(IP, I eps P, eta)`` and comonad ``(IP, I etabar P, epsbar)``."""
    if verify and not s.report.passed:
        raise KSError("Frobenius structure of an unverified splitting datum")
    return FrobeniusMonadData(s.E, sandwich_counit(s.I, s.P, s.eps), s.eta, sandwich_unit(s.I, s.P, s.etabar), s.epsbar)


def verify_frobenius(fm: FrobeniusMonadData) -> VerificationReport:
    E, mu, iota, delta, eps = fm.E, fm.mu, fm.iota, fm.delta, fm.epsilon
    rep = VerificationReport()
    idE = identity_map(E)
    rep.add("monad-associativity",
            mu @ whisker_right(mu, E) == chain(associator(E, E, E), whisker_left(E, mu), mu))
    rep.add("monad-left-unit", chain(left_unitor_inverse(E), whisker_right(iota, E), mu) == idE)
    rep.add("monad-right-unit", chain(right_unitor_inverse(E), whisker_left(E, iota), mu) == idE)
    rep.add("comonad-coassociativity",
            whisker_right(delta, E) @ delta == chain(delta, whisker_left(E, delta), associator_inverse(E, E, E)))
    rep.add("comonad-left-counit", chain(delta, whisker_right(eps, E), left_unitor(E)) == idE)
    rep.add("comonad-right-counit", chain(delta, whisker_left(E, eps), right_unitor(E)) == idE)
    middle = delta @ mu
    rep.add("frobenius-left", chain(whisker_left(E, delta), associator_inverse(E, E, E), whisker_right(mu, E)) == middle)
    rep.add("frobenius-right", chain(whisker_right(delta, E), associator(E, E, E), whisker_left(E, mu)) == middle)
    rep.add("multiplication-invertible", mu.is_invertible())
    rep.add("comultiplication-invertible", delta.is_invertible())
    rep.add("special", (mu @ delta) == idE)
    rep.add("unit-section", (iota @ eps) == idE)
    return rep
