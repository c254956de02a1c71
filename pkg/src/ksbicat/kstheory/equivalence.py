"""Comparing two splitting data of the same object.

Two routes: by associated idempotents (equal idempotents give an explicit
adjoint equivalence ``QI -| PJ``) and by cutting one summand down by
another when ``PJQI`` is an equivalence.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..bimodule import (
    Bimodule,
    BimoduleMap,
    EquivalenceData,
    associator,
    associator_inverse,
    central_element_of,
    compose,
    is_equivalence,
    left_unitor,
    left_unitor_inverse,
    right_unitor,
    right_unitor_inverse,
    whisker_left,
    whisker_right,
)
from .directsum import DirectSumDiagram, verify_direct_sum
from .report import VerificationReport
from .splitting import (
    KSError,
    SplittingDatum,
    associated_idempotent,
    chain,
    split_by_idempotent,
    triangle_left,
    triangle_right,
    FrobeniusMonadData,
    sandwich_counit,
    sandwich_unit,
    verify_frobenius,
)


@dataclass(frozen=True, eq=False)
class SplittingEquivalence:
    """``F = QI: Y -> Z`` and ``G = PJ: Z -> Y`` with unit, counit and ``theta: FP => Q``."""

    source: SplittingDatum
    target: SplittingDatum
    F: Bimodule
    G: Bimodule
    unit: BimoduleMap
    counit: BimoduleMap
    theta: BimoduleMap
    theta_inverse: BimoduleMap
    report: VerificationReport

    @property
    def verified(self) -> bool:
        return self.report.passed


@dataclass(frozen=True)
class Refusal:
    reason: str
    source_idempotent: tuple
    target_idempotent: tuple


def _composite_units(s: SplittingDatum, t: SplittingDatum) -> tuple[BimoduleMap, BimoduleMap]:
    """``Id_Y => (PJ)(QI)`` through ``etabar_Y`` and ``P eta_Z I``, and the same with roles swapped."""

    def unit(a: SplittingDatum, b: SplittingDatum) -> BimoduleMap:
        P, I, J, Q = a.P, a.I, b.I, b.P
        QI = compose(Q, I)
        return chain(a.etabar, whisker_left(P, left_unitor_inverse(I)), whisker_left(P, whisker_right(b.eta, I)),
                     whisker_left(P, associator(J, Q, I)), associator_inverse(P, J, QI))

    return unit(s, t), unit(t, s)


def equivalence_from_idempotents(s: SplittingDatum, t: SplittingDatum) -> SplittingEquivalence | Refusal:
    """Equivalence of splitting data when their associated idempotents agree."""
    if not (s.X is t.X or s.X == t.X):
        raise KSError("splitting data of different objects")
    e, f = associated_idempotent(s), associated_idempotent(t)
    if e.coords != f.coords:
        return Refusal("associated idempotents differ", e.coords, f.coords)
    I, P, J, Q = s.I, s.P, t.I, t.P
    F, G = compose(Q, I), compose(P, J)
    alpha, beta = _composite_units(s, t)
    rep = VerificationReport()
    rep.add("unit-invertible", alpha.is_invertible())
    rep.add("counit-invertible", beta.is_invertible())
    if not rep.passed:
        return SplittingEquivalence(s, t, F, G, alpha, beta, beta, beta, rep)
    counit = beta.inverse()
    rep.add("triangular-identity-FG-left", triangle_left(F, G, alpha, counit).is_identity())
    rep.add("triangular-identity-FG-right", triangle_right(F, G, alpha, counit).is_identity())
    # theta: (QI)P => Q(IP) => Q Id_X => Q
    theta = chain(associator(Q, I, P), whisker_left(Q, s.epsbar), right_unitor(Q))
    theta_inv = chain(right_unitor_inverse(Q), whisker_left(Q, s.eta), associator_inverse(Q, I, P))
    rep.add("theta-relation", (theta @ theta_inv).is_identity() and (theta_inv @ theta).is_identity())
    return SplittingEquivalence(s, t, F, G, alpha, counit, theta, theta_inv, rep)


# -- cutting one summand down by another --------------------------------------

@dataclass(frozen=True, eq=False)
class CutDown:
    """``Z`` split as ``Y' + Y''`` with ``Y' ~ Y``; ``complement`` is None for a zero ``Y''``."""

    diagram: DirectSumDiagram
    summand: SplittingDatum
    complement: SplittingDatum | None
    idempotent: tuple
    monad: FrobeniusMonadData
    equivalence: EquivalenceData | None
    report: VerificationReport

    @property
    def verified(self) -> bool:
        return self.report.passed


def composite_datum(s: SplittingDatum, t: SplittingDatum) -> SplittingDatum:
    """The composite ambijunction ``PJ -| QI -| PJ`` between Y and Z, shaped as data on Z."""
    I, P, J, Q = s.I, s.P, t.I, t.P
    Z, Y = t.Y, s.Y
    QI, PJ = compose(Q, I), compose(P, J)
    # eta: Id_Z => QJ => Q(IP)J => (QI)(PJ)
    eta = chain(t.etabar, whisker_left(Q, left_unitor_inverse(J)), whisker_left(Q, whisker_right(s.eta, J)),
                whisker_left(Q, associator(I, P, J)), associator_inverse(Q, I, PJ))
    # epsbar: (QI)(PJ) => Q(I(PJ)) => Q((IP)J) => Q(Id J) => QJ => Id_Z
    epsbar = chain(associator(Q, I, PJ), whisker_left(Q, associator_inverse(I, P, J)),
                   whisker_left(Q, whisker_right(s.epsbar, J)), whisker_left(Q, left_unitor(J)), t.eps)
    # etabar: Id_Y => PI => P(Id I) => P((JQ)I) => P(J(QI)) => (PJ)(QI)
    etabar = chain(s.etabar, whisker_left(P, left_unitor_inverse(I)), whisker_left(P, whisker_right(t.eta, I)),
                   whisker_left(P, associator(J, Q, I)), associator_inverse(P, J, QI))
    eps = chain(_p_epsbar_i(s, t), s.eps)
    return SplittingDatum(Z, Y, QI, PJ, eta, eps, etabar, epsbar, name="composite")


def _p_epsbar_i(s: SplittingDatum, t: SplittingDatum) -> BimoduleMap:
    """``P epsbar_Z I : (PJ)(QI) => P(J(QI)) => P((JQ)I) => P(Id I) => PI``."""
    I, P, J, Q = s.I, s.P, t.I, t.P
    QI = compose(Q, I)
    return chain(associator(P, J, QI), whisker_left(P, associator_inverse(J, Q, I)),
                 whisker_left(P, whisker_right(t.epsbar, I)), whisker_left(P, left_unitor(I)))


def cut_down_summand(s: SplittingDatum, t: SplittingDatum) -> CutDown:
    """Split Z (the summand of ``t``) as ``Y' + Y''`` with ``Y' ~ Y`` (the summand of ``s``).

    Requires ``PJQI`` to be an equivalence.  The composite ambijunction
    yields an idempotent monad and comonad on ``E = (QI)(PJ)``; the
    idempotent ``epsbar o eta`` of Z then splits Z.
    """
    if not (s.X is t.X or s.X == t.X):
        raise KSError("splitting data of different objects")
    PJ, QI = compose(s.P, t.I), compose(t.P, s.I)
    composite = compose(PJ, QI)
    if is_equivalence(composite) is None:
        raise KSError("precondition failed: PJQI is not an equivalence")
    c = composite_datum(s, t)
    rep = VerificationReport()
    rep.add("p-epsbar-i-invertible", _p_epsbar_i(s, t).is_invertible())
    rep.add("triangular-identity-PI-left", triangle_left(c.P, c.I, c.eta, c.eps).is_identity(), "composite")
    rep.add("triangular-identity-PI-right", triangle_right(c.P, c.I, c.eta, c.eps).is_identity(), "composite")
    rep.add("triangular-identity-IP-left", triangle_left(c.I, c.P, c.etabar, c.epsbar).is_identity(), "composite")
    rep.add("triangular-identity-IP-right", triangle_right(c.I, c.P, c.etabar, c.epsbar).is_identity(), "composite")
    monad = FrobeniusMonadData(c.E, sandwich_counit(c.I, c.P, c.eps), c.eta, sandwich_unit(c.I, c.P, c.etabar), c.epsbar)
    fr = verify_frobenius(monad)
    for name in ("multiplication-invertible", "comultiplication-invertible", "unit-section",
                 "monad-associativity", "monad-left-unit", "monad-right-unit",
                 "comonad-coassociativity", "comonad-left-counit", "comonad-right-counit"):
        for v in fr.get(name):
            rep.add(v.name, v.passed, "composite")
    e_map = c.epsbar @ c.eta
    rep.add("associated-idempotent-idempotent", e_map @ e_map == e_map, "composite")
    if not rep.passed:
        names = ", ".join(sorted({v.name for v in rep.failures}))
        raise KSError(f"idempotence verification failed: {names}")
    Z = t.Y
    e = central_element_of(e_map)
    first, second = split_by_idempotent(Z, e)
    if first is None:
        raise KSError("composite idempotent is zero although PJQI is an equivalence")
    summands = (first,) if second is None else (first, second)
    diagram = DirectSumDiagram(Z, summands)
    rep.extend(verify_direct_sum(diagram), "Z")
    # Y ~ Y' through P' (QI)
    link = compose(first.P, QI)
    eq = is_equivalence(link)
    rep.add("summand-equivalent", eq is not None, "Y~Y'")
    return CutDown(diagram, first, second, e, monad, eq, rep)
