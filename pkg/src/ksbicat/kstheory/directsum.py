"""Direct sum diagrams of splitting data and their adjoint correction."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from ..algebra import FDAlgebra
from ..bimodule import (
    BimoduleMap,
    compose,
    endomorphism_of_identity,
    right_unitor_inverse,
    whisker_left,
)
from .report import VerificationReport
from .splitting import KSError, SplittingDatum, chain, sandwich_counit, verify_splitting_datum


@dataclass(frozen=True, eq=False)
class DirectSumDiagram:
    """``X`` decomposed as the sum of the summands' ``Y`` objects."""

    X: FDAlgebra
    summands: tuple

    def __post_init__(self):
        for s in self.summands:
            if not (s.X is self.X or s.X == self.X):
                raise KSError("summands of a direct sum must share the ambient object")

    def __len__(self):
        return len(self.summands)

    @cached_property
    def report(self) -> VerificationReport:
        return verify_direct_sum(self)


def verify_direct_sum(d: DirectSumDiagram, adjunctions: bool = True) -> VerificationReport:
    """Check the direct sum relations, and per summand the splitting-datum identities.

    With ``adjunctions=False`` only the plain relations (those that hold for
    any choice of structure isomorphisms) are checked.
    """
    rep = VerificationReport()
    n = len(d.summands)
    for k, s in enumerate(d.summands):
        sub = f"summand[{k}]"
        if adjunctions:
            rep.extend(verify_splitting_datum(s), sub)
        else:
            rep.add("counit-inverts-coreflection-unit",
                    (s.eps @ s.etabar).is_identity() and (s.etabar @ s.eps).is_identity(), sub)
    for i, si in enumerate(d.summands):
        for j, sj in enumerate(d.summands):
            if i != j:
                rep.add("direct-sum-orthogonality", compose(si.P, sj.I).dim == 0, f"P[{i}]I[{j}]")
    for i, si in enumerate(d.summands):
        for j, sj in enumerate(d.summands):
            composite = si.eta @ sj.epsbar  # I_j P_j => I_i P_i
            if i == j:
                rep.add("direct-sum-section", composite.is_identity(), f"summand[{i}]")
            else:
                rep.add("direct-sum-cross-terms", composite.is_zero(), f"eta[{i}]epsbar[{j}]")
    total = None
    for s in d.summands:
        term = s.epsbar @ s.eta
        total = term if total is None else total + term
    complete = total is not None and total.is_identity()
    rep.add("direct-sum-completeness", complete, "", "" if n else "empty sum on a nonzero object")
    return rep


def adjointify(d: DirectSumDiagram) -> DirectSumDiagram:
    """Correct arbitrary structure isomorphisms into an adjoint direct sum.

    Each summand's fields are read as ``alpha = eta``, ``beta = eps``,
    ``alphabar = etabar`` and ``betabar = epsbar``.  With
    ``phi = (I beta P)(IP alpha)`` the output is ``eta := phi^-1 alpha``,
    ``eps := beta``, ``etabar := alphabar`` and ``epsbar := betabar phi``;
    already adjoint input has ``phi = id`` and is returned unchanged.
    """
    pre = verify_direct_sum(d, adjunctions=False)
    if not pre.passed:
        names = ", ".join(sorted({v.name for v in pre.failures}))
        raise KSError(f"input does not satisfy the direct sum relations: {names}")
    out = []
    for s in d.summands:
        phi = correction(s)
        if phi.is_identity():
            out.append(s)
            continue
        out.append(s.replace(eta=phi.inverse() @ s.eta, epsbar=s.epsbar @ phi))
    return DirectSumDiagram(d.X, tuple(out))


def correction(s: SplittingDatum) -> BimoduleMap:
    """The automorphism ``phi = (I beta P)(IP alpha)`` of IP."""
    E = s.E
    return chain(right_unitor_inverse(E), whisker_left(E, s.eta), sandwich_counit(s.I, s.P, s.eps))


def twist(s: SplittingDatum, scalar=1, central_X: Sequence | None = None,
          central_Y: Sequence | None = None) -> SplittingDatum:
    """Perturb the structure isomorphisms while keeping the direct sum relations.

    ``eps`` is multiplied by ``scalar`` (and a central unit of Y), with
    ``etabar`` compensated; ``epsbar`` is multiplied by a central unit of X,
    with ``eta`` compensated.
    """
    X, Y = s.X, s.Y
    F = X.field
    eps, etabar, eta, epsbar = s.eps, s.etabar, s.eta, s.epsbar
    if central_Y is not None:
        w = endomorphism_of_identity(Y, central_Y)
        eps, etabar = w @ eps, etabar @ w.inverse()
    c = F(scalar)
    if c != F.one:
        eps, etabar = eps.scale(c), etabar.scale(F.inv(c))
    if central_X is not None:
        z = endomorphism_of_identity(X, central_X)
        epsbar, eta = z @ epsbar, eta @ z.inverse()
    return s.replace(eps=eps, etabar=etabar, eta=eta, epsbar=epsbar)


def twisted_diagram(d: DirectSumDiagram, scalars: Sequence, central_X: Sequence | None = None,
                    central_Y: Sequence | None = None) -> DirectSumDiagram:
    """Apply :func:`twist` summand by summand; a central twist of X must be shared by all summands."""
    out = []
    for k, s in enumerate(d.summands):
        cy = central_Y[k] if central_Y is not None else None
        out.append(twist(s, scalars[k], central_X, cy))
    return DirectSumDiagram(d.X, tuple(out))
