"""Univariate polynomials, minimal polynomials and splitting factorizations."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd as igcd
from typing import Sequence

from .field import Field
from .matrix import Matrix, ShapeError, rref_rows, kernel_from_rref, solve_linear


class PolynomialError(ValueError):
    pass


@dataclass(frozen=True)
class Polynomial:
    """Coefficients lowest degree first; no trailing zeros."""

    field: Field
    coeffs: tuple

    def __post_init__(self):
        c = list(self.coeffs)
        while c and not c[-1]:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def make(cls, field: Field, coeffs: Sequence) -> "Polynomial":
        return cls(field, tuple(field(x) for x in coeffs))

    @classmethod
    def x(cls, field: Field) -> "Polynomial":
        return cls(field, (field.zero, field.one))

    @classmethod
    def const(cls, field: Field, c) -> "Polynomial":
        return cls(field, (field(c),))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self):
        return self.coeffs[-1] if self.coeffs else self.field.zero

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == (self.field.one,)

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.lead == 1

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        c = self.field.inv(self.lead)
        return self.scale(c)

    def scale(self, c) -> "Polynomial":
        n = self.field.norm
        return Polynomial(self.field, tuple(n(c * a) for a in self.coeffs))

    def __add__(self, other: "Polynomial") -> "Polynomial":
        a, b = self.coeffs, other.coeffs
        z = self.field.zero
        m = max(len(a), len(b))
        n = self.field.norm
        return Polynomial(self.field, tuple(n((a[i] if i < len(a) else z) + (b[i] if i < len(b) else z)) for i in range(m)))

    def __neg__(self) -> "Polynomial":
        return self.scale(-1)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        if self.is_zero() or other.is_zero():
            return Polynomial(self.field, ())
        out = [self.field.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        n = self.field.norm
        return Polynomial(self.field, tuple(n(x) for x in out))

    def __pow__(self, k: int) -> "Polynomial":
        out = Polynomial.const(self.field, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def divmod(self, d: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        if d.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        F = self.field
        r = list(self.coeffs)
        q = [F.zero] * max(len(r) - d.degree, 0)
        inv_lead = F.inv(d.lead)
        for i in range(len(r) - 1, d.degree - 1, -1):
            c = F.norm(r[i] * inv_lead)
            if c:
                q[i - d.degree] = c
                for j, b in enumerate(d.coeffs):
                    r[i - d.degree + j] = F.norm(r[i - d.degree + j] - c * b)
        return Polynomial(F, tuple(q)), Polynomial(F, tuple(r[: d.degree]))

    def __floordiv__(self, d: "Polynomial") -> "Polynomial":
        return self.divmod(d)[0]

    def __mod__(self, d: "Polynomial") -> "Polynomial":
        return self.divmod(d)[1]

    def exact_div(self, d: "Polynomial") -> "Polynomial":
        q, r = self.divmod(d)
        if not r.is_zero():
            raise PolynomialError(f"{d} does not divide {self}")
        return q

    def derivative(self) -> "Polynomial":
        n = self.field.norm
        return Polynomial(self.field, tuple(n(i * a) for i, a in enumerate(self.coeffs) if i))

    def __call__(self, x):
        acc = self.field.zero
        for a in reversed(self.coeffs):
            acc = self.field.norm(acc * x + a)
        return acc

    def __str__(self):
        if self.is_zero():
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            a = self.coeffs[i]
            if not a:
                continue
            s = self.field.fmt(a)
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            if mono and s == "1":
                terms.append(mono)
            elif mono:
                terms.append(f"{s}*{mono}")
            else:
                terms.append(s)
        return " + ".join(terms)


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a: Polynomial, b: Polynomial) -> tuple[Polynomial, Polynomial, Polynomial]:
    """Monic g with s*a + t*b = g."""
    F = a.field
    r0, r1 = a, b
    s0, s1 = Polynomial.const(F, 1), Polynomial(F, ())
    t0, t1 = Polynomial(F, ()), Polynomial.const(F, 1)
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    c = F.inv(r0.lead)
    return r0.scale(c), s0.scale(c), t0.scale(c)


def pow_mod(base: Polynomial, k: int, mod: Polynomial) -> Polynomial:
    out = Polynomial.const(base.field, 1) % mod
    base = base % mod
    while k:
        if k & 1:
            out = (out * base) % mod
        base = (base * base) % mod
        k >>= 1
    return out


def first_dependency(field: Field, vectors) -> tuple | None:
    """Coefficients c with v_k = sum c_i v_i for the first dependent v_k.

    ``vectors`` is an iterator; returns None if it is exhausted first.
    """
    seen: list[tuple] = []
    for v in vectors:
        if seen:
            A = Matrix.from_columns(field, seen, rows=len(v))
            sol = solve_linear(A, v)
            if sol.consistent:
                return sol.particular
        elif not any(v):
            return ()
        seen.append(tuple(v))
    return None


def minimal_polynomial(M: Matrix) -> Polynomial:
    """Monic polynomial of least degree annihilating the square matrix ``M``."""
    if not M.is_square():
        raise ShapeError(f"minimal polynomial of a {M.shape} matrix")
    F = M.field

    def powers():
        P = Matrix.identity(F, M.rows)
        while True:
            yield P.flatten()
            P = P @ M

    c = first_dependency(F, powers())
    return Polynomial(F, tuple(F.norm(-x) for x in c) + (F.one,))


def characteristic_polynomial(M: Matrix) -> Polynomial:
    """det(tI - M), assembled from Krylov chains of a block-triangular split."""
    if not M.is_square():
        raise ShapeError(f"characteristic polynomial of a {M.shape} matrix")
    return _krylov_charpoly(M)


def _krylov_charpoly(M: Matrix) -> Polynomial:
    F = M.field
    n = M.rows
    result = Polynomial.const(F, 1)
    covered: list[tuple] = []
    for i in range(n):
        e = tuple(F.one if k == i else F.zero for k in range(n))
        if _rank(F, covered + [e]) == len(covered):
            continue
        # relative minimal polynomial of e modulo the covered invariant subspace
        chain = [e]
        while True:
            trial = covered + chain
            nxt = M.apply(chain[-1])
            if _rank(F, trial + [nxt]) == len(trial):
                A = Matrix.from_columns(F, trial, rows=n)
                sol = solve_linear(A, nxt).particular
                c = sol[len(covered):]
                result = result * Polynomial(F, tuple(F.norm(-x) for x in c) + (F.one,))
                covered = trial
                break
            chain.append(nxt)
    return result


def _rank(F: Field, vectors) -> int:
    return len(rref_rows(F, [{j: v for j, v in enumerate(c) if v} for c in vectors])[1])


# -- factorization -----------------------------------------------------

@dataclass(frozen=True)
class Factorization:
    """Pairwise coprime monic factors with multiplicities.

    ``complete`` means every factor is certified irreducible.
    """

    factors: tuple  # of (Polynomial, int)
    complete: bool

    def product(self) -> Polynomial:
        F = self.factors[0][0].field if self.factors else None
        out = Polynomial.const(F, 1)
        for g, m in self.factors:
            out = out * g ** m
        return out


def factor_split(f: Polynomial, field: Field | None = None) -> Factorization:
    field = field or f.field
    if f.field != field:
        raise PolynomialError("polynomial lives over a different field")
    if not f.is_monic() or f.degree < 1:
        raise PolynomialError(f"factor_split needs a monic polynomial of degree >= 1, got {f}")
    if field.is_prime_field:
        out = []
        for g, m in _squarefree_fp(f):
            out.extend((h, m) for h in _berlekamp(g))
        return Factorization(tuple(_sorted(out)), True)
    out = []
    complete = True
    for g, m in _squarefree_q(f):
        lin, rest = _rational_roots_split(g)
        out.extend((h, m) for h in lin)
        if rest.degree >= 1:
            out.append((rest, m))
            if rest.degree > 3:
                complete = False
    return Factorization(tuple(_sorted(out)), complete)


def _sorted(pairs):
    return sorted(pairs, key=lambda gm: (gm[0].degree, [Fraction(c) for c in gm[0].coeffs], gm[1]))


def _squarefree_fp(f: Polynomial) -> list[tuple[Polynomial, int]]:
    F = f.field
    p = F.p
    out = []
    c = poly_gcd(f, f.derivative()) if not f.derivative().is_zero() else f
    w = f.exact_div(c)
    i = 1
    while w.degree > 0:
        y = poly_gcd(w, c)
        fac = w.exact_div(y)
        if fac.degree > 0:
            out.append((fac.monic(), i))
        w = y
        c = c.exact_div(y)
        i += 1
    if c.degree > 0:
        root = Polynomial(F, tuple(c.coeffs[k] for k in range(0, len(c.coeffs), p)))
        out.extend((g, m * p) for g, m in _squarefree_fp(root.monic()))
    return out


def _berlekamp(g: Polynomial) -> list[Polynomial]:
    """Irreducible factors of a squarefree monic polynomial over F_p."""
    F = g.field
    n = g.degree
    if n <= 1:
        return [g]
    p = F.p
    xp = pow_mod(Polynomial.x(F), p, g)
    cols = []
    power = Polynomial.const(F, 1)
    for j in range(n):
        col = [F.zero] * n
        for k, a in enumerate(power.coeffs):
            col[k] = a
        col[j] = F.norm(col[j] - 1)
        cols.append(col)
        power = (power * xp) % g
    B = Matrix.from_columns(F, cols, rows=n)
    red, piv = rref_rows(F, B.sparse_rows())
    kern = kernel_from_rref(F, red, piv, n)
    r = len(kern)
    factors = [g]
    for v in kern:
        if len(factors) == r:
            break
        vp = Polynomial(F, v)
        if vp.degree < 1:
            continue
        nxt = []
        for h in factors:
            if h.degree == 1:
                nxt.append(h)
                continue
            for s in range(p):
                d = poly_gcd(h, vp - Polynomial.const(F, s))
                if 0 < d.degree < h.degree:
                    nxt.append(d)
                    h = h.exact_div(d).monic()
            nxt.append(h)
        factors = nxt
    return sorted(factors, key=lambda h: (h.degree, h.coeffs))


def _squarefree_q(f: Polynomial) -> list[tuple[Polynomial, int]]:
    out = []
    df = f.derivative()
    a = poly_gcd(f, df)
    b = f.exact_div(a)
    c = df.exact_div(a)
    d = c - b.derivative()
    i = 1
    while b.degree > 0:
        g = poly_gcd(b, d)
        b = b.exact_div(g)
        c = d.exact_div(g)
        d = c - b.derivative()
        if g.degree > 0:
            out.append((g.monic(), i))
        i += 1
    return out


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _rational_roots_split(g: Polynomial) -> tuple[list[Polynomial], Polynomial]:
    """Split off all linear factors of a squarefree polynomial over Q."""
    F = g.field
    linear = []
    if g.coeffs and g.coeffs[0] == 0:
        linear.append(Polynomial.x(F))
        g = g.exact_div(Polynomial.x(F))
    while g.degree >= 1:
        den = 1
        for a in g.coeffs:
            den = den * Fraction(a).denominator // igcd(den, Fraction(a).denominator)
        ints = [int(Fraction(a) * den) for a in g.coeffs]
        found = None
        for num in _divisors(ints[0]):
            for q in _divisors(ints[-1]):
                for cand in (Fraction(num, q), Fraction(-num, q)):
                    if g(cand) == 0:
                        found = cand
                        break
                if found is not None:
                    break
            if found is not None:
                break
        if found is None:
            break
        lin = Polynomial(F, (F.norm(-found), F.one))
        linear.append(lin)
        g = g.exact_div(lin)
    return linear, g


def crt_idempotent_polys(factors: Sequence[Polynomial]) -> list[Polynomial]:
    """Polynomials E_k with E_k = 1 mod factors[k] and 0 mod the others."""
    F = factors[0].field
    f = Polynomial.const(F, 1)
    for h in factors:
        f = f * h
    out = []
    for h in factors:
        co = f.exact_div(h)
        g, s, _ = poly_xgcd(co, h)
        if not g.is_one():
            raise PolynomialError("factors are not pairwise coprime")
        out.append((co * s) % f)
    return out
