"""Ground fields: the rationals and prime fields.

Scalars are plain Python objects: ``Fraction`` over the rationals and ``int``
residues in ``range(p)`` over a prime field.  A :class:`Field` knows how to
coerce scalars into normal form and convert them to and from strings.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

RATIONALS = "rationals"
PRIME_FIELD = "prime-field"


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Field:
    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind == RATIONALS:
            if self.p is not None:
                raise FieldError("the rationals carry no modulus")
        elif self.kind == PRIME_FIELD:
            if self.p is None or not is_prime(self.p):
                raise FieldError(f"modulus {self.p!r} is not prime")
        else:
            raise FieldError(f"unknown field kind {self.kind!r}")

    @property
    def is_prime_field(self) -> bool:
        return self.kind == PRIME_FIELD

    @property
    def char(self) -> int:
        return self.p if self.is_prime_field else 0

    @property
    def zero(self):
        return 0 if self.is_prime_field else Fraction(0)

    @property
    def one(self):
        return 1 if self.is_prime_field else Fraction(1)

    def __call__(self, x):
        """Coerce an int, Fraction or exact string into this field."""
        if isinstance(x, str):
            return self.parse(x)
        if self.is_prime_field:
            if isinstance(x, Fraction):
                if x.denominator % self.p == 0:
                    raise FieldError(f"{x} has no image in F_{self.p}")
                return x.numerator * pow(x.denominator, -1, self.p) % self.p
            return int(x) % self.p
        return Fraction(x)

    def norm(self, x):
        return x % self.p if self.is_prime_field else x

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.is_prime_field:
            return pow(x, -1, self.p)
        return 1 / Fraction(x)

    def div(self, x, y):
        return self.norm(x * self.inv(y))

    def parse(self, s: str):
        s = s.strip()
        try:
            value = Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise FieldError(f"cannot parse scalar {s!r}") from exc
        return self(value)

    def fmt(self, x) -> str:
        if self.is_prime_field:
            return str(int(x) % self.p)
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    def elements(self):
        if not self.is_prime_field:
            raise FieldError("the rationals are not enumerable")
        return range(self.p)

    def random_element(self, rng: random.Random, bound: int = 3):
        """A uniform residue, or a small integer in [-bound, bound] over Q."""
        if self.is_prime_field:
            return rng.randrange(self.p)
        return Fraction(rng.randint(-bound, bound))

    def __str__(self):
        return "Q" if self.kind == RATIONALS else f"F_{self.p}"

    def to_json(self):
        if self.is_prime_field:
            return {"kind": PRIME_FIELD, "p": self.p}
        return {"kind": RATIONALS}

    @classmethod
    def from_json(cls, obj) -> "Field":
        if isinstance(obj, str):
            if obj.upper() in ("Q", "QQ", RATIONALS.upper()):
                return QQ
            if obj.upper().startswith("F_") or obj.upper().startswith("GF"):
                return GF(int(obj.upper().lstrip("GF_")))
            raise FieldError(f"unknown field {obj!r}")
        if not isinstance(obj, dict) or "kind" not in obj:
            raise FieldError(f"malformed field description {obj!r}")
        if obj["kind"] == PRIME_FIELD:
            return GF(int(obj["p"]))
        return cls(obj["kind"])


QQ = Field(RATIONALS)


def GF(p: int) -> Field:
    return Field(PRIME_FIELD, p)
