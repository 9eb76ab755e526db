"""Exact scalar arithmetic over the rationals and over prime fields.

Elements are the ground-domain elements of sympy's polys machinery (QQ or
GF(p)), wrapped so that every value knows its field. All linear algebra in
the workbench runs on the same domains through DomainMatrix, so a scalar
parsed here can be dropped into a matrix without conversion.
"""

import re
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Any, Self

from sympy.polys.domains import GF, QQ
from sympy.polys.domains.domain import Domain

from gs_workbench.errors import (
    BadCharacteristic,
    DivisionByZero,
    MalformedScalar,
    MixedFields,
    NotInField,
    ZeroDenominator,
)

MAX_PRIME = 2**31

SCALAR_PATTERN = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*([+-]?\d+))?\s*$")


class FieldKind(Enum):
    """Kind of ground field."""

    RATIONALS = "Q"
    PRIME = "Fp"


def is_prime(n: int) -> bool:
    """Trial-division primality test for single-word moduli."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The rationals, or the prime field F_p with p < 2^31."""

    kind: FieldKind
    p: int | None = None

    def __post_init__(self) -> None:
        if self.kind is FieldKind.RATIONALS:
            if self.p is not None:
                raise BadCharacteristic("the rationals take no modulus")
            return
        if self.p is None or not (2 <= self.p < MAX_PRIME) or not is_prime(self.p):
            raise BadCharacteristic(f"modulus {self.p} is not a prime below 2^31")

    @classmethod
    def rationals(cls) -> Self:
        return cls(FieldKind.RATIONALS)

    @classmethod
    def prime(cls, p: int) -> Self:
        return cls(FieldKind.PRIME, p)

    @property
    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    @property
    def is_prime_field(self) -> bool:
        return self.kind is FieldKind.PRIME

    @property
    def label(self) -> str:
        return "Q" if self.p is None else f"F{self.p}"

    @cached_property
    def domain(self) -> Domain:
        """The sympy ground domain backing this field."""
        if self.p is None:
            return QQ
        return GF(self.p, symmetric=False)

    @property
    def zero(self) -> Any:
        return self.domain.zero

    @property
    def one(self) -> Any:
        return self.domain.one

    def element(self, num: int, den: int = 1) -> Any:
        """Image of num/den in the field."""
        if den == 0:
            raise ZeroDenominator(f"{num}/{den}")
        if self.p is None:
            return QQ(num, den)
        if den % self.p == 0:
            raise NotInField(f"denominator {den} vanishes in {self.label}")
        return self.domain((num * pow(den, -1, self.p)) % self.p)

    def residue(self, value: Any) -> int:
        """Canonical residue in [0, p) of a prime-field element."""
        assert self.p is not None
        return int(self.domain.to_int(value)) % self.p

    def to_text(self, value: Any) -> str:
        """Canonical text of a domain element."""
        if self.p is not None:
            return str(self.residue(value))
        num, den = int(QQ.numer(value)), int(QQ.denom(value))
        return str(num) if den == 1 else f"{num}/{den}"

    def from_text(self, text: str) -> Any:
        """Parse scalar text into a domain element."""
        match = SCALAR_PATTERN.match(text)
        if match is None:
            raise MalformedScalar(f"not a scalar: {text!r}")
        num = int(match.group(1))
        den = int(match.group(2)) if match.group(2) is not None else 1
        if den == 0:
            raise ZeroDenominator(f"zero denominator in {text!r}")
        return self.element(num, den)

    def to_dict(self) -> dict[str, Any]:
        if self.p is None:
            return {"kind": self.kind.value}
        return {"kind": self.kind.value, "p": self.p}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> Self:
        kind = FieldKind(data["kind"])
        if kind is FieldKind.RATIONALS:
            return cls(kind)
        return cls(kind, int(data["p"]))

    @classmethod
    def parse(cls, text: str) -> Self:
        """Parse "Q" or "Fp:<p>" / "F<p>"."""
        text = text.strip()
        if text in ("Q", "QQ"):
            return cls.rationals()
        digits = text.removeprefix("Fp:").removeprefix("F")
        if not digits.isdigit():
            raise BadCharacteristic(f"unknown field {text!r}")
        return cls.prime(int(digits))


@dataclass(frozen=True)
class ExactScalar:
    """An exact field element together with its field."""

    field: FieldSpec
    value: Any

    @classmethod
    def of(cls, field: FieldSpec, num: int, den: int = 1) -> Self:
        return cls(field, field.element(num, den))

    def same_field(self, other: "ExactScalar") -> Domain:
        if self.field != other.field:
            raise MixedFields(f"{self.field.label} vs {other.field.label}")
        return self.field.domain

    def __add__(self, other: "ExactScalar") -> "ExactScalar":
        return ExactScalar(self.field, self.same_field(other).add(self.value, other.value))

    def __sub__(self, other: "ExactScalar") -> "ExactScalar":
        return ExactScalar(self.field, self.same_field(other).sub(self.value, other.value))

    def __mul__(self, other: "ExactScalar") -> "ExactScalar":
        return ExactScalar(self.field, self.same_field(other).mul(self.value, other.value))

    def __truediv__(self, other: "ExactScalar") -> "ExactScalar":
        return self * other.inv()

    def __neg__(self) -> "ExactScalar":
        return ExactScalar(self.field, self.field.domain.neg(self.value))

    def inv(self) -> "ExactScalar":
        if self.is_zero:
            raise DivisionByZero(f"inverse of zero in {self.field.label}")
        domain = self.field.domain
        return ExactScalar(self.field, domain.quo(domain.one, self.value))

    @property
    def is_zero(self) -> bool:
        return not self.value

    def __str__(self) -> str:
        return render_scalar(self)


def parse_scalar(text: str, field: FieldSpec) -> ExactScalar:
    """Parse "n" or "n/m" into a canonical scalar of the given field."""
    return ExactScalar(field, field.from_text(text))


def render_scalar(x: ExactScalar) -> str:
    """Canonical text form; parse_scalar(render_scalar(x), x.field) == x."""
    return x.field.to_text(x.value)
