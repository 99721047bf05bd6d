"""Exact commutative rings with unity: the integers, integers mod n, and the rationals.

Values are plain Python objects: ``int`` for the integer and modular rings
(modular values are canonical residues in ``[0, n)``) and
:class:`fractions.Fraction` for the rationals.  A :class:`RingDescriptor`
knows how to validate, normalize and combine them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Union

RingValue = Union[int, Fraction]

INTEGER = "integer"
MODULAR = "modular"
RATIONAL = "rational"


class RingError(ValueError):
    """A value does not belong to the ring it is used with."""


@dataclass(frozen=True)
class RingDescriptor:
    kind: str
    modulus: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in (INTEGER, MODULAR, RATIONAL):
            raise RingError(f"unknown ring kind {self.kind!r}")
        if self.kind == MODULAR:
            if not isinstance(self.modulus, int) or isinstance(self.modulus, bool) or self.modulus < 2:
                raise RingError(f"modulus must be an integer >= 2, got {self.modulus!r}")
        elif self.modulus is not None:
            raise RingError(f"ring kind {self.kind!r} takes no modulus")

    # -- construction -----------------------------------------------------

    @classmethod
    def integer(cls) -> RingDescriptor:
        return cls(INTEGER)

    @classmethod
    def modular(cls, n: int) -> RingDescriptor:
        return cls(MODULAR, n)

    @classmethod
    def rational(cls) -> RingDescriptor:
        return cls(RATIONAL)

    @classmethod
    def parse(cls, text: str) -> RingDescriptor:
        """Parse the CLI form ``integer``, ``rational`` or ``modular:N``."""
        text = text.strip()
        if text in (INTEGER, RATIONAL):
            return cls(text)
        if text.startswith(MODULAR + ":"):
            try:
                n = int(text.split(":", 1)[1])
            except ValueError:
                raise RingError(f"bad modulus in {text!r}") from None
            return cls(MODULAR, n)
        raise RingError(f"unknown ring {text!r}")

    @classmethod
    def from_json(cls, obj: Any) -> RingDescriptor:
        if not isinstance(obj, dict) or "kind" not in obj:
            raise RingError(f"ring descriptor must be an object with 'kind': {obj!r}")
        if obj["kind"] == MODULAR:
            return cls(MODULAR, obj.get("modulus"))
        return cls(obj["kind"])

    def to_json(self) -> dict:
        if self.kind == MODULAR:
            return {"kind": MODULAR, "modulus": self.modulus}
        return {"kind": self.kind}

    def __str__(self) -> str:
        return f"{MODULAR}:{self.modulus}" if self.kind == MODULAR else self.kind

    # -- values -----------------------------------------------------------

    def normalize(self, a: RingValue) -> RingValue:
        """Bring a raw ``int``/``Fraction`` into canonical form for this ring.

        Used after native ``+``/``*`` so that inner loops can stay on plain
        Python arithmetic and reduce once.
        """
        if self.kind == MODULAR:
            return a % self.modulus
        if self.kind == RATIONAL:
            return a if type(a) is Fraction else Fraction(a)
        return a

    def validate(self, a: Any) -> RingValue:
        """Return ``a`` if it is a canonical element of this ring, else raise."""
        if isinstance(a, bool):
            raise RingError(f"{a!r} is not a ring value")
        if self.kind == INTEGER:
            if type(a) is not int:
                raise RingError(f"{a!r} is not an integer")
        elif self.kind == MODULAR:
            if type(a) is not int or not 0 <= a < self.modulus:
                raise RingError(f"{a!r} is not a residue mod {self.modulus}")
        elif type(a) is not Fraction:
            raise RingError(f"{a!r} is not a Fraction")
        return a

    def zero(self) -> RingValue:
        return Fraction(0) if self.kind == RATIONAL else 0

    def one(self) -> RingValue:
        return Fraction(1) if self.kind == RATIONAL else 1

    def from_integer(self, k: int) -> RingValue:
        return self.normalize(k)

    def add(self, a: RingValue, b: RingValue) -> RingValue:
        return self.normalize(self.validate(a) + self.validate(b))

    def mul(self, a: RingValue, b: RingValue) -> RingValue:
        return self.normalize(self.validate(a) * self.validate(b))

    def neg(self, a: RingValue) -> RingValue:
        return self.normalize(-self.validate(a))

    def sub(self, a: RingValue, b: RingValue) -> RingValue:
        return self.normalize(self.validate(a) - self.validate(b))

    def eq(self, a: RingValue, b: RingValue) -> bool:
        return self.validate(a) == self.validate(b)

    def is_zero(self, a: RingValue) -> bool:
        return a == 0

    # -- text form ----------------------------------------------------------

    def parse_value(self, text: Any) -> RingValue:
        """Parse a signed decimal (or ``p/q`` for rationals) into a ring value.

        JSON integers are accepted as well as strings.
        """
        if isinstance(text, bool):
            raise RingError(f"{text!r} is not a ring value")
        if isinstance(text, int):
            return self.normalize(text)
        if not isinstance(text, str):
            raise RingError(f"{text!r} is not a ring value")
        s = text.strip()
        try:
            if "/" in s:
                if self.kind != RATIONAL:
                    raise RingError(f"fraction {s!r} in ring {self}")
                num, den = s.split("/")
                if int(den) == 0:
                    raise RingError(f"zero denominator in {s!r}")
                return Fraction(int(num), int(den))
            return self.normalize(int(s))
        except ValueError:
            raise RingError(f"cannot parse {text!r} as a value of {self}") from None

    def format_value(self, a: RingValue) -> str:
        if isinstance(a, Fraction):
            return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
        return str(a)


def ring_add(d: RingDescriptor, a: RingValue, b: RingValue) -> RingValue:
    return d.add(a, b)


def ring_mul(d: RingDescriptor, a: RingValue, b: RingValue) -> RingValue:
    return d.mul(a, b)


def ring_neg(d: RingDescriptor, a: RingValue) -> RingValue:
    return d.neg(a)


def ring_zero(d: RingDescriptor) -> RingValue:
    return d.zero()


def ring_one(d: RingDescriptor) -> RingValue:
    return d.one()


def ring_eq(d: RingDescriptor, a: RingValue, b: RingValue) -> bool:
    return d.eq(a, b)


def ring_from_integer(d: RingDescriptor, k: int) -> RingValue:
    return d.from_integer(k)
