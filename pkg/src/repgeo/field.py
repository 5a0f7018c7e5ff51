"""Exact scalar arithmetic over Q and quadratic extensions Q(sqrt(d)).

Every scalar is p + q*sqrt(d) with p, q reduced rationals.  For d squarefree
and different from 0 and 1, sqrt(d) is irrational, so this form is canonical
and equality is structural.  The automorphism group of Q(sqrt(d)) over Q has
exactly two elements: the identity and the conjugation q -> -q.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

RationalLike = Union[int, Fraction]


class MixedFields(ValueError):
    """Raised when scalars from different ground fields are combined."""


class NotSquareFree(ValueError):
    """Raised when a quadratic extension is requested for an invalid d."""


def _is_squarefree(n: int) -> bool:
    n = abs(n)
    if n == 0:
        return False
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        if n % p == 0:
            n //= p
        p += 1
    return True


@dataclass(frozen=True)
class FieldDescriptor:
    """Ground field: Q when d is None, otherwise Q(sqrt(d))."""

    d: int | None = None

    def __post_init__(self):
        if self.d is not None:
            if self.d in (0, 1) or not _is_squarefree(self.d):
                raise NotSquareFree(f"d must be squarefree and not 0 or 1, got {self.d}")

    @staticmethod
    def rationals() -> "FieldDescriptor":
        return FieldDescriptor(None)

    @staticmethod
    def quadratic(d: int) -> "FieldDescriptor":
        return FieldDescriptor(d)

    @staticmethod
    def parse(text: str) -> "FieldDescriptor":
        """Accepts "Q", "Q(sqrt d)" and "Q(sqrt(d))"."""
        s = text.strip().replace(" ", "")
        if s == "Q":
            return FieldDescriptor.rationals()
        for prefix in ("Q(sqrt(", "Q(sqrt"):
            if s.startswith(prefix) and s.endswith(")"):
                inner = s[len(prefix):-1].rstrip(")")
                try:
                    return FieldDescriptor.quadratic(int(inner))
                except ValueError as exc:
                    raise NotSquareFree(f"cannot parse field {text!r}") from exc
        raise NotSquareFree(f"cannot parse field {text!r}")

    @property
    def is_rational(self) -> bool:
        return self.d is None

    def scalar(self, p: RationalLike, q: RationalLike = 0) -> "Scalar":
        if self.d is None and q != 0:
            raise MixedFields("Q has no sqrt component")
        return Scalar(Fraction(p), Fraction(q), self)

    def zero(self) -> "Scalar":
        return self.scalar(0)

    def one(self) -> "Scalar":
        return self.scalar(1)

    def sqrt_gen(self) -> "Scalar":
        """The element sqrt(d); error over Q."""
        if self.d is None:
            raise MixedFields("Q has no quadratic generator")
        return self.scalar(0, 1)

    def __str__(self) -> str:
        return "Q" if self.d is None else f"Q(sqrt {self.d})"


@dataclass(frozen=True)
class Scalar:
    """p + q*sqrt(d), with Fractions kept reduced by construction."""

    p: Fraction
    q: Fraction
    field: FieldDescriptor

    def _check(self, other: "Scalar") -> None:
        if self.field != other.field:
            raise MixedFields(f"{self.field} vs {other.field}")

    @property
    def is_zero(self) -> bool:
        return self.p == 0 and self.q == 0

    @property
    def is_rational_value(self) -> bool:
        return self.q == 0

    def __bool__(self) -> bool:
        return not self.is_zero

    def __add__(self, other: "Scalar") -> "Scalar":
        self._check(other)
        return Scalar(self.p + other.p, self.q + other.q, self.field)

    def __sub__(self, other: "Scalar") -> "Scalar":
        self._check(other)
        return Scalar(self.p - other.p, self.q - other.q, self.field)

    def __neg__(self) -> "Scalar":
        return Scalar(-self.p, -self.q, self.field)

    def __mul__(self, other: "Scalar") -> "Scalar":
        self._check(other)
        d = self.field.d
        if d is None:
            return Scalar(self.p * other.p, Fraction(0), self.field)
        return Scalar(
            self.p * other.p + d * self.q * other.q,
            self.p * other.q + self.q * other.p,
            self.field,
        )

    def conjugate(self) -> "Scalar":
        return Scalar(self.p, -self.q, self.field)

    def norm(self) -> Fraction:
        """Field norm p^2 - d*q^2; zero only for the zero scalar."""
        d = self.field.d
        return self.p * self.p - (d * self.q * self.q if d is not None else 0)

    def inverse(self) -> "Scalar":
        if self.is_zero:
            raise ZeroDivisionError("scalar inverse of 0")
        if self.field.d is None:
            return Scalar(1 / self.p, Fraction(0), self.field)
        n = self.norm()
        return Scalar(self.p / n, -self.q / n, self.field)

    def __truediv__(self, other: "Scalar") -> "Scalar":
        return self * other.inverse()

    def scale(self, r: RationalLike) -> "Scalar":
        r = Fraction(r)
        return Scalar(self.p * r, self.q * r, self.field)

    def __pow__(self, n: int) -> "Scalar":
        if n < 0:
            return self.inverse() ** (-n)
        out = self.field.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __str__(self) -> str:
        if self.q == 0:
            return str(self.p)
        root = f"sqrt({self.field.d})"
        qpart = root if self.q == 1 else (f"-{root}" if self.q == -1 else f"{self.q}*{root}")
        if self.p == 0:
            return qpart
        sign = "+" if self.q > 0 else "-"
        mag = abs(self.q)
        qmag = root if mag == 1 else f"{mag}*{root}"
        return f"{self.p} {sign} {qmag}"

    def __repr__(self) -> str:
        return f"Scalar({self})"


@dataclass(frozen=True)
class FieldAutomorphism:
    """Field automorphism fixing Q: identity, or conjugation on Q(sqrt d)."""

    field: FieldDescriptor
    conjugates: bool

    @property
    def name(self) -> str:
        return "conj" if self.conjugates else "id"

    def __call__(self, s: Scalar) -> Scalar:
        if s.field != self.field:
            raise MixedFields(f"{s.field} vs automorphism over {self.field}")
        return s.conjugate() if self.conjugates else s

    def inverse(self) -> "FieldAutomorphism":
        # Both automorphisms are involutions.
        return self

    def compose(self, other: "FieldAutomorphism") -> "FieldAutomorphism":
        if self.field != other.field:
            raise MixedFields("automorphisms over different fields")
        return FieldAutomorphism(self.field, self.conjugates != other.conjugates)

    def is_identity(self) -> bool:
        return not self.conjugates

    def moved_scalar(self) -> Scalar | None:
        """Some scalar with phi(x) != x, or None for the identity."""
        if not self.conjugates:
            return None
        return self.field.sqrt_gen()

    def __str__(self) -> str:
        return self.name


def identity_automorphism(field: FieldDescriptor) -> FieldAutomorphism:
    return FieldAutomorphism(field, False)


def conjugation(field: FieldDescriptor) -> FieldAutomorphism:
    if field.is_rational:
        raise MixedFields("Q has no conjugation")
    return FieldAutomorphism(field, True)


def automorphism_group(field: FieldDescriptor) -> list[FieldAutomorphism]:
    """All field automorphisms: {id} over Q, {id, conj} over Q(sqrt d).

    A quadratic extension admits no further automorphisms: an automorphism
    fixes Q pointwise and must send sqrt(d) to a square root of d, of which
    the field contains exactly two.
    """
    if field.is_rational:
        return [identity_automorphism(field)]
    return [identity_automorphism(field), conjugation(field)]


def parse_automorphism(field: FieldDescriptor, name: str) -> FieldAutomorphism:
    key = name.strip().lower()
    if key in ("id", "identity"):
        return identity_automorphism(field)
    if key in ("conj", "conjugation"):
        return conjugation(field)
    raise MixedFields(f"unknown automorphism {name!r}")
