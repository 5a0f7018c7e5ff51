"""Multivariate polynomials over the ground field, used as symbolic parameters.

When a homomorphism out of a free representation is left undetermined, every
generator image coordinate becomes a named parameter.  Evaluating an equation
at such a parameterized map produces constraint polynomials in those
parameters, and certifying that some element lies in every solution kernel
reduces to polynomial identities.  This module provides the exact polynomial
arithmetic for that, plus a bounded-degree ideal membership certifier that
returns explicit cofactors (so certificates can be revalidated later by pure
multiplication and addition).
"""

from __future__ import annotations

from dataclasses import dataclass

from .field import FieldDescriptor, Scalar
from .linalg import Echelon

Monomial = tuple[int, ...]


@dataclass(frozen=True)
class ParamRing:
    """A polynomial ring k[names] with a fixed variable order."""

    field: FieldDescriptor
    names: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate parameter names: {self.names}")

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown parameter {name!r}") from None

    def var(self, name: str) -> "CoeffPoly":
        exps = [0] * len(self.names)
        exps[self.index(name)] = 1
        return CoeffPoly(self, {tuple(exps): self.field.one()})

    def vars(self) -> dict[str, "CoeffPoly"]:
        return {n: self.var(n) for n in self.names}

    def const(self, value: Scalar) -> "CoeffPoly":
        if value.is_zero:
            return self.zero()
        return CoeffPoly(self, {(0,) * len(self.names): value})

    def zero(self) -> "CoeffPoly":
        return CoeffPoly(self, {})

    def one(self) -> "CoeffPoly":
        return self.const(self.field.one())

    def monomials_up_to(self, degree: int) -> list[Monomial]:
        """All exponent tuples of total degree <= degree, low degree first."""
        out: list[Monomial] = []
        n = len(self.names)
        for d in range(degree + 1):
            out.extend(_exponents(n, d))
        return out


def _exponents(nvars: int, total: int) -> list[Monomial]:
    if nvars == 0:
        return [()] if total == 0 else []
    out = []
    for first in range(total, -1, -1):
        for rest in _exponents(nvars - 1, total - first):
            out.append((first,) + rest)
    return out


def monomial_key(m: Monomial) -> tuple[int, Monomial]:
    return (sum(m), m)


class CoeffPoly:
    """Polynomial in the ring's parameters with exact field coefficients."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: ParamRing, terms: dict[Monomial, Scalar]):
        self.ring = ring
        self.terms = {m: c for m, c in terms.items() if not c.is_zero}

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(m) for m in self.terms)

    def _check(self, other: "CoeffPoly") -> None:
        if self.ring is not other.ring and self.ring != other.ring:
            raise ValueError("parameter rings differ")

    def __add__(self, other: "CoeffPoly") -> "CoeffPoly":
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m)
            terms[m] = c if s is None else s + c
        return CoeffPoly(self.ring, terms)

    def __sub__(self, other: "CoeffPoly") -> "CoeffPoly":
        return self + (-other)

    def __neg__(self) -> "CoeffPoly":
        return CoeffPoly(self.ring, {m: -c for m, c in self.terms.items()})

    def __mul__(self, other) -> "CoeffPoly":
        if isinstance(other, Scalar):
            return self.scale(other)
        self._check(other)
        terms: dict[Monomial, Scalar] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                c = c1 * c2
                s = terms.get(m)
                terms[m] = c if s is None else s + c
        return CoeffPoly(self.ring, terms)

    def __rmul__(self, other) -> "CoeffPoly":
        if isinstance(other, Scalar):
            return self.scale(other)
        return NotImplemented

    def scale(self, c: Scalar) -> "CoeffPoly":
        if c.is_zero:
            return self.ring.zero()
        return CoeffPoly(self.ring, {m: v * c for m, v in self.terms.items()})

    def __pow__(self, n: int) -> "CoeffPoly":
        if n < 0:
            raise ValueError("negative power")
        out = self.ring.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CoeffPoly)
            and self.ring == other.ring
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.ring.names, frozenset(self.terms.items())))

    def map_coeffs(self, fn) -> "CoeffPoly":
        return CoeffPoly(self.ring, {m: fn(c) for m, c in self.terms.items()})

    def substitute(self, mapping: dict[str, "CoeffPoly"], target: ParamRing) -> "CoeffPoly":
        """Substitute every variable; unmapped variables must not occur."""
        images: list[CoeffPoly | None] = []
        for name in self.ring.names:
            img = mapping.get(name)
            if img is not None and (img.ring is not target and img.ring != target):
                raise ValueError(f"image of {name!r} lives in the wrong ring")
            images.append(img)
        out = target.zero()
        for m, c in self.terms.items():
            term = target.const(c)
            for i, e in enumerate(m):
                if e == 0:
                    continue
                img = images[i]
                if img is None:
                    raise KeyError(f"no image for parameter {self.ring.names[i]!r}")
                term = term * img**e
            out = out + term
        return out

    def evaluate(self, values: dict[str, Scalar]) -> Scalar:
        field = self.ring.field
        out = field.zero()
        for m, c in self.terms.items():
            v = c
            for i, e in enumerate(m):
                if e == 0:
                    continue
                name = self.ring.names[i]
                if name not in values:
                    raise KeyError(f"no value for parameter {name!r}")
                v = v * values[name] ** e
            out = out + v
        return out

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=monomial_key):
            c = self.terms[m]
            factors = []
            for name, e in zip(self.ring.names, m):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            body = "*".join(factors)
            cs = str(c)
            if not body:
                parts.append(cs)
            elif c == self.ring.field.one():
                parts.append(body)
            else:
                parts.append(f"({cs})*{body}" if ("+" in cs or " - " in cs) else f"{cs}*{body}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"CoeffPoly({self})"


def ideal_membership(
    target: CoeffPoly,
    generators: list[CoeffPoly],
    degree_bound: int,
    column_limit: int = 20000,
) -> list[CoeffPoly] | None:
    """Express target = sum_i h_i * generators[i] with deg(h_i * g_i) <= bound.

    Pure linear algebra over the coefficient field: unknowns are the cofactor
    monomial coefficients.  Returns the cofactors h_i, or None when no
    combination exists within the degree bound.  A None is inconclusive about
    true ideal membership (the bound may be too small, or the search larger
    than column_limit unknowns); a non-None answer is checked exactly before
    being returned.
    """
    from math import comb

    ring = target.ring
    if target.is_zero:
        return [ring.zero() for _ in generators]

    def key(k):
        # Monomial rows sort before the tag rows tracking cofactor unknowns.
        if k[0] == 0:
            return (0, monomial_key(k[1]))
        return (1, k[1])

    def is_homogeneous(p: CoeffPoly) -> bool:
        degrees = {sum(m) for m in p.terms}
        return len(degrees) <= 1

    # When everything is homogeneous, the homogeneous component of the
    # combination in the target's degree is already a combination, so
    # cofactor monomials may be restricted to one exact degree each.
    graded = is_homogeneous(target) and all(is_homogeneous(g) for g in generators)

    nv = len(ring.names)
    columns = 0
    for g in generators:
        if g.is_zero:
            continue
        room = degree_bound - g.degree()
        if room < 0:
            continue
        if graded:
            exact = target.degree() - g.degree()
            if exact < 0 or exact > room:
                continue
            columns += comb(exact + nv - 1, nv - 1)
        else:
            columns += comb(room + nv, nv)
        if columns > column_limit:
            return None

    ech = Echelon(key)
    tags: list[tuple[int, Monomial]] = []
    for i, g in enumerate(generators):
        if g.is_zero:
            continue
        room = degree_bound - g.degree()
        if room < 0:
            continue
        if graded:
            exact = target.degree() - g.degree()
            if exact < 0 or exact > room:
                continue
            monomials = [m for m in ring.monomials_up_to(exact)
                         if sum(m) == exact]
        else:
            monomials = ring.monomials_up_to(room)
        for m in monomials:
            prod = CoeffPoly(ring, {m: ring.field.one()}) * g
            vec = {(0, mono): c for mono, c in prod.terms.items()}
            tag = (i, m)
            vec[(1, tag)] = ring.field.one()
            ech.add(vec)
            tags.append(tag)

    residue = ech.reduce({(0, m): c for m, c in target.terms.items()})
    if any(k[0] == 0 for k in residue):
        return None
    cofactors = [ring.zero() for _ in generators]
    for k, c in residue.items():
        i, m = k[1]
        cofactors[i] = cofactors[i] + CoeffPoly(ring, {m: -c})
    combo = ring.zero()
    for h, g in zip(cofactors, generators):
        combo = combo + h * g
    if combo != target:
        raise AssertionError("membership solver produced an invalid combination")
    return cofactors


def power_membership(
    base: CoeffPoly,
    generators: list[CoeffPoly],
    max_power: int,
    degree_bound: int,
) -> tuple[int, list[CoeffPoly]] | None:
    """Smallest n <= max_power with base**n in the ideal, plus cofactors."""
    for n in range(1, max_power + 1):
        cof = ideal_membership(base**n, generators, degree_bound)
        if cof is not None:
            return n, cof
    return None


def verify_combination(
    target: CoeffPoly, generators: list[CoeffPoly], cofactors: list[CoeffPoly]
) -> bool:
    if len(generators) != len(cofactors):
        return False
    combo = target.ring.zero()
    for h, g in zip(cofactors, generators):
        combo = combo + h * g
    return combo == target
