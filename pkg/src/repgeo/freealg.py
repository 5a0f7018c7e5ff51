"""Free associative algebra with exact coefficients, and quotients by
fully invariant graded ideals.

Words are tuples of 0-based letter indices; the basis order everywhere is
degree-lex with x1 < x2 < ...  Coefficients are duck-typed: Scalar for
ordinary computations, parameter polynomials for parameterized ones.

The consequence closure of a set of module identities is computed by
char-0 polarization: each polyhomogeneous component is fully multilinearized,
the multilinear form is instantiated on all tuples of Lyndon basis elements
within the degree cap, and the instances are closed under two-sided
multiplication by letters.  The resulting graded span is fully invariant:
substituting Lie elements into an instance expands, by multilinearity, into
a combination of instances again, and substitution into word factors stays
inside the two-sided span.  Conversely every consequence of the identities
arises this way, because in characteristic 0 a polyhomogeneous identity and
its full multilinearization generate each other (polarize; then restore by
identifying variables and dividing by the multiplicity factorials).
"""

from __future__ import annotations

from itertools import permutations, product
from typing import Iterable, Iterator

from .field import FieldDescriptor, Scalar
from .linalg import Echelon

Word = tuple  # tuple[int, ...]


class CapTooSmall(ValueError):
    """Degree cap cannot accommodate the generators."""


def word_key(w: Word):
    """Degree-lex sort key."""
    return (len(w), w)


def word_str(w: Word) -> str:
    if not w:
        return "1"
    return "*".join(f"x{i + 1}" for i in w)


def all_words(alphabet: int, degree: int) -> Iterator[Word]:
    if degree == 0:
        yield ()
        return
    for w in product(range(alphabet), repeat=degree):
        yield w


def multidegree(w: Word, alphabet: int) -> tuple:
    counts = [0] * alphabet
    for i in w:
        counts[i] += 1
    return tuple(counts)


class NCPoly:
    """Noncommutative polynomial: dict from words to nonzero coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {w: c for w, c in (terms or {}).items() if not c.is_zero}

    @staticmethod
    def zero() -> "NCPoly":
        return NCPoly({})

    @staticmethod
    def unit(field: FieldDescriptor) -> "NCPoly":
        return NCPoly({(): field.one()})

    @staticmethod
    def letter(i: int, field: FieldDescriptor) -> "NCPoly":
        return NCPoly({(i,): field.one()})

    @staticmethod
    def word(w: Word, coeff) -> "NCPoly":
        return NCPoly({tuple(w): coeff})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, w: Word):
        return self.terms.get(tuple(w))

    def __add__(self, other: "NCPoly") -> "NCPoly":
        out = dict(self.terms)
        for w, c in other.terms.items():
            if w in out:
                s = out[w] + c
                if s.is_zero:
                    del out[w]
                else:
                    out[w] = s
            else:
                out[w] = c
        p = NCPoly.__new__(NCPoly)
        p.terms = out
        return p

    def __neg__(self) -> "NCPoly":
        p = NCPoly.__new__(NCPoly)
        p.terms = {w: -c for w, c in self.terms.items()}
        return p

    def __sub__(self, other: "NCPoly") -> "NCPoly":
        return self + (-other)

    def __mul__(self, other: "NCPoly") -> "NCPoly":
        out: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                c = c1 * c2
                if w in out:
                    s = out[w] + c
                    if s.is_zero:
                        del out[w]
                    else:
                        out[w] = s
                elif not c.is_zero:
                    out[w] = c
        p = NCPoly.__new__(NCPoly)
        p.terms = out
        return p

    def scale(self, c) -> "NCPoly":
        if c.is_zero:
            return NCPoly.zero()
        p = NCPoly.__new__(NCPoly)
        p.terms = {w: x * c for w, x in self.terms.items()}
        return p

    def map_coeffs(self, f) -> "NCPoly":
        return NCPoly({w: f(c) for w, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, NCPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def max_letter(self) -> int:
        """Number of letters needed: 1 + largest index used (0 if constant)."""
        top = -1
        for w in self.terms:
            for i in w:
                if i > top:
                    top = i
        return top + 1

    def degree(self) -> int:
        """Maximal word length; -1 for the zero polynomial."""
        return max((len(w) for w in self.terms), default=-1)

    def min_degree(self) -> int:
        return min((len(w) for w in self.terms), default=-1)

    def homogeneous_part(self, d: int) -> "NCPoly":
        return NCPoly({w: c for w, c in self.terms.items() if len(w) == d})

    def degree_parts(self) -> dict:
        out: dict[int, dict] = {}
        for w, c in self.terms.items():
            out.setdefault(len(w), {})[w] = c
        return {d: NCPoly(t) for d, t in sorted(out.items())}

    def truncate(self, cap: int) -> "NCPoly":
        return NCPoly({w: c for w, c in self.terms.items() if len(w) <= cap})

    def substitute(self, images: list) -> "NCPoly":
        """Associative substitution: letter i -> images[i] (an NCPoly)."""
        out = NCPoly.zero()
        for w, c in self.terms.items():
            prod = None
            for i in w:
                if i >= len(images):
                    raise IndexError(f"no image for letter x{i + 1}")
                prod = images[i] if prod is None else prod * images[i]
            if prod is None:
                term = NCPoly({(): c})
            else:
                term = prod.scale(c)
            out = out + term
        return out

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        bits = []
        for w in sorted(self.terms, key=word_key):
            c = self.terms[w]
            cs = str(c)
            if not w:
                bits.append(cs)
            elif cs == "1":
                bits.append(word_str(w))
            elif cs == "-1":
                bits.append(f"-{word_str(w)}")
            elif ("+" in cs[1:]) or (" - " in cs):
                bits.append(f"({cs})*{word_str(w)}")
            else:
                bits.append(f"{cs}*{word_str(w)}")
        text = " + ".join(bits)
        return text.replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"NCPoly({self})"


def polyhomogeneous_components(p: NCPoly, alphabet: int | None = None) -> dict:
    """Split into components with fixed multidegree.

    Over an infinite field, each component of an identity is again an
    identity, so closures may be computed componentwise.
    """
    n = alphabet if alphabet is not None else p.max_letter()
    out: dict[tuple, dict] = {}
    for w, c in p.terms.items():
        out.setdefault(multidegree(w, n), {})[w] = c
    return {md: NCPoly(t) for md, t in sorted(out.items())}


def multilinearize(component: NCPoly, alphabet: int) -> tuple:
    """Full polarization of a polyhomogeneous component.

    Returns (flin, total_degree): flin is an NCPoly over a fresh alphabet
    with one letter per occurrence, obtained by summing over all ways of
    distributing the copies of each letter over its positions.  The span of
    consequences is unchanged (char 0), so no factorial normalization is
    applied.
    """
    mds = {multidegree(w, alphabet) for w in component.terms}
    if len(mds) != 1:
        raise ValueError("component is not polyhomogeneous")
    (md,) = mds
    total = sum(md)
    # fresh letter indices: occurrences of letter i get indices
    # offset[i] .. offset[i]+md[i]-1
    offset = []
    acc = 0
    for m in md:
        offset.append(acc)
        acc += m
    out: dict = {}
    for w, c in component.terms.items():
        positions: dict[int, list[int]] = {}
        for pos, i in enumerate(w):
            positions.setdefault(i, []).append(pos)
        letters_used = sorted(positions)
        perm_choices = [list(permutations(range(md[i]))) for i in letters_used]
        for choice in product(*perm_choices):
            new = list(w)
            for i, perm in zip(letters_used, choice):
                for r, pos in enumerate(positions[i]):
                    new[pos] = offset[i] + perm[r]
            key = tuple(new)
            if key in out:
                s = out[key] + c
                if s.is_zero:
                    del out[key]
                else:
                    out[key] = s
            else:
                out[key] = c
    return NCPoly(out), total


class GradedIdealBasis:
    """Graded span of a two-sided fully invariant ideal, one reduced echelon
    per degree, up to the cap."""

    def __init__(self, alphabet: int, cap: int, field: FieldDescriptor):
        self.alphabet = alphabet
        self.cap = cap
        self.field = field
        self.components: dict[int, Echelon] = {}

    def _echelon(self, d: int) -> Echelon:
        if d not in self.components:
            self.components[d] = Echelon(word_key)
        return self.components[d]

    def add(self, p: NCPoly) -> None:
        for d, part in p.degree_parts().items():
            if d <= self.cap:
                self._echelon(d).add(part.terms)

    def reduce(self, p: NCPoly) -> NCPoly:
        """Canonical residue; degrees above the cap reduce to zero."""
        out = NCPoly.zero()
        for d, part in p.degree_parts().items():
            if d > self.cap:
                continue
            ech = self.components.get(d)
            res = ech.reduce(part.terms) if ech is not None else part.terms
            out = out + NCPoly(res)
        return out

    def contains(self, p: NCPoly) -> bool:
        return self.reduce(p).is_zero

    def dim_at(self, d: int) -> int:
        ech = self.components.get(d)
        return ech.dim if ech is not None else 0

    def full_at(self, d: int) -> bool:
        return self.dim_at(d) == self.alphabet ** d


def consequence_closure(generators: Iterable[NCPoly], alphabet: int, cap: int,
                        field: FieldDescriptor) -> GradedIdealBasis:
    """Smallest graded, two-sided, substitution-closed span containing all
    polyhomogeneous components of the generators, over the target alphabet,
    truncated at the cap.  See the module docstring for the argument.
    """
    from .freelie import lyndon_elements  # deferred: freelie builds on NCPoly

    ideal = GradedIdealBasis(alphabet, cap, field)
    gens = list(generators)
    for g in gens:
        if g.degree() > cap:
            raise CapTooSmall(f"generator degree {g.degree()} exceeds cap {cap}")
    if not gens:
        return ideal

    # Lie substitution targets: iota images of the Lyndon basis, with degrees
    basis = [(elt.poly, d) for d, elts in lyndon_elements(alphabet, cap, field)
             for elt in elts]

    instances: list[NCPoly] = []
    for g in gens:
        for component in polyhomogeneous_components(g).values():
            flin, m = multilinearize(component, component.max_letter())
            if m == 0:
                instances.append(flin)  # constant identity
                continue
            for tup in _degree_bounded_tuples(basis, m, cap):
                inst = flin.substitute([p for p, _ in tup])
                if not inst.is_zero:
                    instances.append(inst)

    # seed with polyhomogeneous components, then close under letter products
    by_degree: dict[int, list[NCPoly]] = {}
    for inst in instances:
        for md_part in polyhomogeneous_components(inst, alphabet).values():
            d = md_part.degree()
            if d <= cap:
                by_degree.setdefault(d, []).append(md_part)

    letters = [NCPoly.letter(i, field) for i in range(alphabet)]
    for d in range(0, cap + 1):
        for p in by_degree.get(d, []):
            ideal._echelon(d).add(p.terms)
        if d == cap:
            break
        ech = ideal.components.get(d)
        if ech is None:
            continue
        nxt = by_degree.setdefault(d + 1, [])
        for row in ech.basis():
            p = NCPoly(row)
            for y in letters:
                nxt.append(y * p)
                nxt.append(p * y)
    return ideal


def _degree_bounded_tuples(basis: list, m: int, cap: int) -> Iterator[tuple]:
    """Tuples of m basis entries (poly, degree) with total degree <= cap."""

    def rec(remaining: int, budget: int):
        if remaining == 0:
            yield ()
            return
        if budget < remaining:  # each entry has degree >= 1
            return
        for entry in basis:
            d = entry[1]
            if d <= budget - (remaining - 1):
                for rest in rec(remaining - 1, budget - d):
                    yield (entry,) + rest

    return rec(m, cap)


class QuotientAlgebra:
    """A(X)/S for a graded fully invariant ideal S, truncated at the cap.

    Words of degree above the cap are identically zero.  The truncation is
    faithful exactly when S is full in the cap degree (then every higher
    degree lies in S as well, by two-sidedness).
    """

    def __init__(self, ideal: GradedIdealBasis):
        self.ideal = ideal
        self.alphabet = ideal.alphabet
        self.cap = ideal.cap
        self.field = ideal.field

    def reduce(self, p: NCPoly) -> NCPoly:
        return self.ideal.reduce(p)

    def mul(self, p: NCPoly, q: NCPoly) -> NCPoly:
        return self.reduce(p * q)

    def dim_component(self, d: int) -> int:
        if d > self.cap or d < 0:
            return 0
        return self.alphabet ** d - self.ideal.dim_at(d)

    def total_dim(self) -> int:
        return sum(self.dim_component(d) for d in range(self.cap + 1))

    def truncation_faithful(self) -> bool:
        return self.ideal.full_at(self.cap)

    def normal_words(self, d: int) -> list:
        """Words of degree d spanning the quotient component (non-pivots)."""
        if d > self.cap or d < 0:
            return []
        ech = self.ideal.components.get(d)
        pivots = set(ech.rows) if ech is not None else set()
        return [w for w in sorted(all_words(self.alphabet, d), key=word_key)
                if w not in pivots]

    def graded_basis(self) -> list:
        """All (degree, word) normal-form basis labels, degree-lex order."""
        out = []
        for d in range(self.cap + 1):
            out.extend(self.normal_words(d))
        return out


def free_algebra(alphabet: int, cap: int, field: FieldDescriptor) -> QuotientAlgebra:
    """A(X) itself, truncated at the cap (empty ideal)."""
    return QuotientAlgebra(GradedIdealBasis(alphabet, cap, field))
