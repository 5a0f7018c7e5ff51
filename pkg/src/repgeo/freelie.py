"""Free Lie algebra on x1..xn via Lyndon words.

Lie elements are carried by their images in the free associative algebra
(brackets expand to commutators); the embedding is injective, so equality
and linear algebra on the images are faithful.  The homogeneous basis in
each degree consists of the standard bracketings of Lyndon words, with
dimensions given by the Witt formula.
"""

from __future__ import annotations

from dataclasses import dataclass

from .field import FieldDescriptor, Scalar
from .freealg import NCPoly, word_key
from .linalg import Echelon

Word = tuple
BracketTree = object  # int leaf, or (BracketTree, BracketTree) pair


def is_lyndon(w: Word) -> bool:
    """A nonempty word is Lyndon iff it is strictly smaller than each of its
    proper suffixes."""
    if not w:
        return False
    return all(w < w[i:] for i in range(1, len(w)))


def lyndon_words(alphabet: int, max_degree: int) -> dict:
    """All Lyndon words of length <= max_degree, by degree, lex-ordered
    within each degree (Duval's generation)."""
    out: dict[int, list[Word]] = {d: [] for d in range(1, max_degree + 1)}
    if alphabet == 0 or max_degree == 0:
        return out
    w = [-1]
    while w:
        w[-1] += 1
        m = len(w)
        out[m].append(tuple(w))
        while len(w) < max_degree:
            w.append(w[len(w) - m])
        while w and w[-1] == alphabet - 1:
            w.pop()
    for d in out:
        out[d].sort()
    return out


def standard_factorization(w: Word) -> tuple:
    """Split a Lyndon word of length >= 2 as u|v with v the longest proper
    Lyndon suffix; both factors are Lyndon."""
    for i in range(1, len(w)):
        if is_lyndon(w[i:]):
            return w[:i], w[i:]
    raise ValueError(f"{w} is not a Lyndon word of length >= 2")


def standard_bracketing(w: Word) -> BracketTree:
    if len(w) == 1:
        return w[0]
    u, v = standard_factorization(w)
    return (standard_bracketing(u), standard_bracketing(v))


def commutator(p: NCPoly, q: NCPoly) -> NCPoly:
    return p * q - q * p


def tree_to_poly(tree: BracketTree, field: FieldDescriptor) -> NCPoly:
    """Iota: evaluate a bracket tree to its associative image."""
    if isinstance(tree, int):
        return NCPoly.letter(tree, field)
    left, right = tree
    return commutator(tree_to_poly(left, field), tree_to_poly(right, field))


def tree_str(tree: BracketTree) -> str:
    if isinstance(tree, int):
        return f"x{tree + 1}"
    return f"[{tree_str(tree[0])},{tree_str(tree[1])}]"


def witt_dimension(degree: int, alphabet: int) -> int:
    """Dimension of the homogeneous degree component: the Witt formula
    (1/n) * sum over d|n of mobius(d) * r^(n/d)."""
    n = degree
    total = 0
    for d in range(1, n + 1):
        if n % d == 0:
            total += _mobius(d) * alphabet ** (n // d)
    assert total % n == 0
    return total // n


def _mobius(n: int) -> int:
    out = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            out = -out
        p += 1
    if n > 1:
        out = -out
    return out


@dataclass(frozen=True)
class LyndonBasisElement:
    word: Word
    tree: BracketTree
    poly: NCPoly

    @property
    def degree(self) -> int:
        return len(self.word)

    def __str__(self) -> str:
        return tree_str(self.tree)


class LyndonBasis:
    """Graded Lyndon basis of the free Lie algebra up to a degree cap, with
    coordinate solving against the associative images."""

    def __init__(self, alphabet: int, cap: int, field: FieldDescriptor):
        self.alphabet = alphabet
        self.cap = cap
        self.field = field
        self.by_degree: dict[int, list[LyndonBasisElement]] = {}
        self._solvers: dict[int, Echelon] = {}
        words = lyndon_words(alphabet, cap)
        for d in range(1, cap + 1):
            elts = []
            for w in words.get(d, []):
                tree = standard_bracketing(w)
                elts.append(LyndonBasisElement(w, tree, tree_to_poly(tree, field)))
            self.by_degree[d] = elts

    def elements(self, degree: int) -> list:
        return self.by_degree.get(degree, [])

    def all_elements(self) -> list:
        out = []
        for d in range(1, self.cap + 1):
            out.extend(self.by_degree.get(d, []))
        return out

    def count(self, degree: int) -> int:
        return len(self.by_degree.get(degree, []))

    def _solver(self, d: int) -> Echelon:
        # rows: iota(b) augmented with a basis tag; image keys order first,
        # so rows reduce Lie polys and the tag part recovers coordinates
        if d not in self._solvers:
            def order(k):
                tag, inner = k
                return (tag, word_key(inner) if tag == 0 else inner)

            ech = Echelon(order)
            one = self.field.one()
            for idx, elt in enumerate(self.by_degree.get(d, [])):
                row = {(0, w): c for w, c in elt.poly.terms.items()}
                row[(1, idx)] = one
                ech.add(row)
            self._solvers[d] = ech
        return self._solvers[d]

    def coordinates(self, p: NCPoly):
        """Coordinates {(degree, index): coeff} of p in the Lyndon basis, or
        None when p is not a Lie element (or exceeds the cap)."""
        coords: dict = {}
        for d, part in p.degree_parts().items():
            if d < 1 or d > self.cap:
                return None
            res = self._solver(d).reduce({(0, w): c for w, c in part.terms.items()})
            if any(k[0] == 0 for k in res):
                return None
            for k, c in res.items():
                coords[(d, k[1])] = -c
        return coords

    def is_lie(self, p: NCPoly) -> bool:
        return p.is_zero or self.coordinates(p) is not None

    def from_coordinates(self, coords: dict) -> NCPoly:
        out = NCPoly.zero()
        for (d, idx), c in coords.items():
            out = out + self.by_degree[d][idx].poly.scale(c)
        return out


def lyndon_elements(alphabet: int, cap: int, field: FieldDescriptor) -> list:
    """[(degree, [LyndonBasisElement])] for degree 1..cap; used as the
    substitution targets in consequence closures."""
    basis = LyndonBasis(alphabet, cap, field)
    return [(d, basis.elements(d)) for d in range(1, cap + 1)]


class LieElement:
    """A Lie element of the cap-truncated free Lie algebra, carried by its
    associative image."""

    __slots__ = ("poly", "field")

    def __init__(self, poly: NCPoly, field: FieldDescriptor):
        self.poly = poly
        self.field = field

    @staticmethod
    def generator(i: int, field: FieldDescriptor) -> "LieElement":
        return LieElement(NCPoly.letter(i, field), field)

    @staticmethod
    def zero(field: FieldDescriptor) -> "LieElement":
        return LieElement(NCPoly.zero(), field)

    @staticmethod
    def from_tree(tree: BracketTree, field: FieldDescriptor) -> "LieElement":
        return LieElement(tree_to_poly(tree, field), field)

    @property
    def is_zero(self) -> bool:
        return self.poly.is_zero

    def __add__(self, other: "LieElement") -> "LieElement":
        return LieElement(self.poly + other.poly, self.field)

    def __sub__(self, other: "LieElement") -> "LieElement":
        return LieElement(self.poly - other.poly, self.field)

    def __neg__(self) -> "LieElement":
        return LieElement(-self.poly, self.field)

    def scale(self, c: Scalar) -> "LieElement":
        return LieElement(self.poly.scale(c), self.field)

    def bracket(self, other: "LieElement", cap: int | None = None) -> "LieElement":
        p = commutator(self.poly, other.poly)
        if cap is not None:
            p = p.truncate(cap)
        return LieElement(p, self.field)

    def truncate(self, cap: int) -> "LieElement":
        return LieElement(self.poly.truncate(cap), self.field)

    def __eq__(self, other) -> bool:
        return isinstance(other, LieElement) and self.poly == other.poly

    def __hash__(self):
        return hash(self.poly)

    def __str__(self) -> str:
        return str(self.poly)

    def __repr__(self) -> str:
        return f"LieElement({self.poly})"


def bracket(a: LieElement, b: LieElement, cap: int | None = None) -> LieElement:
    return a.bracket(b, cap)
