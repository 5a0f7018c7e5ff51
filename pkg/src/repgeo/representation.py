"""Two-sorted representations: a Lie algebra acting on a module.

A point has a Lie part and a module part.  The free object on (n1, n2)
generators in the variety cut out by a family of module identities
f(x1,...,xm) * v = 0 has the free Lie algebra (cap-truncated) as its Lie part
and, as its module part, a direct sum of n2 cyclic components A*v_j, where A
is the free associative algebra modulo the consequence closure of the
identities.  The Lie part acts by left multiplication through the enveloping
embedding.  All arithmetic is exact, and the grading makes the cap truncation
exact in every retained degree.
"""

from __future__ import annotations

from dataclasses import dataclass

from .field import FieldDescriptor, Scalar
from .freealg import (
    CapTooSmall,
    NCPoly,
    QuotientAlgebra,
    Word,
    consequence_closure,
)
from .freelie import LieElement, LyndonBasis
from .linalg import Echelon


class TrivialVariety(ValueError):
    """The identities force the module to vanish."""


class DegenerateVariety(ValueError):
    """The identities kill the action in degree one."""


class NotSubmodule(ValueError):
    """A proposed module subspace is not closed under the Lie action."""


@dataclass(frozen=True)
class VarietyDescriptor:
    """An action-type class of representations.

    Each module identity is the associative polynomial f of a law
    f(x1,...,xm) * v = 0 imposed for all Lie tuples and all module points.
    No Lie-sort identities are admitted: the classes handled here all have a
    free Lie sort.
    """

    field: FieldDescriptor
    cap: int
    module_identities: tuple[NCPoly, ...] = ()

    def __post_init__(self):
        if self.cap < 1:
            raise ValueError("cap must be at least 1")

    @staticmethod
    def free(field: FieldDescriptor, cap: int) -> "VarietyDescriptor":
        return VarietyDescriptor(field, cap, ())


ModKey = tuple[int, Word]  # (module generator index, algebra word)


def mod_key_order(k: ModKey):
    j, w = k
    return (len(w), w, j)


class ModuleElement:
    """Element of the module sort, stored reduced: one algebra residue per
    module generator."""

    __slots__ = ("rep", "parts")

    def __init__(self, rep: "FreeRep", parts: dict[int, NCPoly], reduced: bool = False):
        self.rep = rep
        if not reduced:
            parts = {j: rep.algebra.reduce(p) for j, p in parts.items()}
        self.parts = {j: p for j, p in parts.items() if not p.is_zero}

    @property
    def is_zero(self) -> bool:
        return not self.parts

    def part(self, j: int) -> NCPoly:
        return self.parts.get(j, NCPoly.zero())

    def __add__(self, other: "ModuleElement") -> "ModuleElement":
        parts = dict(self.parts)
        for j, p in other.parts.items():
            parts[j] = parts[j] + p if j in parts else p
        return ModuleElement(self.rep, parts, reduced=True)

    def __sub__(self, other: "ModuleElement") -> "ModuleElement":
        return self + (-other)

    def __neg__(self) -> "ModuleElement":
        return ModuleElement(self.rep, {j: -p for j, p in self.parts.items()}, reduced=True)

    def scale(self, c: Scalar) -> "ModuleElement":
        if c.is_zero:
            return self.rep.module_zero()
        return ModuleElement(self.rep, {j: p.scale(c) for j, p in self.parts.items()},
                             reduced=True)

    def degree(self) -> int:
        if self.is_zero:
            return 0
        return max(p.degree() for p in self.parts.values())

    def vec(self) -> dict[ModKey, Scalar]:
        return {(j, w): c for j, p in self.parts.items() for w, c in p.terms.items()}

    def __eq__(self, other) -> bool:
        return isinstance(other, ModuleElement) and self.parts == other.parts

    def __hash__(self):
        return hash(frozenset((j, frozenset(p.terms.items()))
                              for j, p in self.parts.items()))

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        chunks = []
        for j in sorted(self.parts):
            p = self.parts[j]
            ps = str(p)
            chunks.append(f"({ps})*v{j + 1}" if ("+" in ps or " - " in ps or "*" in ps)
                          else f"{ps}*v{j + 1}")
        return " + ".join(chunks)

    def __repr__(self) -> str:
        return f"ModuleElement({self})"


class FreeRep:
    """The free representation on n1 Lie and n2 module generators."""

    def __init__(self, variety: VarietyDescriptor, n1: int, n2: int):
        if n1 < 0 or n2 < 0:
            raise ValueError("generator counts must be nonnegative")
        self.variety = variety
        self.field = variety.field
        self.cap = variety.cap
        self.n1 = n1
        self.n2 = n2
        self.lie_basis = LyndonBasis(n1, self.cap, self.field)
        ideal = consequence_closure(variety.module_identities, n1, self.cap,
                                    self.field)
        self.algebra = QuotientAlgebra(ideal)
        if variety.module_identities:
            if self.algebra.dim_component(0) == 0:
                raise TrivialVariety("identities annihilate constants")
            if n1 >= 1 and self.algebra.dim_component(1) < n1:
                raise DegenerateVariety("identities kill the degree-one action")
        # Nilpotent within the cap: every product of cap letters already
        # vanishes, so the truncated object is the honest free object.
        self.nilpotent = n1 == 0 or self.algebra.truncation_faithful()

    # ---- element constructors -------------------------------------------

    def lie_generator(self, i: int) -> LieElement:
        if not 0 <= i < self.n1:
            raise IndexError(f"no Lie generator x{i + 1}")
        return LieElement.generator(i, self.field)

    def module_generator(self, j: int) -> ModuleElement:
        if not 0 <= j < self.n2:
            raise IndexError(f"no module generator v{j + 1}")
        return ModuleElement(self, {j: NCPoly.unit(self.field)}, reduced=True)

    def module_zero(self) -> ModuleElement:
        return ModuleElement(self, {}, reduced=True)

    def module_from_vec(self, vec: dict[ModKey, Scalar]) -> ModuleElement:
        parts: dict[int, dict] = {}
        for (j, w), c in vec.items():
            parts.setdefault(j, {})[w] = c
        return ModuleElement(self, {j: NCPoly(t) for j, t in parts.items()})

    # ---- structure operations -------------------------------------------

    def act(self, l: LieElement, m: ModuleElement) -> ModuleElement:
        """Left action of the Lie part through the enveloping embedding."""
        return self.act_from_poly(l.poly, m)

    def act_from_poly(self, p: NCPoly, m: ModuleElement) -> ModuleElement:
        """Left multiplication by an arbitrary enveloping polynomial."""
        p = p.truncate(self.cap)
        return ModuleElement(self, {j: (p * q).truncate(self.cap)
                                    for j, q in m.parts.items()})

    def module_scale(self, c: Scalar, m: ModuleElement) -> ModuleElement:
        return m.scale(c)

    # Uniform operation hooks used by Homomorphism evaluation; a twisted
    # target substitutes its own versions.
    def lie_zero(self) -> LieElement:
        return LieElement.zero(self.field)

    def lie_add(self, a: LieElement, b: LieElement) -> LieElement:
        return a + b

    def lie_scale(self, c: Scalar, a: LieElement) -> LieElement:
        return a.scale(c)

    def lie_bracket(self, a: LieElement, b: LieElement) -> LieElement:
        return a.bracket(b, self.cap)

    def mod_zero(self) -> ModuleElement:
        return self.module_zero()

    def mod_add(self, u: ModuleElement, v: ModuleElement) -> ModuleElement:
        return u + v

    def mod_scale(self, c: Scalar, u: ModuleElement) -> ModuleElement:
        return u.scale(c)

    def reduce_module(self, m: ModuleElement) -> ModuleElement:
        return m

    def module_coords(self, m: ModuleElement) -> dict[ModKey, Scalar]:
        return m.vec()

    # ---- bases and dimensions ---------------------------------------------

    def module_monomials(self, d: int) -> list[ModKey]:
        """Basis keys of the degree-d module component."""
        return [(j, w) for j in range(self.n2) for w in self.algebra.normal_words(d)]

    def all_module_monomials(self) -> list[ModKey]:
        out = []
        for d in range(self.cap + 1):
            out.extend(self.module_monomials(d))
        return out

    def lie_dim(self, d: int) -> int:
        return self.lie_basis.count(d)

    def module_dim(self, d: int) -> int:
        return self.n2 * self.algebra.dim_component(d)

    def module_total_dim(self) -> int:
        return sum(self.module_dim(d) for d in range(self.cap + 1))

    def __repr__(self):
        ids = len(self.variety.module_identities)
        return (f"FreeRep(n1={self.n1}, n2={self.n2}, cap={self.cap}, "
                f"field={self.field}, identities={ids})")


class ModuleSubspace:
    """Subspace of the module sort of a free representation.

    Not assumed graded: one global echelon over (generator, word) keys,
    degree-major order.
    """

    def __init__(self, rep: FreeRep):
        self.rep = rep
        self.ech = Echelon(mod_key_order)

    def add(self, m: ModuleElement) -> bool:
        return bool(self.ech.add(m.vec()))

    def extend(self, ms) -> None:
        for m in ms:
            self.add(m)

    def contains(self, m: ModuleElement) -> bool:
        return self.ech.contains(m.vec())

    def reduce(self, m: ModuleElement) -> ModuleElement:
        return self.rep.module_from_vec(self.ech.reduce(m.vec()))

    @property
    def dim(self) -> int:
        return self.ech.dim

    def basis(self) -> list[ModuleElement]:
        return [self.rep.module_from_vec(v) for v in self.ech.basis()]

    def copy(self) -> "ModuleSubspace":
        out = ModuleSubspace.__new__(ModuleSubspace)
        out.rep = self.rep
        out.ech = self.ech.copy()
        return out

    def span_equals(self, other: "ModuleSubspace") -> bool:
        return self.ech.span_equals(other.ech)

    def span_contains(self, other: "ModuleSubspace") -> bool:
        return self.ech.span_contains(other.ech)

    def action_violation(self):
        """A (letter index, basis element) pair escaping the span, or None.

        Closure under the letters is equivalent to closure under the whole
        Lie action: enveloping images expand into iterated letter products.
        """
        for m in self.basis():
            for i in range(self.rep.n1):
                img = self.rep.act(self.rep.lie_generator(i), m)
                if not self.contains(img):
                    return i, m
        return None

    def action_closure(self) -> "ModuleSubspace":
        """Smallest submodule containing this subspace."""
        out = self.copy()
        queue = out.basis()
        while queue:
            m = queue.pop()
            for i in range(self.rep.n1):
                img = out.rep.act(out.rep.lie_generator(i), m)
                if out.add(img):
                    queue.append(img)
        return out


def span_of(rep: FreeRep, elements) -> ModuleSubspace:
    sp = ModuleSubspace(rep)
    sp.extend(elements)
    return sp


class Representation:
    """A quotient of a free representation by a submodule of its module sort.

    The Lie sort is untouched; this matches the shape of every target the
    geometry needs (cyclic quotients A/T with a free nilpotent Lie part).
    """

    def __init__(self, free: FreeRep, submodule: ModuleSubspace | None = None):
        self.free = free
        self.field = free.field
        self.cap = free.cap
        if submodule is None:
            submodule = ModuleSubspace(free)
        elif submodule.rep is not free:
            raise ValueError("submodule belongs to a different representation")
        violation = submodule.action_violation()
        if violation is not None:
            i, m = violation
            raise NotSubmodule(f"x{i + 1} acting on {m} leaves the subspace")
        self.submodule = submodule

    # Lie sort passthrough.
    def lie_zero(self) -> LieElement:
        return self.free.lie_zero()

    def lie_add(self, a, b):
        return self.free.lie_add(a, b)

    def lie_scale(self, c, a):
        return self.free.lie_scale(c, a)

    def lie_bracket(self, a, b):
        return self.free.lie_bracket(a, b)

    def lie_coords(self, a: LieElement) -> dict:
        coords = self.free.lie_basis.coordinates(a.poly.truncate(self.cap))
        if coords is None:
            raise ValueError("element is not in the Lie span")
        return coords

    # Module sort: canonical residues mod the submodule.
    def mod_zero(self) -> ModuleElement:
        return self.free.module_zero()

    def mod_add(self, u, v):
        return self.reduce_module(u + v)

    def mod_scale(self, c, u):
        return self.reduce_module(u.scale(c))

    def act(self, l, u):
        return self.reduce_module(self.free.act(l, u))

    def reduce_module(self, m: ModuleElement) -> ModuleElement:
        return self.submodule.reduce(m)

    def module_coords(self, m: ModuleElement) -> dict[ModKey, Scalar]:
        return self.reduce_module(m).vec()

    def module_dim(self, d: int) -> int:
        return len(self.module_basis_keys(d))

    def module_total_dim(self) -> int:
        return self.free.module_total_dim() - self.submodule.dim

    def module_basis_keys(self, d: int) -> list[ModKey]:
        """Non-pivot monomials of degree d (pivots absorb the submodule)."""
        pivots = {k for k in self.submodule.ech.pivots()}
        return [k for k in self.free.module_monomials(d) if k not in pivots]

    def __repr__(self):
        return f"Representation({self.free!r}, codim={self.submodule.dim})"


class Homomorphism:
    """Map out of a free representation, determined by generator images.

    The target may be any object exposing the operation hooks (a FreeRep, a
    Representation, or a twisted wrapper); evaluation goes through those
    hooks only, so one evaluator serves plain and twisted targets alike.
    """

    def __init__(self, source: FreeRep, target, lie_images, module_images):
        if len(lie_images) != source.n1:
            raise ValueError(f"expected {source.n1} Lie generator images")
        if len(module_images) != source.n2:
            raise ValueError(f"expected {source.n2} module generator images")
        self.source = source
        self.target = target
        self.lie_images = list(lie_images)
        self.module_images = list(module_images)
        self._tree_cache: dict = {}
        self._chain_cache: dict = {}

    def _eval_tree(self, tree):
        if isinstance(tree, int):
            return self.lie_images[tree]
        key = tree
        hit = self._tree_cache.get(key)
        if hit is not None:
            return hit
        left, right = tree
        val = self.target.lie_bracket(self._eval_tree(left), self._eval_tree(right))
        self._tree_cache[key] = val
        return val

    def apply_lie(self, a: LieElement):
        basis = self.source.lie_basis
        coords = basis.coordinates(a.poly.truncate(self.source.cap))
        if coords is None:
            raise ValueError("element is not in the Lie span of the source")
        out = self.target.lie_zero()
        for (d, idx), c in sorted(coords.items()):
            elt = basis.elements(d)[idx]
            out = self.target.lie_add(out, self.target.lie_scale(c, self._eval_tree(elt.tree)))
        return out

    def _eval_chain(self, j: int, w: Word):
        """Image of the monomial w * v_j, folding the action from the right."""
        key = (j, w)
        hit = self._chain_cache.get(key)
        if hit is not None:
            return hit
        if not w:
            val = self.module_images[j]
        else:
            tail = self._eval_chain(j, w[1:])
            val = self.target.act(self.lie_images[w[0]], tail)
        self._chain_cache[key] = val
        return val

    def apply_module(self, m: ModuleElement):
        out = self.target.mod_zero()
        for j, p in sorted(m.parts.items()):
            for w in sorted(p.terms, key=lambda w: (len(w), w)):
                c = p.terms[w]
                out = self.target.mod_add(out, self.target.mod_scale(c, self._eval_chain(j, w)))
        return out


def ibn_invariants(rep: FreeRep) -> tuple[int, int]:
    """Recover the generator counts from the representation itself.

    Sort 1: the dimension of L/[L,L].  Sort 2: the dimension of the module
    modulo the span of the action image.  Both quotients are computed
    honestly from spanning sets, not read off the construction.
    """
    from .freealg import word_key

    derived_dim = 0
    ech_by_deg: dict[int, Echelon] = {}
    elts = rep.lie_basis.all_elements()
    for a in elts:
        for b in elts:
            d = a.degree + b.degree
            if d > rep.cap:
                continue
            ech = ech_by_deg.setdefault(d, Echelon(word_key))
            p = LieElement(a.poly, rep.field).bracket(
                LieElement(b.poly, rep.field), rep.cap).poly
            if not p.is_zero:
                ech.add(p.terms)
    derived_dim = sum(e.dim for e in ech_by_deg.values())
    lie_total = sum(rep.lie_dim(d) for d in range(1, rep.cap + 1))
    sort1 = lie_total - derived_dim

    acted = ModuleSubspace(rep)
    for elt in elts:
        l = LieElement(elt.poly, rep.field)
        for j in range(rep.n2):
            for d in range(rep.cap + 1 - elt.degree):
                for w in rep.algebra.normal_words(d):
                    m = ModuleElement(rep, {j: NCPoly.word(w, rep.field.one())},
                                      reduced=True)
                    acted.add(rep.act(l, m))
    sort2 = rep.module_total_dim() - acted.dim
    return sort1, sort2


def cyclic_components(rep: FreeRep) -> list[ModuleSubspace]:
    """The decomposition of the module sort into cyclic pieces, one per
    module generator; checked to be direct and exhaustive."""
    comps = []
    total = 0
    for j in range(rep.n2):
        sp = span_of(rep, [ModuleElement(rep, {j: NCPoly.word(w, rep.field.one())},
                                         reduced=True)
                           for d in range(rep.cap + 1)
                           for w in rep.algebra.normal_words(d)])
        comps.append(sp)
        total += sp.dim
    if total != rep.module_total_dim():
        raise AssertionError("cyclic components do not sum to the module")
    return comps
