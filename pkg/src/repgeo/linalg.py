"""Sparse exact linear algebra over a field of Scalar coefficients.

Vectors are dicts mapping hashable keys to nonzero coefficients.  An Echelon
maintains a reduced row echelon basis with deterministic pivoting: the pivot
of a row is its smallest key under the supplied total order, and rows are
kept fully back-substituted, so reduce() computes a canonical residue.

Coefficient entries are duck-typed: reduce() only multiplies entries by
Scalar row coefficients and subtracts, so vectors over polynomial
coefficients can be reduced against a Scalar-row basis.
"""

from __future__ import annotations

from typing import Callable, Hashable, Iterable

Key = Hashable
Vec = dict


def vec_is_zero(v: Vec) -> bool:
    return not v


def vec_add(a: Vec, b: Vec) -> Vec:
    out = dict(a)
    for k, c in b.items():
        if k in out:
            s = out[k] + c
            if s.is_zero:
                del out[k]
            else:
                out[k] = s
        else:
            out[k] = c
    return out


def vec_sub(a: Vec, b: Vec) -> Vec:
    return vec_add(a, {k: -c for k, c in b.items()})


def vec_scale(v: Vec, c) -> Vec:
    if c.is_zero:
        return {}
    return {k: x * c for k, x in v.items()}


class Echelon:
    """Reduced echelon span of a set of vectors."""

    def __init__(self, order: Callable[[Key], object] = lambda k: k):
        self.order = order
        self.rows: dict[Key, Vec] = {}

    def _pivot(self, v: Vec) -> Key:
        return min(v, key=self.order)

    def reduce(self, v: Vec) -> Vec:
        """Canonical residue of v modulo the span; v is not mutated."""
        out = dict(v)
        while True:
            hit = None
            for k in out:
                if k in self.rows:
                    hit = k
                    break
            if hit is None:
                return out
            coeff = out[hit]
            row = self.rows[hit]
            for k, c in row.items():
                cur = out.get(k)
                delta = coeff * c
                if cur is None:
                    out[k] = -delta
                else:
                    s = cur - delta
                    if s.is_zero:
                        del out[k]
                    else:
                        out[k] = s
            # the pivot entry of row is 1, so hit is now eliminated
            assert hit not in out

    def add(self, v: Vec) -> Vec:
        """Insert v into the span; returns the residue (empty if dependent)."""
        res = self.reduce(v)
        if not res:
            return res
        piv = self._pivot(res)
        inv = res[piv].inverse()
        row = {k: c * inv for k, c in res.items()}
        # back-substitute into existing rows to keep the form reduced
        for p, r in list(self.rows.items()):
            if piv in r:
                coeff = r[piv]
                new = dict(r)
                for k, c in row.items():
                    cur = new.get(k)
                    delta = coeff * c
                    if cur is None:
                        new[k] = -delta
                    else:
                        s = cur - delta
                        if s.is_zero:
                            del new[k]
                        else:
                            new[k] = s
                self.rows[p] = new
        self.rows[piv] = row
        return res

    def extend(self, vs: Iterable[Vec]) -> None:
        for v in vs:
            self.add(v)

    def contains(self, v: Vec) -> bool:
        return not self.reduce(v)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def basis(self) -> list[Vec]:
        return [self.rows[p] for p in sorted(self.rows, key=self.order)]

    def pivots(self) -> list[Key]:
        return sorted(self.rows, key=self.order)

    def span_contains(self, other: "Echelon") -> bool:
        return all(self.contains(r) for r in other.rows.values())

    def span_equals(self, other: "Echelon") -> bool:
        return self.dim == other.dim and self.span_contains(other)

    def copy(self) -> "Echelon":
        out = Echelon(self.order)
        out.rows = {p: dict(r) for p, r in self.rows.items()}
        return out


def kernel_of_map(images: list[Vec], order: Callable[[Key], object], one) -> list[Vec]:
    """Kernel of the linear map e_i -> images[i], as coefficient vectors
    keyed by source index.

    Echelonizes images augmented with source tags ordered after all image
    keys; rows whose pivot is a tag have zero image part and read off a
    reduced kernel basis.  `one` is the unit scalar of the coefficient field.
    """

    def aug_order(k):
        tag, inner = k
        return (tag, order(inner) if tag == 0 else inner)

    ech = Echelon(aug_order)
    for i, img in enumerate(images):
        row: Vec = {(0, k): c for k, c in img.items()}
        row[(1, i)] = one
        ech.add(row)
    kernel: list[Vec] = []
    for piv in ech.pivots():
        if piv[0] == 1:
            row = ech.rows[piv]
            kernel.append({k[1]: c for k, c in row.items()})
    return kernel


def express_in_span(target: Vec, gens: list[Vec],
                    order: Callable[[Key], object], one) -> dict[int, object] | None:
    """Coefficients c with target = sum c_i gens[i], or None.

    Augments each generator with a tag column; the tags surviving in the
    residue of the (untagged) target are the negated coefficients.
    """

    def aug_order(k):
        tag, inner = k
        return (tag, order(inner) if tag == 0 else inner)

    ech = Echelon(aug_order)
    for i, g in enumerate(gens):
        row: Vec = {(0, k): c for k, c in g.items()}
        row[(1, i)] = one
        ech.add(row)
    res = ech.reduce({(0, k): c for k, c in target.items()})
    if any(k[0] == 0 for k in res):
        return None
    return {k[1]: -c for k, c in res.items()}


def intersect_with_span(vectors: list[Vec], sp: Echelon,
                        order: Callable[[Key], object], one) -> list[Vec]:
    """Echelonized basis of {v in span(vectors) : v in span(sp)}."""
    residues = [sp.reduce(v) for v in vectors]
    if all(not r for r in residues):
        ech = Echelon(order)
        ech.extend(vectors)
        return ech.basis()
    combos = kernel_of_map(residues, order, one)
    ech = Echelon(order)
    for combo in combos:
        v: Vec = {}
        for i, c in combo.items():
            v = vec_add(v, vec_scale(vectors[i], c))
        ech.add(v)
    return ech.basis()
