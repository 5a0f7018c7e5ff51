"""Echelon spans over exact scalars, cross-checked against sympy ranks."""
import random

import sympy
from hypothesis import given, settings, strategies as st

from repgeo.field import FieldDescriptor
from repgeo.linalg import (Echelon, express_in_span, intersect_with_span,
                           kernel_of_map, vec_add, vec_is_zero, vec_scale)

Q = FieldDescriptor.rationals()


def to_vec(row):
    return {j: Q.scalar(c) for j, c in enumerate(row) if c}


def random_rows(rng, n_rows, n_cols, lo=-4, hi=4):
    return [[rng.randint(lo, hi) for _ in range(n_cols)] for _ in range(n_rows)]


small_ints = st.integers(min_value=-5, max_value=5)
rows = st.lists(st.lists(small_ints, min_size=4, max_size=4),
                min_size=1, max_size=6)


@given(rows)
def test_rank_matches_sympy(mat):
    ech = Echelon()
    ech.extend([to_vec(r) for r in mat])
    assert ech.dim == sympy.Matrix(mat).rank()


@given(rows)
def test_reduce_fixed_point_and_membership(mat):
    ech = Echelon()
    ech.extend([to_vec(r) for r in mat])
    for r in mat:
        v = to_vec(r)
        assert ech.contains(v)
        assert vec_is_zero(ech.reduce(v))
    # residues of reduce are themselves fully reduced
    probe = to_vec([1, 2, 3, 4])
    res = ech.reduce(probe)
    assert ech.reduce(res) == res


def test_add_returns_residue_and_grows_span():
    ech = Echelon()
    r = ech.add(to_vec([1, 1, 0]))
    assert not vec_is_zero(r)
    assert vec_is_zero(ech.add(to_vec([2, 2, 0])))
    assert ech.dim == 1
    ech.add(to_vec([0, 1, 1]))
    assert ech.dim == 2
    assert ech.contains(to_vec([1, 0, -1]))
    assert not ech.contains(to_vec([0, 0, 1]))


def test_span_equality_and_containment():
    a = Echelon()
    a.extend([to_vec([1, 0]), to_vec([0, 1])])
    b = Echelon()
    b.extend([to_vec([1, 1]), to_vec([1, -1])])
    assert a.span_equals(b)
    c = Echelon()
    c.add(to_vec([1, 1]))
    assert a.span_contains(c)
    assert not c.span_contains(a)


def test_basis_pivots_are_distinct():
    ech = Echelon()
    ech.extend([to_vec([1, 2, 3]), to_vec([0, 1, 1]), to_vec([1, 3, 4])])
    piv = ech.pivots()
    assert len(piv) == len(set(piv)) == ech.dim == 2


@settings(max_examples=30)
@given(rows, st.lists(small_ints, min_size=1, max_size=6))
def test_express_in_span_reconstructs(mat, coeffs):
    gens = [to_vec(r) for r in mat]
    combo = None
    for c, g in zip(coeffs, gens):
        term = vec_scale(g, Q.scalar(c))
        combo = term if combo is None else vec_add(combo, term)
    sol = express_in_span(combo, gens, lambda k: k, Q.one())
    assert sol is not None
    rebuilt = None
    for i, c in sol.items():
        term = vec_scale(gens[i], c)
        rebuilt = term if rebuilt is None else vec_add(rebuilt, term)
    diff = vec_add(combo, vec_scale(rebuilt or {}, Q.scalar(-1)))
    assert vec_is_zero(diff)


def test_express_in_span_refuses_outside_vectors():
    gens = [to_vec([1, 0, 0]), to_vec([0, 1, 0])]
    assert express_in_span(to_vec([0, 0, 1]), gens, lambda k: k, Q.one()) is None


def test_kernel_matches_sympy_nullity():
    rng = random.Random(7)
    for _ in range(20):
        mat = random_rows(rng, rng.randint(1, 5), 4)
        # columns of the map are the images of basis vectors
        images = [to_vec(r) for r in mat]
        ker = kernel_of_map(images, lambda k: k, Q.one())
        nullity = len(mat) - sympy.Matrix(mat).rank()
        assert len(ker) == nullity
        for combo in ker:
            acc = None
            for i, c in combo.items():
                term = vec_scale(images[i], c)
                acc = term if acc is None else vec_add(acc, term)
            assert acc is None or vec_is_zero(acc)


def test_intersect_with_span_dimension():
    rng = random.Random(11)
    for _ in range(15):
        u = [to_vec(r) for r in random_rows(rng, 3, 5)]
        w_rows = random_rows(rng, 3, 5)
        sp = Echelon()
        sp.extend([to_vec(r) for r in w_rows])
        inter = intersect_with_span(u, sp, lambda k: k, Q.one())
        for v in inter:
            assert sp.contains(v)
        ech_u = Echelon()
        ech_u.extend(u)
        ech_all = ech_u.copy()
        ech_all.extend([to_vec(r) for r in w_rows])
        # dim(U) + dim(W) - dim(U + W) = dim(U cap W)
        expected = ech_u.dim + sp.dim - ech_all.dim
        got = Echelon()
        got.extend(inter)
        assert got.dim == expected
