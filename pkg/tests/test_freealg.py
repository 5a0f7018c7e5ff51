"""Noncommutative polynomials, graded quotients, and consequence closure."""
import pytest
from hypothesis import given, settings, strategies as st

from repgeo.field import FieldDescriptor
from repgeo.freealg import (CapTooSmall, NCPoly, all_words, consequence_closure,
                            free_algebra, multidegree, multilinearize,
                            polyhomogeneous_components, word_key)

Q = FieldDescriptor.rationals()
Q2 = FieldDescriptor.quadratic(2)

words = st.lists(st.integers(min_value=0, max_value=1), min_size=0,
                 max_size=4).map(tuple)
coeffs = st.integers(min_value=-4, max_value=4).map(Q.scalar)


@st.composite
def polys(draw):
    terms = draw(st.lists(st.tuples(words, coeffs), max_size=4))
    acc = NCPoly.zero()
    for w, c in terms:
        acc = acc + NCPoly.word(w, c)
    return acc


def test_word_basics():
    assert list(all_words(2, 0)) == [()]
    assert len(list(all_words(2, 3))) == 8
    assert len(list(all_words(3, 2))) == 9
    assert multidegree((0, 1, 0), 2) == (2, 1)
    assert multidegree((), 2) == (0, 0)
    # word_key orders by degree first
    assert word_key((1,)) < word_key((0, 0))


def test_poly_construction_and_coeff():
    p = NCPoly.word((0, 1), Q.one()) + NCPoly.word((1, 0), Q.scalar(-1))
    assert p.coeff((0, 1)) == Q.one()
    assert p.coeff((1, 1)) is None
    assert p.degree() == 2 and p.min_degree() == 2
    assert p.max_letter() == 2  # alphabet size needed to host the poly
    assert not p.is_zero
    assert (p - p).is_zero


@given(p=polys(), q=polys(), r=polys())
def test_ring_laws(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert p + q == q + p
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert (q + r) * p == q * p + r * p
    one = NCPoly.unit(Q)
    assert p * one == p and one * p == p


@given(p=polys(), q=polys())
def test_noncommutativity_is_possible_but_degree_adds(p, q):
    prod = p * q
    if not p.is_zero and not q.is_zero:
        assert prod.degree() == p.degree() + q.degree()
        assert prod.min_degree() == p.min_degree() + q.min_degree()
    else:
        assert prod.is_zero


def test_substitute_is_a_homomorphism():
    x0, x1 = NCPoly.letter(0, Q), NCPoly.letter(1, Q)
    p = x0 * x1 + x1.scale(Q.scalar(3))
    images = [x1 * x1, x0 + x1]
    q = p.substitute(images)
    assert q == (x1 * x1) * (x0 + x1) + (x0 + x1).scale(Q.scalar(3))


@given(p=polys())
def test_polyhomogeneous_components_sum_back(p):
    comps = polyhomogeneous_components(p, 2)
    acc = NCPoly.zero()
    for md, comp in comps.items():
        for w in comp.terms:
            assert multidegree(w, 2) == md
        acc = acc + comp
    assert acc == p


def test_truncate_drops_high_degree():
    p = NCPoly.word((0,) * 5, Q.one()) + NCPoly.word((0, 1), Q.one())
    assert p.truncate(3) == NCPoly.word((0, 1), Q.one())
    assert p.truncate(5) == p


def test_multilinearize_square():
    # x1^2 linearizes to x1x2 + x2x1 (up to the substitution back)
    sq = NCPoly.word((0, 0), Q.one())
    linear, total = multilinearize(sq, 1)
    assert total == 2
    ws = sorted(linear.terms)
    assert ws == [(0, 1), (1, 0)]
    assert all(not linear.terms[w].is_zero for w in ws)


def test_free_algebra_dimensions():
    A = free_algebra(2, 4, Q)
    assert [A.dim_component(d) for d in range(5)] == [1, 2, 4, 8, 16]
    assert A.total_dim() == 31
    # with no identities the cap component is not a consequence span
    assert not A.truncation_faithful()


def test_quotient_mul_respects_cap():
    A = free_algebra(2, 3, Q)
    x0 = NCPoly.letter(0, Q)
    p = A.mul(x0 * x0, x0 * x0)
    assert p.is_zero  # degree 4 beyond the cap


def test_consequence_closure_of_six_factor_identity():
    identity = NCPoly.word(tuple(range(6)), Q2.one())
    ideal = consequence_closure([identity], 2, 6, Q2)
    for d in range(6):
        assert ideal.dim_at(d) == 0
    assert ideal.dim_at(6) == 64
    assert ideal.full_at(6)
    # every two-letter degree-6 word is a consequence
    for w in all_words(2, 6):
        assert ideal.contains(NCPoly.word(w, Q2.one()))
    assert not ideal.contains(NCPoly.word((0, 1, 0, 1, 0), Q2.one()))


def test_consequence_closure_is_an_ideal():
    identity = NCPoly.word(tuple(range(2)), Q.one())  # xy = 0
    ideal = consequence_closure([identity], 2, 4, Q)
    x0, x1 = NCPoly.letter(0, Q), NCPoly.letter(1, Q)
    member = x0 * x1
    assert ideal.contains(member)
    assert ideal.contains(x1 * member)
    assert ideal.contains(member * x0)
    assert ideal.contains((x0 + x1) * (x0 + x1))  # substitution instance
    assert not ideal.contains(x0)
    # reduce is a projection modulo the ideal
    p = x0 + x0 * x1
    assert ideal.reduce(p) == ideal.reduce(ideal.reduce(p))
    assert ideal.reduce(member).is_zero


def test_cap_too_small_for_identity():
    identity = NCPoly.word(tuple(range(6)), Q.one())
    with pytest.raises(CapTooSmall):
        consequence_closure([identity], 2, 5, Q)
