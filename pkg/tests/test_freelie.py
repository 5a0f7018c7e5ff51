"""Lyndon bases, Witt dimensions, and the bracket-to-commutator embedding."""
import sympy
from hypothesis import given, settings, strategies as st

from repgeo.field import FieldDescriptor
from repgeo.freealg import NCPoly, multidegree, word_key
from repgeo.freelie import (LieElement, LyndonBasis, bracket, commutator,
                            is_lyndon, lyndon_words, standard_bracketing,
                            standard_factorization, tree_str, tree_to_poly,
                            witt_dimension)
from repgeo.linalg import Echelon

Q = FieldDescriptor.rationals()
Q2 = FieldDescriptor.quadratic(2)


def witt_oracle(n, r):
    # classical necklace count (1/n) sum_{d|n} mu(d) r^(n/d)
    return sum(sympy.mobius(d) * r ** (n // d)
               for d in sympy.divisors(n)) // n


def test_witt_numbers_match_mobius_oracle():
    for r in (2, 3):
        for n in range(1, 9):
            assert witt_dimension(n, r) == witt_oracle(n, r)


def test_lyndon_word_counts_and_predicate():
    table = lyndon_words(2, 6)
    assert [len(table[d]) for d in range(1, 7)] == [2, 1, 2, 3, 6, 9]
    for d, ws in table.items():
        for w in ws:
            assert is_lyndon(w)
            assert len(w) == d
    assert not is_lyndon((1, 0))
    assert not is_lyndon((0, 1, 0, 1))
    assert not is_lyndon(())


def test_standard_factorization_splits_at_lyndon_suffix():
    w = (0, 0, 1, 0, 1)
    left, right = standard_factorization(w)
    assert left + right == w
    assert is_lyndon(left) and is_lyndon(right)


def test_standard_bracketing_strings():
    assert tree_str(standard_bracketing((0, 1))) == "[x1,x2]"
    assert tree_str(standard_bracketing((0, 0, 0, 1, 1))) == \
        "[x1,[x1,[[x1,x2],x2]]]"
    assert tree_str(standard_bracketing((0, 0, 1, 0, 1))) == \
        "[[x1,[x1,x2]],[x1,x2]]"


def test_bracket_embedding_on_small_cases():
    x0, x1 = NCPoly.letter(0, Q), NCPoly.letter(1, Q)
    assert tree_to_poly(standard_bracketing((0, 1)), Q) == x0 * x1 - x1 * x0
    assert commutator(x0, x1) == x0 * x1 - x1 * x0


def test_basis_counts_and_independence():
    basis = LyndonBasis(2, 6, Q)
    for d, expected in zip(range(1, 7), (2, 1, 2, 3, 6, 9)):
        elems = basis.elements(d)
        assert basis.count(d) == expected == len(elems)
        ech = Echelon(word_key)
        ech.extend([dict(e.poly.terms) for e in elems])
        assert ech.dim == expected  # images stay independent in the algebra


def test_coordinates_round_trip():
    basis = LyndonBasis(2, 5, Q)
    e = basis.elements(3)[0]
    p = e.poly.scale(Q.scalar(2)) + basis.elements(5)[1].poly
    coords = basis.coordinates(p)
    assert coords is not None
    assert basis.from_coordinates(coords) == p


def test_is_lie_accepts_brackets_rejects_words():
    basis = LyndonBasis(2, 4, Q)
    a = LieElement.generator(0, Q)
    b = LieElement.generator(1, Q)
    assert basis.is_lie(a.bracket(b).poly)
    assert basis.is_lie(a.bracket(b).bracket(a).poly)
    assert not basis.is_lie(NCPoly.word((0, 1), Q.one()))
    assert not basis.is_lie(NCPoly.unit(Q))


small_lie = st.integers(min_value=-3, max_value=3)


@st.composite
def lie_elements(draw, field=Q, cap=5):
    basis = LyndonBasis(2, cap, field)
    acc = LieElement.zero(field)
    pool = basis.all_elements()
    idxs = draw(st.lists(st.integers(0, len(pool) - 1), max_size=3))
    for i in idxs:
        c = field.scalar(draw(small_lie))
        acc = acc + LieElement(pool[i].poly, field).scale(c)
    return acc


@settings(max_examples=40, deadline=None)
@given(a=lie_elements(), b=lie_elements())
def test_bracket_antisymmetry(a, b):
    cap = 5
    assert a.bracket(a, cap).poly.is_zero
    assert (a.bracket(b, cap) + b.bracket(a, cap)).poly.is_zero


@settings(max_examples=25, deadline=None)
@given(a=lie_elements(cap=4), b=lie_elements(cap=4), c=lie_elements(cap=4))
def test_jacobi_identity(a, b, c):
    cap = 4
    lhs = (a.bracket(b, cap).bracket(c, cap)
           + b.bracket(c, cap).bracket(a, cap)
           + c.bracket(a, cap).bracket(b, cap))
    assert lhs.poly.is_zero


@settings(max_examples=40, deadline=None)
@given(a=lie_elements(), b=lie_elements())
def test_bracket_matches_commutator(a, b):
    # the embedding turns brackets into commutators before truncation
    full = commutator(a.poly, b.poly)
    assert a.bracket(b, 5).poly == full.truncate(5)


def poly_multidegree(p, alphabet):
    mds = {multidegree(w, alphabet) for w in p.terms}
    assert len(mds) == 1
    return mds.pop()


def test_multidegree_3_2_slot_holds_the_two_bracketings():
    basis = LyndonBasis(2, 5, Q2)
    slot = [e for e in basis.elements(5)
            if poly_multidegree(e.poly, 2) == (3, 2)]
    assert len(slot) == 2
    e1 = LieElement.from_tree(standard_bracketing((0, 0, 0, 1, 1)), Q2)
    e2 = LieElement.from_tree(standard_bracketing((0, 0, 1, 0, 1)), Q2)
    ech = Echelon(word_key)
    ech.extend([dict(e.poly.terms) for e in slot])
    for e in (e1, e2):
        assert ech.contains(dict(e.poly.terms))
    ech2 = Echelon(word_key)
    ech2.extend([dict(e1.poly.terms), dict(e2.poly.terms)])
    assert ech2.dim == 2
