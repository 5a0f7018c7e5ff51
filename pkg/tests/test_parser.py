"""Term parsing: precedence, sorts, square roots, and printable round trips."""
import random

import pytest

from repgeo.field import FieldDescriptor
from repgeo.freelie import LieElement
from repgeo.parser import (SortError, TermSyntaxError, UnknownGenerator,
                           parse_scalar, parse_term)
from repgeo.verbal import random_module_element, random_scalar

Q = FieldDescriptor.rationals()
Q2 = FieldDescriptor.quadratic(2)


def test_lie_terms_unbound():
    a = parse_term("[x1,x2]", Q)
    x1 = LieElement.generator(0, Q)
    x2 = LieElement.generator(1, Q)
    assert a == x1.bracket(x2)
    assert parse_term("[x1,[x1,x2]]", Q) == x1.bracket(x1.bracket(x2))
    assert parse_term("2*x1 - x2", Q) == x1.scale(Q.scalar(2)) + \
        x2.scale(Q.scalar(-1))


def test_precedence_and_powers(F):
    got = parse_term("x1^2*v1 + x1*x2*v1", Q2, F)
    v = F.module_generator(0)
    one = Q2.one()
    from repgeo.freealg import NCPoly
    manual = F.mod_add(F.act_from_poly(NCPoly.word((0, 0), one), v),
                       F.act_from_poly(NCPoly.word((0, 1), one), v))
    assert got == manual
    # ^ binds tighter than *
    assert parse_term("2*x1^2*v1", Q2, F) == \
        F.act_from_poly(NCPoly.word((0, 0), Q2.scalar(2)), v)


def test_unary_minus_and_division(F):
    v = F.module_generator(0)
    assert parse_term("-v1", Q2, F) == v.scale(Q2.scalar(-1))
    assert parse_term("v1/2", Q2, F) == v.scale(Q2.one() / Q2.scalar(2))
    with pytest.raises(TermSyntaxError):
        parse_term("v1/0", Q2, F)
    with pytest.raises(TermSyntaxError):
        parse_term("v1/x1", Q2, F)


def test_sqrt_handling():
    assert parse_scalar("sqrt(4)", Q) == Q.scalar(2)
    assert parse_scalar("sqrt(2)", Q2) == Q2.sqrt_gen()
    assert parse_scalar("sqrt(8)", Q2) == Q2.scalar(0, 2)
    assert parse_scalar("1 + sqrt(2)", Q2) == Q2.one() + Q2.sqrt_gen()
    with pytest.raises(TermSyntaxError):
        parse_scalar("sqrt(3)", Q2)
    with pytest.raises(TermSyntaxError):
        parse_scalar("sqrt(2)", Q)


def test_bracket_requires_lie_arguments(F):
    with pytest.raises(SortError):
        parse_term("[x1,v1]", Q2, F)
    with pytest.raises(SortError):
        parse_term("[v1,v1]", Q2, F)


def test_sort_mixing_rejected(F):
    with pytest.raises(SortError):
        parse_term("x1 + v1", Q2, F)
    with pytest.raises(SortError):
        parse_term("v1*x1", Q2, F)
    with pytest.raises(SortError):
        parse_term("1 + x1", Q2, F)


def test_module_generators_need_context():
    with pytest.raises(UnknownGenerator):
        parse_term("v1", Q2)


def test_generator_bounds(F):
    with pytest.raises(UnknownGenerator):
        parse_term("x3*v1", Q2, F)
    with pytest.raises(UnknownGenerator):
        parse_term("v2", Q2, F)
    # unbound parsing allows any sort-1 index
    assert parse_term("x7", Q2) == LieElement.generator(6, Q2)


def test_error_positions():
    with pytest.raises(TermSyntaxError) as exc:
        parse_term("x1 + + x2", Q)
    assert exc.value.line == 1
    assert exc.value.col == 6
    with pytest.raises(TermSyntaxError) as exc:
        parse_term("x1 +\n  * x2", Q)
    assert exc.value.line == 2


def test_unbalanced_and_trailing_input():
    for bad in ("(x1", "[x1,x2", "x1)", "x1 x2 extra )", "", "  "):
        with pytest.raises(TermSyntaxError):
            parse_term(bad, Q)


def test_module_round_trip_through_str(F):
    rng = random.Random(13)
    for _ in range(12):
        m = random_module_element(F, rng)
        assert parse_term(str(m), Q2, F) == m


def test_lie_round_trip_through_str(F):
    rng = random.Random(17)
    from repgeo.verbal import random_lie_element
    for _ in range(12):
        l = random_lie_element(F, rng)
        # the printed form is the expanded polynomial, so it re-parses
        # into the associative sort
        parsed = parse_term(str(l), Q2, F)
        assert parsed == l.poly
        assert F.lie_basis.is_lie(parsed)


def test_scalar_round_trip_through_str():
    rng = random.Random(19)
    for field in (Q, Q2):
        for _ in range(20):
            s = random_scalar(field, rng)
            assert parse_scalar(str(s), field) == s
