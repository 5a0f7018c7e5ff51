"""Commutative coefficient polynomials and bounded ideal membership."""
import pytest
from hypothesis import given, settings, strategies as st

from repgeo.field import FieldDescriptor
from repgeo.params import (CoeffPoly, ParamRing, ideal_membership,
                           monomial_key, power_membership, verify_combination)

Q = FieldDescriptor.rationals()
R = ParamRing(Q, ("x", "y", "z"))
X, Y, Z = R.var("x"), R.var("y"), R.var("z")

small = st.integers(min_value=-3, max_value=3)


@st.composite
def ring_polys(draw):
    acc = R.zero()
    for _ in range(draw(st.integers(0, 3))):
        mono = R.const(Q.scalar(draw(small)))
        for v in (X, Y, Z):
            for _ in range(draw(st.integers(0, 2))):
                mono = mono * v
        acc = acc + mono
    return acc


@given(p=ring_polys(), q=ring_polys(), r=ring_polys())
def test_ring_laws(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert p * q == q * p
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p * R.one() == p
    assert (p - p).is_zero


@given(p=ring_polys(), q=ring_polys())
def test_evaluate_is_a_homomorphism(p, q):
    vals = {"x": Q.scalar(2), "y": Q.scalar(-1), "z": Q.scalar(3, 1) if Q.d
            else Q.scalar(3)}
    assert (p * q).evaluate(vals) == p.evaluate(vals) * q.evaluate(vals)
    assert (p + q).evaluate(vals) == p.evaluate(vals) + q.evaluate(vals)


def test_degree_and_monomial_key():
    p = X * Y * Y + Z
    assert p.degree() == 3
    assert R.zero().degree() == 0
    # graded order: lower total degree sorts first
    assert monomial_key((1, 0, 0)) < monomial_key((0, 2, 0))


def test_substitute_into_other_ring():
    S = ParamRing(Q, ("u", "v"))
    mapping = {"x": S.var("u"), "y": S.var("u") + S.var("v"), "z": S.zero()}
    p = X * Y + Z
    image = p.substitute(mapping, S)
    u, v = S.var("u"), S.var("v")
    assert image == u * u + u * v


def test_membership_basic():
    target = X * Y
    cof = ideal_membership(target, [X], 3)
    assert cof is not None
    assert verify_combination(target, [X], cof)
    # x is not in (x*y): everything in the ideal has degree >= 2
    assert ideal_membership(X, [X * Y], 6) is None


def test_membership_multiple_generators():
    gens = [X + Y, Y + Z]
    target = X - Z  # (x + y) - (y + z)
    cof = ideal_membership(target, gens, 2)
    assert cof is not None
    assert verify_combination(target, gens, cof)


def test_membership_zero_target():
    cof = ideal_membership(R.zero(), [X, Y], 2)
    assert cof is not None
    assert all(c.is_zero for c in cof)


def test_power_membership_finds_smallest_power():
    # x itself is not in (x^2), but x^2 is
    got = power_membership(X, [X * X], 3, 6)
    assert got is not None
    power, cof = got
    assert power == 2
    assert verify_combination(X ** 2, [X * X], cof)


def test_power_membership_gives_up():
    assert power_membership(X, [Y], 3, 6) is None


def test_column_limit_makes_search_inconclusive():
    target = X * Y
    assert ideal_membership(target, [X], 3, column_limit=1) is None
    assert ideal_membership(target, [X], 3, column_limit=10 ** 6) is not None


def test_verify_combination_rejects_wrong_data():
    assert not verify_combination(X, [X], [R.one() + R.one()])
    assert not verify_combination(X, [X], [])
    assert verify_combination(X, [X], [R.one()])
