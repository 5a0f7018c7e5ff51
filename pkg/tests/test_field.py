"""Exact scalar arithmetic in Q and quadratic extensions Q(sqrt d)."""
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from repgeo.field import (FieldDescriptor, MixedFields, NotSquareFree,
                          automorphism_group, conjugation,
                          identity_automorphism)

Q = FieldDescriptor.rationals()
Q2 = FieldDescriptor.quadratic(2)

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=9)


def scalars(field):
    if field.d is None:
        return rationals.map(field.scalar)
    return st.tuples(rationals, rationals).map(lambda t: field.scalar(*t))


def test_descriptor_construction():
    assert Q.d is None
    assert Q2.d == 2
    with pytest.raises(NotSquareFree):
        FieldDescriptor.quadratic(4)
    with pytest.raises(NotSquareFree):
        FieldDescriptor.quadratic(12)
    with pytest.raises(NotSquareFree):
        FieldDescriptor.quadratic(1)


def test_parse_names():
    assert FieldDescriptor.parse("Q") == Q
    assert FieldDescriptor.parse("Q(sqrt 2)") == Q2
    assert FieldDescriptor.parse("Q(sqrt 5)").d == 5
    with pytest.raises(ValueError):
        FieldDescriptor.parse("R")


def test_known_products():
    r = Q2.sqrt_gen()
    one = Q2.one()
    assert r * r == Q2.scalar(2)
    # (1 + sqrt 2)(1 - sqrt 2) = -1
    assert (one + r) * (one - r) == Q2.scalar(-1)
    assert (one + r).inverse() == -(one - r)


def test_norm_and_conjugate():
    s = Q2.scalar(3, 2)  # 3 + 2 sqrt 2
    assert s.conjugate() == Q2.scalar(3, -2)
    assert s.norm() == Fraction(9 - 2 * 4)
    assert (s * s.conjugate()) == Q2.scalar(s.norm())


def test_mixed_fields_rejected():
    with pytest.raises(MixedFields):
        Q.one() + Q2.one()
    with pytest.raises(MixedFields):
        Q2.sqrt_gen() * FieldDescriptor.quadratic(3).sqrt_gen()


@given(a=scalars(Q2), b=scalars(Q2), c=scalars(Q2))
def test_ring_laws_quadratic(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a + (-a) == Q2.zero()
    assert a * Q2.one() == a


@given(a=scalars(Q2))
def test_inverse_law(a):
    if not a.is_zero:
        assert a * a.inverse() == Q2.one()
        assert a / a == Q2.one()


@given(a=scalars(Q2), b=scalars(Q2))
def test_conjugation_is_a_homomorphism(a, b):
    assert (a + b).conjugate() == a.conjugate() + b.conjugate()
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    assert a.conjugate().conjugate() == a


def test_automorphism_groups():
    assert [phi.is_identity() for phi in automorphism_group(Q)] == [True]
    group = automorphism_group(Q2)
    assert len(group) == 2
    phi = conjugation(Q2)
    assert not phi.is_identity()
    assert phi.compose(phi).is_identity()
    assert phi.inverse() == phi
    moved = phi.moved_scalar()
    assert moved is not None and phi(moved) != moved
    assert identity_automorphism(Q2).moved_scalar() is None


@given(a=scalars(Q2), b=scalars(Q2))
def test_automorphism_respects_arithmetic(a, b):
    phi = conjugation(Q2)
    assert phi(a + b) == phi(a) + phi(b)
    assert phi(a * b) == phi(a) * phi(b)


def test_scalar_power_and_scale():
    s = Q2.scalar(1, 1)
    assert s ** 3 == s * s * s
    assert s ** 0 == Q2.one()
    assert s.scale(Fraction(1, 2)) * Q2.scalar(2) == s
