"""Shared fixtures: the running separation example and small free objects.

The expensive session fixtures build the rank-(2,1) free representation of
the variety cut out by the identity x1*x2*x3*x4*x5*x6 (acting on the module)
over Q(sqrt 2), together with the one-relation quotient used throughout the
geometry tests.  Everything is exact, so fixtures are safe to share.
"""
import pytest

from repgeo.field import FieldDescriptor, automorphism_group
from repgeo.freealg import NCPoly
from repgeo.freelie import LieElement, standard_bracketing
from repgeo.representation import (FreeRep, Representation, VarietyDescriptor,
                                   span_of)
from repgeo.verbal import WordSystem, twist


@pytest.fixture(scope="session")
def field2():
    return FieldDescriptor.quadratic(2)


@pytest.fixture(scope="session")
def conj(field2):
    return next(a for a in automorphism_group(field2) if not a.is_identity())


@pytest.fixture(scope="session")
def variety6(field2):
    # six-factor products of Lie elements annihilate the module
    identity = NCPoly.word(tuple(range(6)), field2.one())
    return VarietyDescriptor(field2, 6, (identity,))


@pytest.fixture(scope="session")
def F(variety6):
    return FreeRep(variety6, 2, 1)


@pytest.fixture(scope="session")
def e1(field2):
    return LieElement.from_tree(standard_bracketing((0, 0, 0, 1, 1)), field2)


@pytest.fixture(scope="session")
def e2(field2):
    return LieElement.from_tree(standard_bracketing((0, 0, 1, 0, 1)), field2)


@pytest.fixture(scope="session")
def lam(field2):
    return field2.sqrt_gen()


@pytest.fixture(scope="session")
def tv(F, e1, e2, lam):
    v = F.module_generator(0)
    return F.act(e1.scale(lam) + e2, v)


@pytest.fixture(scope="session")
def H(F, tv):
    return Representation(F, span_of(F, [tv]))


@pytest.fixture(scope="session")
def W(field2, conj):
    return WordSystem(field2.one(), conj)


@pytest.fixture(scope="session")
def Hstar(H, W):
    return twist(H, W)
