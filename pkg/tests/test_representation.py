"""Free representations, quotients, submodules, and rank recovery."""
import random

import pytest

from repgeo.field import FieldDescriptor
from repgeo.freealg import NCPoly, all_words
from repgeo.freelie import LieElement
from repgeo.representation import (FreeRep, NotSubmodule, Representation,
                                   VarietyDescriptor, cyclic_components,
                                   ibn_invariants, span_of)
from repgeo.verbal import random_lie_element, random_module_element

Q = FieldDescriptor.rationals()


def test_module_grading_of_running_example(F):
    assert [F.module_dim(d) for d in range(6)] == [1, 2, 4, 8, 16, 32]
    assert F.module_total_dim() == 63
    assert F.algebra.total_dim() == 63
    assert F.module_dim(6) == 0  # the identity kills the top slice


def test_lie_dims_are_witt_numbers(F):
    assert [F.lie_dim(d) for d in range(1, 7)] == [2, 1, 2, 3, 6, 9]


def test_degree_six_words_act_as_zero(F):
    v = F.module_generator(0)
    for w in list(all_words(2, 6))[:10]:
        assert F.act_from_poly(NCPoly.word(w, F.field.one()), v).is_zero
    # and below the cap nothing collapses
    assert not F.act_from_poly(
        NCPoly.word((0, 1, 0, 1, 0), F.field.one()), v).is_zero


def test_action_respects_brackets(F):
    rng = random.Random(3)
    for _ in range(8):
        a = random_lie_element(F, rng)
        b = random_lie_element(F, rng)
        m = random_module_element(F, rng)
        lhs = F.act(a.bracket(b, F.cap), m)
        rhs = F.mod_add(F.act(a, F.act(b, m)),
                        F.act(b, F.act(a, m)).scale(F.field.scalar(-1)))
        assert lhs == rhs


def test_action_is_bilinear(F):
    rng = random.Random(5)
    c = F.field.scalar(3, 1)
    for _ in range(5):
        a = random_lie_element(F, rng)
        b = random_lie_element(F, rng)
        m = random_module_element(F, rng)
        n = random_module_element(F, rng)
        assert F.act(a + b, m) == F.mod_add(F.act(a, m), F.act(b, m))
        assert F.act(a, F.mod_add(m, n)) == F.mod_add(F.act(a, m), F.act(a, n))
        assert F.act(a.scale(c), m) == F.act(a, m).scale(c)
        assert F.act(a, m.scale(c)) == F.act(a, m).scale(c)


def test_module_coords_round_trip(F):
    rng = random.Random(9)
    m = random_module_element(F, rng)
    assert F.module_from_vec(F.module_coords(m)) == m
    assert F.module_from_vec(m.vec()) == m


def test_module_element_parts(F):
    v = F.module_generator(0)
    m = F.act(LieElement.generator(0, F.field), v)
    p = m.part(0)
    assert list(p.terms) == [(0,)]
    assert m.degree() == 1


def test_span_of_and_submodule_closure(F, tv):
    sp = span_of(F, [tv])
    assert sp.contains(tv)
    x1 = LieElement.generator(0, F.field)
    # degree-5 element times anything dies at the cap, so the line is closed
    assert F.act(x1, tv).is_zero
    assert sp.action_violation() is None
    # a non-closed span is detected and closed on demand
    from repgeo.representation import ModuleSubspace
    v = F.module_generator(0)
    raw = ModuleSubspace(F)
    raw.add(F.act(x1, v))
    assert raw.action_violation() is not None
    closed = raw.action_closure()
    assert closed.action_violation() is None
    assert closed.span_contains(raw)


def test_quotient_dimensions(F, H, tv):
    assert H.module_total_dim() == 62
    assert H.reduce_module(tv).is_zero
    v = F.module_generator(0)
    assert not H.reduce_module(v).is_zero


def test_quotient_rejects_non_submodule(F):
    from repgeo.representation import ModuleSubspace
    x1 = LieElement.generator(0, F.field)
    raw = ModuleSubspace(F)
    raw.add(F.act(x1, F.module_generator(0)))
    with pytest.raises(NotSubmodule):
        Representation(F, raw)


def test_ibn_invariants_small_free_pairs():
    variety = VarietyDescriptor.free(Q, 3)
    for n1, n2 in ((1, 1), (2, 1), (2, 2)):
        rep = FreeRep(variety, n1, n2)
        assert ibn_invariants(rep) == (n1, n2)


def test_cyclic_components_partition_the_module():
    variety = VarietyDescriptor.free(Q, 3)
    rep = FreeRep(variety, 2, 2)
    comps = cyclic_components(rep)
    assert len(comps) == 2
    total = sum(len(c.basis()) for c in comps)
    assert total == rep.module_total_dim()
    # each component is the submodule generated by one module generator
    for j, comp in enumerate(comps):
        assert comp.contains(rep.module_generator(j))


def test_trivial_and_degenerate_guards():
    from repgeo.representation import DegenerateVariety, TrivialVariety
    # killing the module generator itself leaves no module at all
    with pytest.raises(TrivialVariety):
        bad = VarietyDescriptor(Q, 3, (NCPoly.unit(Q),))
        FreeRep(bad, 2, 1)
    # an action-degenerate identity (single letter acts as zero)
    with pytest.raises(DegenerateVariety):
        bad = VarietyDescriptor(Q, 3, (NCPoly.word((0,), Q.one()),))
        FreeRep(bad, 2, 1)
