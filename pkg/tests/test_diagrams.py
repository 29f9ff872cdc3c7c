from fractions import Fraction
from math import comb

import pytest

from tlalg.diagrams import (
    AlgebraElement,
    diagram_matches,
    enumerate_diagrams,
    PlanarDiagram,
    generator,
    identity_match,
    markov_closure_loops,
    normal_form_word,
    tensor,
)
from tlalg.scalars import FormalDelta, RationalField

from conftest import random_element

F = RationalField(3)


def catalan(n):
    return comb(2 * n, n) // (n + 1)


def test_generator_examples():
    assert generator(3, 1) != generator(3, 2)
    e1, e3 = AlgebraElement.gen(4, 1, F), AlgebraElement.gen(4, 3, F)
    assert e1 * e3 == e3 * e1
    assert len(e1 * e3) == 1


def test_multiply_examples():
    e1, e2 = AlgebraElement.gen(3, 1, F), AlgebraElement.gen(3, 2, F)
    assert e1 * e1 == e1.scale(3)
    assert e1 * e2 * e1 == e1
    fd = FormalDelta()
    f2 = AlgebraElement.identity(2, fd) - AlgebraElement.gen(2, 1, fd).scale(1 / fd.delta)
    assert f2 * f2 == f2


@pytest.mark.parametrize("n", range(2, 9))
def test_relations(n):
    for field in (F, FormalDelta()):
        e = [None] + [AlgebraElement.gen(n, i, field) for i in range(1, n)]
        for i in range(1, n):
            assert e[i] * e[i] == e[i].scale(field.delta)
            for j in range(1, n):
                if abs(i - j) == 1:
                    assert e[i] * e[j] * e[i] == e[i]
                elif abs(i - j) > 1:
                    assert e[i] * e[j] == e[j] * e[i]


def test_tensor_examples():
    e = AlgebraElement.gen(2, 1, F)
    assert tensor(e, e) == AlgebraElement.word(4, (1, 3), F)
    x = AlgebraElement.word(3, (1, 2), F)
    assert tensor(x, AlgebraElement.identity(1, F)) == AlgebraElement.word(4, (1, 2), F)
    one = AlgebraElement.identity(1, F)
    assert tensor(one, one) == AlgebraElement.identity(2, F)


def test_involution_examples(rng):
    e1, e2 = AlgebraElement.gen(3, 1, F), AlgebraElement.gen(3, 2, F)
    assert e1.dagger() == e1
    assert (e1 * e2).dagger() == e2 * e1
    for _ in range(20):
        a = random_element(rng, 4, F)
        assert a.dagger().dagger() == a


def test_partial_trace_examples():
    for n in range(2, 6):
        assert AlgebraElement.identity(n, F).partial_trace() == AlgebraElement.identity(n - 1, F).scale(3)
        assert AlgebraElement.gen(n, n - 1, F).partial_trace() == AlgebraElement.identity(n - 1, F)


def test_closure_loops():
    assert markov_closure_loops(generator(2, 1)) == 1
    assert markov_closure_loops(generator(5, 1)) == 4
    e1e3 = next(iter(AlgebraElement.word(4, (1, 3), F).terms))
    assert markov_closure_loops(e1e3) == 2
    for n in range(1, 6):
        assert markov_closure_loops(next(iter(AlgebraElement.identity(n, F).terms))) == n


@pytest.mark.parametrize("n", range(1, 9))
def test_catalan_counts(n):
    assert len(enumerate_diagrams(n)) == catalan(n)


@pytest.mark.parametrize("n", range(1, 7))
def test_normal_form_round_trip(n):
    for d in enumerate_diagrams(n):
        w = normal_form_word(d)
        x = AlgebraElement.word(n, w, F)
        assert x == AlgebraElement.from_diagram(d, F)
    assert normal_form_word(PlanarDiagram(n, identity_match(n))) == ()
    if n >= 2:
        assert normal_form_word(generator(n, 1)) == (1,)


def test_json_round_trip(rng):
    for _ in range(10):
        a = random_element(rng, 4, F)
        assert AlgebraElement.from_json(a.to_json(), F, 4) == a
    d = generator(4, 2)
    assert type(d).from_json(d.to_json()) == d


def test_conditional_expectation(rng):
    for _ in range(20):
        a = random_element(rng, 4, F)
        b = random_element(rng, 3, F)
        assert (a * b.include(1)).partial_trace() == a.partial_trace() * b


def test_incompatible_operands():
    with pytest.raises(ValueError):
        AlgebraElement.gen(3, 1, F) * AlgebraElement.gen(4, 1, F)
    with pytest.raises(ValueError):
        AlgebraElement.gen(3, 3, F)
