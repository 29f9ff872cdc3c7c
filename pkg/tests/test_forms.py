import random
from fractions import Fraction
from math import comb

import pytest

from tlalg.diagrams import AlgebraElement
from tlalg.forms import (
    Divergent,
    MissingImage,
    NoWitness,
    WitnessPair,
    default_table,
    diamond_gram,
    diamond_norm,
    diamond_zero,
    gram,
    indefiniteness_witness,
    inequivalence_ratios,
    l3_radical_example,
    radical_norm_bound,
)
from tlalg.forms.onb import unnorm_onb
from tlalg.linalg import signature
from tlalg.scalars import RationalField, real_cyclotomic
from tlalg.traces import TraceSpec, evaluate

Q = Fraction
F0 = real_cyclotomic(2)


def catalan(n):
    return comb(2 * n, n) // (n + 1)


def test_tl2_gram():
    g = Q(1, 5)
    spec = TraceSpec.generic(g, 3)
    f = spec.delta_field
    basis = [AlgebraElement.identity(2, f), AlgebraElement.gen(2, 1, f)]
    rep = gram(2, spec, basis=basis)
    assert rep.matrix == [[1, 3 * g], [3 * g, 9 * g]]
    assert rep.signature == (2, 0, 0)


def test_signature_examples():
    f = RationalField(3)
    assert signature([[1, 0], [0, 1]], f).triple == (2, 0, 0)
    assert signature([[0, 1], [1, 0]], f).triple == (1, 0, 1)
    assert signature([[1, 1], [1, 1]], f).triple == (1, 1, 0)


def test_signature_congruence_invariance(rng):
    f = RationalField(3)
    for _ in range(30):
        k = rng.randint(2, 5)
        d = [rng.choice([-2, -1, 0, 1, 3]) for _ in range(k)]
        base = [[Q(d[i]) if i == j else Q(0) for j in range(k)] for i in range(k)]
        # random unimodular upper-triangular P
        p = [[Q(1) if i == j else (Q(rng.randint(-3, 3)) if j > i else Q(0)) for j in range(k)] for i in range(k)]
        m = [[sum(p[a][i] * base[a][b] * p[b][j] for a in range(k) for b in range(k)) for j in range(k)]
             for i in range(k)]
        want = (sum(x > 0 for x in d), sum(x == 0 for x in d), sum(x < 0 for x in d))
        assert signature(m, f).triple == want


@pytest.mark.parametrize("n", range(1, 6))
def test_generic_positive(n):
    for g in (Q(1, 5), Q(1, 4)):
        rep = gram(n, TraceSpec.generic(g, 3))
        assert rep.signature == (catalan(n), 0, 0)


@pytest.mark.parametrize("n", [3, 4])
def test_not_positive_at_half(n):
    rep = gram(n, TraceSpec.generic(Q(1, 2), 3))
    assert not rep.is_positive_definite()


def test_delta_zero_star_gram_has_null_generator():
    spec = TraceSpec.root_of_unity(Q(1, 4), 2)
    rep = gram(3, spec)
    assert rep.matrix[rep.basis.index("e1")][rep.basis.index("e1")] == 0
    assert not rep.is_positive_definite()


def test_witness_delta_zero():
    w = indefiniteness_witness(2, Q(1, 4))
    assert isinstance(w, WitnessPair)
    assert w.norms == (0, 0) and w.sum_norm == Q(1, 2)


@pytest.mark.parametrize("l", [3, 4, 5])
def test_witness_matches_target(l):
    w = indefiniteness_witness(l, Q(1, 4))
    assert isinstance(w, WitnessPair)
    assert w.is_certificate() and w.matched
    if l == 3:
        assert w.sum_norm == Q(-3, 8)


def test_witness_jones_point():
    # l = 3: delta = 1, so gamma = delta^-2 = 1 is the Jones trace
    assert isinstance(indefiniteness_witness(3, 1), NoWitness)


def test_diamond_text_images():
    table = default_table()
    e1, e2 = AlgebraElement.gen(3, 1, F0), AlgebraElement.gen(3, 2, F0)
    assert diamond_zero(e1, table) == e2
    assert diamond_zero(e2, table) == e1
    img = diamond_zero(AlgebraElement.gen(5, 4, F0), table)
    want = AlgebraElement.zero(5, F0)
    for sign, w in ((1, (1,)), (1, (3,)), (-1, (1, 2, 3)), (-1, (3, 2, 1)), (1, (1, 3, 2)), (1, (2, 1, 3))):
        want = want + AlgebraElement.word(5, w, F0).scale(sign)
    assert img == want
    assert (img * img).is_zero()


@pytest.mark.parametrize("gamma", [Q(1, 5), Q(1, 4)])
def test_diamond_norms(gamma):
    table = default_table()
    for i in (1, 2, 4, 6):
        assert diamond_norm(AlgebraElement.gen(i + 1, i, F0), gamma, table) == gamma
    assert diamond_norm(AlgebraElement.gen(5, 3, F0), gamma, table) == 4 * gamma
    assert table.constructed() == [3]


@pytest.mark.parametrize("gamma", [Q(1, 5), Q(1, 4)])
def test_diamond_gram_positive(gamma):
    assert diamond_gram(3, gamma).signature == (5, 0, 0)
    assert diamond_gram(5, gamma).signature == (42, 0, 0)


def test_missing_image():
    with pytest.raises(MissingImage):
        diamond_zero(AlgebraElement.gen(7, 5, F0))


def _random_word_element(rng, n, field):
    x = AlgebraElement.zero(n, field)
    for _ in range(rng.randint(1, 3)):
        w = tuple(rng.randint(1, n - 1) for _ in range(rng.randint(0, 4)))
        x = x + AlgebraElement.word(n, w, field).scale(Q(rng.randint(-3, 3), rng.randint(1, 3)))
    return x


def test_diamond_laws():
    rng = random.Random(7)
    table = default_table()
    for _ in range(40):
        n = rng.choice([3, 5])
        x, y = _random_word_element(rng, n, F0), _random_word_element(rng, n, F0)
        assert diamond_zero(diamond_zero(x, table), table) == x
        assert diamond_zero(x * y, table) == diamond_zero(y, table) * diamond_zero(x, table)


def test_norm_domination():
    rng = random.Random(11)
    table = default_table()
    for gamma in (Q(1, 5), Q(1, 4)):
        spec = TraceSpec.root_of_unity(gamma, 2)
        for _ in range(30):
            x = _random_word_element(rng, rng.choice([3, 5]), F0)
            assert diamond_norm(x, gamma, table) >= evaluate(x * x.star(), spec)


def test_radical_bounds():
    assert radical_norm_bound(3, Q(1, 4), 1) == Q(16, 3)
    assert isinstance(radical_norm_bound(3, 1, 1), Divergent)
    assert isinstance(radical_norm_bound(3, 2, 1), Divergent)
    assert radical_norm_bound(3, 0, Q(5)) == 20
    assert not isinstance(radical_norm_bound(5, Q(1, 4), 1), Divergent)
    # delta^2 = golden ratio squared, so gamma = 1/2 is past delta^-2
    assert isinstance(radical_norm_bound(5, Q(1, 2), 1), Divergent)


def test_l3_series():
    s = l3_radical_example(Q(1, 4), 20)
    assert s.closed_form == 1
    assert s.partial_sums[-1] == 1 - 4 * Q(1, 4) ** 21
    assert l3_radical_example(0).closed_form == 0
    assert isinstance(l3_radical_example(1), Divergent)


def test_inequivalence():
    r = inequivalence_ratios(Q(1, 4), Q(1, 5), 3, 10)
    assert r == [Q(4, 5) ** i for i in range(1, 11)]
    assert all(a > b for a, b in zip(r, r[1:]))


def test_onb_numeric():
    for n in (3, 4, 5):
        rep = unnorm_onb(n, Q(1, 5))
        assert rep.passed, rep.to_json()
    assert unnorm_onb(5, Q(1, 5)).family_size == 42
