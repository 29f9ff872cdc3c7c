from math import comb

import pytest

from tlalg.bratteli import Vertex, build_graph, path_count
from tlalg.diagrams import AlgebraElement
from tlalg.linalg import determinant, identity_matrix, matmul, rank
from tlalg.scalars import FormalDelta, RationalField, real_cyclotomic
from tlalg.standard import act_matrix, dim_standard, irr_dim, link_gram, standard_trace

from conftest import random_element

F = RationalField(3)


def test_dimensions():
    assert dim_standard(5, 0) == 1
    assert dim_standard(3, 1) == 2
    assert dim_standard(4, 1) == 3
    assert sum(dim_standard(4, p) ** 2 for p in range(3)) == comb(8, 4) // 5


@pytest.mark.parametrize("n", range(2, 15))
def test_restriction_count(n):
    for p in range(n // 2 + 1):
        below = dim_standard(n - 1, p) if p <= (n - 1) // 2 else 0
        below += dim_standard(n - 1, p - 1) if p >= 1 else 0
        assert dim_standard(n, p) == below


def test_action_examples():
    for n, p in ((3, 1), (4, 1), (4, 2)):
        assert act_matrix(AlgebraElement.identity(n, F), n, p) == identity_matrix(dim_standard(n, p), F)
    assert act_matrix(AlgebraElement.gen(2, 1, F), 2, 1) == [[3]]
    m = act_matrix(AlgebraElement.gen(4, 1, F), 4, 1)
    assert sum(m[i][i] for i in range(3)) == standard_trace(4, 1, AlgebraElement.gen(4, 1, F))


def test_traces():
    for n in range(1, 7):
        for p in range(n // 2 + 1):
            assert standard_trace(n, p, AlgebraElement.identity(n, F)) == dim_standard(n, p)
    assert standard_trace(2, 1, AlgebraElement.gen(2, 1, F)) == 3
    # V_{4,2}: two states; e1e3 fixes the state (12)(34) with two loops
    assert standard_trace(4, 2, AlgebraElement.word(4, (1, 3), F)) == 9


def test_module_law(rng):
    for _ in range(25):
        n = rng.randint(2, 5)
        p = rng.randint(0, n // 2)
        x, y = random_element(rng, n, F), random_element(rng, n, F)
        assert act_matrix(x * y, n, p) == matmul(act_matrix(x, n, p), act_matrix(y, n, p), F)


def test_link_gram_examples():
    assert rank(link_gram(2, 1, real_cyclotomic(2))) == 0
    g = link_gram(3, 1, real_cyclotomic(3))
    assert g == [[1, 1], [1, 1]]
    assert irr_dim(3, 1, 3) == 1


@pytest.mark.parametrize("n", range(1, 7))
def test_generic_rank_full(n):
    fd = FormalDelta()
    for p in range(n // 2 + 1):
        g = link_gram(n, p, fd)
        assert rank(g) == dim_standard(n, p)
        assert determinant(g, fd) != 0


def test_irr_dim_rules():
    for n in (2, 4, 6, 8):
        for p in range(1, n // 2):
            assert irr_dim(n, p, 2) == dim_standard(n, p) - irr_dim(n, p - 1, 2)
    for n in range(1, 9):
        for p in range(n // 2 + 1):
            if (n - 2 * p + 1) % 3 == 0:
                assert irr_dim(n, p, 3) == dim_standard(n, p)


@pytest.mark.parametrize("l", [2, 3])
def test_rank_equals_paths(l):
    g = build_graph(l, 8)
    field = real_cyclotomic(l)
    for n in range(1, 9):
        for v in g.vertices[n]:
            assert rank(link_gram(n, v.p, field)) == path_count(g, v), (n, v.p)
