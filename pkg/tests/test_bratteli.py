import pytest

from tlalg.bratteli import Vertex, build_graph, critical_info, orbit, path_count
from tlalg.standard import dim_standard, is_critical


def test_critical_examples():
    assert is_critical(2, 0, 3)
    info = critical_info(4, 1, 3)
    assert info.critical and info.r == 3
    info = critical_info(5, 1, 3)
    assert (info.k, info.r) == (1, 1) and not info.critical


def test_edges():
    g = build_graph("generic", 6)
    assert g.down(Vertex(4, 1)) == {Vertex(3, 0): 1, Vertex(3, 1): 1}
    g3 = build_graph(3, 6)
    assert g3.down(Vertex(4, 1)) == {Vertex(3, 1): 1, Vertex(3, 0): 2}
    g2 = build_graph(2, 6)
    assert [v.p for v in g2.vertices[4]] == [0, 1]


def test_path_counts():
    g = build_graph("generic", 14)
    for n in range(1, 15):
        for v in g.vertices[n]:
            assert path_count(g, v) == dim_standard(n, v.p)
    assert path_count(build_graph(3, 4), Vertex(3, 1)) == 1


def test_no_invalid_labels():
    for mode in ("generic", 2, 3, 4):
        g = build_graph(mode, 10)
        for n, vs in g.vertices.items():
            assert all(0 <= v.p <= n // 2 for v in vs)
    g2 = build_graph(2, 10)
    # r(n,p) = 2 exactly on odd levels, where TL_n(0) is semisimple
    assert all(v.n % 2 == 1 for v in g2.critical)


def test_orbits():
    assert orbit(1, 3, 13) == [1, 3, 7, 9, 13]
    assert orbit(0, 2, 6) == [0, 2, 4, 6]
    assert orbit(2, 5, 2) == [2]


@pytest.mark.parametrize("l", [2, 3, 4, 5])
def test_orbit_reflection(l):
    for i in range(l - 1):
        values = orbit(i, l, 60)
        assert values == sorted(set(values))
        for k in range(1, len(values)):
            assert values[k - 1] + values[k] == 2 * k * l - 2


def test_dot_and_json():
    g = build_graph(3, 8)
    dot = g.to_dot()
    assert dot.startswith("digraph") and "critical" in dot
    import json

    assert json.loads(g.dumps()) == g.to_json()
