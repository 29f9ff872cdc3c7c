"""Bratteli diagrams of the Temperley-Lieb tower and reflection orbits."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

from .standard import critical_data, is_critical

__all__ = [
    "BratteliGraph",
    "CriticalData",
    "Vertex",
    "build_graph",
    "orbit",
    "path_count",
]


@dataclass(frozen=True, order=True)
class Vertex:
    n: int
    p: int


@dataclass(frozen=True)
class CriticalData:
    k: int
    r: int
    l: int

    @property
    def critical(self) -> bool:
        return self.r == self.l


def critical_info(n: int, p: int, l: int) -> CriticalData:
    k, r = critical_data(n, p, l)
    return CriticalData(k, r, l)


@dataclass
class BratteliGraph:
    """Levels ``0..levels``; ``edges[v]`` maps lower vertices to multiplicities."""

    mode: str | int  # "generic" or the integer l
    levels: int
    vertices: dict[int, list[Vertex]] = field(default_factory=dict)
    edges: dict[Vertex, dict[Vertex, int]] = field(default_factory=dict)
    critical: set[Vertex] = field(default_factory=set)

    def __contains__(self, v: Vertex) -> bool:
        return v.p in {u.p for u in self.vertices.get(v.n, [])}

    def down(self, v: Vertex) -> dict[Vertex, int]:
        return self.edges.get(v, {})

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "levels": self.levels,
            "vertices": [[v.n, v.p] for n in sorted(self.vertices) for v in self.vertices[n]],
            "critical": sorted([v.n, v.p] for v in self.critical),
            "edges": [
                {"from": [v.n, v.p], "to": [u.n, u.p], "multiplicity": m}
                for v in sorted(self.edges)
                for u, m in sorted(self.edges[v].items())
            ],
        }

    def to_dot(self) -> str:
        name = "generic" if self.mode == "generic" else f"l{self.mode}"
        lines = [f"digraph bratteli_{name} {{", "  rankdir=TB;", "  node [shape=circle];"]
        for n in sorted(self.vertices):
            row = []
            for v in self.vertices[n]:
                ident = f"v{v.n}_{v.p}"
                attrs = f'label="{v.n},{v.p}"'
                if v in self.critical:
                    attrs += ', color=red, style=bold, xlabel="critical"'
                lines.append(f"  {ident} [{attrs}];")
                row.append(ident)
            lines.append(f"  {{ rank=same; {' '.join(row)} }}")
        for v in sorted(self.edges):
            for u, m in sorted(self.edges[v].items()):
                for _ in range(m):
                    lines.append(f"  v{u.n}_{u.p} -> v{v.n}_{v.p};")
        lines.append("}")
        return "\n".join(lines)

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def _labels(mode, n: int) -> list[int]:
    top = n // 2
    if mode == 2 and n % 2 == 0 and n > 0:
        # no irreducible L_{n,n/2} at delta = 0
        top = n // 2 - 1
    return list(range(top + 1))


def build_graph(mode: str | int, levels: int) -> BratteliGraph:
    """Graph on levels ``0..levels``.

    ``mode`` is ``"generic"`` or an integer ``l >= 2``.  For ``l = 2`` the
    restriction theorems of that case are used directly: even levels restrict
    to a single copy of the label below, odd levels restrict like standard
    modules of the even level.
    """
    if levels < 1:
        raise ValueError("need at least one level")
    if mode != "generic" and (not isinstance(mode, int) or mode < 2):
        raise ValueError(f"mode must be 'generic' or an integer l >= 2, got {mode!r}")
    g = BratteliGraph(mode=mode, levels=levels)
    for n in range(levels + 1):
        g.vertices[n] = [Vertex(n, p) for p in _labels(mode, n)]
        if mode != "generic":
            for v in g.vertices[n]:
                if is_critical(v.n, v.p, mode):
                    g.critical.add(v)
    for n in range(1, levels + 1):
        below = {v.p for v in g.vertices[n - 1]}
        for v in g.vertices[n]:
            out: dict[Vertex, int] = {}

            def add(p, mult=1):
                if p in below:
                    u = Vertex(n - 1, p)
                    out[u] = out.get(u, 0) + mult

            if mode == "generic":
                add(v.p)
                add(v.p - 1)
            elif mode == 2:
                if n % 2 == 0:
                    add(v.p)
                else:
                    # V_{n-1,p} has factors L_{n-1,p}, L_{n-1,p-1}; V_{n-1,p-1}
                    # has L_{n-1,p-1}, L_{n-1,p-2}
                    add(v.p)
                    add(v.p - 1, 2)
                    add(v.p - 2)
            else:
                l = mode
                if v in g.critical:
                    add(v.p)
                    add(v.p - 1, 2)
                    add(v.p - l)
                else:
                    add(v.p)
                    if v.p - 1 >= 0 and not is_critical(n - 1, v.p - 1, l):
                        add(v.p - 1)
            g.edges[v] = out
    return g


def path_count(graph: BratteliGraph, vertex: Vertex) -> int:
    """Number of descending paths from ``vertex`` to ``(1,0)``, with multiplicity."""
    if vertex not in graph:
        raise ValueError(f"{vertex} is not a vertex of the graph")
    memo: dict[Vertex, int] = {Vertex(1, 0): 1}

    def count(v: Vertex) -> int:
        if v in memo:
            return memo[v]
        if v.n <= 1:
            return 0
        total = sum(m * count(u) for u, m in graph.down(v).items())
        memo[v] = total
        return total

    return count(vertex)


@lru_cache(maxsize=None)
def _orbit(i: int, l: int, cap: int) -> tuple[int, ...]:
    values = [i]
    k, prev = 1, i
    while True:
        nxt = 2 * k * l - 2 - prev
        if nxt > cap:
            break
        if nxt != prev:  # a critical value reflects onto itself
            values.append(nxt)
        prev = nxt
        k += 1
    return tuple(values)


def orbit(i: int, l: int, cap: int) -> list[int]:
    """``<i>_l^{(cap)}``: values of ``r(0) = i``, ``r(k) = 2kl - 2 - r(k-1)`` up to ``cap``."""
    if l < 2:
        raise ValueError("l must be at least 2")
    if not 0 <= i <= l - 1:
        raise ValueError(f"orbit start {i} outside 0..{l - 1}")
    if cap < i:
        raise ValueError("cap must be at least the starting value")
    return list(_orbit(i, l, cap))
