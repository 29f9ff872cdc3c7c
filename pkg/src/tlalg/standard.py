"""Standard modules ``V_{n,p}`` in the link-state basis.

A link state on ``n`` points is stored as a tuple whose entry ``i`` is the
partner of point ``i`` under a cup, or ``-1`` if ``i`` carries a through
strand.  Cups never enclose a through strand.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

from .diagrams import AlgebraElement, Match
from .linalg import rank
from .scalars import ScalarField, real_cyclotomic

__all__ = [
    "LinkState",
    "StandardModule",
    "act_matrix",
    "act_state",
    "critical_data",
    "dim_standard",
    "irr_dim",
    "is_critical",
    "link_gram",
    "link_states",
    "standard_trace",
]


def dim_standard(n: int, p: int) -> int:
    """``d_{n,p} = C(n,p) - C(n,p-1)``."""
    if not 0 <= p <= n // 2:
        raise ValueError(f"label p={p} outside 0..{n // 2}")
    return comb(n, p) - (comb(n, p - 1) if p >= 1 else 0)


@dataclass(frozen=True)
class LinkState:
    n: int
    p: int
    matching: tuple

    def cups(self) -> list[tuple[int, int]]:
        return [(i, j) for i, j in enumerate(self.matching) if j > i]

    def defects(self) -> list[int]:
        return [i for i, j in enumerate(self.matching) if j < 0]


@lru_cache(maxsize=None)
def _states(n: int, p: int) -> tuple[tuple, ...]:
    found = []

    def build(pos, stack, partial, cups):
        if pos == n:
            if not stack and cups == p:
                found.append(tuple(partial))
            return
        remaining = n - pos
        # close the innermost open cup
        if stack:
            j = stack[-1]
            partial[pos] = j
            partial[j] = pos
            build(pos + 1, stack[:-1], partial, cups)
            partial[j] = -1
            partial[pos] = -1
        # open a cup (room must remain to close every open cup)
        if cups < p and remaining - 1 >= len(stack) + 1:
            partial[pos] = -2
            build(pos + 1, stack + [pos], partial, cups + 1)
            partial[pos] = -1
        # a through strand may not sit under an open cup
        if not stack:
            partial[pos] = -1
            build(pos + 1, stack, partial, cups)

    build(0, [], [-1] * n, 0)
    found.sort(key=lambda st: sorted((i, j) for i, j in enumerate(st) if j > i))
    return tuple(found)


def link_states(n: int, p: int) -> list[LinkState]:
    """Ordered basis of ``V_{n,p}``: lexicographic in the sorted cup list."""
    dim_standard(n, p)
    return [LinkState(n, p, st) for st in _states(n, p)]


@lru_cache(maxsize=None)
def _state_index(n: int, p: int) -> dict:
    return {st: k for k, st in enumerate(_states(n, p))}


def act_state(a: Match, state: tuple):
    """Diagram ``a`` stacked on a link state.

    Returns ``(new_state, loops)``, or ``None`` when through strands are
    joined (the result has more cups and is zero in ``V_{n,p}``).
    """
    n = len(state)
    last = 2 * n - 1
    res = [-2] * n
    seen = [False] * n
    defects = 0
    for pos in range(n):
        if res[pos] != -2:
            continue
        p = a[last - pos]
        while True:
            if p >= n:
                q = last - p
                res[pos] = q
                res[q] = pos
                break
            seen[p] = True
            w = state[p]
            if w < 0:
                res[pos] = -1
                defects += 1
                break
            seen[w] = True
            p = a[w]
    if defects != state.count(-1):
        return None
    loops = 0
    for m in range(n):
        if seen[m]:
            continue
        loops += 1
        cur = m
        while not seen[cur]:
            seen[cur] = True
            m2 = state[cur]
            seen[m2] = True
            cur = a[m2]
    return tuple(res), loops


def act_matrix(x: AlgebraElement, n: int, p: int):
    """Matrix of ``x`` on the ordered link basis of ``V_{n,p}``."""
    if x.n != n:
        raise ValueError(f"element lives in TL_{x.n}, not TL_{n}")
    field = x.field
    states = _states(n, p)
    index = _state_index(n, p)
    zero = field.zero()
    dim = len(states)
    mat = [[zero] * dim for _ in range(dim)]
    delta = field.delta
    skip = field.delta_is_zero
    for m, c in x.terms.items():
        for j, st in enumerate(states):
            out = act_state(m, st)
            if out is None:
                continue
            new, loops = out
            if loops:
                if skip:
                    continue
                value = c * delta**loops
            else:
                value = c
            i = index[new]
            mat[i][j] = mat[i][j] + value
    return mat


@lru_cache(maxsize=200_000)
def trace_profile(match: Match) -> tuple:
    """For each label ``p``: the multiset of loop counts over fixed link states.

    ``trace_profile(m)[p]`` is a tuple of ``(loops, count)`` pairs such that
    ``t_{n,p}(m) = sum count * delta**loops``.  It does not depend on delta,
    so it is cached across fields.
    """
    n = len(match) // 2
    profile = []
    for p in range(n // 2 + 1):
        counts: dict[int, int] = {}
        for st in _states(n, p):
            out = act_state(match, st)
            if out is not None and out[0] == st:
                counts[out[1]] = counts.get(out[1], 0) + 1
        profile.append(tuple(sorted(counts.items())))
    return tuple(profile)


def standard_trace(n: int, p: int, x: AlgebraElement):
    """``t_{n,p}(x)``: the trace of ``x`` acting on ``V_{n,p}``."""
    if x.n != n:
        raise ValueError(f"element lives in TL_{x.n}, not TL_{n}")
    dim_standard(n, p)
    field = x.field
    delta = field.delta
    total = field.zero()
    for m, c in x.terms.items():
        for loops, count in trace_profile(m)[p]:
            if loops and field.delta_is_zero:
                continue
            total = total + c * count * (delta**loops if loops else 1)
    return total


def _pair_states(u: tuple, v: tuple):
    """Loops formed by gluing ``u`` (reflected) onto ``v``; ``None`` if defects meet."""
    n = len(u)
    seen = [False] * n
    for start in range(n):
        if u[start] >= 0:
            continue
        # follow the strand from a defect of u, alternating v-cups and u-cups
        cur = start
        while True:
            seen[cur] = True
            nxt = v[cur]
            if nxt < 0:
                break  # reached a defect of v: the through strand survives
            seen[nxt] = True
            cur = u[nxt]
            if cur < 0:
                return None  # two defects of u joined
    loops = 0
    for start in range(n):
        if seen[start]:
            continue
        if v[start] < 0:
            return None  # two defects of v joined
        loops += 1
        cur = start
        while not seen[cur]:
            seen[cur] = True
            w = v[cur]
            seen[w] = True
            cur = u[w]
    return loops


def link_gram(n: int, p: int, field: ScalarField):
    """Bilinear form on ``V_{n,p}``: ``delta**loops`` or 0 if defects pair up."""
    states = _states(n, p)
    delta = field.delta
    zero, one = field.zero(), field.one()
    gram = []
    for u in states:
        row = []
        for v in states:
            loops = _pair_states(u, v)
            if loops is None:
                row.append(zero)
            else:
                row.append(delta**loops if loops else one)
        gram.append(row)
    return gram


# ---------------------------------------------------------------------------
# criticality and irreducible dimensions


def critical_data(n: int, p: int, l: int) -> tuple[int, int]:
    """``(k, r)`` with ``n - 2p + 1 = k*l + r`` and ``1 <= r <= l``."""
    if l < 2:
        raise ValueError("l must be at least 2")
    if not 0 <= p <= n // 2:
        raise ValueError(f"invalid vertex ({n},{p})")
    m = n - 2 * p + 1
    k = (m - 1) // l
    return k, m - k * l


def is_critical(n: int, p: int, l: int) -> bool:
    return critical_data(n, p, l)[1] == l


def _irr_dim_recursive(n: int, p: int, l: int) -> int:
    if p < 0:
        return 0
    _, r = critical_data(n, p, l)
    if r == l:
        return dim_standard(n, p)
    lower = p - l + r
    if lower < 0:
        return dim_standard(n, p)
    return dim_standard(n, p) - _irr_dim_recursive(n, lower, l)


class IrreducibleDimensionMismatch(AssertionError):
    pass


@lru_cache(maxsize=None)
def irr_dim(n: int, p: int, l: int) -> int:
    """``dim L_{n,p}`` at a root of unity of order ``2l``.

    Computed twice: as the rank of the link form over ``Q(2cos(pi/l))`` and
    from the exact sequence ``0 -> L_{n,p-l+r} -> V_{n,p} -> L_{n,p} -> 0``.
    The two must agree.
    """
    by_rank = rank(link_gram(n, p, real_cyclotomic(l)))
    by_sequence = _irr_dim_recursive(n, p, l)
    if by_rank != by_sequence:
        raise IrreducibleDimensionMismatch(
            f"L_({n},{p}) at l={l}: rank {by_rank} but exact sequence gives {by_sequence}"
        )
    return by_rank


@dataclass
class StandardModule:
    n: int
    p: int
    field: ScalarField

    @property
    def basis(self) -> list[LinkState]:
        return link_states(self.n, self.p)

    @property
    def dimension(self) -> int:
        return dim_standard(self.n, self.p)

    def matrix(self, x: AlgebraElement):
        return act_matrix(x, self.n, self.p)

    def trace(self, x: AlgebraElement):
        return standard_trace(self.n, self.p, x)

    def gram(self):
        return link_gram(self.n, self.p, self.field)
