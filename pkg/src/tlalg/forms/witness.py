"""Null vectors of the trace form whose sum is not null.

At a root of unity (``l >= 3``) the candidates are ``(f_{l-1} (x) 1 (x) 1) w``
and ``(1 (x) 1 (x) f_{l-1}) w`` in ``TL_{l+1}``, for words ``w`` in the
generators of length at most ``degree_bound``.  A left candidate ``x`` and a
right candidate ``y`` with ``|x|^2 = |y|^2 = 0`` but ``|x+y|^2 != 0`` show
that the null set is not a subspace, so the form is indefinite.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ..diagrams import AlgebraElement
from ..jones_wenzl import jones_wenzl
from ..scalars import quantum_integer
from ..traces import TraceSpec, evaluate

__all__ = ["NoWitness", "NotFound", "WitnessPair", "candidate_words", "indefiniteness_witness", "target_value"]

DEFAULT_DEGREE_BOUND = 2


@dataclass
class WitnessPair:
    l: int
    gamma: object
    x: AlgebraElement
    y: AlgebraElement
    x_label: str
    y_label: str
    norms: tuple
    cross: object
    sum_norm: object
    target: object

    @property
    def matched(self) -> bool:
        return self.sum_norm == self.target

    def is_certificate(self) -> bool:
        return not self.norms[0] and not self.norms[1] and bool(self.sum_norm)

    def to_json(self) -> dict:
        return {
            "l": self.l,
            "gamma": str(self.gamma),
            "x": self.x_label,
            "y": self.y_label,
            "norms": [str(v) for v in self.norms],
            "cross": str(self.cross),
            "sum_norm": str(self.sum_norm),
            "target": str(self.target),
            "matched": self.matched,
        }


@dataclass
class NotFound:
    l: int
    gamma: object
    degree_bound: int
    null_candidates: int = 0

    def to_json(self) -> dict:
        return {"l": self.l, "gamma": str(self.gamma), "not_found": True, "degree_bound": self.degree_bound,
                "null_candidates": self.null_candidates}


@dataclass
class NoWitness:
    """``gamma = delta^{-2}``: the Jones trace, whose form is semi-definite."""

    l: int
    gamma: object
    reason: str = field(default="gamma equals delta^-2 (Jones trace)")

    def to_json(self) -> dict:
        return {"l": self.l, "gamma": str(self.gamma), "no_witness": self.reason}


def target_value(l: int, spec: TraceSpec):
    """``2 (-1)^l / [l-1] * c_{l+1,1}``."""
    f = spec.delta_field
    sign = 1 if l % 2 == 0 else -1
    return f.coerce(2 * sign) / quantum_integer(l - 1, f) * spec.c(l + 1)[(l + 1, 1)]


def candidate_words(n: int, degree_bound: int) -> list[tuple[int, ...]]:
    """Words without immediate repeats, ordered by length then lexicographically."""
    words = [()]
    layer = [()]
    for _ in range(degree_bound):
        layer = [w + (i,) for w in layer for i in range(1, n) if not w or w[-1] != i]
        words.extend(sorted(layer))
    return words


def _norm(x: AlgebraElement, spec: TraceSpec):
    return evaluate(x * x.star(), spec)


def indefiniteness_witness(l: int, gamma, degree_bound: int = DEFAULT_DEGREE_BOUND):
    spec = TraceSpec.root_of_unity(gamma, l)
    f = spec.delta_field
    target = target_value(l, spec)
    if l == 2:
        x = AlgebraElement.gen(3, 1, f)
        y = AlgebraElement.gen(3, 2, f)
        cross = evaluate(x * y.star(), spec)
        return WitnessPair(l, spec.gamma, x, y, "e1", "e2", (_norm(x, spec), _norm(y, spec)), cross,
                           _norm(x + y, spec), target)
    if spec.gamma * f.delta * f.delta == 1:
        return NoWitness(l, spec.gamma)
    n = l + 1
    proj = jones_wenzl(l - 1, f).element
    sides = (proj.include(2), proj.shift(2))
    pools: list[list] = [[], []]
    for side, base in enumerate(sides):
        seen = set()
        for w in candidate_words(n, degree_bound):
            x = base * AlgebraElement.word(n, w, f)
            key = frozenset(x.terms.items())
            if not x.terms or key in seen:
                continue
            seen.add(key)
            if not _norm(x, spec):
                tag = "f" + str(l - 1) + ("L" if side == 0 else "R")
                pools[side].append((tag + "".join(f"e{i}" for i in w), x))
    for (lx, x), (ly, y) in itertools.product(*pools):
        cross = evaluate(x * y.star(), spec)
        total = _norm(x + y, spec)
        if total:
            zero = f.zero()
            return WitnessPair(l, spec.gamma, x, y, lx, ly, (zero, zero), cross, total, target)
    return NotFound(l, spec.gamma, degree_bound, len(pools[0]) + len(pools[1]))
