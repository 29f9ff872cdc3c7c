"""Temperley-Lieb diagrams and the algebra they span.

Points of an ``n``-strand diagram are numbered counterclockwise: bottom points
``0..n-1`` from left to right, then top points ``n..2n-1`` from right to left,
so the top point above bottom position ``i`` is ``2n-1-i``.  With this order
a perfect matching is planar exactly when it is a valid bracket word.

A product ``a*b`` stacks ``a`` on top of ``b``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

from .scalars import ScalarField

__all__ = [
    "AlgebraElement",
    "DiagramError",
    "PlanarDiagram",
    "compose",
    "dagger_match",
    "diagram_matches",
    "enumerate_diagrams",
    "generator",
    "identity_match",
    "involution",
    "markov_closure_loops",
    "multiply",
    "normal_form_word",
    "parse_word",
    "partial_trace",
    "tensor",
    "word_diagram",
]

DEFAULT_ENUMERATION_BOUND = 10


class DiagramError(ValueError):
    """Invalid diagram data or incompatible operands."""


Match = tuple  # involution on 0..2n-1 stored as a tuple of partners


@dataclass(frozen=True)
class PlanarDiagram:
    n: int
    match: Match

    def __post_init__(self):
        if len(self.match) != 2 * self.n:
            raise DiagramError("match must list a partner for all 2n points")
        if not is_planar_matching(self.match):
            raise DiagramError(f"not a noncrossing perfect matching: {self.match}")

    def to_json(self) -> dict:
        return {"n": self.n, "match": list(self.match)}

    @classmethod
    def from_json(cls, data) -> "PlanarDiagram":
        return cls(int(data["n"]), tuple(int(m) for m in data["match"]))

    def is_identity(self) -> bool:
        return self.match == identity_match(self.n)


def is_planar_matching(match: Match) -> bool:
    size = len(match)
    if size % 2:
        return False
    stack = []
    for i, j in enumerate(match):
        if not 0 <= j < size or j == i or match[j] != i:
            return False
        if j > i:
            stack.append(i)
        elif not stack or stack.pop() != j:
            return False
    return not stack


@lru_cache(maxsize=None)
def identity_match(n: int) -> Match:
    last = 2 * n - 1
    return tuple(last - i for i in range(2 * n))


def _generator_match(n: int, i: int) -> Match:
    if not 1 <= i <= n - 1:
        raise DiagramError(f"generator index {i} outside 1..{n - 1}")
    m = list(identity_match(n))
    last = 2 * n - 1
    a, b = i - 1, i
    m[a], m[b] = b, a
    ta, tb = last - a, last - b
    m[ta], m[tb] = tb, ta
    return tuple(m)


def generator(n: int, i: int) -> PlanarDiagram:
    """The diagram of ``e_i`` in ``TL_n``: cup and cap at positions ``i-1, i``."""
    return PlanarDiagram(n, _generator_match(n, i))


def compose(a: Match, b: Match) -> tuple[Match, int]:
    """Stack ``a`` above ``b``; return the resulting matching and loop count."""
    size = len(a)
    n = size >> 1
    last = size - 1
    res = [-1] * size
    seen = [False] * n
    for s in range(size):
        if res[s] >= 0:
            continue
        if s < n:
            p = b[s]
            in_b = True
        else:
            p = a[s]
            in_b = False
        while True:
            if in_b:
                if p < n:
                    break
                m = last - p
                seen[m] = True
                p = a[m]
                in_b = False
            else:
                if p >= n:
                    break
                seen[p] = True
                p = b[last - p]
                in_b = True
        res[s] = p
        res[p] = s
    loops = 0
    for m in range(n):
        if seen[m]:
            continue
        loops += 1
        cur = m
        while not seen[cur]:
            seen[cur] = True
            m2 = a[cur]
            seen[m2] = True
            cur = last - b[last - m2]
    return tuple(res), loops


def dagger_match(a: Match) -> Match:
    last = len(a) - 1
    return tuple(last - a[last - i] for i in range(len(a)))


def _tensor_match(a: Match, b: Match) -> Match:
    n1, n2 = len(a) // 2, len(b) // 2
    n = n1 + n2
    last = 2 * n - 1

    def place_a(t):
        return t if t < n1 else last - (2 * n1 - 1 - t)

    def place_b(t):
        return n1 + t if t < n2 else last - (n1 + 2 * n2 - 1 - t)

    res = [0] * (2 * n)
    for t in range(2 * n1):
        res[place_a(t)] = place_a(a[t])
    for t in range(2 * n2):
        res[place_b(t)] = place_b(b[t])
    return tuple(res)


def _partial_trace_match(a: Match) -> tuple[Match, int]:
    """Join the last bottom point to the point above it."""
    n = len(a) // 2
    bottom, top = n - 1, n
    m = list(a)
    loops = 0
    if m[bottom] == top:
        loops = 1
    else:
        x, y = m[bottom], m[top]
        m[x], m[y] = y, x
    new_last = 2 * (n - 1) - 1

    def relabel(t):
        return t if t < n - 1 else new_last - (2 * n - 1 - t)

    res = [0] * (2 * n - 2)
    for t in range(2 * n):
        if t in (bottom, top):
            continue
        res[relabel(t)] = relabel(m[t])
    return tuple(res), loops


def markov_closure_loops(d: PlanarDiagram | Match) -> int:
    """Loops formed by joining every top point to the bottom point below it."""
    match = d.match if isinstance(d, PlanarDiagram) else d
    size = len(match)
    last = size - 1
    seen = [False] * size
    loops = 0
    for s in range(size):
        if seen[s]:
            continue
        loops += 1
        cur = s
        while not seen[cur]:
            seen[cur] = True
            partner = match[cur]
            seen[partner] = True
            cur = last - partner
    return loops


def _enumerate_matchings(points: list[int]) -> Iterator[dict]:
    if not points:
        yield {}
        return
    first = points[0]
    for k in range(1, len(points), 2):
        inner, outer = points[1:k], points[k + 1 :]
        for left in _enumerate_matchings(inner):
            for right in _enumerate_matchings(outer):
                pairs = {first: points[k], points[k]: first}
                pairs.update(left)
                pairs.update(right)
                yield pairs


@lru_cache(maxsize=None)
def _diagram_matches(n: int) -> tuple[Match, ...]:
    size = 2 * n
    return tuple(
        tuple(pairs[i] for i in range(size)) for pairs in _enumerate_matchings(list(range(size)))
    )


def enumerate_diagrams(n: int, bound: int = DEFAULT_ENUMERATION_BOUND) -> list[PlanarDiagram]:
    """All ``Catalan(n)`` diagrams of ``TL_n`` in a fixed order."""
    if n < 0:
        raise DiagramError("strand count must be non-negative")
    if n > bound:
        raise DiagramError(f"refusing to enumerate TL_{n}: bound is {bound}")
    return [PlanarDiagram(n, m) for m in _diagram_matches(n)]


def diagram_matches(n: int) -> tuple[Match, ...]:
    """Raw matchings in enumeration order (no bound check)."""
    return _diagram_matches(n)


# ---------------------------------------------------------------------------
# words and the staircase normal form


def parse_word(text: str | Iterable[int]) -> tuple[int, ...]:
    if isinstance(text, str):
        return tuple(int(tok) for tok in text.split())
    return tuple(int(i) for i in text)


def word_diagram(n: int, word: Iterable[int]) -> tuple[Match, int]:
    """Product of generators as a single diagram plus its loop count."""
    match = identity_match(n)
    loops = 0
    for i in word:
        match, extra = compose(match, _generator_match(n, i))
        loops += extra
    return match, loops


@lru_cache(maxsize=None)
def _normal_forms(n: int) -> dict[Match, tuple[int, ...]]:
    """Map every diagram of TL_n to its staircase word.

    Words are products of descending runs ``e_j e_{j-1} ... e_k`` whose tops
    and bottoms both strictly increase from run to run.  There are exactly
    Catalan(n) of them and their products are the distinct diagrams.
    """
    table: dict[Match, tuple[int, ...]] = {}

    def extend(word, match, prev_top, prev_bottom):
        if match in table:
            raise AssertionError("staircase words are not distinct")
        table[match] = word
        for top in range(prev_top + 1, n):
            for bottom in range(prev_bottom + 1, top + 1):
                run = tuple(range(top, bottom - 1, -1))
                m2, loops = match, 0
                for i in run:
                    m2, extra = compose(m2, _generator_match(n, i))
                    loops += extra
                if loops:
                    raise AssertionError("staircase word produced a loop")
                extend(word + run, m2, top, bottom)

    extend((), identity_match(n), 0, 0)
    return table


def normal_form_word(d: PlanarDiagram) -> tuple[int, ...]:
    return _normal_forms(d.n)[d.match]


def normal_form_of_match(match: Match) -> tuple[int, ...]:
    return _normal_forms(len(match) // 2)[match]


# ---------------------------------------------------------------------------
# algebra elements


class AlgebraElement:
    """A finite linear combination of ``n``-strand diagrams over a field.

    ``terms`` maps raw matchings to nonzero scalars.
    """

    __slots__ = ("n", "field", "terms")

    def __init__(self, n: int, field: ScalarField, terms: Mapping[Match, object] | None = None):
        self.n = n
        self.field = field
        self.terms = {} if terms is None else {m: c for m, c in terms.items() if c}

    # constructors -------------------------------------------------------------
    @classmethod
    def identity(cls, n: int, field: ScalarField) -> "AlgebraElement":
        return cls(n, field, {identity_match(n): field.one()})

    @classmethod
    def from_diagram(cls, d: PlanarDiagram | Match, field: ScalarField, coeff=1) -> "AlgebraElement":
        match = d.match if isinstance(d, PlanarDiagram) else tuple(d)
        return cls(len(match) // 2, field, {match: field.coerce(coeff)})

    @classmethod
    def gen(cls, n: int, i: int, field: ScalarField) -> "AlgebraElement":
        return cls(n, field, {_generator_match(n, i): field.one()})

    @classmethod
    def word(cls, n: int, word: Iterable[int] | str, field: ScalarField) -> "AlgebraElement":
        match, loops = word_diagram(n, parse_word(word))
        if loops and field.delta_is_zero:
            return cls(n, field)
        return cls(n, field, {match: field.delta**loops if loops else field.one()})

    @classmethod
    def zero(cls, n: int, field: ScalarField) -> "AlgebraElement":
        return cls(n, field)

    # inspection -----------------------------------------------------------------
    def items(self) -> Iterator[tuple[PlanarDiagram, object]]:
        for m in sorted(self.terms):
            yield PlanarDiagram(self.n, m), self.terms[m]

    def coefficient(self, d: PlanarDiagram | Match):
        match = d.match if isinstance(d, PlanarDiagram) else tuple(d)
        return self.terms.get(match, self.field.zero())

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def _check(self, other: "AlgebraElement"):
        if not isinstance(other, AlgebraElement):
            raise DiagramError("expected an AlgebraElement")
        if other.n != self.n:
            raise DiagramError(f"strand counts differ: {self.n} vs {other.n}")
        if other.field != self.field:
            raise DiagramError(f"fields differ: {self.field.name} vs {other.field.name}")

    # linear structure ---------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, AlgebraElement):
            return self + AlgebraElement.identity(self.n, self.field).scale(other)
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms[m] + c if m in terms else c
        return AlgebraElement(self.n, self.field, terms)

    def __radd__(self, other):
        return self + other

    def __neg__(self):
        return AlgebraElement(self.n, self.field, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, AlgebraElement):
            return self + (-self.field.coerce(other))
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, scalar) -> "AlgebraElement":
        s = scalar if not isinstance(scalar, (int,)) else self.field.coerce(scalar)
        if not s:
            return AlgebraElement(self.n, self.field)
        return AlgebraElement(self.n, self.field, {m: c * s for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        result = AlgebraElement.identity(self.n, self.field)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms)))

    # structure maps ------------------------------------------------------------
    def tensor(self, other: "AlgebraElement") -> "AlgebraElement":
        return tensor(self, other)

    def dagger(self) -> "AlgebraElement":
        return involution(self, "dagger")

    def star(self) -> "AlgebraElement":
        return involution(self, "star")

    def partial_trace(self) -> "AlgebraElement":
        return partial_trace(self)

    def include(self, extra: int = 1) -> "AlgebraElement":
        """Image under ``TL_n -> TL_{n+extra}``, ``x -> x (x) 1``."""
        return tensor(self, AlgebraElement.identity(extra, self.field))

    def shift(self, before: int) -> "AlgebraElement":
        """Image of ``1_before (x) x``."""
        return tensor(AlgebraElement.identity(before, self.field), self)

    def map_coefficients(self, fn, field: ScalarField | None = None) -> "AlgebraElement":
        target = field or self.field
        return AlgebraElement(self.n, target, {m: fn(c) for m, c in self.terms.items()})

    def specialise(self, field: ScalarField) -> "AlgebraElement":
        """Evaluate formal-delta coefficients at ``field.delta``."""
        delta = field.delta
        return AlgebraElement(self.n, field, {m: field.coerce(c.evaluate(delta)) for m, c in self.terms.items()})

    # serialisation -------------------------------------------------------------
    def to_json(self) -> list:
        return [
            {"diagram": {"n": self.n, "match": list(m)}, "coeff": self.field.to_json(self.terms[m])}
            for m in sorted(self.terms)
        ]

    @classmethod
    def from_json(cls, data: list, field: ScalarField, n: int | None = None) -> "AlgebraElement":
        terms = {}
        for entry in data:
            d = PlanarDiagram.from_json(entry["diagram"])
            n = d.n if n is None else n
            terms[d.match] = field.from_json(entry["coeff"])
        if n is None:
            raise DiagramError("cannot infer n from an empty element")
        return cls(n, field, terms)

    def to_words(self) -> list[tuple[object, tuple[int, ...]]]:
        return [(self.terms[m], normal_form_of_match(m)) for m in sorted(self.terms)]

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for coeff, word in self.to_words():
            mono = "".join(f"e{i}" for i in word) or "1"
            c = self.field.format(coeff)
            if c == "1":
                parts.append(mono)
            elif c == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"({c})*{mono}" if mono != "1" else f"({c})")
        return " + ".join(parts)

    def __repr__(self):
        return f"AlgebraElement(n={self.n}, {self})"


def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    a._check(b)
    if not a.terms or not b.terms:
        return AlgebraElement(a.n, a.field)
    terms = a.field.multiply_terms(a.terms, b.terms, compose)
    out = AlgebraElement.__new__(AlgebraElement)
    out.n, out.field, out.terms = a.n, a.field, terms
    return out


def tensor(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    if a.field != b.field:
        raise DiagramError("tensor factors live over different fields")
    terms = {}
    for m1, c1 in a.terms.items():
        for m2, c2 in b.terms.items():
            terms[_tensor_match(m1, m2)] = c1 * c2
    return AlgebraElement(a.n + b.n, a.field, terms)


def involution(a: AlgebraElement, kind: str = "dagger") -> AlgebraElement:
    """Reflect diagrams top to bottom; ``star`` also conjugates scalars."""
    if kind not in ("dagger", "star"):
        raise DiagramError(f"unknown involution {kind!r}")
    conj = a.field.conj if kind == "star" else (lambda c: c)
    return AlgebraElement(a.n, a.field, {dagger_match(m): conj(c) for m, c in a.terms.items()})


def partial_trace(a: AlgebraElement) -> AlgebraElement:
    if a.n < 1:
        raise DiagramError("partial trace needs at least one strand")
    delta = a.field.delta
    terms: dict = {}
    for m, c in a.terms.items():
        m2, loops = _partial_trace_match(m)
        value = c * delta if loops else c
        terms[m2] = terms[m2] + value if m2 in terms else value
    return AlgebraElement(a.n - 1, a.field, terms)
