"""Generalized infinite diagrams and their truncated inner products.

A generalized diagram is stored as a finite *core* on ``M`` strands followed
by an infinite tail of adjacent cup/cap pairs on strands ``(M+1, M+2)``,
``(M+3, M+4)``, ... (1-based).  Orbit elements are finite linear
combinations of such diagrams sharing the tail; the core may then be a
general algebra element.
"""

from __future__ import annotations

from dataclasses import dataclass, field


from .bratteli import orbit
from .diagrams import AlgebraElement
from .scalars import ThresholdValue, special_threshold
from .traces import TraceSpec, evaluate

__all__ = [
    "GeneralizedDiagram",
    "InnerProductSequence",
    "OrbitMismatch",
    "PositivityRange",
    "gen_inner",
    "orbit_split",
    "positivity_range",
    "truncate",
]


class OrbitMismatch(ValueError):
    pass


@dataclass(frozen=True)
class GeneralizedDiagram:
    core: AlgebraElement

    @property
    def start(self) -> int:
        """Number of core strands; the tail begins right after them."""
        return self.core.n

    @classmethod
    def tail_only(cls, field) -> "GeneralizedDiagram":
        """``e_1 e_3 e_5 ...``: no core at all."""
        return cls(AlgebraElement.identity(0, field))

    @classmethod
    def with_through_strands(cls, s: int, field) -> "GeneralizedDiagram":
        return cls(AlgebraElement.identity(s, field))

    def _single(self):
        if len(self.core.terms) != 1:
            raise ValueError("through strands and cups are defined for single diagrams")
        return next(iter(self.core.terms))

    @property
    def s(self) -> int:
        """Through strands (all of them sit in the core)."""
        if self.core.n == 0:
            return 0
        m = self._single()
        n = self.core.n
        return sum(1 for i in range(n) if m[i] >= n)

    def core_cups(self) -> int:
        if self.core.n == 0:
            return 0
        m = self._single()
        n = self.core.n
        return sum(1 for i in range(n) if m[i] < n and m[i] > i)

    def to_json(self) -> dict:
        return {"core": str(self.core), "core_strands": self.start, "tail": "adjacent pairs"}


def _tail_pairs(k: int, field) -> AlgebraElement:
    e = AlgebraElement.word(2, (1,), field)
    out = AlgebraElement.identity(0, field)
    for _ in range(k):
        out = out.tensor(e) if out.n else e
    return out


def _tensor(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    if a.n == 0:
        return b
    if b.n == 0:
        return a
    return a.tensor(b)


def truncate(w: GeneralizedDiagram, n: int) -> tuple[AlgebraElement, int]:
    """``(down_n w, c(down_n w))``.

    A tail pair cut in half becomes a through strand, so ``n = M + 2k + 1``
    gives ``core (x) e^{(x)k} (x) 1``.
    """
    if n < 1:
        raise ValueError("truncation level must be positive")
    if n < w.start:
        raise ValueError(f"level {n} cuts into the {w.start}-strand core")
    f = w.core.field
    k, rest = divmod(n - w.start, 2)
    out = _tensor(w.core, _tail_pairs(k, f))
    if rest:
        out = _tensor(out, AlgebraElement.identity(1, f))
    cups = (w.core_cups() + k) if len(w.core.terms) == 1 or w.core.n == 0 else None
    return out, cups


def _align(x: GeneralizedDiagram, m: int) -> GeneralizedDiagram:
    """Absorb tail pairs into the core until it has ``m`` strands."""
    extra = m - x.start
    if extra < 0 or extra % 2:
        raise OrbitMismatch(f"tails starting after {x.start} and {m} strands do not match")
    if not extra:
        return x
    return GeneralizedDiagram(_tensor(x.core, _tail_pairs(extra // 2, x.core.field)))


@dataclass
class InnerProductSequence:
    levels: list[int]
    terms: list
    verdict: str
    value: object = None
    stopped: str | None = None
    form: str = "star"

    def to_json(self) -> dict:
        out = {
            "form": self.form,
            "levels": self.levels,
            "terms": [str(t) for t in self.terms],
            "verdict": self.verdict,
        }
        if self.value is not None:
            out["value"] = str(self.value)
        if self.stopped:
            out["stopped"] = self.stopped
        return out


def _verdict(terms: list) -> tuple[str, object]:
    if len(terms) < 3:
        return "undetermined", None
    if all(not t for t in terms):
        return "zero", None
    if terms[-1] == terms[-2] == terms[-3]:
        return "stabilized", terms[-1]
    # the tail has period two strands, so compare q_{n+2} / q_n
    ratios = []
    for a, b in zip(terms, terms[2:]):
        if not a:
            return "divergent", None
        ratios.append(b / a)
    if len(ratios) >= 2 and all(r == ratios[0] for r in ratios):
        return "geometric", ratios[0]
    return "divergent", None


def gen_inner(x: GeneralizedDiagram, y: GeneralizedDiagram, w: GeneralizedDiagram, spec: TraceSpec,
              window: int = 6) -> InnerProductSequence:
    """Terms ``q_n = <down_n x, down_n y> / gamma^{c(down_n w)}`` past the last core strand.

    The star form is used for ``delta != 0``; at ``delta = 0`` the corrected
    involution replaces the star.  Levels where the corrected involution is
    not available end the sequence early (recorded in ``stopped``).
    """
    from .forms.diamond import MissingImage, diamond_zero

    start = max(x.start, y.start, w.start)
    if (start - w.start) % 2:
        start += 1
    xs, ys, ws = (_align(v, start) for v in (x, y, w))
    field = spec.delta_field
    use_diamond = field.delta_is_zero
    gamma = spec.gamma
    levels, terms, stopped = [], [], None
    for n in range(max(start, 1), max(start, 1) + window):
        ax, _ = truncate(xs, n)
        ay, _ = truncate(ys, n)
        _, cups = truncate(ws, n)
        try:
            if use_diamond:
                img = diamond_zero(ay)
                ax = ax if ax.n == img.n else ax.include(img.n - ax.n)
                value = evaluate(ax * img, spec)
            else:
                value = evaluate(ax * ay.star(), spec)
        except MissingImage as exc:
            stopped = f"no corrected image of e_{exc.i} at level {n}"
            break
        levels.append(n)
        terms.append(value / gamma**cups if cups else value)
    verdict, value = _verdict(terms)
    return InnerProductSequence(levels, terms, verdict, value, stopped, "diamond" if use_diamond else "star")


# ---------------------------------------------------------------------------
# positivity ranges and orbit blocks


@dataclass
class PositivityRange:
    n: int
    mode: object
    upper: ThresholdValue | None  # None means +infinity
    upper_open: bool = True
    case: str = ""

    def to_json(self) -> dict:
        return {
            "lower": "0",
            "upper": "inf" if self.upper is None else self.upper.describe(),
            "upper_open": self.upper_open,
            "case": self.case,
        }


def _threshold(k: int) -> ThresholdValue | None:
    # s_2 = 1/(4 cos^2(pi/2)) is infinite
    return None if k <= 2 else special_threshold(k)


def positivity_range(n: int, mode="generic") -> PositivityRange:
    """Values ``0 < gamma < upper`` giving a positive definite form on ``V(w)``, ``s(w) = n``."""
    if n < 0:
        raise ValueError("through-strand count must be non-negative")
    if mode == "generic":
        if n <= 1:
            return PositivityRange(n, mode, None, True, "n<=1")
        return PositivityRange(n, mode, _threshold(n + 2), True, "n>=2: s_{n+2}")
    l = int(mode)
    if l < 2:
        raise ValueError("l must be at least 2")
    if n <= 1:
        # gamma < delta^{-2} = s_l
        return PositivityRange(n, l, _threshold(l), True, "n<=1: delta^-2")
    if l == 2:
        k = n + 1 if n % 2 else n
        return PositivityRange(n, l, _threshold(k), True, "l=2: s_{n+1} (n odd), s_n (n even)")
    if n <= l - 1:
        return PositivityRange(n, l, _threshold(n + 2), True, "n<=l-1: s_{n+2}")
    if l + l // 2 <= n <= 2 * l - 2:
        j = (n + 1) % l
        return PositivityRange(n, l, _threshold(2 * j), True, "l+floor(l/2)<=n<=2l-2: s_{2((n+1) mod l)}")
    k = (n + 1) // l
    return PositivityRange(n, l, _threshold(k * l), True, "n=kl+i-1: s_{kl}")


def orbit_split(s: int, l: int) -> list[list[int]]:
    """Partition of ``{0, ..., s}`` by reflection orbits.

    The orbits ``<i>_l`` for ``0 <= i <= l-2`` (cut at ``s``) together with
    a singleton ``{kl-1}`` for every critical value ``kl - 1 <= s``.  The
    recursion started at ``i = l-1`` only visits every other critical value,
    so those values are listed individually.
    """
    if s < 0:
        raise ValueError("s must be non-negative")
    blocks = [orbit(i, l, s) for i in range(min(l - 2, s) + 1)]
    blocks += [[k * l - 1] for k in range(1, (s + 1) // l + 1)]
    return sorted(blocks, key=lambda b: b[0])


