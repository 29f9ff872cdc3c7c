"""Extremal traces on the Temperley-Lieb tower.

The generic trace with parameter ``gamma`` restricts to ``TL_n`` as
``sum_i c_{n,i} t_{n,i}`` where ``t_{n,i}`` is the matrix trace on the
standard module ``V_{n,i}`` and

    c_{0,0} = c_{1,0} = 1,   c_{n,0} = c_{n-1,0} - gamma c_{n-2,0},
    c_{n,i} = gamma^i c_{n-2i,0}.

At a root of unity of order ``2l`` the same functional is expanded in the
irreducible traces with coefficients ``lambda_{n,i}``.  Evaluation always
uses the ``c``-table against standard-module traces, which exist for every
delta.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable

from .bratteli import build_graph
from .diagrams import AlgebraElement, diagram_matches, markov_closure_loops, word_diagram
from .jones_wenzl import jones_wenzl, jw_defined, trivial_cover_idempotent
from .scalars import (
    RationalField,
    ScalarField,
    ThresholdValue,
    as_fraction,
    real_cyclotomic,
    sign_of,
    special_threshold,
)
from .standard import critical_data, dim_standard, is_critical, trace_profile

__all__ = [
    "CoefficientTable",
    "PositivityReport",
    "TraceSpec",
    "Unsupported",
    "classify_gamma",
    "threshold_residual",
    "evaluate",
    "evaluate_word_oracle",
    "generic_coeffs",
    "idempotent_trace_check",
    "jones_consistency",
    "lambda_consistency",
    "rou_lambda",
]


class Unsupported(ValueError):
    """The word lies outside the class handled by the run formula."""


@dataclass
class CoefficientTable:
    """Rows ``(n, i) -> value`` for ``0 <= i <= n // 2``."""

    kind: str  # "c" or "lambda"
    gamma: object
    levels: int
    values: dict[tuple[int, int], object]
    l: int | None = None

    def __getitem__(self, key: tuple[int, int]):
        return self.values[key]

    def get(self, n: int, i: int, default=0):
        return self.values.get((n, i), default)

    def rows(self, start: int = 1) -> list[tuple[int, int, object]]:
        return [(n, i, v) for (n, i), v in sorted(self.values.items()) if n >= start]

    def to_csv(self, start: int = 1) -> str:
        lines = ["table,n,i,value"]
        lines += [f"{self.kind},{n},{i},{v}" for n, i, v in self.rows(start)]
        return "\n".join(lines)

    def to_json(self, start: int = 1) -> dict:
        out = {
            "kind": self.kind,
            "mode": "generic" if self.l is None else "root_of_unity",
            "gamma": str(self.gamma),
            "table": [{"n": n, "i": i, "value": str(v)} for n, i, v in self.rows(start)],
        }
        if self.l is not None:
            out["l"] = self.l
        return out


def generic_coeffs(gamma, levels: int) -> CoefficientTable:
    """``c_{n,i}`` for ``0 <= n <= levels``.

    ``gamma`` is normally a rational; any exact field element is accepted
    (threshold values live in real cyclotomic fields).
    """
    if isinstance(gamma, (int, str)):
        gamma = as_fraction(gamma)
    one = gamma * 0 + 1
    c0 = [one, one]
    for n in range(2, levels + 1):
        c0.append(c0[n - 1] - gamma * c0[n - 2])
    powers = [one]
    for _ in range(levels // 2):
        powers.append(powers[-1] * gamma)
    values = {}
    for n in range(levels + 1):
        for i in range(n // 2 + 1):
            values[(n, i)] = powers[i] * c0[n - 2 * i]
    return CoefficientTable("c", gamma, levels, values)


def _lambda_zero_row(l: int, gamma, levels: int, c: CoefficientTable) -> list:
    one = gamma * 0 + 1
    row = []
    for n in range(levels + 1):
        if n == 0:
            # the base value of the recursion: 0 at delta = 0, else 1
            row.append(one * 0 if l == 2 else one)
            continue
        value = c[(n, 0)]
        if not is_critical(n, 0, l):
            j = (n + 1) % l
            if n - 2 * j >= 0:
                value = value + gamma**j * c[(n - 2 * j, 0)]
        row.append(value)
    return row


def rou_lambda(gamma, l: int, levels: int) -> CoefficientTable:
    """``lambda_{n,i}`` at a ``2l``-th root of unity.

    ``lambda_{n,0}`` is ``c_{n,0}`` on critical vertices and
    ``c_{n,0} + gamma^j c_{n-2j,0}`` with ``j = (n+1) mod l`` otherwise;
    ``lambda_{n,i} = gamma^i lambda_{n-2i,0}``.
    """
    if l < 2:
        raise ValueError("l must be at least 2")
    if isinstance(gamma, (int, str)):
        gamma = as_fraction(gamma)
    c = generic_coeffs(gamma, levels)
    row0 = _lambda_zero_row(l, gamma, levels, c)
    values = {}
    for n in range(levels + 1):
        for i in range(n // 2 + 1):
            values[(n, i)] = gamma**i * row0[n - 2 * i]
    return CoefficientTable("lambda", gamma, levels, values, l=l)


@dataclass
class ConsistencyReport:
    passed: bool
    checked: int
    failures: list[dict]

    def to_json(self) -> dict:
        return {"passed": self.passed, "checked": self.checked, "failures": self.failures}


def _reflection_source(n: int, q: int, l: int) -> int | None:
    """The label ``p`` with ``p - l + r(n,p) = q`` and ``r(n,p) < l``, if any."""
    for p in range(q + 1, n // 2 + 1):
        _, r = critical_data(n, p, l)
        if r < l and p - l + r == q:
            return p
    return None


def lambda_consistency(gamma, l: int, levels: int) -> ConsistencyReport:
    """Check ``lambda_{n,q} = c_{n,q} + c_{n,p}`` where ``V_{n,p}`` has radical ``L_{n,q}``.

    Labels without an irreducible (``L_{2m,m}`` at ``l = 2``) are skipped.
    """
    if isinstance(gamma, (int, str)):
        gamma = as_fraction(gamma)
    c = generic_coeffs(gamma, levels)
    lam = rou_lambda(gamma, l, levels)
    graph = build_graph(l, levels)
    failures = []
    checked = 0
    for n in range(1, levels + 1):
        for v in graph.vertices[n]:
            q = v.p
            src = _reflection_source(n, q, l)
            expected = c[(n, q)] + (c[(n, src)] if src is not None else 0)
            checked += 1
            if lam[(n, q)] != expected:
                failures.append(
                    {"n": n, "p": q, "lambda": str(lam[(n, q)]), "expected": str(expected)}
                )
    return ConsistencyReport(not failures, checked, failures)


# ---------------------------------------------------------------------------
# trace descriptions and evaluation


@dataclass
class TraceSpec:
    """A trace on the tower: mode, ``gamma`` and the field holding delta."""

    mode: str | int  # "generic" or l
    gamma: object
    delta_field: ScalarField
    _tables: dict = dc_field(default_factory=dict, repr=False)

    def __post_init__(self):
        if isinstance(self.gamma, (int, str)):
            self.gamma = as_fraction(self.gamma)
        if self.mode != "generic":
            l = self.mode
            if getattr(self.delta_field, "l", None) != l:
                raise ValueError(f"root-of-unity mode l={l} needs the field Q(2cos(pi/{l}))")
        if isinstance(self.gamma, Fraction) and self.gamma < 0:
            raise ValueError("gamma must be non-negative")

    @classmethod
    def generic(cls, gamma, delta) -> "TraceSpec":
        """Generic trace with a rational delta."""
        return cls("generic", gamma, RationalField(delta))

    @classmethod
    def root_of_unity(cls, gamma, l: int) -> "TraceSpec":
        return cls(l, gamma, real_cyclotomic(l))

    @property
    def l(self) -> int | None:
        return None if self.mode == "generic" else self.mode

    def c(self, levels: int) -> CoefficientTable:
        table = self._tables.get("c")
        if table is None or table.levels < levels:
            table = generic_coeffs(self.gamma, max(levels, 8))
            self._tables["c"] = table
        return table

    def lam(self, levels: int) -> CoefficientTable:
        if self.l is None:
            raise ValueError("lambda tables only exist at roots of unity")
        table = self._tables.get("lambda")
        if table is None or table.levels < levels:
            table = rou_lambda(self.gamma, self.l, max(levels, 8))
            self._tables["lambda"] = table
        return table

    def diagram_value(self, match):
        """Trace of a single diagram."""
        n = len(match) // 2
        c = self.c(n)
        f = self.delta_field
        delta = f.delta
        skip = f.delta_is_zero
        total = f.zero()
        for p, counts in enumerate(trace_profile(match)):
            cp = c[(n, p)]
            if not cp:
                continue
            sub = 0
            for loops, count in counts:
                if loops:
                    if skip:
                        continue
                    sub = sub + count * delta**loops
                else:
                    sub = sub + count
            if sub:
                total = total + cp * sub
        return total


def evaluate(x: AlgebraElement, spec: TraceSpec):
    """``sum_p c_{n,p} t_{n,p}(x)``."""
    if x.field != spec.delta_field:
        raise ValueError(
            f"element over {x.field.name} but trace specified over {spec.delta_field.name}"
        )
    total = spec.delta_field.zero()
    for m, coeff in x.terms.items():
        value = spec.diagram_value(m)
        if value:
            total = total + coeff * value
    return total


def _runs(indices: list[int]) -> list[list[int]] | None:
    """Split a set of generator indices into maximal consecutive runs."""
    runs: list[list[int]] = []
    for i in sorted(indices):
        if runs and i == runs[-1][-1] + 1:
            runs[-1].append(i)
        else:
            runs.append([i])
    return runs


def evaluate_word_oracle(word: Iterable[int], gamma, delta):
    """Trace of a word from the run formula, without any representation theory.

    Supported words: some cyclic rotation is a concatenation of ascending
    consecutive runs ``e_a e_{a+1} ... e_b`` over pairwise disjoint,
    non-adjacent index blocks.  A run of length ``k`` contributes
    ``gamma^{k/2}`` (``k`` even) or ``delta gamma^{(k+1)/2}`` (``k`` odd),
    and disjoint blocks multiply.
    """
    word = tuple(int(i) for i in word)
    if isinstance(gamma, (int, str)):
        gamma = as_fraction(gamma)
    if not word:
        return gamma * 0 + 1
    if len(set(word)) != len(word):
        raise Unsupported(word)
    for shift in range(len(word)):
        rotated = word[shift:] + word[:shift]
        blocks = []
        for i in rotated:
            if blocks and i == blocks[-1][-1] + 1:
                blocks[-1].append(i)
            else:
                blocks.append([i])
        spans = sorted((b[0], b[-1]) for b in blocks)
        separated = all(spans[k][1] + 1 < spans[k + 1][0] for k in range(len(spans) - 1))
        if separated:
            value = gamma * 0 + 1
            for b in blocks:
                k = len(b)
                if k % 2 == 0:
                    value = value * gamma ** (k // 2)
                else:
                    value = value * delta * gamma ** ((k + 1) // 2)
            return value
    raise Unsupported(word)


def jones_consistency(n: int, delta) -> dict:
    """Compare the trace at ``gamma = delta^-2`` with Markov closure loop counts."""
    delta = as_fraction(delta)
    spec = TraceSpec.generic(1 / (delta * delta), delta)
    mismatches = []
    matches = diagram_matches(n)
    for m in matches:
        got = spec.diagram_value(m)
        want = delta ** (markov_closure_loops(m) - n)
        if got != want:
            mismatches.append({"match": list(m), "got": str(got), "expected": str(want)})
    return {"passed": not mismatches, "diagrams": len(matches), "mismatches": mismatches}


# ---------------------------------------------------------------------------
# positivity


@dataclass
class PositivityReport:
    regime: str  # all_positive | trivial | first_zero | first_negative
    index: int | None
    levels: int
    thresholds: list[ThresholdValue]

    def to_json(self) -> dict:
        return {
            "regime": self.regime,
            "n": self.index,
            "levels": self.levels,
            "thresholds": [t.describe() for t in self.thresholds],
        }


def _gamma_value(gamma):
    if isinstance(gamma, ThresholdValue):
        return gamma.value
    if isinstance(gamma, (int, str)):
        return as_fraction(gamma)
    return gamma


def classify_gamma(gamma, mode="generic", levels: int = 40) -> PositivityReport:
    """Scan ``c_{n,0}`` (or ``lambda_{n,0}``) for the first non-positive entry.

    Entries ``(n, i)`` with ``i > 0`` are ``gamma^i`` times a lower row, so
    the ``i = 0`` column decides positivity.  Regimes: ``trivial`` for
    ``gamma = 0``; ``first_zero(n)`` if the first non-positive entry
    vanishes; ``first_negative(n)`` if it is negative; ``all_positive``
    when every entry up to ``levels`` is positive.
    """
    value = _gamma_value(gamma)
    if not value:
        return PositivityReport("trivial", None, levels, [])
    if mode == "generic":
        row = generic_coeffs(value, levels)
    else:
        row = rou_lambda(value, int(mode), levels)
    for n in range(1, levels + 1):
        s = sign_of(row[(n, 0)])
        if s <= 0:
            crossed = []
            if isinstance(value, Fraction):
                crossed = [
                    special_threshold(k)
                    for k in range(3, n + 3)
                    if sign_of(value - special_threshold(k).value) >= 0
                ]
            regime = "first_zero" if s == 0 else "first_negative"
            return PositivityReport(regime, n, levels, crossed)
    return PositivityReport("all_positive", None, levels, [])


def idempotent_trace_check(l: int, gamma, cases: list[tuple[str, int]] | None = None) -> dict:
    """Trace of constructible idempotents against ``lambda`` entries.

    ``cases`` lists ``("cover", k)`` for ``f_{kl-1} (x) 1`` in ``TL_{kl}`` and
    ``("jw", n)`` for ``f_n`` with ``n < l``.  The cover idempotent projects
    onto the trivial-label component at level ``kl`` and must trace to
    ``lambda_{kl,0}``; ``f_n`` (``n < l``) must trace to ``lambda_{n,0}``.
    """
    spec = TraceSpec.root_of_unity(gamma, l)
    if cases is None:
        cases = [("cover", 1)] + [("jw", n) for n in range(1, l)]
    results = []
    for kind, k in cases:
        if kind == "cover":
            n = k * l
            x = trivial_cover_idempotent(k, l, spec.delta_field)
        elif kind == "jw":
            n = k
            if not jw_defined(n, l):
                raise ValueError(f"f_{n} is not defined at l={l}")
            x = jones_wenzl(n, spec.delta_field).element
        else:
            raise ValueError(f"unknown idempotent kind {kind!r}")
        got = evaluate(x, spec)
        want = spec.lam(n)[(n, 0)]
        results.append(
            {"case": f"{kind}:{k}", "n": n, "trace": str(got), "lambda": str(want), "passed": got == want}
        )
    return {"passed": all(r["passed"] for r in results), "cases": results}


@dataclass
class ThresholdResidual:
    k: int
    exact_zero: bool
    enclosure: tuple[Fraction, Fraction]

    @property
    def bound(self) -> Fraction:
        return max(abs(self.enclosure[0]), abs(self.enclosure[1]))

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "entry": [self.k - 1, 0],
            "exact_zero": self.exact_zero,
            "enclosure": [str(self.enclosure[0]), str(self.enclosure[1])],
            "bound": f"{float(self.bound):.3e}",
        }


def _interval_recursion(lo: Fraction, hi: Fraction, n: int) -> tuple[Fraction, Fraction]:
    # c_m = c_{m-1} - gamma c_{m-2} with gamma in [lo, hi], rational endpoints
    prev, cur = (Fraction(1), Fraction(1)), (Fraction(1), Fraction(1))
    for _ in range(2, n + 1):
        products = [g * c for g in (lo, hi) for c in prev]
        nxt = (cur[0] - max(products), cur[1] - min(products))
        prev, cur = cur, nxt
    return cur


def threshold_residual(k: int, width: Fraction = Fraction(1, 10**40)) -> ThresholdResidual:
    """``c_{k-1,0}`` at ``gamma = s_k``: exact value plus an interval enclosure.

    The enclosure is produced without the number-field arithmetic: the
    recursion is run in rational interval arithmetic from an isolating
    interval of ``s_k`` of the requested width.
    """
    t = special_threshold(k)
    exact = generic_coeffs(t.value, k)[(k - 1, 0)]
    lo, hi = t.interval(width)
    return ThresholdResidual(k, not exact, _interval_recursion(lo, hi, k - 1))
