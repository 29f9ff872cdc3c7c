"""High-precision matrix units of ``TL_n`` labelled by Bratteli paths.

For a rational ``delta > 2`` the link form on every standard module is
positive definite.  Restriction to ``TL_{n-1}`` splits ``V_{n,p}`` as the
span ``S`` of link states whose last point is a through strand (a copy of
``V_{n-1,p}``, isometrically) plus its orthogonal complement (a copy of
``V_{n-1,p-1}``).  Repeating this gives an orthonormal basis of ``V_{n,p}``
indexed by paths ``0 = p_1, p_2, ..., p_n = p`` in the generic Bratteli
graph.  The matrix unit ``v_{P,Q}`` is the element acting as
``u -> b_P <b_Q, u>`` on ``V_{n,p}`` and as zero on every other block.

Everything involving square roots lives here, in ``mpmath`` at
``TL_PRECISION_DIGITS`` decimal digits (default 60).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath

from ..diagrams import AlgebraElement, compose, dagger_match, diagram_matches
from ..scalars import RationalField, as_fraction
from ..standard import _states, act_state, dim_standard, link_gram
from ..traces import TraceSpec

__all__ = ["OnbReport", "matrix_units", "precision_digits", "unnorm_onb"]

DEFAULT_DIGITS = 60
RESIDUAL_THRESHOLD = mpmath.mpf(10) ** -10


def precision_digits() -> int:
    raw = os.environ.get("TL_PRECISION_DIGITS")
    if raw is None:
        return DEFAULT_DIGITS
    digits = int(raw)
    if digits < 20:
        raise ValueError("TL_PRECISION_DIGITS must be at least 20")
    return digits


def _mp(x: Fraction):
    return mpmath.mpf(x.numerator) / x.denominator


Path = tuple  # (p_1, ..., p_n) with p_1 = 0


def _form(u, v, gram):
    return mpmath.fsum(u[i] * gram[i][j] * v[j] for i in range(len(u)) if u[i] for j in range(len(v)) if v[j])


@lru_cache(maxsize=None)
def _path_basis(n: int, p: int, delta: Fraction, digits: int) -> tuple[tuple[Path, tuple], ...]:
    """Orthonormal basis of ``V_{n,p}`` in link-state coordinates, keyed by path."""
    if n == 1:
        return (((0,), (mpmath.mpf(1),)),)
    states = _states(n, p)
    index = {st: k for k, st in enumerate(states)}
    gram = [[_mp(x) for x in row] for row in link_gram(n, p, RationalField(delta))]
    dim = len(states)
    out = []
    if p <= (n - 1) // 2:
        for path, vec in _path_basis(n - 1, p, delta, digits):
            lower = _states(n - 1, p)
            big = [mpmath.mpf(0)] * dim
            for k, c in enumerate(vec):
                if c:
                    big[index[lower[k] + (-1,)]] = c
            out.append((path + (p,), tuple(big)))
    if p >= 1:
        s_basis = [vec for _, vec in out]
        lower = _states(n - 1, p - 1)
        for path, vec in _path_basis(n - 1, p - 1, delta, digits):
            big = [mpmath.mpf(0)] * dim
            for k, c in enumerate(vec):
                if not c:
                    continue
                st = list(lower[k]) + [-1]
                last = max(i for i, w in enumerate(st[:-1]) if w < 0)
                st[last], st[n - 1] = n - 1, last
                big[index[tuple(st)]] += c
            # project away the orthonormal basis of S
            for b in s_basis:
                coeff = _form(b, big, gram)
                big = [x - coeff * y for x, y in zip(big, b)]
            norm = mpmath.sqrt(_form(big, big, gram))
            out.append((path + (p,), tuple(x / norm for x in big)))
    return tuple(out)


def _block_matrix(match, n: int, p: int, delta: Fraction):
    states = _states(n, p)
    index = {st: k for k, st in enumerate(states)}
    dim = len(states)
    mat = [[Fraction(0)] * dim for _ in range(dim)]
    for j, st in enumerate(states):
        res = act_state(match, st)
        if res is None:
            continue
        new, loops = res
        mat[index[new]][j] += delta**loops
    return mat


@dataclass
class NumericElement:
    """Numeric coefficients on the diagram basis of ``TL_n``."""

    n: int
    coeffs: dict

    def __add__(self, other):
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out.get(m, 0) + c
        return NumericElement(self.n, out)

    def scale(self, s):
        return NumericElement(self.n, {m: c * s for m, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + other.scale(-1)

    def star(self):
        return NumericElement(self.n, {dagger_match(m): c for m, c in self.coeffs.items()})

    def mul(self, other, delta):
        out: dict = {}
        for a, x in self.coeffs.items():
            for b, y in other.coeffs.items():
                m, loops = compose(a, b)
                out[m] = out.get(m, 0) + x * y * _mp(Fraction(delta) ** loops)
        return NumericElement(self.n, out)

    def include(self, n: int, field):
        if n == self.n:
            return self
        out = {}
        for m, c in self.coeffs.items():
            big = AlgebraElement.from_diagram(m, field).include(n - self.n)
            (bm,) = big.terms
            out[bm] = c
        return NumericElement(n, out)

    def max_abs(self):
        return max((abs(c) for c in self.coeffs.values()), default=mpmath.mpf(0))


@dataclass
class MatrixUnits:
    n: int
    delta: Fraction
    units: dict  # (P, Q) -> NumericElement
    labels: dict  # P -> p


def matrix_units(n: int, delta) -> MatrixUnits:
    """All ``v_{P,Q}`` in ``TL_n`` as numeric diagram expansions."""
    delta = as_fraction(delta)
    if delta <= 2:
        raise ValueError("the path basis needs delta > 2 (positive link forms)")
    digits = precision_digits()
    with mpmath.workdps(digits):
        matches = diagram_matches(n)
        blocks = list(range(n // 2 + 1))
        columns = []
        for m in matches:
            col = []
            for p in blocks:
                for row in _block_matrix(m, n, p, delta):
                    col.extend(_mp(x) for x in row)
            columns.append(col)
        size = len(matches)
        a = mpmath.matrix(size, size)
        for j, col in enumerate(columns):
            for i, x in enumerate(col):
                a[i, j] = x
        a_inv = mpmath.inverse(a)
        offsets, off = {}, 0
        for p in blocks:
            offsets[p] = off
            off += dim_standard(n, p) ** 2
        units, labels = {}, {}
        for p in blocks:
            basis = _path_basis(n, p, delta, digits)
            gram = [[_mp(x) for x in row] for row in link_gram(n, p, RationalField(delta))]
            dim = dim_standard(n, p)
            for path, _ in basis:
                labels[path] = p
            for pp, bp in basis:
                for pq, bq in basis:
                    # operator u -> b_P (b_Q^T G u)
                    row_q = [mpmath.fsum(bq[i] * gram[i][j] for i in range(dim)) for j in range(dim)]
                    rhs = mpmath.matrix(size, 1)
                    for i in range(dim):
                        for j in range(dim):
                            rhs[offsets[p] + i * dim + j] = bp[i] * row_q[j]
                    sol = a_inv * rhs
                    units[(pp, pq)] = NumericElement(n, {m: sol[k] for k, m in enumerate(matches)})
        return MatrixUnits(n, delta, units, labels)


@dataclass
class OnbReport:
    n: int
    gamma: Fraction
    delta: Fraction
    digits: int
    unit_law_residual: object = None
    orthogonality_residual: object = None
    norm_residual: object = None
    family_size: int = 0
    entries: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        values = [self.unit_law_residual, self.orthogonality_residual, self.norm_residual]
        return all(v is not None and v < RESIDUAL_THRESHOLD for v in values)

    def to_json(self) -> dict:
        fmt = lambda v: None if v is None else mpmath.nstr(v, 5)  # noqa: E731
        return {
            "n": self.n,
            "gamma": str(self.gamma),
            "delta": str(self.delta),
            "digits": self.digits,
            "family_size": self.family_size,
            "residuals": {
                "matrix_unit_law": fmt(self.unit_law_residual),
                "orthogonality": fmt(self.orthogonality_residual),
                "norms": fmt(self.norm_residual),
            },
            "numeric": True,
            "passed": self.passed,
        }


def _family(n: int, units: MatrixUnits, c):
    """Unnormalised members of ``B_n`` with their expected squared norms."""
    out = []
    by_path = units.units
    for (pp, pq), v in sorted(by_path.items()):
        p = pp[-1]
        cp = c[(n, p)]
        if n == 2 or pp[-2] != pq[-2]:
            out.append(((pp, pq), v, cp))
        elif p + 1 > n // 2:
            # nothing above p at this level: the element is the image of a
            # lower-level matrix unit (for even n this is the p = n/2 row)
            continue
        elif pp[-2] == p:
            partner = (pp[:-1] + (p + 1,), pq[:-1] + (p + 1,))
            ratio = cp / c[(n, p + 1)]
            out.append(((pp, pq), v - by_path[partner].scale(_mp(ratio)), cp * c[(n - 1, p)] / c[(n, p + 1)]))
    return out


def unnorm_onb(n: int, gamma, delta=3) -> OnbReport:
    """Check the path family of ``TL_2, ..., TL_n`` inside ``TL_n``.

    Squared norms are compared with ``c_{n,p}`` for plain matrix units and
    with ``c_{n,i} c_{n-1,i} / c_{n,i+1}`` for the corrected vectors; all
    cross inner products must vanish.  For ``n = 3`` the matrix-unit law
    ``v_{P,Q} v_{R,S} = [Q = R] v_{P,S}`` is also checked.
    """
    gamma, delta = as_fraction(gamma), as_fraction(delta)
    digits = precision_digits()
    spec = TraceSpec.generic(gamma, delta)
    field = spec.delta_field
    c = spec.c(n)
    report = OnbReport(n, gamma, delta, digits)
    with mpmath.workdps(digits):
        family = []
        for m in range(2, n + 1):
            units = matrix_units(m, delta)
            for label, vec, norm in _family(m, units, c):
                family.append((label, vec.include(n, field), norm))
        report.family_size = len(family)
        matches = diagram_matches(n)
        flipped = [dagger_match(m) for m in matches]
        pos = {m: k for k, m in enumerate(matches)}
        chi = [[_mp(_pair_value(a, b, spec)) for b in flipped] for a in matches]
        vectors = []
        for _, vec, _ in family:
            row = [mpmath.mpf(0)] * len(matches)
            for m, x in vec.coeffs.items():
                row[pos[m]] += x
            vectors.append(row)
        # chi(x y^*) = sum_{a,b} x_a y_b chi(a b^*)
        cv = [[mpmath.fsum(chi[i][j] * v[j] for j in range(len(v)) if v[j]) for i in range(len(matches))] for v in vectors]
        worst_off = mpmath.mpf(0)
        worst_norm = mpmath.mpf(0)
        for i, u in enumerate(vectors):
            for j in range(i, len(vectors)):
                value = mpmath.fsum(u[k] * cv[j][k] for k in range(len(u)) if u[k])
                if i == j:
                    err = abs(value - _mp(family[i][2])) / _mp(family[i][2])
                    worst_norm = max(worst_norm, err)
                    report.entries.append({"label": _label(family[i][0]), "norm2": mpmath.nstr(value, 20)})
                else:
                    worst_off = max(worst_off, abs(value))
        report.orthogonality_residual = worst_off
        report.norm_residual = worst_norm
        if n >= 3:
            report.unit_law_residual = _unit_law_residual(matrix_units(3, delta))
        else:
            report.unit_law_residual = mpmath.mpf(0)
    return report


def _pair_value(a, b, spec: TraceSpec):
    m, loops = compose(a, b)
    return spec.diagram_value(m) * spec.delta_field.delta**loops


def _label(pair) -> str:
    pp, pq = pair
    return "v_" + "".join(map(str, pp[1:])) + "," + "".join(map(str, pq[1:]))


def _unit_law_residual(units: MatrixUnits):
    worst = mpmath.mpf(0)
    items = sorted(units.units.items())
    for (p1, q1), x in items:
        for (p2, q2), y in items:
            prod = x.mul(y, units.delta)
            if q1 == p2 and units.labels[q1] == units.labels[p2]:
                want = units.units[(p1, q2)]
            else:
                want = NumericElement(units.n, {})
            worst = max(worst, (prod - want).max_abs())
    return worst
