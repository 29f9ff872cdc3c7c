"""Norm bounds for elements of the radical, written as geometric series."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..scalars import as_fraction, real_cyclotomic, sign_of

__all__ = ["Divergent", "RadicalSeries", "l3_radical_example", "radical_norm_bound"]


@dataclass(frozen=True)
class Divergent:
    """The series has ratio at least one."""

    ratio: object

    def __str__(self):
        return "divergent"

    def to_json(self):
        return {"divergent": True, "ratio": str(self.ratio)}


def radical_norm_bound(l: int, gamma, c_start):
    """``4 c delta^{l-2} / (1 - delta^2 gamma)`` at ``delta = 2cos(pi/l)``."""
    if l < 3:
        raise ValueError("the radical bound is stated for l >= 3")
    field = real_cyclotomic(l)
    gamma = as_fraction(gamma) if isinstance(gamma, (int, str)) else gamma
    d = field.delta
    ratio = d * d * gamma
    if sign_of(1 - ratio) <= 0:
        return Divergent(ratio)
    return 4 * c_start * d ** (l - 2) / (1 - ratio)


@dataclass
class RadicalSeries:
    gamma: Fraction
    partial_sums: list[Fraction]
    closed_form: Fraction

    def to_json(self):
        return {
            "gamma": str(self.gamma),
            "partial_sums": [str(s) for s in self.partial_sums],
            "closed_form": str(self.closed_form),
        }


def l3_radical_example(gamma, terms: int = 20) -> RadicalSeries | Divergent:
    """Partial sums ``4 sum_{i=1}^{k} c_{2,0} gamma^i`` with ``c_{2,0} = 1 - gamma``."""
    g = as_fraction(gamma)
    if g < 0:
        raise ValueError("gamma must be non-negative")
    if g >= 1:
        return Divergent(g)
    c20 = 1 - g
    sums, acc, power = [], Fraction(0), Fraction(1)
    for _ in range(terms):
        power *= g
        acc += 4 * c20 * power
        sums.append(acc)
    return RadicalSeries(g, sums, 4 * c20 * g / (1 - g))
