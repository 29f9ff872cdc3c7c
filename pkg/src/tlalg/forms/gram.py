"""Gram matrices ``G[a][b] = chi(a * inv(b))`` and their inertia."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from ..diagrams import AlgebraElement, compose, dagger_match, diagram_matches, normal_form_of_match
from ..linalg import SignatureCertificate, signature
from ..traces import TraceSpec, evaluate

__all__ = ["GramReport", "diagram_basis", "gram", "inequivalence_ratios"]


@dataclass
class GramReport:
    basis: list[str]
    matrix: list[list]
    certificate: SignatureCertificate
    involution: str
    field_name: str

    @property
    def signature(self) -> tuple[int, int, int]:
        return self.certificate.triple

    def is_positive_definite(self) -> bool:
        return self.certificate.is_positive_definite()

    def to_json(self, entries: bool = False) -> dict:
        out = {
            "basis": self.basis,
            "involution": self.involution,
            "field": self.field_name,
            "signature": list(self.signature),
            "pivots": [list(p) for p in self.certificate.pivots],
        }
        if entries:
            out["entries"] = [[str(v) for v in row] for row in self.matrix]
        return out


def _label(word: tuple[int, ...]) -> str:
    return "".join(f"e{i}" for i in word) or "1"


def diagram_basis(n: int, field) -> list[AlgebraElement]:
    return [AlgebraElement.from_diagram(m, field) for m in diagram_matches(n)]


def _star_gram_diagrams(n: int, spec: TraceSpec):
    # a * b^* for single diagrams is again a single diagram times delta^loops
    field = spec.delta_field
    matches = diagram_matches(n)
    flipped = [dagger_match(m) for m in matches]
    delta = field.delta
    cache: dict = {}
    rows = []
    for a in matches:
        row = []
        for b in flipped:
            m, loops = compose(a, b)
            if loops and field.delta_is_zero:
                row.append(field.zero())
                continue
            value = cache.get(m)
            if value is None:
                value = spec.diagram_value(m)
                cache[m] = value
            row.append(value * delta**loops if loops else value)
        rows.append(row)
    labels = [_label(normal_form_of_match(m)) for m in matches]
    return labels, rows


def _lift(a: AlgebraElement, n: int) -> AlgebraElement:
    return a if a.n == n else a.include(n - a.n)


def gram(
    n: int,
    spec: TraceSpec,
    involution: str = "star",
    basis: Sequence[AlgebraElement] | None = None,
    labels: Sequence[str] | None = None,
    diamond: Callable[[AlgebraElement], AlgebraElement] | None = None,
) -> GramReport:
    """Exact Gram matrix of the trace form and its certified signature.

    ``involution`` is ``"star"`` or ``"diamond"``.  The diamond form needs a
    callable ``diamond`` (see :func:`tlalg.forms.diamond_gram`, which supplies
    it); it is only defined at ``delta = 0``.
    """
    field = spec.delta_field
    if involution not in ("star", "diamond"):
        raise ValueError(f"unknown involution {involution!r}")
    if involution == "diamond":
        if not field.delta_is_zero:
            raise ValueError("the diamond form exists only at delta = 0")
        if diamond is None:
            raise ValueError("diamond Gram needs an image map; use diamond_gram")
    if basis is None and involution == "star":
        names, matrix = _star_gram_diagrams(n, spec)
    else:
        if basis is None:
            basis = diagram_basis(n, field)
        names = list(labels) if labels is not None else [str(b) for b in basis]
        adj = [b.star() if involution == "star" else diamond(b) for b in basis]
        matrix = [[evaluate(_lift(a, bb.n) * bb, spec) for bb in adj] for a in basis]
    cert = signature(matrix, field)
    return GramReport(names, matrix, cert, involution, field.name)


def inequivalence_ratios(gamma, gamma_prime, delta, count: int = 10) -> list[Fraction]:
    """``<h_i,h_i>_{gamma'} / <h_i,h_i>_gamma`` for ``h_i = delta^{-i} e_1 e_3 ... e_{2i-1}``.

    Each norm is evaluated from the trace itself (on ``TL_{2i}``), not from
    the expected closed form ``gamma^i``.
    """
    out = []
    for i in range(1, count + 1):
        norms = []
        for g in (gamma_prime, gamma):
            spec = TraceSpec.generic(g, delta)
            f = spec.delta_field
            h = AlgebraElement.word(2 * i, [2 * k + 1 for k in range(i)], f).scale(1 / f.delta**i)
            norms.append(evaluate(h * h.star(), spec))
        out.append(norms[0] / norms[1])
    return out
