"""The corrected involution ``x -> x^diamond`` at ``delta = 0``.

At ``delta = 0`` the star involution makes the trace form indefinite.  The
corrected involution is a conjugate-linear anti-automorphism which agrees
with transposition in a matrix-unit basis, so that ``chi(x x^diamond)`` is
positive.  It is stored as a table of generator images; every other element
is handled by writing its diagrams as normal-form words and multiplying the
reversed images.

Images of ``e_1, e_2, e_4, e_6`` are given by explicit formulas
(``text-exact``).  The image of ``e_3`` is *constructed*: on every block of
the semisimple algebra ``TL_5(0)`` we solve for the positive invariant forms
``K`` with ``E_i^T K = K T_i`` for the known images, and among them take the
one minimising the new generator's norm.  The image is then the
``K``-adjoint ``K^{-1} E_3^T K``, reassembled as an element of ``TL_5(0)``.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction

import flint

from ..diagrams import AlgebraElement, diagram_matches, normal_form_of_match
from ..linalg import rational_nullspace, rational_solve, signature
from ..scalars import RationalField, real_cyclotomic
from ..standard import act_matrix, dim_standard
from ..traces import TraceSpec, evaluate
from .gram import GramReport, diagram_basis, gram

__all__ = [
    "ConstructionFailed",
    "DiamondTable",
    "MissingImage",
    "construct_image",
    "default_table",
    "diamond_gram",
    "diamond_norm",
    "diamond_zero",
    "text_image",
]

# signed words; e_6^diamond is e_4^diamond plus the second list
_E4_WORDS = [(1, (1,)), (1, (3,)), (-1, (1, 2, 3)), (-1, (3, 2, 1)), (1, (1, 3, 2)), (1, (2, 1, 3))]
_E6_EXTRA = [
    (1, (5,)), (-1, (3, 4, 5)), (-1, (5, 4, 3)), (1, (3, 5, 4)), (1, (4, 3, 5)),
    (1, (1, 2, 3, 4, 5)), (-1, (1, 2, 3, 5, 4)), (-1, (1, 2, 4, 3, 5)), (1, (1, 2, 5, 4, 3)),
    (-1, (1, 3, 2, 4, 5)), (1, (1, 3, 2, 5, 4)), (1, (1, 4, 3, 2, 5)), (-1, (1, 5, 4, 3, 2)),
    (-1, (2, 1, 3, 4, 5)), (1, (2, 1, 3, 5, 4)), (1, (2, 1, 4, 3, 5)), (-1, (2, 1, 5, 4, 3)),
    (1, (3, 2, 1, 4, 5)), (-1, (3, 2, 1, 5, 4)), (-1, (4, 3, 2, 1, 5)), (1, (5, 4, 3, 2, 1)),
]
_TEXT = {1: (3, [(1, (2,))]), 2: (3, [(1, (1,))]), 4: (5, _E4_WORDS), 6: (7, _E4_WORDS + _E6_EXTRA)}


class MissingImage(KeyError):
    def __init__(self, i: int):
        super().__init__(f"no image of e_{i} under the corrected involution")
        self.i = i


class ConstructionFailed(RuntimeError):
    pass


def _field():
    return real_cyclotomic(2)


def text_image(i: int) -> AlgebraElement:
    """``e_i^diamond`` from its explicit formula (``i`` in 1, 2, 4, 6)."""
    if i not in _TEXT:
        raise MissingImage(i)
    n, words = _TEXT[i]
    f = _field()
    total = AlgebraElement.zero(n, f)
    for sign, w in words:
        total = total + AlgebraElement.word(n, w, f).scale(Fraction(sign))
    return total


def _lift(x: AlgebraElement, n: int) -> AlgebraElement:
    if x.n > n:
        raise ValueError(f"cannot restrict TL_{x.n} to TL_{n}")
    return x if x.n == n else x.include(n - x.n)


@dataclass
class ConstructionRecord:
    k: int
    n: int
    block_traces: dict[int, Fraction]
    forms: dict[int, list[list[Fraction]]]

    def norm(self, gamma) -> Fraction:
        """``chi(e_k e_k^diamond) = sum_p c_{n,p} tr_p(E K^{-1} E^T K)``."""
        spec = TraceSpec.root_of_unity(gamma, 2)
        c = spec.c(self.n)
        return sum((c[(self.n, p)] * a for p, a in self.block_traces.items()), Fraction(0))

    def to_json(self) -> dict:
        return {
            "generator": self.k,
            "algebra": f"TL_{self.n}(0)",
            "block_traces": {str(p): str(a) for p, a in self.block_traces.items()},
        }


@dataclass
class DiamondTable:
    images: dict[int, AlgebraElement] = field(default_factory=dict)
    sources: dict[int, str] = field(default_factory=dict)
    records: dict[int, ConstructionRecord] = field(default_factory=dict)
    _cache: dict = field(default_factory=dict, repr=False)

    def image(self, i: int) -> AlgebraElement:
        try:
            return self.images[i]
        except KeyError:
            raise MissingImage(i) from None

    def covers(self, i: int) -> bool:
        return i in self.images

    def constructed(self) -> list[int]:
        return sorted(i for i, s in self.sources.items() if s == "constructed")

    def add(self, i: int, image: AlgebraElement, source: str, record: ConstructionRecord | None = None):
        self.images[i] = image
        self.sources[i] = source
        if record is not None:
            self.records[i] = record
        self._cache.clear()

    def word_image(self, word: tuple[int, ...], n: int) -> AlgebraElement:
        key = (word, n)
        hit = self._cache.get(key)
        if hit is None:
            hit = AlgebraElement.identity(n, _field())
            for i in reversed(word):
                hit = hit * _lift(self.image(i), n)
            self._cache[key] = hit
        return hit

    def uses_constructed(self, x: AlgebraElement) -> bool:
        """Whether the image of ``x`` involves an image that was constructed, not given."""
        built = set(self.constructed())
        return any(i in built for m in x.terms for i in normal_form_of_match(m))

    def target_size(self, x: AlgebraElement) -> int:
        n = x.n
        for m in x.terms:
            for i in normal_form_of_match(m):
                n = max(n, self.image(i).n)
        return n

    def apply(self, x: AlgebraElement) -> AlgebraElement:
        f = _field()
        if x.field != f:
            raise ValueError("the corrected involution acts on TL_n(0) only")
        n = self.target_size(x)
        total = AlgebraElement.zero(n, f)
        for m, c in x.terms.items():
            total = total + self.word_image(normal_form_of_match(m), n).scale(f.conj(c))
        return total

    def to_json(self) -> dict:
        return {
            str(i): {"source": self.sources[i], "image": str(self.images[i]), "algebra": f"TL_{self.images[i].n}"}
            for i in sorted(self.images)
        }


# ---------------------------------------------------------------------------
# construction of a missing image on a semisimple TL_N(0)


def _q(x) -> flint.fmpq:
    x = Fraction(x)
    return flint.fmpq(x.numerator, x.denominator)


def _qmat(rows) -> flint.fmpq_mat:
    return flint.fmpq_mat(len(rows), len(rows[0]), [_q(x) for r in rows for x in r])


def _frac(x: flint.fmpq) -> Fraction:
    return Fraction(int(x.p), int(x.q))


def _invariant_forms(n: int, p: int, known: dict[int, AlgebraElement]) -> list[list[list[Fraction]]]:
    """Symmetric ``K`` on ``V_{n,p}`` with ``E_i^T K = K T_i`` for every known image."""
    f = _field()
    d = dim_standard(n, p)
    var = {}
    for i in range(d):
        for j in range(i, d):
            var[(i, j)] = len(var)

    def v(i, j):
        return var[(i, j) if i <= j else (j, i)]

    rows = []
    for i, img in known.items():
        e = act_matrix(AlgebraElement.gen(n, i, f), n, p)
        t = act_matrix(_lift(img, n), n, p)
        for r in range(d):
            for c in range(d):
                row = [Fraction(0)] * len(var)
                for m in range(d):
                    if e[m][r]:
                        row[v(m, c)] += e[m][r]
                    if t[m][c]:
                        row[v(r, m)] -= t[m][c]
                if any(row):
                    rows.append(row)
    forms = []
    for vec in rational_nullspace(rows, len(var)):
        forms.append([[vec[v(i, j)] for j in range(d)] for i in range(d)])
    return forms


def _definite_sign(k) -> int:
    cert = signature(k, RationalField())
    if cert.positive == len(k):
        return 1
    if cert.negative == len(k):
        return -1
    return 0


def _adjoint_trace(e: flint.fmpq_mat, k: flint.fmpq_mat) -> Fraction:
    prod = e * k.inv() * e.transpose() * k
    return sum((_frac(prod[i, i]) for i in range(prod.nrows())), Fraction(0))


def _interpolate(points: list[tuple[Fraction, Fraction]]) -> flint.fmpq_poly:
    x = flint.fmpq_poly([0, 1])
    total = flint.fmpq_poly([0])
    for j, (xj, yj) in enumerate(points):
        term = flint.fmpq_poly([_q(yj)])
        for m, (xm, _) in enumerate(points):
            if m != j:
                term = term * (x - _q(xm)) / _q(xj - xm)
        total = total + term
    return total


def _best_in_pencil(ka, kb, e: flint.fmpq_mat):
    """Definite member of ``ka + s kb`` (or ``kb``) minimising ``tr(E K^-1 E^T K)``."""
    d = len(ka)

    def member(s):
        if s is None:
            return [list(r) for r in kb]
        return [[ka[i][j] + s * kb[i][j] for j in range(d)] for i in range(d)]

    samples = []
    s = Fraction(0)
    while len(samples) < d + 1:
        km = _qmat(member(s))
        det = _frac(km.det())
        if det:
            samples.append((s, det, _adjoint_trace(e, km) * det))
        s += 1
    den = _interpolate([(s, det) for s, det, _ in samples])
    num = _interpolate([(s, val) for s, _, val in samples])
    critical = num.derivative() * den - num * den.derivative()
    candidates: list = [None]
    if critical.is_zero():
        candidates += [Fraction(t, 2) for t in range(-8, 9)]
    else:
        candidates += [_frac(r) for r, _ in critical.roots()]
    best = None
    for s in candidates:
        k = member(s)
        sign = _definite_sign(k)
        if not sign:
            continue
        k = [[sign * x for x in r] for r in k]
        value = _adjoint_trace(e, _qmat(k))
        if best is None or value < best[0]:
            best = (value, k)
    return best


def construct_image(k: int, n: int, known: dict[int, AlgebraElement]) -> tuple[AlgebraElement, ConstructionRecord]:
    """Build ``e_k^diamond`` inside ``TL_n(0)`` (``n`` odd) from the ``known`` images."""
    if n % 2 == 0:
        raise ConstructionFailed("TL_n(0) is semisimple only for odd n")
    if not 1 <= k < n:
        raise ConstructionFailed(f"e_{k} does not live in TL_{n}")
    known = {i: img for i, img in known.items() if i < n and img.n <= n and i != k}
    f = _field()
    ek = AlgebraElement.gen(n, k, f)
    blocks, traces, forms = {}, {}, {}
    for p in range(n // 2 + 1):
        family = _invariant_forms(n, p, known)
        e = _qmat(act_matrix(ek, n, p))
        if len(family) == 1:
            sign = _definite_sign(family[0])
            if not sign:
                raise ConstructionFailed(f"block {p}: the invariant form is indefinite")
            best = (None, [[sign * x for x in r] for r in family[0]])
            best = (_adjoint_trace(e, _qmat(best[1])), best[1])
        elif len(family) == 2:
            best = _best_in_pencil(family[0], family[1], e)
            if best is None:
                raise ConstructionFailed(f"block {p}: no definite invariant form in the pencil")
        else:
            raise ConstructionFailed(f"block {p}: {len(family)}-dimensional family of invariant forms")
        value, kmat = best
        kq = _qmat(kmat)
        blocks[p] = kq.inv() * e.transpose() * kq
        traces[p] = value
        forms[p] = kmat
    # reassemble: the diagram basis maps isomorphically onto the blocks
    matches = diagram_matches(n)
    columns = []
    for m in matches:
        col = []
        one = AlgebraElement.from_diagram(m, f)
        for p in range(n // 2 + 1):
            for row in act_matrix(one, n, p):
                col.extend(row)
        columns.append(col)
    rhs = []
    for p in range(n // 2 + 1):
        b = blocks[p]
        rhs.extend(_frac(b[i, j]) for i in range(b.nrows()) for j in range(b.ncols()))
    system = [[columns[j][i] for j in range(len(matches))] for i in range(len(rhs))]
    coeffs = rational_solve(system, rhs)
    image = AlgebraElement(n, f, {m: c for m, c in zip(matches, coeffs) if c})
    return image, ConstructionRecord(k, n, traces, forms)


_DEFAULT: DiamondTable | None = None
_LOCK = threading.Lock()


def default_table() -> DiamondTable:
    """Text-exact images of ``e_1, e_2, e_4, e_6`` and a constructed ``e_3``."""
    global _DEFAULT
    with _LOCK:
        if _DEFAULT is None:
            table = DiamondTable()
            for i in (1, 2, 4, 6):
                table.add(i, text_image(i), "text-exact")
            known = {i: table.images[i] for i in (1, 2, 4)}
            image, record = construct_image(3, 5, known)
            table.add(3, image, "constructed", record)
            _DEFAULT = table
        return _DEFAULT


def diamond_zero(x: AlgebraElement, table: DiamondTable | None = None) -> AlgebraElement:
    return (table or default_table()).apply(x)


def diamond_norm(x: AlgebraElement, gamma, table: DiamondTable | None = None):
    """``chi(x x^diamond)`` for the delta = 0 trace with parameter ``gamma``."""
    img = diamond_zero(x, table)
    spec = TraceSpec.root_of_unity(gamma, 2)
    return evaluate(_lift(x, img.n) * img, spec)


def diamond_gram(n: int, gamma, table: DiamondTable | None = None) -> GramReport:
    """Gram matrix of ``(a, b) -> chi(a b^diamond)`` on the diagrams of ``TL_n(0)``."""
    table = table or default_table()
    spec = TraceSpec.root_of_unity(gamma, 2)
    basis = diagram_basis(n, spec.delta_field)
    labels = ["".join(f"e{i}" for i in normal_form_of_match(next(iter(b.terms)))) or "1" for b in basis]
    return gram(n, spec, "diamond", basis=basis, labels=labels, diamond=table.apply)
