"""Exact dense linear algebra over the package's scalar fields.

Matrices are lists of rows.  Every routine works for any field whose
elements support ``+ - * /`` and truthiness as a zero test.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import flint

from .scalars import ScalarField, sign_of

__all__ = [
    "NotHermitian",
    "SignatureCertificate",
    "determinant",
    "identity_matrix",
    "matmul",
    "rank",
    "rational_nullspace",
    "rational_solve",
    "signature",
]


class NotHermitian(ValueError):
    pass


def identity_matrix(k: int, field: ScalarField):
    one, zero = field.one(), field.zero()
    return [[one if i == j else zero for j in range(k)] for i in range(k)]


def matmul(a, b, field: ScalarField):
    if not a:
        return []
    cols = len(b[0]) if b else 0
    zero = field.zero()
    out = []
    for row in a:
        acc = [zero] * cols
        for k, x in enumerate(row):
            if not x:
                continue
            bk = b[k]
            for j in range(cols):
                y = bk[j]
                if y:
                    acc[j] = acc[j] + x * y
        out.append(acc)
    return out


def _bareiss(matrix):
    """Fraction-free elimination; returns (rank, sign-adjusted last pivot)."""
    m = [list(r) for r in matrix]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    prev = 1
    r = 0
    swaps = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if m[i][c]), None)
        if pivot is None:
            continue
        if pivot != r:
            m[r], m[pivot] = m[pivot], m[r]
            swaps += 1
        p = m[r][c]
        for i in range(r + 1, rows):
            mic = m[i][c]
            row_i, row_r = m[i], m[r]
            for j in range(c + 1, cols):
                row_i[j] = (p * row_i[j] - mic * row_r[j]) / prev
            row_i[c] = p * 0
        prev = p
        r += 1
        if r == rows:
            break
    return r, prev, swaps


def rank(matrix) -> int:
    """Exact rank by fraction-free (Bareiss) elimination."""
    if not matrix or not matrix[0]:
        return 0
    return _bareiss(matrix)[0]


def determinant(matrix, field: ScalarField):
    k = len(matrix)
    if k == 0:
        return field.one()
    r, last, swaps = _bareiss(matrix)
    if r < k:
        return field.zero()
    return -last if swaps % 2 else last


@dataclass
class SignatureCertificate:
    positive: int
    zero: int
    negative: int
    pivots: list  # ("1x1", index, sign) or ("2x2", i, j)

    @property
    def triple(self) -> tuple[int, int, int]:
        return self.positive, self.zero, self.negative

    def is_positive_definite(self) -> bool:
        return self.zero == 0 and self.negative == 0


def signature(matrix, field: ScalarField, check: bool = True) -> SignatureCertificate:
    """Inertia of a Hermitian matrix by congruence diagonalisation.

    Nonzero diagonal entries are used as 1x1 pivots.  When every remaining
    diagonal entry vanishes but the block is nonzero, an off-diagonal entry
    ``a`` gives a hyperbolic pivot ``[[0, a], [conj(a), 0]]`` of inertia
    (1, 0, 1).  Signs are certified with :func:`sign_of`.
    """
    k = len(matrix)
    conj = field.conj
    if check:
        for i in range(k):
            for j in range(i, k):
                if matrix[i][j] != conj(matrix[j][i]):
                    raise NotHermitian(f"entry ({i},{j}) breaks Hermitian symmetry")
    a = [list(r) for r in matrix]
    alive = list(range(k))
    pos = neg = 0
    pivots = []
    while alive:
        piv = next((i for i in alive if a[i][i]), None)
        if piv is not None:
            d = a[piv][piv]
            s = sign_of(d)
            if s > 0:
                pos += 1
            else:
                neg += 1
            pivots.append(("1x1", piv, s))
            alive.remove(piv)
            inv = 1 / d
            col = [(j, a[j][piv]) for j in alive if a[j][piv]]
            for j, ajp in col:
                factor = ajp * inv
                row_j, row_p = a[j], a[piv]
                for m in alive:
                    apm = row_p[m]
                    if apm:
                        row_j[m] = row_j[m] - factor * apm
            continue
        pair = next(((i, j) for i in alive for j in alive if i < j and a[i][j]), None)
        if pair is None:
            break
        i, j = pair
        pos += 1
        neg += 1
        pivots.append(("2x2", i, j))
        alive.remove(i)
        alive.remove(j)
        # block B = [[0, b], [conj b, 0]],  B^{-1} = [[0, 1/conj b], [1/b, 0]]
        b = a[i][j]
        inv_b = 1 / b
        inv_cb = 1 / a[j][i]
        rows = [(m, a[m][i], a[m][j]) for m in alive]
        for m, ami, amj in rows:
            if not ami and not amj:
                continue
            # x B^{-1} for the row vector x = (a[m][i], a[m][j])
            u = amj * inv_b
            v = ami * inv_cb
            row_m = a[m]
            row_i, row_j = a[i], a[j]
            for t in alive:
                delta = u * row_i[t] + v * row_j[t]
                if delta:
                    row_m[t] = row_m[t] - delta
    zero = len(alive)
    return SignatureCertificate(pos, zero, neg, pivots)


def rational_nullspace(rows, ncols: int) -> list[list[Fraction]]:
    """Basis of ``{v : rows * v = 0}`` for a rational matrix, via exact RREF."""
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    flat = [flint.fmpq(Fraction(x).numerator, Fraction(x).denominator) for r in rows for x in r]
    reduced, rk = flint.fmpq_mat(len(rows), ncols, flat).rref()
    pivots, r = [], 0
    for c in range(ncols):
        if r < rk and reduced[r, c] != 0:
            pivots.append(c)
            r += 1
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for i, pc in enumerate(pivots):
            entry = reduced[i, free]
            v[pc] = -Fraction(int(entry.p), int(entry.q))
        basis.append(v)
    return basis


def rational_solve(matrix, rhs) -> list[Fraction]:
    """Solve a square nonsingular rational system exactly."""
    k = len(matrix)
    to_q = lambda x: flint.fmpq(Fraction(x).numerator, Fraction(x).denominator)  # noqa: E731
    a = flint.fmpq_mat(k, k, [to_q(x) for r in matrix for x in r])
    b = flint.fmpq_mat(k, 1, [to_q(x) for x in rhs])
    sol = a.solve(b)
    return [Fraction(int(sol[i, 0].p), int(sol[i, 0].q)) for i in range(k)]
