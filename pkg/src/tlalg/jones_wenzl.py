"""Jones-Wenzl idempotents.

``f_n`` is the unique idempotent of ``TL_n`` killed by every generator on
both sides.  Two constructions are provided:

* :func:`wenzl_recursion`, the textbook
  ``f_n = f_{n-1}(x)1 - ([n-1]/[n]) (f_{n-1}(x)1) e_{n-1} (f_{n-1}(x)1)``;
* the single-clasp expansion
  ``f_n = (f_{n-1}(x)1) * sum_{k=1}^{n} (-1)^{n-k} ([k]/[n]) e_{n-1} e_{n-2} ... e_k``
  (the ``k = n`` term is the identity), which needs only ``n`` products with
  single diagrams per step and is what :func:`jones_wenzl` uses.

At a root of unity some ``[k]`` vanish.  When ``f_n`` is still defined
(``n < l`` or ``n = kl - 1``) it is computed over the formal field and the
coefficients are specialised; otherwise :class:`ZeroQuantumInteger` is raised.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

from .diagrams import AlgebraElement, word_diagram
from .scalars import FormalDelta, ScalarField, quantum_integer

__all__ = [
    "JWRecord",
    "ZeroQuantumInteger",
    "jones_wenzl",
    "jw_defined",
    "outer_cup_cap_match",
    "trivial_cover_idempotent",
    "wenzl_recursion",
]


class ZeroQuantumInteger(ArithmeticError):
    def __init__(self, k: int):
        super().__init__(f"quantum integer [{k}] vanishes in this field")
        self.k = k


@dataclass(frozen=True)
class JWRecord:
    n: int
    element: AlgebraElement
    field: ScalarField


_CACHE: dict[tuple, AlgebraElement] = {}
_LOCK = threading.Lock()


def jw_defined(n: int, l: int) -> bool:
    """``f_n`` exists at a ``2l``-th root of unity iff ``n < l`` or ``n = kl - 1``."""
    if l < 2:
        raise ValueError("l must be at least 2")
    return n < l or n % l == l - 1


def _first_zero_quantum(n: int, field: ScalarField) -> int | None:
    for k in range(2, n + 1):
        if not quantum_integer(k, field):
            return k
    return None


def _clasp_step(prev: AlgebraElement, n: int, qints: list) -> AlgebraElement:
    field = prev.field
    lifted = prev.include(1)
    qn = qints[n]
    total = lifted
    for k in range(1, n):
        word = tuple(range(n - 1, k - 1, -1))
        match, loops = word_diagram(n, word)
        assert loops == 0
        coeff = qints[k] / qn
        if (n - k) % 2:
            coeff = -coeff
        total = total + lifted * AlgebraElement(n, field, {match: coeff})
    return total


def _cached(n: int, field: ScalarField, builder) -> AlgebraElement:
    key = (n, field.descriptor())
    hit = _CACHE.get(key)
    if hit is not None:
        return hit
    value = builder()
    with _LOCK:
        _CACHE.setdefault(key, value)
    return _CACHE[key]


def _generic_jw(n: int, field: ScalarField) -> AlgebraElement:
    """Clasp expansion assuming ``[2], ..., [n]`` are all invertible."""
    if n <= 1:
        return AlgebraElement.identity(max(n, 0), field)

    def build():
        prev = _generic_jw(n - 1, field)
        qints = [quantum_integer(k, field) for k in range(n + 1)]
        return _clasp_step(prev, n, qints)

    return _cached(n, field, build)


def jones_wenzl(n: int, field: ScalarField) -> JWRecord:
    if n < 0:
        raise ValueError("strand count must be non-negative")
    zero_at = _first_zero_quantum(n, field)
    if zero_at is None:
        return JWRecord(n, _generic_jw(n, field), field)
    l = getattr(field, "l", None)
    if l is None or not jw_defined(n, l):
        raise ZeroQuantumInteger(zero_at)

    def build():
        formal = _generic_jw(n, FormalDelta())
        try:
            return formal.specialise(field)
        except ZeroDivisionError:  # pragma: no cover - excluded by jw_defined
            raise ZeroQuantumInteger(zero_at) from None

    return JWRecord(n, _cached(n, field, build), field)


def wenzl_recursion(n: int, field: ScalarField) -> AlgebraElement:
    """Reference construction by the Wenzl recursion (all ``[k]`` invertible)."""
    f = AlgebraElement.identity(1, field)
    for m in range(2, n + 1):
        qm = quantum_integer(m, field)
        if not qm:
            raise ZeroQuantumInteger(m)
        lifted = f.include(1)
        e = AlgebraElement.gen(m, m - 1, field)
        ratio = quantum_integer(m - 1, field) / qm
        f = lifted - (lifted * e * lifted).scale(ratio)
    if n == 0:
        return AlgebraElement.identity(0, field)
    return f


def trivial_cover_idempotent(k: int, l: int, field: ScalarField) -> AlgebraElement:
    """``f_{kl-1} (x) 1`` in ``TL_{kl}``."""
    if k < 1:
        raise ValueError("k must be positive")
    record = jones_wenzl(k * l - 1, field)
    return record.element.include(1)


def outer_cup_cap_match(n: int):
    """Cup on bottom positions 1,2 and cap on top positions n-1,n (1-based)."""
    match, loops = word_diagram(n, tuple(range(n - 1, 0, -1)))
    assert loops == 0
    return match
