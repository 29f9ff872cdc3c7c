from fractions import Fraction
from math import gcd

import pytest

from tlalg.scalars import (
    FormalDelta,
    RationalField,
    min_poly_delta,
    quantum_integer,
    real_cyclotomic,
    sign_of,
    special_threshold,
)


def test_quantum_integer_examples():
    assert quantum_integer(0, FormalDelta()) == 0
    f = FormalDelta()
    assert quantum_integer(2, f) == f.delta
    assert quantum_integer(3, real_cyclotomic(3)) == 0


def test_quantum_integer_product_rule():
    f = FormalDelta()
    two = quantum_integer(2, f)
    for n in range(2, 31):
        assert quantum_integer(n, f) * two == quantum_integer(n + 1, f) + quantum_integer(n - 1, f)


@pytest.mark.parametrize("l", range(2, 9))
def test_quantum_integer_vanishes_at_l(l):
    assert not quantum_integer(l, real_cyclotomic(l))
    assert all(quantum_integer(k, real_cyclotomic(l)) for k in range(1, l))


def test_min_poly_examples():
    assert min_poly_delta(2) == [0, 1]
    assert min_poly_delta(3) == [-1, 1]
    assert min_poly_delta(4) == [-2, 0, 1]


def _totient(m):
    return sum(1 for k in range(1, m + 1) if gcd(k, m) == 1)


@pytest.mark.parametrize("l", range(3, 13))
def test_min_poly_degree_and_root(l):
    coeffs = min_poly_delta(l)
    assert len(coeffs) - 1 == _totient(2 * l) // 2
    lo, hi = real_cyclotomic(l).isolating_interval
    value = lambda x: sum(Fraction(c) * x**k for k, c in enumerate(coeffs))  # noqa: E731
    assert value(lo) * value(hi) <= 0


def test_sign_examples():
    f = real_cyclotomic(4)
    assert sign_of(0) == 0
    assert sign_of(f.delta - 1) == 1
    assert sign_of(1 - f.delta) == -1
    for a in (Fraction(-3, 7), Fraction(0), Fraction(5, 2)):
        assert sign_of(a) == (a > 0) - (a < 0)


def test_thresholds():
    assert special_threshold(3).exact == 1
    assert special_threshold(4).exact == Fraction(1, 2)
    assert special_threshold(6).exact == Fraction(1, 3)
    t = special_threshold(5)
    assert t.exact is None
    # s_5 = 1/(4cos^2(pi/5)) = (3 - sqrt 5)/2
    assert abs(float(t) - 0.38196601125) < 1e-9


def test_field_laws(rng):
    fields = [RationalField(3), real_cyclotomic(5), real_cyclotomic(7), FormalDelta()]
    for f in fields:
        d = f.delta
        for _ in range(30):
            a, b, c = (Fraction(rng.randint(-9, 9), rng.randint(1, 5)) + rng.randint(-2, 2) * d for _ in range(3))
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c
            if a:
                assert a * (1 / a) == 1


def test_formal_specialisation_agrees():
    f = FormalDelta()
    expr = quantum_integer(6, f)
    assert quantum_integer(6, RationalField(3)) == 3 * 3 * 3 * 3 * 3 - 4 * 27 + 3 * 3
    assert expr != 0
