"""Exact coefficient fields.

Four kinds of scalars are used throughout the package:

* ``Fraction`` for the rationals (and for degree-one real cyclotomic fields,
  which are isomorphic to the rationals),
* :class:`GaussianRational` for ``Q(i)``,
* :class:`AlgebraicReal` for ``Q(2cos(pi/l))`` with certified signs,
* :class:`RationalFunction` for the formal field ``Q(delta)``.

A :class:`ScalarField` object knows its value of delta and how to coerce,
compare, print and parse its elements.  Diagram algebra code only talks to
fields through that interface.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache

import flint

__all__ = [
    "AlgebraicReal",
    "FormalDelta",
    "GaussianRational",
    "GaussianRationalField",
    "RationalField",
    "RationalFunction",
    "RealCyclotomic",
    "ScalarField",
    "ThresholdValue",
    "as_fraction",
    "format_rational",
    "min_poly_delta",
    "quantum_integer",
    "real_cyclotomic",
    "sign_of",
    "special_threshold",
]


# ---------------------------------------------------------------------------
# rationals


def as_fraction(value) -> Fraction:
    """Parse ``value`` (int, Fraction, ``"p/q"`` string or flint fmpq) exactly."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, flint.fmpq):
        return Fraction(int(value.p), int(value.q))
    if isinstance(value, flint.fmpz):
        return Fraction(int(value))
    raise TypeError(f"cannot read {value!r} as an exact rational")


def format_rational(value: Fraction) -> str:
    return str(Fraction(value))


def _fmpq_to_fraction(c) -> Fraction:
    return Fraction(int(c.p), int(c.q))


# ---------------------------------------------------------------------------
# Gaussian rationals


class GaussianRational:
    """``re + im*i`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = as_fraction(re)
        self.im = as_fraction(im)

    @staticmethod
    def _lift(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        norm = o.re * o.re + o.im * o.im
        if norm == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return self * GaussianRational(o.re / norm, -o.im / norm)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pow__(self, k: int):
        result = GaussianRational(1)
        base = self if k >= 0 else 1 / self
        for _ in range(abs(k)):
            result = result * base
        return result

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return False
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash(self.re) if self.im == 0 else hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"GaussianRational({self})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        im = "i" if self.im == 1 else "-i" if self.im == -1 else f"{self.im}*i"
        if self.re == 0:
            return im
        return f"{self.re}{'' if im.startswith('-') else '+'}{im}"


def _parse_gaussian(text: str) -> GaussianRational:
    s = text.replace(" ", "")
    if not s.endswith("i"):
        return GaussianRational(Fraction(s), 0)
    body = s[:-1].rstrip("*")
    # split at the last sign that is not the leading one or part of an exponent
    cut = max(body.rfind("+"), body.rfind("-"))
    if cut <= 0:
        re_part, im_part = "0", body
    else:
        re_part, im_part = body[:cut], body[cut:]
    if im_part in ("", "+"):
        im_part = "1"
    elif im_part == "-":
        im_part = "-1"
    return GaussianRational(Fraction(re_part), Fraction(im_part))


# ---------------------------------------------------------------------------
# interval helpers (rational endpoints, used for certified signs)


def _interval_mul(a, b):
    products = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return min(products), max(products)


def _interval_poly(coeffs, lo, hi):
    """Enclosure of ``sum coeffs[k] x^k`` for ``x`` in ``[lo, hi]`` (Horner)."""
    acc = (Fraction(0), Fraction(0))
    for c in reversed(coeffs):
        acc = _interval_mul(acc, (lo, hi))
        acc = (acc[0] + c, acc[1] + c)
    return acc


def _poly_at(coeffs, x):
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _sturm_count(poly: flint.fmpq_poly, lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots of ``poly`` in ``(lo, hi]``."""
    seq = [poly, poly.derivative()]
    while not seq[-1].is_zero():
        rem = seq[-2] % seq[-1]
        if rem.is_zero():
            break
        seq.append(-rem)

    def variations(x):
        q = flint.fmpq(x.numerator, x.denominator)
        signs = [_sign(_fmpq_to_fraction(p(q))) for p in seq]
        signs = [s for s in signs if s]
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    return variations(lo) - variations(hi)


# ---------------------------------------------------------------------------
# minimal polynomials of 2cos(pi/l)

_MINPOLY_LOCK = threading.Lock()
_MINPOLY_CACHE: dict[int, tuple[flint.fmpz_poly, tuple[Fraction, Fraction]]] = {}


def _approx_interval(l: int, radius: Fraction) -> tuple[Fraction, Fraction]:
    centre = Fraction(2 * math.cos(math.pi / l)).limit_denominator(10**15)
    return centre - radius, centre + radius


def _cyclotomic_resultant(l: int) -> flint.fmpz_poly:
    """Res_y(Phi_{2l}(y), y^2 - x*y + 1) as a polynomial in x."""
    phi = flint.fmpz_poly.cyclotomic(2 * l)
    x = flint.fmpz_poly([0, 1])
    zero, one = flint.fmpz_poly([]), flint.fmpz_poly([1])
    # y^k reduced modulo y^2 = x*y - 1, stored as A + B*y
    a_sum, b_sum = zero, zero
    a_k, b_k = one, zero
    for c in phi.coeffs():
        a_sum += int(c) * a_k
        b_sum += int(c) * b_k
        a_k, b_k = -b_k, a_k + x * b_k
    # the two roots y1, y2 of the quadratic satisfy y1 + y2 = x, y1*y2 = 1
    return a_sum * a_sum + a_sum * b_sum * x + b_sum * b_sum


def _certify_delta(l: int):
    res = _cyclotomic_resultant(l)
    _, factors = res.factor()
    radius = Fraction(1, 10**9)
    while True:
        lo, hi = _approx_interval(l, radius)
        chosen = []
        for f, _mult in factors:
            coeffs = [Fraction(int(c)) for c in f.coeffs()]
            if _sign(_poly_at(coeffs, lo)) * _sign(_poly_at(coeffs, hi)) < 0:
                fq = flint.fmpq_poly([int(c) for c in f.coeffs()])
                if _sturm_count(fq, lo, hi) == 1:
                    chosen.append(f)
        if len(chosen) == 1:
            f = chosen[0]
            if int(f.coeffs()[-1]) < 0:
                f = -f
            return f, (lo, hi)
        radius /= 1000  # pragma: no cover - only hit if roots crowd together


def _minpoly_entry(l: int):
    if l < 2:
        raise ValueError("l must be at least 2")
    entry = _MINPOLY_CACHE.get(l)
    if entry is None:
        with _MINPOLY_LOCK:
            entry = _MINPOLY_CACHE.get(l)
            if entry is None:
                entry = _certify_delta(l)
                _MINPOLY_CACHE[l] = entry
    return entry


def min_poly_delta(l: int) -> list[int]:
    """Integer coefficients (ascending) of the minimal polynomial of 2cos(pi/l)."""
    f, _ = _minpoly_entry(l)
    return [int(c) for c in f.coeffs()]


# ---------------------------------------------------------------------------
# fields


class ScalarField:
    """Common interface of the coefficient domains."""

    kind = "abstract"
    l: int | None = None
    ordered = False

    def descriptor(self) -> tuple:
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, ScalarField) and self.descriptor() == other.descriptor()

    def __hash__(self):
        return hash(self.descriptor())

    def __repr__(self):
        return f"<{self.name}>"

    @property
    def name(self) -> str:
        return self.kind

    # element plumbing -----------------------------------------------------
    def coerce(self, value):
        raise NotImplementedError

    def zero(self):
        return self.coerce(0)

    def one(self):
        return self.coerce(1)

    @property
    def delta(self):
        raise NotImplementedError

    @property
    def delta_is_zero(self) -> bool:
        return not self.delta

    def conj(self, value):
        return value

    def sign(self, value) -> int:
        raise TypeError(f"{self.name} is not an ordered field")

    def format(self, value) -> str:
        return str(value)

    def parse(self, text: str):
        raise NotImplementedError

    def to_json(self, value):
        return self.format(value)

    def from_json(self, data):
        return self.parse(data)

    # products of diagram expansions ------------------------------------
    def multiply_terms(self, a_terms, b_terms, compose):
        """Bilinear product of two ``{diagram: coeff}`` maps.

        ``compose(d1, d2)`` returns ``(d3, loops)``.  Each loop contributes a
        factor delta; when delta is zero those products are skipped outright.
        """
        delta = self.delta
        powers = [self.one()]
        skip_loops = self.delta_is_zero
        acc: dict = {}
        get = acc.get
        for d1, c1 in a_terms.items():
            for d2, c2 in b_terms.items():
                d3, loops = compose(d1, d2)
                if loops:
                    if skip_loops:
                        continue
                    while len(powers) <= loops:
                        powers.append(powers[-1] * delta)
                    value = c1 * c2 * powers[loops]
                else:
                    value = c1 * c2
                prev = get(d3)
                acc[d3] = value if prev is None else prev + value
        return {d: v for d, v in acc.items() if v}


class RationalField(ScalarField):
    """The rationals with a chosen rational value of delta."""

    kind = "RationalField"
    ordered = True

    def __init__(self, delta=None):
        self._delta = None if delta is None else as_fraction(delta)

    def descriptor(self):
        return ("Q", self._delta)

    @property
    def name(self):
        return f"Q(delta={self._delta})"

    @property
    def delta(self):
        if self._delta is None:
            raise ValueError("this rational field has no delta attached")
        return self._delta

    def coerce(self, value):
        if isinstance(value, GaussianRational):
            if value.im:
                raise TypeError("non-real value in a real field")
            return value.re
        return as_fraction(value)

    def sign(self, value):
        return _sign(as_fraction(value))

    def parse(self, text):
        return as_fraction(text)


class GaussianRationalField(ScalarField):
    """Q(i) with a rational delta; conjugation flips the imaginary part."""

    kind = "GaussianRationalField"

    def __init__(self, delta=None):
        self._delta = None if delta is None else as_fraction(delta)

    def descriptor(self):
        return ("Qi", self._delta)

    @property
    def name(self):
        return f"Q(i)(delta={self._delta})"

    @property
    def delta(self):
        if self._delta is None:
            raise ValueError("this field has no delta attached")
        return GaussianRational(self._delta)

    def coerce(self, value):
        if isinstance(value, GaussianRational):
            return value
        return GaussianRational(as_fraction(value))

    def conj(self, value):
        return value.conjugate()

    def sign(self, value):
        value = self.coerce(value)
        if value.im:
            raise ValueError("sign of a non-real Gaussian rational")
        return _sign(value.re)

    def parse(self, text):
        return _parse_gaussian(text)


class AlgebraicReal:
    """An element of Q(2cos(pi/l)), stored as a reduced residue polynomial."""

    __slots__ = ("field", "residue")

    def __init__(self, field: "RealCyclotomic", residue: flint.fmpq_poly):
        self.field = field
        self.residue = residue

    def _lift(self, other):
        if isinstance(other, AlgebraicReal):
            if other.field is not self.field and other.field != self.field:
                raise TypeError("elements of different cyclotomic fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.coerce(other)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return AlgebraicReal(self.field, self.residue + o.residue)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return AlgebraicReal(self.field, self.residue - o.residue)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return AlgebraicReal(
                self.field, self.residue * flint.fmpq(other.numerator, other.denominator)
            ) if isinstance(other, Fraction) else AlgebraicReal(self.field, self.residue * other)
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return AlgebraicReal(self.field, (self.residue * o.residue) % self.field.modulus)

    __rmul__ = __mul__

    def inverse(self):
        if self.residue.is_zero():
            raise ZeroDivisionError(f"division by zero in {self.field.name}")
        g, s, _t = self.residue.xgcd(self.field.modulus)
        return AlgebraicReal(self.field, (s / g[0]) % self.field.modulus)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __neg__(self):
        return AlgebraicReal(self.field, -self.residue)

    def __pow__(self, k: int):
        result = self.field.one()
        base = self if k >= 0 else self.inverse()
        for _ in range(abs(k)):
            result = result * base
        return result

    def __eq__(self, other):
        try:
            o = self._lift(other)
        except TypeError:
            return False
        if o is NotImplemented:
            return False
        return self.residue == o.residue

    def __hash__(self):
        coeffs = self.coefficients()
        if len(coeffs) <= 1:
            return hash(coeffs[0] if coeffs else Fraction(0))
        return hash((self.field.l, tuple(coeffs)))

    def __bool__(self):
        return not self.residue.is_zero()

    def coefficients(self) -> list[Fraction]:
        return [_fmpq_to_fraction(c) for c in self.residue.coeffs()]

    def rational_value(self) -> Fraction | None:
        coeffs = self.coefficients()
        if len(coeffs) > 1:
            return None
        return coeffs[0] if coeffs else Fraction(0)

    def sign(self) -> int:
        return self.field.sign(self)

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __str__(self):
        return self.field.format(self)

    def __repr__(self):
        return f"AlgebraicReal(l={self.field.l}, {self})"


class RealCyclotomic(ScalarField):
    """``Q(delta)`` with ``delta = 2cos(pi/l)``.

    For ``l`` in {2, 3} the field is the rationals and elements are plain
    ``Fraction`` objects; otherwise they are :class:`AlgebraicReal`.
    """

    kind = "RealCyclotomic"
    ordered = True

    def __init__(self, l: int):
        if l < 2:
            raise ValueError("l must be at least 2")
        self.l = l
        poly, interval = _minpoly_entry(l)
        self.modulus_int = poly
        self.modulus = flint.fmpq_poly([int(c) for c in poly.coeffs()])
        self.degree = poly.degree()
        self._interval = interval
        self._lock = threading.Lock()
        self._mod_coeffs = [Fraction(int(c)) for c in poly.coeffs()]
        if self.degree == 1:
            a, b = self._mod_coeffs
            self._delta = -a / b
        else:
            self._delta = AlgebraicReal(self, flint.fmpq_poly([0, 1]))

    def descriptor(self):
        return ("RC", self.l)

    @property
    def name(self):
        return f"Q(2cos(pi/{self.l}))"

    @property
    def delta(self):
        return self._delta

    @property
    def isolating_interval(self) -> tuple[Fraction, Fraction]:
        return self._interval

    def coerce(self, value):
        if isinstance(value, AlgebraicReal):
            if value.field != self:
                raise TypeError("element of a different cyclotomic field")
            return value if self.degree > 1 else value.rational_value()
        value = as_fraction(value)
        if self.degree == 1:
            return value
        return AlgebraicReal(self, flint.fmpq_poly([flint.fmpq(value.numerator, value.denominator)]))

    def element(self, coeffs) -> "AlgebraicReal | Fraction":
        """Build ``sum coeffs[k] * delta^k`` (reduced)."""
        acc = self.zero()
        power = self.one()
        for c in coeffs:
            acc = acc + power * as_fraction(c)
            power = power * self._delta
        return acc

    # certified ordering ---------------------------------------------------
    def _bisect(self, lo, hi, rounds):
        f = self._mod_coeffs
        s_lo = _sign(_poly_at(f, lo))
        for _ in range(rounds):
            mid = (lo + hi) / 2
            s_mid = _sign(_poly_at(f, mid))
            if s_mid == 0:
                return mid, mid
            if s_mid == s_lo:
                lo = mid
            else:
                hi = mid
        return lo, hi

    def refine(self, width: Fraction) -> tuple[Fraction, Fraction]:
        """Shrink the isolating interval of delta below ``width``."""
        with self._lock:
            lo, hi = self._interval
            rounds = 8
            while hi - lo >= width:
                lo, hi = self._bisect(lo, hi, rounds)
                rounds *= 2
            self._interval = (lo, hi)
            return lo, hi

    def enclosure(self, value) -> tuple[Fraction, Fraction]:
        """Rational interval containing the real number ``value``."""
        if isinstance(value, Fraction):
            return value, value
        coeffs = value.coefficients()
        lo, hi = self._interval
        return _interval_poly(coeffs, lo, hi)

    def sign(self, value) -> int:
        if isinstance(value, (int, Fraction)):
            return _sign(value)
        if value.residue.is_zero():
            return 0
        coeffs = value.coefficients()
        rounds = 8
        while True:
            lo, hi = self._interval
            e_lo, e_hi = _interval_poly(coeffs, lo, hi)
            if e_lo > 0:
                return 1
            if e_hi < 0:
                return -1
            with self._lock:
                if self._interval == (lo, hi):
                    self._interval = self._bisect(lo, hi, rounds)
            rounds *= 2

    # text forms --------------------------------------------------------------
    def format(self, value) -> str:
        if isinstance(value, (int, Fraction)):
            return str(Fraction(value))
        coeffs = value.coefficients()
        if len(coeffs) <= 1:
            return str(coeffs[0] if coeffs else Fraction(0))
        return _format_poly(coeffs, "d")

    def parse(self, text):
        return self.element(_parse_poly(text, "d"))

    def to_json(self, value):
        if self.degree == 1:
            residue = [str(as_fraction(value))]
        else:
            residue = [str(c) for c in value.coefficients()]
        lo, hi = self._interval
        return {
            "modulus": [int(c) for c in self.modulus_int.coeffs()],
            "residue": residue,
            "interval": [str(lo), str(hi)],
        }

    def from_json(self, data):
        if isinstance(data, str):
            return self.parse(data)
        if [int(c) for c in data["modulus"]] != [int(c) for c in self.modulus_int.coeffs()]:
            raise ValueError("modulus does not match this field")
        return self.element(data["residue"])


def _format_poly(coeffs, symbol: str) -> str:
    parts = []
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        if k == 0:
            mono = str(c)
        else:
            power = symbol if k == 1 else f"{symbol}^{k}"
            mono = power if c == 1 else f"-{power}" if c == -1 else f"{c}*{power}"
        parts.append(mono)
    if not parts:
        return "0"
    text = parts[0]
    for p in parts[1:]:
        text += p if p.startswith("-") else "+" + p
    return text


def _parse_poly(text: str, symbol: str) -> list[Fraction]:
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial")
    terms, start = [], 0
    for i in range(1, len(s)):
        if s[i] in "+-" and s[i - 1] not in "*^/":
            terms.append(s[start:i])
            start = i
    terms.append(s[start:])
    coeffs: dict[int, Fraction] = {}
    for t in terms:
        if symbol in t:
            c_part, _, rest = t.partition(symbol)
            c_part = c_part.rstrip("*")
            coeff = Fraction(1) if c_part in ("", "+") else Fraction(-1) if c_part == "-" else Fraction(c_part)
            power = int(rest[1:]) if rest.startswith("^") else 1
        else:
            coeff, power = Fraction(t), 0
        coeffs[power] = coeffs.get(power, Fraction(0)) + coeff
    top = max(coeffs) if coeffs else 0
    return [coeffs.get(k, Fraction(0)) for k in range(top + 1)]


# ---------------------------------------------------------------------------
# formal delta


def _zpoly_from_rationals(coeffs) -> tuple[flint.fmpz_poly, int]:
    coeffs = [as_fraction(c) for c in coeffs]
    den = 1
    for c in coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    return flint.fmpz_poly([int(c * den) for c in coeffs]), den


class RationalFunction:
    """A reduced quotient ``num/den`` of integer polynomials in delta."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, normalise=True):
        if not isinstance(num, flint.fmpz_poly):
            num = flint.fmpz_poly(num if isinstance(num, list) else [num])
        if den is None:
            den = flint.fmpz_poly([1])
        elif not isinstance(den, flint.fmpz_poly):
            den = flint.fmpz_poly(den if isinstance(den, list) else [den])
        if normalise:
            if den.is_zero():
                raise ZeroDivisionError("zero denominator")
            if num.is_zero():
                den = flint.fmpz_poly([1])
            else:
                g = num.gcd(den)
                if not g.is_one():
                    num = num // g
                    den = den // g
            if den.leading_coefficient() < 0:
                num, den = -num, -den
        self.num = num
        self.den = den

    @staticmethod
    def _lift(other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, int):
            return RationalFunction(flint.fmpz_poly([other]), None, normalise=False)
        if isinstance(other, Fraction):
            return RationalFunction(
                flint.fmpz_poly([other.numerator]), flint.fmpz_poly([other.denominator]), normalise=False
            )
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, normalise=False)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if o.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, k: int):
        if k >= 0:
            return RationalFunction(self.num**k, self.den**k, normalise=False)
        return RationalFunction(self.den ** (-k), self.num ** (-k))

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return False
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        if self.den.is_one() and self.num.degree() <= 0:
            return hash(int(self.num[0]) if not self.num.is_zero() else 0)
        return hash((str(self.num), str(self.den)))

    def __bool__(self):
        return not self.num.is_zero()

    def numerator_coeffs(self) -> list[Fraction]:
        return _normalised_coeffs(self.num, self.den)[0]

    def denominator_coeffs(self) -> list[Fraction]:
        return _normalised_coeffs(self.num, self.den)[1]

    def evaluate(self, value, field: ScalarField | None = None):
        """Substitute a value for delta; ``ZeroDivisionError`` on a pole."""
        if field is not None:
            value = field.coerce(value) if not isinstance(value, (AlgebraicReal,)) else value
        num = _horner([int(c) for c in self.num.coeffs()], value)
        den = _horner([int(c) for c in self.den.coeffs()], value)
        if not den:
            raise ZeroDivisionError("pole of the rational function")
        if isinstance(num, int) and isinstance(den, int):
            return Fraction(num, den)
        return num / den

    def __str__(self):
        num = _format_poly([Fraction(int(c)) for c in self.num.coeffs()], "d")
        if self.den.is_one():
            return num
        den = _format_poly([Fraction(int(c)) for c in self.den.coeffs()], "d")
        if self.num.length() > 1:
            num = f"({num})"
        if self.den.length() > 1:
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self):
        return f"RationalFunction({self})"


def _horner(coeffs, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _normalised_coeffs(num, den):
    """Scale so the denominator is monic; return rational coefficient lists."""
    lead = Fraction(int(den.leading_coefficient()))
    n = [Fraction(int(c)) / lead for c in num.coeffs()] or [Fraction(0)]
    d = [Fraction(int(c)) / lead for c in den.coeffs()]
    return n, d


class FormalDelta(ScalarField):
    """The rational function field ``Q(delta)`` with delta a formal symbol."""

    kind = "FormalDelta"

    _delta = RationalFunction(flint.fmpz_poly([0, 1]), None, normalise=False)

    def descriptor(self):
        return ("FD",)

    @property
    def name(self):
        return "Q(delta)"

    @property
    def delta(self):
        return self._delta

    @property
    def delta_is_zero(self):
        return False

    def coerce(self, value):
        if isinstance(value, RationalFunction):
            return value
        if isinstance(value, str):
            return self.parse(value)
        value = as_fraction(value)
        return RationalFunction(
            flint.fmpz_poly([value.numerator]), flint.fmpz_poly([value.denominator]), normalise=False
        )

    def from_polys(self, num_coeffs, den_coeffs=(1,)) -> RationalFunction:
        n, a = _zpoly_from_rationals(num_coeffs)
        d, b = _zpoly_from_rationals(den_coeffs)
        return RationalFunction(n * b, d * a)

    def parse(self, text: str) -> RationalFunction:
        s = text.replace(" ", "")
        depth, cut = 0, -1
        for i, ch in enumerate(s):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "/" and depth == 0 and (i == 0 or s[i - 1] == ")" or (i + 1 < len(s) and s[i + 1] == "(")):
                cut = i
        if cut < 0:
            return self.from_polys(_parse_poly(s.strip("()") if s.startswith("(") else s, "d"))
        num, den = s[:cut], s[cut + 1 :]
        return self.from_polys(_parse_poly(num.strip("()"), "d"), _parse_poly(den.strip("()"), "d"))

    def to_json(self, value):
        n, d = _normalised_coeffs(value.num, value.den)
        return {"num": [str(c) for c in n], "den": [str(c) for c in d]}

    def from_json(self, data):
        if isinstance(data, str):
            return self.parse(data)
        return self.from_polys(data["num"], data["den"])

    def multiply_terms(self, a_terms, b_terms, compose):
        # Put each factor over a common denominator so that the inner loop only
        # multiplies and adds integer polynomials; reduce once at the end.
        def common(terms):
            den = flint.fmpz_poly([1])
            for c in terms.values():
                if c.den != den:
                    den = den * c.den // den.gcd(c.den)
            return den, {d: c.num * (den // c.den) for d, c in terms.items()}

        den_a, num_a = common(a_terms)
        den_b, num_b = common(b_terms)
        acc: dict = {}
        get = acc.get
        for d1, p1 in num_a.items():
            for d2, p2 in num_b.items():
                d3, loops = compose(d1, d2)
                value = p1 * p2
                if loops:
                    value = value.left_shift(loops)
                prev = get(d3)
                acc[d3] = value if prev is None else prev + value
        den = den_a * den_b
        return {d: RationalFunction(v, den) for d, v in acc.items() if not v.is_zero()}


# ---------------------------------------------------------------------------
# generic helpers


def sign_of(value) -> int:
    """Exact sign of a rational or real cyclotomic scalar."""
    if isinstance(value, (int, Fraction)):
        return _sign(value)
    if isinstance(value, AlgebraicReal):
        return value.field.sign(value)
    if isinstance(value, GaussianRational):
        if value.im:
            raise ValueError("sign of a non-real Gaussian rational")
        return _sign(value.re)
    raise TypeError(f"no ordering available for {type(value).__name__}")


def quantum_integer(k: int, delta):
    """``[k]`` from ``[0] = 0``, ``[1] = 1``, ``[k] = delta[k-1] - [k-2]``.

    ``delta`` may be a field element or a :class:`ScalarField`, in which case
    the field's own delta is used.
    """
    if k < 0:
        raise ValueError("quantum integers are indexed from 0")
    if isinstance(delta, ScalarField):
        delta = delta.delta
    zero = delta * 0
    prev, cur = zero, zero + 1
    if k == 0:
        return zero
    for _ in range(k - 1):
        prev, cur = cur, delta * cur - prev
    return cur


@lru_cache(maxsize=None)
def real_cyclotomic(l: int) -> RealCyclotomic:
    """Shared field instance for ``Q(2cos(pi/l))``."""
    return RealCyclotomic(l)


@dataclass(frozen=True)
class ThresholdValue:
    """The threshold ``s_k = 1/(4cos^2(pi/k))``, held exactly in ``Q(2cos(pi/k))``."""

    k: int
    exact: Fraction | None
    approx: tuple[Fraction, Fraction]
    value: object = dc_field(compare=False, repr=False)

    @property
    def field(self) -> RealCyclotomic:
        return real_cyclotomic(self.k)

    def interval(self, width: Fraction = Fraction(1, 10**30)) -> tuple[Fraction, Fraction]:
        if self.exact is not None:
            return self.exact, self.exact
        f = self.field
        lo, hi = f.refine(width / 16)
        enc = f.enclosure(self.value)
        while enc[1] - enc[0] >= width:
            lo, hi = f.refine((hi - lo) / 16)
            enc = f.enclosure(self.value)
        return enc

    def __float__(self):
        lo, hi = self.interval(Fraction(1, 10**20))
        return float((lo + hi) / 2)

    def describe(self) -> dict:
        lo, hi = self.approx
        out = {"k": self.k, "approx": [str(lo), str(hi)]}
        out["exact"] = None if self.exact is None else str(self.exact)
        return out


def special_threshold(k: int) -> ThresholdValue:
    if k < 3:
        raise ValueError("thresholds s_k are defined for k >= 3")
    f = real_cyclotomic(k)
    value = 1 / (f.delta * f.delta)
    exact = value if isinstance(value, Fraction) else value.rational_value()
    if exact is not None:
        approx = (exact, exact)
    else:
        approx = f.enclosure(value)
        if approx[1] - approx[0] > Fraction(1, 10**12):
            f.refine(Fraction(1, 10**14))
            approx = f.enclosure(value)
    return ThresholdValue(k=k, exact=exact, approx=approx, value=value)
