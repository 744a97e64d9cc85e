"""Exact real arithmetic for angular-momentum amplitudes.

Two value types live here:

* :class:`SignedSqrtRational` -- a single signed square root of a rational,
  ``sign * sqrt(p/q)``.  Every Clebsch-Gordan coefficient has this form.
* :class:`RadicalSum` -- a finite sum ``sum_d c_d * sqrt(d)`` with rational
  ``c_d`` and distinct squarefree ``d``.  This is a field, so linear maps on
  states (basis changes, parity) can be applied to arbitrary superpositions
  without ever leaving exact arithmetic.

:class:`HalfInt` stores spin projections as twice their value.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache, total_ordering
from numbers import Rational
from typing import Iterable, Iterator, Union

import gmpy2
from gmpy2 import mpq

__all__ = [
    "HalfInt",
    "SignedSqrtRational",
    "RadicalSum",
    "IncommensurableRadicals",
    "ParseError",
    "multiply",
    "add",
    "square",
    "to_float",
    "format_value",
    "parse",
    "squarefree_split",
    "NUMBER_SCHEMA",
]


class IncommensurableRadicals(ArithmeticError):
    """Raised when two square roots cannot be summed into a single root."""


class ParseError(ValueError):
    """Raised for strings outside the exact-number grammar."""


@total_ordering
class HalfInt:
    """An integer or half-integer, stored as ``twice`` its value."""

    __slots__ = ("twice",)

    def __init__(self, twice: int):
        if isinstance(twice, bool) or not isinstance(twice, int):
            raise TypeError(f"HalfInt needs an int twice-value, got {twice!r}")
        object.__setattr__(self, "twice", twice)

    def __setattr__(self, name, value):
        raise AttributeError("HalfInt is immutable")

    @classmethod
    def coerce(cls, value) -> HalfInt:
        """Build from a HalfInt, int, Fraction, float or string like ``"-3/2"``."""
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, bool):
            raise TypeError("bool is not a spin value")
        if isinstance(value, int):
            return cls(2 * value)
        if isinstance(value, str):
            value = Fraction(value.strip())
        if isinstance(value, float):
            if not (2 * value).is_integer():
                raise ValueError(f"{value} is not a multiple of 1/2")
            return cls(int(2 * value))
        if isinstance(value, Rational):
            doubled = Fraction(value) * 2
            if doubled.denominator != 1:
                raise ValueError(f"{value} is not a multiple of 1/2")
            return cls(int(doubled))
        raise TypeError(f"cannot interpret {value!r} as a half-integer")

    @property
    def value(self) -> Fraction:
        return Fraction(self.twice, 2)

    def __float__(self) -> float:
        return self.twice / 2

    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    def __add__(self, other):
        if not isinstance(other, HalfInt):
            return NotImplemented
        return HalfInt(self.twice + other.twice)

    def __sub__(self, other):
        if not isinstance(other, HalfInt):
            return NotImplemented
        return HalfInt(self.twice - other.twice)

    def __neg__(self) -> HalfInt:
        return HalfInt(-self.twice)

    def __abs__(self) -> HalfInt:
        return HalfInt(abs(self.twice))

    def __eq__(self, other):
        if isinstance(other, HalfInt):
            return self.twice == other.twice
        return NotImplemented

    def __lt__(self, other):
        if isinstance(other, HalfInt):
            return self.twice < other.twice
        return NotImplemented

    def __hash__(self):
        return hash(("HalfInt", self.twice))

    def __str__(self) -> str:
        if self.twice % 2 == 0:
            return str(self.twice // 2)
        return f"{self.twice}/2"

    def __repr__(self) -> str:
        return f"HalfInt({self})"


def _is_square(n: int) -> int | None:
    """Integer square root of ``n`` if ``n`` is a perfect square, else None."""
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


class SignedSqrtRational:
    """The exact real ``sign * sqrt(num/den)``.

    Fields are canonical: ``gcd(num, den) == 1``, ``den > 0`` and
    ``sign == 0`` exactly when ``num == 0`` (zero is ``(0, 0, 1)``).
    """

    __slots__ = ("sign", "num", "den")

    def __init__(self, sign: int, num: int, den: int = 1):
        num, den = int(num), int(den)
        if den == 0:
            raise ZeroDivisionError("radicand denominator is zero")
        if den < 0:
            num, den = -num, -den
        if num < 0:
            raise ValueError("radicand must be nonnegative")
        if sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or +1, got {sign!r}")
        if num == 0:
            sign, den = 0, 1
        elif sign == 0:
            raise ValueError("sign 0 with a nonzero radicand")
        else:
            g = math.gcd(num, den)
            if g != 1:
                num //= g
                den //= g
        object.__setattr__(self, "sign", sign)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("SignedSqrtRational is immutable")

    # -- constructors --------------------------------------------------

    @classmethod
    def zero(cls) -> SignedSqrtRational:
        return cls(0, 0, 1)

    @classmethod
    def one(cls) -> SignedSqrtRational:
        return cls(1, 1, 1)

    @classmethod
    def from_rational(cls, value) -> SignedSqrtRational:
        """The rational ``value`` itself, stored as the root of its square."""
        q = Fraction(value)
        sign = (q > 0) - (q < 0)
        return cls(sign, q.numerator ** 2, q.denominator ** 2)

    @classmethod
    def sqrt(cls, value, sign: int = 1) -> SignedSqrtRational:
        """``sign * sqrt(value)`` for a nonnegative rational ``value``."""
        q = Fraction(value)
        if q == 0:
            return cls.zero()
        return cls(sign, q.numerator, q.denominator)

    # -- views ---------------------------------------------------------

    @property
    def radicand(self) -> Fraction:
        return Fraction(self.num, self.den)

    def rational_value(self) -> Fraction | None:
        """The value as a Fraction when the radicand is a rational square."""
        a, b = _is_square(self.num), _is_square(self.den)
        if a is None or b is None:
            return None
        return Fraction(self.sign * a, b)

    def __bool__(self) -> bool:
        return self.sign != 0

    def __float__(self) -> float:
        return to_float(self)

    def __eq__(self, other):
        if isinstance(other, SignedSqrtRational):
            return (self.sign, self.num, self.den) == (other.sign, other.num, other.den)
        if isinstance(other, (int, Rational)) and not isinstance(other, bool):
            return self == SignedSqrtRational.from_rational(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.sign, self.num, self.den))

    def __repr__(self) -> str:
        return f"SignedSqrtRational({format_value(self)!r})"

    def __str__(self) -> str:
        return format_value(self)

    # -- arithmetic ----------------------------------------------------

    def __neg__(self) -> SignedSqrtRational:
        return SignedSqrtRational(-self.sign, self.num, self.den)

    def __abs__(self) -> SignedSqrtRational:
        return SignedSqrtRational(abs(self.sign), self.num, self.den)

    def __mul__(self, other):
        other = _as_ssr(other)
        if other is None:
            return NotImplemented
        return multiply(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_ssr(other)
        if other is None:
            return NotImplemented
        return multiply(self, other.reciprocal())

    def reciprocal(self) -> SignedSqrtRational:
        if not self.sign:
            raise ZeroDivisionError("reciprocal of zero")
        return SignedSqrtRational(self.sign, self.den, self.num)

    def __add__(self, other):
        other = _as_ssr(other)
        if other is None:
            return NotImplemented
        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_ssr(other)
        if other is None:
            return NotImplemented
        return add(self, -other)

    def __rsub__(self, other):
        other = _as_ssr(other)
        if other is None:
            return NotImplemented
        return add(other, -self)

    # -- serialization -------------------------------------------------

    def to_json(self) -> dict:
        return {"sign": self.sign, "num": str(self.num), "den": str(self.den)}

    @classmethod
    def from_json(cls, obj: dict) -> SignedSqrtRational:
        try:
            return cls(int(obj["sign"]), int(obj["num"]), int(obj["den"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad exact-number JSON {obj!r}: {exc}") from None


def _as_ssr(x) -> SignedSqrtRational | None:
    if isinstance(x, SignedSqrtRational):
        return x
    if isinstance(x, bool):
        return None
    if isinstance(x, (int, Rational)):
        return SignedSqrtRational.from_rational(x)
    return None


def multiply(x: SignedSqrtRational, y: SignedSqrtRational) -> SignedSqrtRational:
    """Exact product; the radicands multiply."""
    if not x.sign or not y.sign:
        return SignedSqrtRational.zero()
    # cross-cancel before multiplying so the gcd in __init__ sees small numbers
    g1 = math.gcd(x.num, y.den)
    g2 = math.gcd(y.num, x.den)
    return SignedSqrtRational(
        x.sign * y.sign,
        (x.num // g1) * (y.num // g2),
        (x.den // g2) * (y.den // g1),
    )


def add(x: SignedSqrtRational, y: SignedSqrtRational) -> SignedSqrtRational:
    """Exact sum of two commensurable roots.

    Raises :class:`IncommensurableRadicals` when ``x/y`` is not rational.
    """
    if not y.sign:
        return x
    if not x.sign:
        return y
    # y = x * (a/b) with a/b = sqrt(y.rad / x.rad), which must be rational
    rn = y.num * x.den
    rd = y.den * x.num
    g = math.gcd(rn, rd)
    rn //= g
    rd //= g
    a, b = _is_square(rn), _is_square(rd)
    if a is None or b is None:
        raise IncommensurableRadicals(
            f"{format_value(x)} + {format_value(y)} is not a single square root"
        )
    c = x.sign * b + y.sign * a
    if c == 0:
        return SignedSqrtRational.zero()
    return SignedSqrtRational(1 if c > 0 else -1, x.num * c * c, x.den * b * b)


def square(x: SignedSqrtRational) -> Fraction:
    return Fraction(x.num, x.den) if x.sign else Fraction(0)


def to_float(x: SignedSqrtRational) -> float:
    """Double nearest to the exact value (within one ulp)."""
    if not x.sign:
        return 0.0
    p, q = x.num, x.den
    # fixed-point sqrt carrying ~64 significant bits, then one rounding
    shift = 64 - (p.bit_length() - q.bit_length()) // 2
    if shift >= 0:
        n = (p << (2 * shift)) // q
    else:
        n = p // (q << (-2 * shift))
    return x.sign * math.ldexp(float(math.isqrt(n)), -shift)


def format_value(x: SignedSqrtRational) -> str:
    """Canonical text: ``0``, ``2``, ``-1/2``, ``sqrt(2)``, ``-sqrt(1/3)``."""
    if not x.sign:
        return "0"
    prefix = "-" if x.sign < 0 else ""
    q = x.rational_value()
    if q is not None:
        return prefix + str(abs(q))
    body = str(x.num) if x.den == 1 else f"{x.num}/{x.den}"
    return f"{prefix}sqrt({body})"


_GRAMMAR = re.compile(
    r"^\s*(?P<neg>-)?\s*(?:sqrt\(\s*(?P<rp>\d+)\s*(?:/\s*(?P<rq>\d+)\s*)?\)"
    r"|(?P<p>\d+)\s*(?:/\s*(?P<q>\d+))?)\s*$"
)


def parse(text: str) -> SignedSqrtRational:
    """Inverse of :func:`format_value`."""
    m = _GRAMMAR.match(text)
    if m is None:
        raise ParseError(f"not an exact number: {text!r}")
    sign = -1 if m["neg"] else 1
    try:
        if m["rp"] is not None:
            return SignedSqrtRational.sqrt(Fraction(int(m["rp"]), int(m["rq"] or 1)), sign)
        return SignedSqrtRational.from_rational(sign * Fraction(int(m["p"]), int(m["q"] or 1)))
    except ZeroDivisionError:
        raise ParseError(f"zero denominator in {text!r}") from None


# ---------------------------------------------------------------------------
# squarefree decomposition

def _small_primes(limit: int) -> list[int]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i, flag in enumerate(sieve) if flag]


_PRIMES = _small_primes(1 << 16)
_TRIAL_LIMIT_SQ = (1 << 16) ** 2


@lru_cache(maxsize=1 << 16)
def squarefree_split(n: int) -> tuple[int, int]:
    """Return ``(f, d)`` with ``n == f*f*d`` and ``d`` squarefree."""
    if n <= 0:
        raise ValueError("squarefree_split needs a positive integer")
    f, d = 1, 1
    for p in _PRIMES:
        if n == 1:
            break
        if p * p > n:
            # what is left is 1 or a single prime
            d *= n
            n = 1
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            f *= p ** (e // 2)
            if e % 2:
                d *= p
    if n > 1:
        r = _is_square(n)
        if r is not None:
            f *= r
        elif n < _TRIAL_LIMIT_SQ or gmpy2.is_prime(n):
            d *= n
        else:
            from sympy import factorint

            for p, e in factorint(n).items():
                f *= p ** (e // 2)
                if e % 2:
                    d *= p
    return f, d


# ---------------------------------------------------------------------------
# the radical field

Scalar = Union["RadicalSum", SignedSqrtRational, int, Fraction]


class RadicalSum:
    """Exact ``sum_d c_d * sqrt(d)`` over distinct squarefree ``d``.

    Square roots of distinct squarefree integers are linearly independent
    over the rationals, so the term map is canonical and ``==`` is exact.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: dict | None = None):
        clean = {}
        if terms:
            for d, c in terms.items():
                if c:
                    clean[int(d)] = mpq(c)
        self._terms = clean
        self._hash = None

    @classmethod
    def _wrap(cls, terms: dict) -> RadicalSum:
        """Adopt an already-canonical dict (squarefree keys, mpq values)."""
        obj = cls.__new__(cls)
        obj._terms = {d: c for d, c in terms.items() if c}
        obj._hash = None
        return obj

    @classmethod
    def coerce(cls, value: Scalar) -> RadicalSum:
        if isinstance(value, RadicalSum):
            return value
        if isinstance(value, SignedSqrtRational):
            return _from_ssr(value)
        if isinstance(value, (int, Rational)) and not isinstance(value, bool):
            q = mpq(value)
            return cls._wrap({1: q})
        raise TypeError(f"cannot use {value!r} as an exact amplitude")

    @property
    def terms(self) -> dict[int, mpq]:
        return dict(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_rational(self) -> bool:
        return not self._terms or set(self._terms) == {1}

    def rational(self) -> Fraction:
        """The value as a Fraction; raises if an irrational part remains."""
        if not self.is_rational():
            raise IncommensurableRadicals(f"{self} is not rational")
        c = self._terms.get(1, mpq(0))
        return Fraction(int(c.numerator), int(c.denominator))

    def as_signed_sqrt(self) -> SignedSqrtRational:
        """Collapse to a single root; raises if more than one radical remains."""
        if not self._terms:
            return SignedSqrtRational.zero()
        if len(self._terms) > 1:
            raise IncommensurableRadicals(f"{self} has {len(self._terms)} radical terms")
        ((d, c),) = self._terms.items()
        return _term_to_ssr(d, c)

    def radicals(self) -> Iterator[SignedSqrtRational]:
        """Terms as single roots, ordered by radical."""
        for d in sorted(self._terms):
            yield _term_to_ssr(d, self._terms[d])

    def __float__(self) -> float:
        # float(mpq) rounds correctly; sqrt of a squarefree int is exact to 1 ulp
        return math.fsum(float(c) * math.sqrt(d) for d, c in self._terms.items())

    def __eq__(self, other):
        if isinstance(other, RadicalSum):
            return self._terms == other._terms
        try:
            other = RadicalSum.coerce(other)
        except TypeError:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __neg__(self) -> RadicalSum:
        return RadicalSum._wrap({d: -c for d, c in self._terms.items()})

    def __add__(self, other):
        try:
            other = RadicalSum.coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for d, c in other._terms.items():
            out[d] = out.get(d, 0) + c
        return RadicalSum._wrap(out)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            other = RadicalSum.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return RadicalSum.coerce(other) - self

    def __mul__(self, other):
        try:
            other = RadicalSum.coerce(other)
        except TypeError:
            return NotImplemented
        out: dict[int, mpq] = {}
        accumulate_product(out, self, other)
        return RadicalSum._wrap(out)

    __rmul__ = __mul__

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for t in self.radicals():
            s = format_value(t)
            if parts:
                parts.append(f"- {s[1:]}" if s.startswith("-") else f"+ {s}")
            else:
                parts.append(s)
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"RadicalSum({str(self)!r})"

    def to_json(self) -> dict:
        """Single-root JSON when possible, else ``{"terms": [...]}``."""
        if len(self._terms) <= 1:
            return self.as_signed_sqrt().to_json()
        return {"terms": [t.to_json() for t in self.radicals()]}

    @classmethod
    def from_json(cls, obj: dict) -> RadicalSum:
        if isinstance(obj, dict) and "terms" in obj:
            total = cls()
            for t in obj["terms"]:
                total = total + SignedSqrtRational.from_json(t)
            return total
        return cls.coerce(SignedSqrtRational.from_json(obj))


def accumulate_product(out: dict, x: RadicalSum, y: RadicalSum) -> None:
    """In place ``out += x*y`` on a raw ``{squarefree: mpq}`` term map."""
    gcd = math.gcd
    for d1, c1 in x._terms.items():
        for d2, c2 in y._terms.items():
            if d1 == 1:
                d, c = d2, c1 * c2
            elif d2 == 1:
                d, c = d1, c1 * c2
            else:
                g = gcd(d1, d2)
                d = (d1 // g) * (d2 // g)
                c = c1 * c2 * g
            out[d] = out.get(d, 0) + c


def accumulate(out: dict, x: RadicalSum, scale: int = 1) -> None:
    """In place ``out += scale*x``."""
    for d, c in x._terms.items():
        out[d] = out.get(d, 0) + (c if scale == 1 else scale * c)


def _from_ssr(x: SignedSqrtRational) -> RadicalSum:
    if not x.sign:
        return RadicalSum._wrap({})
    # sqrt(p/q) = fp/(fq*dq) * sqrt(dp*dq) with p = fp^2 dp, q = fq^2 dq
    fp, dp = squarefree_split(x.num)
    fq, dq = squarefree_split(x.den)
    return RadicalSum._wrap({dp * dq: mpq(x.sign * fp, fq * dq)})


def _term_to_ssr(d: int, c) -> SignedSqrtRational:
    n, q = int(c.numerator), int(c.denominator)
    sign = 1 if n > 0 else -1
    return SignedSqrtRational(sign, n * n * d, q * q)


def sum_radicals(values: Iterable[Scalar]) -> RadicalSum:
    out: dict[int, mpq] = {}
    for v in values:
        accumulate(out, RadicalSum.coerce(v))
    return RadicalSum._wrap(out)


_SSR_JSON = {
    "type": "object",
    "required": ["sign", "num", "den"],
    "properties": {
        "sign": {"enum": [-1, 0, 1]},
        "num": {"type": "string", "pattern": "^[0-9]+$"},
        "den": {"type": "string", "pattern": "^[1-9][0-9]*$"},
    },
}

#: JSON schema for an exact amplitude: one root, or a sum of roots.
NUMBER_SCHEMA = {
    "oneOf": [
        _SSR_JSON,
        {
            "type": "object",
            "required": ["terms"],
            "properties": {"terms": {"type": "array", "items": _SSR_JSON, "minItems": 2}},
        },
    ]
}
