"""Exact arithmetic kernel.

Scalars are ``gmpy2.mpq`` rationals (aliased ``BigRational``).  On top of them
this module provides dense univariate polynomials (:class:`Poly`), reduced
rational functions (:class:`RatFunc`) and truncated expansions at infinity
(:class:`LaurentTail`).  The indeterminate is usually the polarization
parameter ``c``, but nothing here depends on that; the Riemann-Roch code uses
the same classes with indeterminate ``k``.
"""

from __future__ import annotations

import numbers
import os
import re
from functools import lru_cache
from typing import Iterable, Sequence

import gmpy2

BigRational = gmpy2.mpq

__all__ = [
    "BigRational",
    "Q",
    "qstr",
    "parse_rational",
    "factorial",
    "binomial",
    "binomial_in_k",
    "Poly",
    "RatFunc",
    "LaurentTail",
    "laurent_expand",
    "PoleError",
    "TruncationError",
]


class PoleError(ArithmeticError):
    """Evaluation of a rational function at a root of its denominator."""


class TruncationError(ArithmeticError):
    """A Laurent coefficient beyond the stored truncation order was requested."""


_ZERO = BigRational(0)
_ONE = BigRational(1)
_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


_MPQ = type(BigRational(0))
_FAST_SCALARS = (_MPQ, int)


def Q(x, den=None) -> BigRational:
    """Coerce ``x`` (int, rational, or ``"p/q"`` string) to a BigRational."""
    t = type(x)
    if den is None and t is _MPQ:
        return x
    if den is not None:
        return BigRational(x, den)
    if isinstance(x, str):
        return parse_rational(x)
    if isinstance(x, numbers.Rational):
        return BigRational(x)
    raise TypeError(f"not an exact rational: {x!r}")


def parse_rational(text: str) -> BigRational:
    """Parse ``"p"`` or ``"p/q"``; decimals and floats are rejected."""
    m = _RATIONAL_RE.match(text)
    if not m:
        raise ValueError(f"expected an exact rational 'p' or 'p/q', got {text!r}")
    num, den = m.group(1), m.group(2)
    if den is not None and int(den) == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return BigRational(int(num), int(den) if den else 1)


def qstr(x) -> str:
    """Serialize an exact rational as ``"p/q"`` (or ``"p"`` when q = 1)."""
    return str(Q(x))


def _is_scalar(x) -> bool:
    return type(x) in _FAST_SCALARS or isinstance(x, numbers.Rational)


# -- integer combinatorics ----------------------------------------------------

def _factorial_cap() -> int:
    try:
        return int(os.environ.get("FUTAKI_FACTORIAL_CAP", "256"))
    except ValueError:
        return 256


_FACT_CAP = _factorial_cap()
_fact_table = [1]


def factorial(n: int) -> int:
    """Exact ``n!``; values up to FUTAKI_FACTORIAL_CAP are memoized."""
    if n < 0:
        raise ValueError("factorial of a negative integer")
    if n <= _FACT_CAP:
        while len(_fact_table) <= n:
            _fact_table.append(_fact_table[-1] * len(_fact_table))
        return _fact_table[n]
    return int(gmpy2.fac(n))


def binomial(n: int, k: int) -> int:
    """Exact C(n, k); zero when ``k < 0`` or ``k > n`` (for ``n >= 0``)."""
    if k < 0:
        return 0
    if n >= 0 and k > n:
        return 0
    return int(gmpy2.comb(n, k)) if n >= 0 else int(gmpy2.bincoef(n, k))


# -- polynomials ---------------------------------------------------------------

def _trim(coeffs: list) -> tuple:
    n = len(coeffs)
    while n and coeffs[n - 1] == 0:
        n -= 1
    return tuple(coeffs[:n])


class Poly:
    """Dense univariate polynomial with BigRational coefficients.

    ``coeffs[i]`` is the coefficient of ``x**i``; the zero polynomial has no
    coefficients.  Instances are immutable and hashable.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        self.coeffs = _trim([Q(a) for a in coeffs])

    @classmethod
    def _raw(cls, coeffs: tuple) -> "Poly":
        p = cls.__new__(cls)
        p.coeffs = coeffs
        return p

    @classmethod
    def from_trusted(cls, coeffs: Sequence) -> "Poly":
        """Build from coefficients that are already BigRationals (no coercion)."""
        t = tuple(coeffs)
        if t and t[-1] == 0:
            t = _trim(list(t))
        p = object.__new__(cls)
        p.coeffs = t
        return p

    @classmethod
    def const(cls, a) -> "Poly":
        return cls((a,))

    @classmethod
    def var(cls) -> "Poly":
        """The indeterminate itself."""
        return cls((0, 1))

    @classmethod
    def coerce(cls, x) -> "Poly":
        if isinstance(x, Poly):
            return x
        if _is_scalar(x):
            return cls._raw(_trim([Q(x)]))
        raise TypeError(f"cannot coerce {type(x).__name__} to Poly")

    # -- structure --
    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lead(self) -> BigRational:
        return self.coeffs[-1] if self.coeffs else _ZERO

    def __getitem__(self, i: int) -> BigRational:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return _ZERO

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if _is_scalar(other):
            return self.coeffs == _trim([Q(other)])
        if isinstance(other, RatFunc):
            return other == self
        return NotImplemented

    def __hash__(self):
        return hash(("Poly", self.coeffs))

    def __repr__(self):
        return f"Poly([{', '.join(str(a) for a in self.coeffs)}])"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            a = self.coeffs[i]
            if a == 0:
                continue
            mono = "" if i == 0 else ("c" if i == 1 else f"c^{i}")
            if mono and a == 1:
                terms.append(mono)
            elif mono and a == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{a}*{mono}" if mono else str(a))
        return " + ".join(terms).replace("+ -", "- ")

    # -- ring operations --
    def __neg__(self):
        return Poly._raw(tuple(-a for a in self.coeffs))

    def __add__(self, other):
        if isinstance(other, RatFunc):
            return NotImplemented
        try:
            other = Poly.coerce(other)
        except TypeError:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, x in enumerate(b):
            out[i] = out[i] + x
        return Poly._raw(_trim(out))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, RatFunc):
            return NotImplemented
        try:
            other = Poly.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if _is_scalar(other):
            s = Q(other)
            if s == 0:
                return Poly._raw(())
            return Poly._raw(tuple(a * s for a in self.coeffs))
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly._raw(())
        if len(a) == 2 and len(b) == 2:
            # affine times affine, the common case for moment entries
            return Poly._raw((a[0] * b[0], a[0] * b[1] + a[1] * b[0], a[1] * b[1]))
        out = [_ZERO] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                out[i + j] += x * y
        return Poly._raw(_trim(out))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = Poly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __truediv__(self, other):
        if _is_scalar(other):
            s = Q(other)
            if s == 0:
                raise ZeroDivisionError("polynomial divided by zero")
            return Poly._raw(tuple(a / s for a in self.coeffs))
        if isinstance(other, (Poly, RatFunc)):
            return RatFunc(self, 1) / other
        return NotImplemented

    def __rtruediv__(self, other):
        if _is_scalar(other):
            return RatFunc(other, self)
        return NotImplemented

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        """Euclidean division over Q."""
        other = Poly.coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        lead_inv = 1 / other.lead()
        if len(rem) - 1 < db:
            return Poly._raw(()), self
        quot = [_ZERO] * (len(rem) - db)
        bc = other.coeffs
        for i in range(len(rem) - 1, db - 1, -1):
            t = rem[i] * lead_inv
            if t == 0:
                continue
            quot[i - db] = t
            for j in range(db + 1):
                rem[i - db + j] -= t * bc[j]
        return Poly._raw(_trim(quot)), Poly._raw(_trim(rem[:db]))

    def exact_div(self, other) -> "Poly":
        """Quotient of a division known to be exact (raises otherwise)."""
        if _is_scalar(other):
            return self / other
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError("inexact polynomial division")
        return q

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self / self.lead()

    def gcd(self, other: "Poly") -> "Poly":
        """Monic gcd by the Euclidean algorithm over Q."""
        a, b = self, Poly.coerce(other)
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        return a.monic()

    # -- calculus / evaluation --
    def __call__(self, x):
        """Horner evaluation; ``x`` may be a scalar, Poly or RatFunc."""
        acc = _ZERO
        for a in reversed(self.coeffs):
            acc = acc * x + a
        return acc

    def eval(self, x):
        return self(x)

    def derivative(self) -> "Poly":
        return Poly._raw(_trim([i * a for i, a in enumerate(self.coeffs)][1:]))

    def to_json(self) -> list[str]:
        return [qstr(a) for a in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> "Poly":
        return cls(parse_rational(s) for s in data)


# -- rational functions --------------------------------------------------------

class RatFunc:
    """Reduced quotient ``num/den`` of polynomials.

    Canonical form: ``gcd(num, den) = 1`` and ``den`` is monic (so its leading
    coefficient is positive).  Zero is ``0/1``.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        num = Poly.coerce(num)
        den = Poly.coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num, self.den = num, Poly.const(1)
            return
        if den.degree > 0:
            g = num.gcd(den)
            if g.degree > 0:
                num = num.exact_div(g)
                den = den.exact_div(g)
        lc = den.lead()
        if lc != 1:
            num, den = num / lc, den / lc
        self.num, self.den = num, den

    @classmethod
    def coerce(cls, x) -> "RatFunc":
        if isinstance(x, RatFunc):
            return x
        return cls(x, 1)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den.degree == 0

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        if isinstance(other, Poly) or _is_scalar(other):
            return self.is_poly() and self.num == other
        return NotImplemented

    def __hash__(self):
        return hash(("RatFunc", self.num, self.den))

    def __repr__(self):
        return f"RatFunc({self.num!r}, {self.den!r})"

    def __str__(self):
        if self.is_poly():
            return str(self.num)
        return f"({self.num}) / ({self.den})"

    def __neg__(self):
        out = RatFunc.__new__(RatFunc)
        out.num, out.den = -self.num, self.den
        return out

    def __add__(self, other):
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return RatFunc.coerce(other) / self

    def __call__(self, x):
        if _is_scalar(x):
            d = self.den(x)
            if d == 0:
                raise PoleError(f"evaluation at a pole c = {qstr(x)}")
            return self.num(x) / d
        return self.num(x) / self.den(x)

    def eval(self, x):
        return self(x)

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "RatFunc":
        return cls(Poly.from_json(data["num"]), Poly.from_json(data["den"]))


# -- expansions at infinity ----------------------------------------------------

class LaurentTail:
    """Truncated expansion ``sum_{start <= i <= order} a_i c**(-i)`` at infinity.

    ``start`` may be negative (a pole at infinity of order ``-start``).
    """

    __slots__ = ("start_power", "coeffs", "truncation_order")

    def __init__(self, start_power: int, coeffs: Iterable, truncation_order: int):
        self.start_power = start_power
        self.coeffs = tuple(Q(a) for a in coeffs)
        self.truncation_order = truncation_order
        if len(self.coeffs) != max(0, truncation_order - start_power + 1):
            raise ValueError("coefficient count does not match the power range")

    @classmethod
    def from_coeffs(cls, coeffs: dict, truncation_order: int) -> "LaurentTail":
        """Build from ``{power: coeff}``; unspecified powers are zero."""
        start = min([i for i in coeffs] + [truncation_order + 1])
        start = min(start, 0)
        return cls(start, [coeffs.get(i, 0) for i in range(start, truncation_order + 1)], truncation_order)

    def coeff(self, i: int) -> BigRational:
        if i > self.truncation_order:
            raise TruncationError(f"c^-{i} is beyond truncation order {self.truncation_order}")
        if i < self.start_power:
            return _ZERO
        return self.coeffs[i - self.start_power]

    def truncate(self, order: int) -> "LaurentTail":
        if order > self.truncation_order:
            raise TruncationError("cannot extend a truncated expansion")
        n = max(0, order - self.start_power + 1)
        return LaurentTail(self.start_power, self.coeffs[:n], order)

    def leading(self) -> tuple[int, BigRational]:
        """(power i, coefficient) of the first nonzero term, or (None, 0)."""
        for k, a in enumerate(self.coeffs):
            if a != 0:
                return self.start_power + k, a
        return None, _ZERO

    def eval(self, c) -> BigRational:
        c = Q(c)
        return sum((a * c ** (-(self.start_power + k)) for k, a in enumerate(self.coeffs)), _ZERO)

    def __eq__(self, other):
        if not isinstance(other, LaurentTail):
            return NotImplemented
        if self.truncation_order != other.truncation_order:
            return False
        lo = min(self.start_power, other.start_power)
        return all(self.coeff(i) == other.coeff(i) for i in range(lo, self.truncation_order + 1))

    def __hash__(self):
        lead, _ = self.leading()
        return hash((lead, self.truncation_order))

    def __repr__(self):
        return f"LaurentTail(start={self.start_power}, coeffs={[str(a) for a in self.coeffs]}, order={self.truncation_order})"

    def to_json(self) -> dict:
        return {
            "start_power": self.start_power,
            "coeffs": [qstr(a) for a in self.coeffs],
            "truncation_order": self.truncation_order,
        }

    @classmethod
    def from_json(cls, data: dict) -> "LaurentTail":
        return cls(data["start_power"], [parse_rational(s) for s in data["coeffs"]], data["truncation_order"])


def laurent_expand(f, order: int) -> LaurentTail:
    """Expand ``f`` (RatFunc, Poly or scalar) in powers ``c**(-i)`` up to ``i = order``.

    With ``x = 1/c``, ``f = c**(n-m) * N~(x) / D~(x)`` where ``N~, D~`` are the
    reversed coefficient lists; ``D~(0)`` is the leading coefficient of the
    denominator, so plain power-series division applies.
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    f = RatFunc.coerce(f)
    if f.is_zero():
        return LaurentTail(0, [_ZERO] * (order + 1), order)
    num, den = f.num, f.den
    if den.lead() == 0:
        raise TruncationError("denominator has vanishing leading coefficient")
    start = den.degree - num.degree
    nrev = list(reversed(num.coeffs))
    drev = list(reversed(den.coeffs))
    nterms = order - start + 1
    if nterms <= 0:
        return LaurentTail(start, [], order) if start <= order else LaurentTail(order + 1, [], order)
    inv_d0 = 1 / drev[0]
    out = []
    for k in range(nterms):
        acc = nrev[k] if k < len(nrev) else _ZERO
        for j in range(1, min(k, len(drev) - 1) + 1):
            acc -= drev[j] * out[k - j]
        out.append(acc * inv_d0)
    return LaurentTail(start, out, order)


@lru_cache(maxsize=None)
def binomial_in_k(a: int, b: int) -> Poly:
    """``C(a + k, k - b)`` as a polynomial in ``k`` (valid for ``k >= b``).

    ``C(a + k, k - b) = C(a + k, a + b)`` is a falling product of ``a + b``
    linear factors divided by ``(a + b)!``.
    """
    n = a + b
    if n < 0:
        return Poly()
    out = Poly.const(1)
    for i in range(n):
        out = out * Poly((a - i, 1))
    return out / factorial(n)
