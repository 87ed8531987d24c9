"""Exact coefficients: rational functions in one indeterminate ``q``.

A :class:`Scalar` stores a numerator and denominator in ``Z[q]`` kept in
lowest terms with a positive leading denominator coefficient, so two
scalars are equal exactly when their stored polynomials agree.  Laurent
polynomials are the scalars whose denominator is a monomial ``c*q^k``.

The quantum integer helpers accept an optional ``q`` argument.  Passing a
rational number (``flint.fmpq``) instead of the default symbolic ``Q``
evaluates the same expression at that point, which is how the specialized
checking mode is driven.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache

from flint import fmpq, fmpz, fmpz_poly

__all__ = [
    "Scalar",
    "Q",
    "ONE",
    "ZERO",
    "parse_scalar",
    "qint",
    "qnum",
    "qfactorial",
    "qbinom",
    "bracket_eval",
    "specialize",
    "is_laurent_integral",
    "to_field",
]

_ZERO_POLY = fmpz_poly([])
_ONE_POLY = fmpz_poly([1])


def _monomial(k: int) -> fmpz_poly:
    return fmpz_poly([0] * k + [1])


def _valuation(p: fmpz_poly) -> int:
    for k, c in enumerate(p.coeffs()):
        if c != 0:
            return k
    return 0


class Scalar:
    """An element of Q(q) in canonical reduced form."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=1, *, _canonical: bool = False):
        if not isinstance(num, fmpz_poly):
            num, d0 = _coerce_pair(num)
            den = _as_poly(den) * d0
        elif not isinstance(den, fmpz_poly):
            den = _as_poly(den)
        if not _canonical:
            if den.is_zero():
                raise ZeroDivisionError("Scalar with zero denominator")
            if num.is_zero():
                den = _ONE_POLY
            else:
                g = num.gcd(den)
                if not g.is_one():
                    num = num // g
                    den = den // g
                if den.leading_coefficient() < 0:
                    num = -num
                    den = -den
        self.num = num
        self.den = den
        self._hash = None

    # -- construction helpers -------------------------------------------
    @classmethod
    def laurent(cls, coeffs: dict[int, int]) -> "Scalar":
        """Build ``sum c_e q^e`` from an exponent -> coefficient map."""
        if not coeffs:
            return ZERO
        lo = min(coeffs)
        shift = -lo if lo < 0 else 0
        hi = max(coeffs) + shift
        cs = [0] * (hi + 1)
        for e, c in coeffs.items():
            cs[e + shift] += c
        return cls(fmpz_poly(cs), _monomial(shift))

    @classmethod
    def q_power(cls, e: int) -> "Scalar":
        if e >= 0:
            return cls(_monomial(e), _ONE_POLY, _canonical=True)
        return cls(_ONE_POLY, _monomial(-e), _canonical=True)

    # -- predicates -----------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def is_laurent(self) -> bool:
        """True when the denominator is ``c*q^k`` (coefficients may be rational)."""
        cs = self.den.coeffs()
        return sum(1 for c in cs if c != 0) == 1

    def is_laurent_integral(self) -> bool:
        """True when the value lies in Z[q, q^-1]."""
        cs = self.den.coeffs()
        return cs[-1] == 1 and all(c == 0 for c in cs[:-1])

    def is_signed_power(self) -> bool:
        """True for +-q^k, the units of Z[q, q^-1]."""
        if not self.is_laurent():
            return False
        terms = self.laurent_terms()
        return len(terms) == 1 and abs(next(iter(terms.values()))) == 1

    def is_constant(self) -> bool:
        return self.num.degree() <= 0 and self.den.degree() == 0

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        n = int(self.num.coeffs()[0]) if not self.num.is_zero() else 0
        return Fraction(n, int(self.den.coeffs()[0]))

    def laurent_terms(self) -> dict[int, Fraction]:
        """Exponent -> coefficient map; only valid for Laurent scalars."""
        if not self.is_laurent():
            raise ValueError(f"{self} is not a Laurent polynomial")
        k = self.den.degree()
        c = int(self.den.coeffs()[-1])
        out = {}
        for e, a in enumerate(self.num.coeffs()):
            if a != 0:
                out[e - k] = Fraction(int(a), c)
        return out

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return Scalar(self.num + other.num, self.den)
        return Scalar(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(-self.num, self.den, _canonical=True)

    def __sub__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        if self.num.is_zero() or other.num.is_zero():
            return ZERO
        return Scalar(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero Scalar")
        if self.num.leading_coefficient() < 0:
            return Scalar(-self.den, -self.num, _canonical=True)
        return Scalar(self.den, self.num, _canonical=True)

    def __truediv__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return Scalar(self.num**e, self.den**e, _canonical=True)

    # -- comparison -----------------------------------------------------
    def __eq__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.constant_value())
            else:
                self._hash = hash((str(self.num), str(self.den)))
        return self._hash

    # -- maps -----------------------------------------------------------
    def bar(self) -> "Scalar":
        """The substitution q -> q^-1."""
        return _bar_poly(self.num) / _bar_poly(self.den)

    def specialize(self, q0) -> fmpq:
        if isinstance(q0, Fraction):
            q0 = fmpq(q0.numerator, q0.denominator)
        elif not isinstance(q0, fmpq):
            q0 = fmpq(q0)
        d = self.den(q0)
        if d == 0:
            raise ZeroDivisionError(f"denominator of {self} vanishes at q = {q0}")
        return fmpq(self.num(q0)) / d

    def __str__(self):
        return format_scalar(self)

    def __repr__(self):
        return f"Scalar({format_scalar(self)!r})"


def _bar_poly(p: fmpz_poly) -> Scalar:
    d = p.degree()
    if d < 0:
        return ZERO
    rev = fmpz_poly(list(reversed(p.coeffs())))
    return Scalar(rev, _monomial(d))


def _as_poly(x) -> fmpz_poly:
    if isinstance(x, fmpz_poly):
        return x
    if isinstance(x, (int, fmpz)):
        return fmpz_poly([x])
    raise TypeError(f"cannot use {type(x).__name__} as a polynomial")


def _coerce_pair(x) -> tuple[fmpz_poly, fmpz_poly]:
    if isinstance(x, (int, fmpz)):
        return fmpz_poly([x]), _ONE_POLY
    if isinstance(x, Fraction):
        return fmpz_poly([x.numerator]), fmpz_poly([x.denominator])
    if isinstance(x, fmpq):
        return fmpz_poly([x.p]), fmpz_poly([x.q])
    if isinstance(x, Scalar):
        return x.num, x.den
    raise TypeError(f"cannot convert {type(x).__name__} to Scalar")


def _lift(x):
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, fmpz)):
        return Scalar(fmpz_poly([x]), _ONE_POLY, _canonical=True)
    if isinstance(x, (Fraction, fmpq)):
        return Scalar(x)
    return NotImplemented


ZERO = Scalar(_ZERO_POLY, _ONE_POLY, _canonical=True)
ONE = Scalar(_ONE_POLY, _ONE_POLY, _canonical=True)
Q = Scalar(_monomial(1), _ONE_POLY, _canonical=True)


# ---------------------------------------------------------------------------
# text form


def _format_poly_terms(terms: list[tuple[int, Fraction]]) -> str:
    parts = []
    for e, c in sorted(terms, key=lambda t: -t[0]):
        neg = c < 0
        a = -c if neg else c
        if e == 0:
            body = str(a)
        else:
            mono = "q" if e == 1 else f"q^{e}"
            body = mono if a == 1 else f"{a}*{mono}"
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts) if parts else "0"


def format_scalar(x: Scalar) -> str:
    """Laurent form when possible, otherwise ``(num)/(den)``."""
    if x.is_zero():
        return "0"
    if x.is_laurent():
        return _format_poly_terms(list(x.laurent_terms().items()))
    num = [(e, Fraction(int(c))) for e, c in enumerate(x.num.coeffs()) if c != 0]
    den = [(e, Fraction(int(c))) for e, c in enumerate(x.den.coeffs()) if c != 0]
    return f"({_format_poly_terms(num)})/({_format_poly_terms(den)})"


_TOKEN = re.compile(r"\s*(?:(\d+)|(q)|(.))")


def parse_scalar(text: str) -> Scalar:
    """Parse Laurent or fraction form, e.g. ``q^2 + 1 + q^-2`` or ``(q^2-1)/(q^2+1)``."""
    tokens = []
    for m in _TOKEN.finditer(text):
        if m.group(1):
            tokens.append(("int", int(m.group(1))))
        elif m.group(2):
            tokens.append(("q", None))
        elif m.group(3) and not m.group(3).isspace():
            tokens.append(("op", m.group(3)))
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else (None, None)

    def take(op=None):
        nonlocal pos
        tok = peek()
        if op is not None and tok != ("op", op):
            raise ValueError(f"expected {op!r} in scalar {text!r}")
        pos += 1
        return tok

    def expr():
        val = term()
        while peek() in (("op", "+"), ("op", "-")):
            op = take()[1]
            rhs = term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term():
        val = unary()
        while peek() in (("op", "*"), ("op", "/")):
            op = take()[1]
            rhs = unary()
            val = val * rhs if op == "*" else val / rhs
        return val

    def unary():
        if peek() == ("op", "-"):
            take()
            return -unary()
        if peek() == ("op", "+"):
            take()
            return unary()
        return power()

    def power():
        base = atom()
        if peek() == ("op", "^"):
            take()
            sign = 1
            if peek() == ("op", "-"):
                take()
                sign = -1
            kind, val = take()
            if kind != "int":
                raise ValueError(f"bad exponent in scalar {text!r}")
            return base ** (sign * val)
        return base

    def atom():
        kind, val = take()
        if kind == "int":
            return Scalar(val)
        if kind == "q":
            return Q
        if (kind, val) == ("op", "("):
            inner = expr()
            take(")")
            return inner
        raise ValueError(f"unexpected token {val!r} in scalar {text!r}")

    if not tokens:
        raise ValueError("empty scalar")
    result = expr()
    if pos != len(tokens):
        raise ValueError(f"trailing input in scalar {text!r}")
    return result


# ---------------------------------------------------------------------------
# quantum integers


def _signed_qint(m: int, q):
    """(q^m - q^-m)/(q - q^-1) with its true value 0 at m = 0."""
    if m < 0:
        return -_signed_qint(-m, q)
    if isinstance(q, Scalar) and q is Q:
        return _qint_symbolic(m)
    total = 0 * q
    for k in range(m):
        total += q ** (m - 1 - 2 * k)
    return total


@lru_cache(maxsize=None)
def _qint_symbolic(m: int) -> Scalar:
    return Scalar.laurent({m - 1 - 2 * k: 1 for k in range(m)})


def qnum(m: int, q=Q):
    """(q^m - q^-m)/(q - q^-1) for any integer m, so qnum(0) = 0 and qnum(-m) = -qnum(m)."""
    return _signed_qint(m, q)


def qint(m: int, q=Q):
    """The quantum integer [m]; [0] is 1 by convention."""
    if m < 0:
        raise ValueError("qint expects m >= 0")
    if m == 0:
        return q**0
    return _signed_qint(m, q)


def qfactorial(m: int, q=Q):
    if m < 0:
        raise ValueError("qfactorial expects m >= 0")
    out = q**0
    for k in range(2, m + 1):
        out = out * _signed_qint(k, q)
    return out


def qbinom(c: int, m: int, q=Q):
    """Gaussian binomial [c; m] = [c][c-1]...[c-m+1]/[m]! for any integer c."""
    if m < 0:
        raise ValueError("qbinom expects m >= 0")
    if isinstance(q, Scalar) and q is Q:
        return _qbinom_symbolic(c, m)
    out = q**0
    for k in range(m):
        out = out * _signed_qint(c - k, q)
    return out / qfactorial(m, q)


@lru_cache(maxsize=None)
def _qbinom_symbolic(c: int, m: int) -> Scalar:
    out = ONE
    for k in range(m):
        out = out * _signed_qint(c - k, Q)
    return out / qfactorial(m, Q)


def bracket_eval(weight_value: int, c: int, t: int, q=Q):
    """The bracket [Z; c / t] with Z acting as q^weight_value."""
    if t < 0:
        raise ValueError("bracket_eval expects t >= 0")
    out = q**0
    for s in range(1, t + 1):
        e = weight_value + c - s + 1
        out = out * (q**e - q ** (-e)) / (q**s - q ** (-s))
    return out


# ---------------------------------------------------------------------------
# specialization


def specialize(x, q0):
    """Map a scalar-like value to the rationals by q -> q0."""
    if isinstance(x, Scalar):
        return x.specialize(q0)
    if isinstance(x, (int, fmpz, fmpq)):
        return fmpq(x)
    if isinstance(x, Fraction):
        return fmpq(x.numerator, x.denominator)
    raise TypeError(f"cannot specialize {type(x).__name__}")


def is_laurent_integral(x) -> bool:
    if isinstance(x, Scalar):
        return x.is_laurent_integral()
    if isinstance(x, (int, fmpz)):
        return True
    if isinstance(x, fmpq):
        return x.q == 1
    if isinstance(x, Fraction):
        return x.denominator == 1
    return False


def to_field(q0=None):
    """Return the value used for q: symbolic ``Q`` or the rational ``q0``."""
    if q0 is None:
        return Q
    if isinstance(q0, str):
        q0 = Fraction(q0)
    if isinstance(q0, Fraction):
        q0 = fmpq(q0.numerator, q0.denominator)
    q0 = fmpq(q0)
    if q0 == 0:
        raise ValueError("q0 must be nonzero")
    return q0
