"""Exact rationals and Laurent polynomials in q.

Quantum integers, quantum factorials and the bar involution live here.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Mapping, Union

Rational = Fraction
Number = Union[int, Fraction]

_EXP_LIMIT = 2**62
_TERM = re.compile(r"([+-])(?:(\d+(?:/\d+)?)\*?)?(q(?:\^(-?\d+))?)?")


def as_rational(x) -> Number:
    """Coerce to an exact rational, keeping integers as plain ints."""
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, str):
        return as_rational(Fraction(x))
    raise TypeError(f"not an exact rational: {x!r}")


def format_rational(c: Number) -> str:
    c = Fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


class LaurentQ:
    """A Laurent polynomial in q with rational coefficients.

    >>> LaurentQ({1: 1, -1: 1})
    LaurentQ('q + q^-1')
    """

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, Number] | Number | None = None):
        if coeffs is None:
            data = {}
        elif isinstance(coeffs, Mapping):
            data = {}
            for k, v in coeffs.items():
                if not isinstance(k, int) or abs(k) >= _EXP_LIMIT:
                    raise OverflowError(f"exponent out of range: {k!r}")
                v = as_rational(v)
                if v:
                    data[k] = v
        else:
            v = as_rational(coeffs)
            data = {0: v} if v else {}
        self._c = data
        self._hash = None

    @classmethod
    def q(cls, k: int = 1) -> "LaurentQ":
        return cls({k: 1})

    @property
    def coeffs(self) -> dict:
        return dict(self._c)

    def items(self):
        return sorted(self._c.items(), reverse=True)

    def is_zero(self) -> bool:
        return not self._c

    def _coerce(self, other) -> "LaurentQ":
        if isinstance(other, LaurentQ):
            return other
        return LaurentQ(other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._c)
        for k, v in other._c.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return LaurentQ(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentQ({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out: dict = {}
        for k1, v1 in self._c.items():
            for k2, v2 in other._c.items():
                k = k1 + k2
                if abs(k) >= _EXP_LIMIT:
                    raise OverflowError("Laurent exponent overflow")
                out[k] = out.get(k, 0) + v1 * v2
        return LaurentQ(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are only defined for monomials; use shift")
        result = LaurentQ(1)
        for _ in range(n):
            result = result * self
        return result

    def shift(self, k: int) -> "LaurentQ":
        """Multiply by q^k."""
        return LaurentQ({e + k: v for e, v in self._c.items()})

    def divmod(self, other: "LaurentQ") -> tuple["LaurentQ", "LaurentQ"]:
        """Long division from the top degree; exact when the remainder is zero."""
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero LaurentQ")
        top_d = max(other._c)
        low_d = min(other._c)
        lead = Fraction(other._c[top_d])
        rem = self
        quot: dict = {}
        while not rem.is_zero() and max(rem._c) - top_d >= min(rem._c) - low_d:
            k = max(rem._c)
            c = as_rational(Fraction(rem._c[k]) / lead)
            quot[k - top_d] = c
            rem = rem - other.shift(k - top_d) * c
        return LaurentQ(quot), rem

    def exact_div(self, other: "LaurentQ") -> "LaurentQ":
        quot, rem = self.divmod(other)
        if not rem.is_zero():
            raise ArithmeticError(f"{self} is not divisible by {other}")
        return quot

    def is_integral(self) -> bool:
        return all(Fraction(v).denominator == 1 for v in self._c.values())

    def is_nonnegative(self) -> bool:
        return all(v >= 0 for v in self._c.values())

    def evaluate(self, x: Number) -> Fraction:
        return sum((Fraction(x) ** k * v for k, v in self._c.items()), Fraction(0))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, LaurentQ)):
            return self._c == self._coerce(other)._c
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for k, v in self.items():
            sign = "-" if v < 0 else "+"
            a = abs(v)
            if k == 0:
                body = format_rational(a)
            else:
                mono = "q" if k == 1 else f"q^{k}"
                body = mono if a == 1 else f"{format_rational(a)}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"LaurentQ({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "LaurentQ":
        """Inverse of ``str``: accepts terms like ``3/2*q^-2``, ``-q`` and ``5``."""
        s = text.replace(" ", "")
        if s in ("", "0"):
            return cls()
        if s[0] not in "+-":
            s = "+" + s
        out: dict = {}
        pos = 0
        while pos < len(s):
            m = _TERM.match(s, pos)
            if not m or m.end() == pos or (m.group(2) is None and m.group(3) is None):
                raise ValueError(f"cannot parse Laurent polynomial {text!r} at offset {pos}")
            coeff = Fraction(m.group(2)) if m.group(2) else Fraction(1)
            if m.group(3) is None:
                exp = 0
            else:
                exp = int(m.group(4)) if m.group(4) else 1
            if m.group(1) == "-":
                coeff = -coeff
            out[exp] = out.get(exp, 0) + coeff
            pos = m.end()
        return cls(out)


def quantum_int(a: int) -> LaurentQ:
    """[a] = (q^a - q^-a) / (q - q^-1)."""
    n = abs(a)
    sign = 1 if a >= 0 else -1
    return LaurentQ({n - 1 - 2 * k: sign for k in range(n)})


def quantum_factorial(a: int) -> LaurentQ:
    if a < 0:
        raise ValueError("quantum factorial of a negative integer")
    result = LaurentQ(1)
    for k in range(1, a + 1):
        result = result * quantum_int(k)
    return result


def quantum_binomial(n: int, k: int) -> LaurentQ:
    if k < 0 or k > n:
        return LaurentQ()
    return quantum_factorial(n).exact_div(quantum_factorial(k) * quantum_factorial(n - k))


def bar(x: LaurentQ) -> LaurentQ:
    """The involution q -> q^-1."""
    return LaurentQ({-k: v for k, v in x.coeffs.items()})
