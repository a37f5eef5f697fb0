"""Sparse polynomials in t1..tm over the rationals and the type B Weyl group action.

Variables carry degree 2. Exponent vectors are tuples of length m.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .scalar import Number, as_rational, format_rational


class Poly:
    """Immutable sparse polynomial.

    >>> Poly.parse("3/2*t1^2*t3 - t2", 3)
    Poly('3/2*t1^2*t3 - t2')
    """

    __slots__ = ("terms", "num_vars", "_hash")

    def __init__(self, terms: Mapping[tuple, Number] | None = None, num_vars: int = 0, *, _trusted=False):
        if _trusted:
            self.terms = terms
        else:
            clean = {}
            for e, c in (terms or {}).items():
                e = tuple(e)
                if len(e) != num_vars:
                    raise ValueError(f"exponent {e} has wrong length for {num_vars} variables")
                if any(x < 0 for x in e):
                    raise ValueError(f"negative exponent in {e}")
                c = as_rational(c)
                if c:
                    clean[e] = clean.get(e, 0) + c
                    if not clean[e]:
                        del clean[e]
            self.terms = clean
        self.num_vars = num_vars
        self._hash = None

    # construction helpers

    @classmethod
    def zero(cls, m: int) -> "Poly":
        return cls({}, m, _trusted=True)

    @classmethod
    def const(cls, c: Number, m: int) -> "Poly":
        c = as_rational(c)
        return cls({(0,) * m: c} if c else {}, m, _trusted=True)

    @classmethod
    def var(cls, i: int, m: int, power: int = 1) -> "Poly":
        """The monomial t_i^power (variables are 1-based)."""
        if not 1 <= i <= m:
            raise ValueError(f"variable t{i} outside t1..t{m}")
        e = [0] * m
        e[i - 1] = power
        return cls({tuple(e): 1}, m, _trusted=True)

    @classmethod
    def monomial(cls, exps: Sequence[int], m: int, coeff: Number = 1) -> "Poly":
        return cls({tuple(exps): coeff}, m)

    # basic queries

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def constant_term(self) -> Number:
        return self.terms.get((0,) * self.num_vars, 0)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def support(self) -> set:
        """Indices (1-based) of variables that occur."""
        out = set()
        for e in self.terms:
            out.update(i + 1 for i, x in enumerate(e) if x)
        return out

    def degree(self):
        """Degree with deg t_i = 2, or the string 'heterogeneous'."""
        if not self.terms:
            raise ValueError("the zero polynomial has no degree")
        degs = {2 * sum(e) for e in self.terms}
        if len(degs) > 1:
            return "heterogeneous"
        return degs.pop()

    def is_homogeneous(self) -> bool:
        return not self.terms or self.degree() != "heterogeneous"

    # arithmetic

    def _check(self, other: "Poly"):
        if self.num_vars != other.num_vars:
            raise ValueError(f"variable count mismatch: {self.num_vars} vs {other.num_vars}")

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        return Poly.const(other, self.num_vars)

    def __add__(self, other):
        other = self._coerce(other)
        if not other.terms:
            return self
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                del out[e]
        return Poly(out, self.num_vars, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return Poly({e: -c for e, c in self.terms.items()}, self.num_vars, _trusted=True)

    def __sub__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) - c
            if s:
                out[e] = s
            else:
                del out[e]
        return Poly(out, self.num_vars, _trusted=True)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c: Number) -> "Poly":
        c = as_rational(c)
        if not c:
            return Poly.zero(self.num_vars)
        if c == 1:
            return self
        out = {}
        for e, v in self.terms.items():
            w = v * c
            if isinstance(w, Fraction) and w.denominator == 1:
                w = w.numerator
            out[e] = w
        return Poly(out, self.num_vars, _trusted=True)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        self._check(other)
        if len(self.terms) > len(other.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        out: dict = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    if isinstance(s, Fraction) and s.denominator == 1:
                        s = s.numerator
                    out[e] = s
                else:
                    del out[e]
        return Poly(out, self.num_vars, _trusted=True)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = Poly.const(1, self.num_vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.num_vars == other.num_vars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == Poly.const(other, self.num_vars).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num_vars, frozenset(self.terms.items())))
        return self._hash

    # variable substitutions

    def substitute_signed_perm(self, perm: Sequence[int], signs: Sequence[int]) -> "Poly":
        """Replace t_i by signs[i]*t_{perm[i]} (0-based lists)."""
        m = self.num_vars
        out = {}
        for e, c in self.terms.items():
            new = [0] * m
            sign = 1
            for i, x in enumerate(e):
                if x:
                    new[perm[i]] = x
                    if signs[i] < 0 and x & 1:
                        sign = -sign
            out[tuple(new)] = c if sign > 0 else -c
        return Poly(out, m, _trusted=True)

    def embed(self, m: int) -> "Poly":
        """View the polynomial in a ring with m >= num_vars variables."""
        if m < self.num_vars:
            if self.support() and max(self.support()) > m:
                raise ValueError("cannot drop variables that occur")
            return Poly({e[:m]: c for e, c in self.terms.items()}, m, _trusted=True)
        pad = (0,) * (m - self.num_vars)
        return Poly({e + pad: c for e, c in self.terms.items()}, m, _trusted=True)

    # division

    def divmod_linear(self, divisor: "Poly") -> tuple["Poly", "Poly"]:
        """Multivariate long division by ``divisor`` in lex order."""
        self._check(divisor)
        if not divisor.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        lead_e = max(divisor.terms)
        lead_c = Fraction(divisor.terms[lead_e])
        rest = [(e, c) for e, c in divisor.terms.items() if e != lead_e]
        rem = dict(self.terms)
        quot: dict = {}
        remainder: dict = {}
        while rem:
            e = max(rem)
            c = rem.pop(e)
            if all(x >= y for x, y in zip(e, lead_e)):
                qe = tuple(x - y for x, y in zip(e, lead_e))
                qc = as_rational(c / lead_c)
                quot[qe] = qc
                for de, dc in rest:
                    te = tuple(x + y for x, y in zip(qe, de))
                    s = rem.get(te, 0) - qc * dc
                    if s:
                        rem[te] = as_rational(s)
                    else:
                        rem.pop(te, None)
            else:
                remainder[e] = c
        return Poly(quot, self.num_vars, _trusted=True), Poly(remainder, self.num_vars, _trusted=True)

    def exact_div(self, divisor: "Poly") -> "Poly":
        quot, rem = self.divmod_linear(divisor)
        if rem.terms:
            raise ArithmeticError(f"{self} is not divisible by {divisor}")
        return quot

    # text form

    def sorted_terms(self):
        return sorted(self.terms.items(), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for k, (e, c) in enumerate(self.sorted_terms()):
            mono = "*".join(
                f"t{i + 1}" if x == 1 else f"t{i + 1}^{x}" for i, x in enumerate(e) if x
            )
            a = abs(c)
            if not mono:
                body = format_rational(a)
            elif a == 1:
                body = mono
            else:
                body = f"{format_rational(a)}*{mono}"
            if k == 0:
                out.append(("-" if c < 0 else "") + body)
            else:
                out.append((" - " if c < 0 else " + ") + body)
        return "".join(out)

    def __repr__(self):
        return f"Poly({str(self)!r})"

    @classmethod
    def parse(cls, text: str, m: int | None = None) -> "Poly":
        """Parse sums of terms ``c*t1^a*t2^b``; m defaults to the largest index seen."""
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty polynomial text")
        if s[0] not in "+-":
            s = "+" + s
        raw = []
        pos = 0
        top = 0
        while pos < len(s):
            m_ = _POLY_TERM.match(s, pos)
            if not m_ or m_.end() == pos:
                raise ValueError(f"cannot parse polynomial {text!r} at offset {pos}")
            sign, body = m_.group(1), m_.group(2)
            coeff = Fraction(1)
            exps: dict = {}
            for factor in body.split("*"):
                if not factor:
                    raise ValueError(f"empty factor in {text!r}")
                fm = re.fullmatch(r"t(\d+)(?:\^(\d+))?", factor)
                if fm:
                    i = int(fm.group(1))
                    if i < 1:
                        raise ValueError(f"variable index must be positive in {text!r}")
                    exps[i] = exps.get(i, 0) + (int(fm.group(2)) if fm.group(2) else 1)
                    top = max(top, i)
                elif re.fullmatch(r"\d+(?:/\d+)?", factor):
                    coeff *= Fraction(factor)
                else:
                    raise ValueError(f"bad factor {factor!r} in {text!r}")
            raw.append((-coeff if sign == "-" else coeff, exps))
            pos = m_.end()
        if m is None:
            m = top
        if top > m:
            raise ValueError(f"{text!r} uses t{top} but only {m} variables are available")
        terms: dict = {}
        for c, exps in raw:
            e = tuple(exps.get(i + 1, 0) for i in range(m))
            terms[e] = terms.get(e, 0) + c
        return cls(terms, m)


_POLY_TERM = re.compile(r"([+-])([0-9t*/^]+)")


class WeylElement:
    """Signed permutation of t1..tm: t_i -> signs[i] * t_{perm[i]} (stored 0-based)."""

    __slots__ = ("perm", "signs")

    def __init__(self, perm: Sequence[int], signs: Sequence[int]):
        if sorted(perm) != list(range(len(perm))) or len(signs) != len(perm):
            raise ValueError("not a signed permutation")
        if any(s not in (1, -1) for s in signs):
            raise ValueError("signs must be +1 or -1")
        self.perm = tuple(perm)
        self.signs = tuple(signs)

    @property
    def rank(self) -> int:
        return len(self.perm)

    @classmethod
    def identity(cls, m: int) -> "WeylElement":
        return cls(range(m), [1] * m)

    @classmethod
    def simple(cls, p: int, m: int) -> "WeylElement":
        """s_0 negates t1; s_p swaps t_p and t_{p+1}."""
        perm = list(range(m))
        signs = [1] * m
        if p == 0:
            if m < 1:
                raise ValueError("s0 needs at least one variable")
            signs[0] = -1
        elif 1 <= p < m:
            perm[p - 1], perm[p] = p, p - 1
        else:
            raise ValueError(f"s{p} is not a simple reflection for m={m}")
        return cls(perm, signs)

    @classmethod
    def from_word(cls, word: Iterable[int], m: int) -> "WeylElement":
        """Product s_{w1} s_{w2} ... as written (rightmost acts first)."""
        g = cls.identity(m)
        for p in word:
            g = g * cls.simple(p, m)
        return g

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        # (self*other)(t_i) = self(other(t_i)) = other.signs[i] * self.signs[j] * t_{self.perm[j]}, j = other.perm[i]
        if self.rank != other.rank:
            raise ValueError("rank mismatch")
        perm = []
        signs = []
        for i in range(self.rank):
            j = other.perm[i]
            perm.append(self.perm[j])
            signs.append(other.signs[i] * self.signs[j])
        return WeylElement(perm, signs)

    def inverse(self) -> "WeylElement":
        perm = [0] * self.rank
        signs = [1] * self.rank
        for i, j in enumerate(self.perm):
            perm[j] = i
            signs[j] = self.signs[i]
        return WeylElement(perm, signs)

    def __eq__(self, other):
        return isinstance(other, WeylElement) and (self.perm, self.signs) == (other.perm, other.signs)

    def __hash__(self):
        return hash((self.perm, self.signs))

    def __repr__(self):
        images = [("-" if s < 0 else "") + f"t{p + 1}" for p, s in zip(self.perm, self.signs)]
        return f"WeylElement({', '.join(images)})"


def act(w: WeylElement, f: Poly) -> Poly:
    if w.rank != f.num_vars:
        raise ValueError(f"variable count mismatch: {w.rank} vs {f.num_vars}")
    return f.substitute_signed_perm(w.perm, w.signs)


def is_invariant(f: Poly, gens: Iterable[int]) -> bool:
    """True when s_p(f) = f for every listed simple reflection index p."""
    return all(act(WeylElement.simple(p, f.num_vars), f) == f for p in gens)


def degree(f: Poly):
    return f.degree()


def coroot(p: int, m: int) -> Poly:
    """The coroot used by the Demazure operator: -2 t1 for s0, t_p - t_{p+1} otherwise."""
    if p == 0:
        return Poly.var(1, m).scale(-2)
    return Poly.var(p, m) - Poly.var(p + 1, m)
