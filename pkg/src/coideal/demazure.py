"""Demazure operators and the three Frobenius extensions used by the bimodule functor.

Kinds of extension (all with basis given by powers of one split variable):

* SplitLeft [b,a]:  k[t_a] (x) Sym[a+1,b]   over Sym[a,b]
* SplitRight [a,b]: Sym[a,b-1] (x) k[t_b]   over Sym[a,b]
* JBlock [1,a]:     SymSq[1,a-1] (x) k[t_a] over SymSq[1,a]

where Sym is symmetric in the variables and SymSq is symmetric in their squares.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .polyring import Poly, WeylElement, act, coroot, is_invariant
from .symfun import complete, complete_j, elem, elem_j

SPLIT_LEFT = "SplitLeft"
SPLIT_RIGHT = "SplitRight"
JBLOCK = "JBlock"


@lru_cache(maxsize=None)
def _demazure_monomial(p: int, exps: tuple) -> Poly:
    m = len(exps)
    f = Poly({exps: 1}, m, _trusted=True)
    diff = f - act(WeylElement.simple(p, m), f)
    if diff.is_zero():
        return Poly.zero(m)
    return diff.exact_div(coroot(p, m))


def demazure_simple(p: int, f: Poly) -> Poly:
    """(f - s_p f) / alpha_p, with alpha_0 = -2 t1 and alpha_p = t_p - t_{p+1}."""
    acc: dict = {}
    for e, c in f.terms.items():
        for e2, c2 in _demazure_monomial(p, e).terms.items():
            s = acc.get(e2, 0) + c * c2
            if s:
                acc[e2] = s
            else:
                del acc[e2]
    return Poly(acc, f.num_vars)


def demazure_word(word: Sequence[int], f: Poly) -> Poly:
    """d_{w1} d_{w2} ... d_{wk} f: the rightmost letter acts first."""
    for p in reversed(word):
        f = demazure_simple(p, f)
        if f.is_zero():
            break
    return f


@dataclass(frozen=True)
class FrobeniusPair:
    kind: str
    a: int
    b: int
    m: int
    rank: int = field(init=False)
    shift: int = field(init=False)

    def __post_init__(self):
        if self.kind in (SPLIT_LEFT, SPLIT_RIGHT):
            if not 1 <= self.a <= self.b <= self.m:
                raise ValueError(f"bad block [{self.a},{self.b}] for m={self.m}")
            rank = self.b - self.a + 1
        elif self.kind == JBLOCK:
            if not 1 <= self.a <= self.m:
                raise ValueError(f"bad type B block [1,{self.a}] for m={self.m}")
            rank = 2 * self.a
        else:
            raise ValueError(f"unknown kind {self.kind!r}")
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "shift", 1 - rank)

    @classmethod
    def split_left(cls, b: int, a: int, m: int) -> "FrobeniusPair":
        return cls(SPLIT_LEFT, a, b, m)

    @classmethod
    def split_right(cls, a: int, b: int, m: int) -> "FrobeniusPair":
        return cls(SPLIT_RIGHT, a, b, m)

    @classmethod
    def jblock(cls, a: int, m: int) -> "FrobeniusPair":
        return cls(JBLOCK, a, a, m)

    @property
    def split_var(self) -> int:
        return self.b if self.kind == SPLIT_RIGHT else self.a

    def __str__(self):
        if self.kind == SPLIT_LEFT:
            return f"[{self.b},{self.a}]"
        if self.kind == SPLIT_RIGHT:
            return f"[{self.a},{self.b}]"
        return f"j[1,{self.a}]"

    # rings

    def source_generators(self) -> tuple:
        """Simple reflections fixing the finer ring."""
        if self.kind == SPLIT_LEFT:
            return tuple(range(self.a + 1, self.b))
        if self.kind == SPLIT_RIGHT:
            return tuple(range(self.a, self.b - 1))
        return tuple(range(0, self.a - 1))

    def target_generators(self) -> tuple:
        """Simple reflections fixing the coarser ring."""
        if self.kind == JBLOCK:
            return tuple(range(0, self.a))
        return tuple(range(self.a, self.b))

    def word(self) -> tuple:
        if self.kind == SPLIT_LEFT:
            return tuple(range(self.b - 1, self.a - 1, -1))
        if self.kind == SPLIT_RIGHT:
            return tuple(range(self.a, self.b))
        return tuple(range(self.a - 1, 0, -1)) + (0,) + tuple(range(1, self.a))

    def sign(self) -> int:
        if self.kind == SPLIT_LEFT:
            return 1
        if self.kind == SPLIT_RIGHT:
            return -1 if (self.b - self.a) % 2 else 1
        # fixed sign so that the trace of t_a^(2a-1) is 1 for every a (alpha_0 = -2 t1)
        return -1

    def degree_drop(self) -> int:
        return 2 * (self.rank - 1)

    # bases

    def basis(self) -> list:
        return [Poly.var(self.split_var, self.m, k) for k in range(self.rank)]

    def basis_exponent(self, k: int) -> int:
        return k

    def dual_basis(self) -> list:
        return list(_dual_basis(self))

    def form(self, f: Poly) -> Poly:
        """The Frobenius trace, computed monomial by monomial."""
        acc = Poly.zero(self.m)
        for e, c in f.terms.items():
            img = _form_monomial(self, e)
            if img.terms:
                acc = acc + img.scale(c)
        return acc


@lru_cache(maxsize=None)
def _form_monomial(F: FrobeniusPair, exps: tuple) -> Poly:
    g = demazure_word(F.word(), Poly({exps: 1}, F.m, _trusted=True))
    return g if F.sign() > 0 else -g


@lru_cache(maxsize=None)
def _dual_basis(F: FrobeniusPair) -> tuple:
    m = F.m
    n = F.rank - 1
    if F.kind == SPLIT_LEFT:
        return tuple(elem(n - k, (F.a + 1, F.b), m).scale((-1) ** (n - k)) for k in range(F.rank))
    if F.kind == SPLIT_RIGHT:
        return tuple(elem(n - k, (F.a, F.b - 1), m).scale((-1) ** (n - k)) for k in range(F.rank))
    a = F.a
    t = Poly.var(a, m)
    out = []
    for k in range(F.rank):
        j, odd = divmod(k, 2)
        r = a - 1 - j
        e = elem_j(r, (1, a - 1), m).scale((-1) ** r)
        out.append(e if odd else t * e)
    return tuple(out)


def frobenius_apply(F: FrobeniusPair, f: Poly, check: bool = True) -> Poly:
    if check and not is_invariant(f, F.source_generators()):
        raise ValueError(f"{f} is not in the source ring of {F}")
    return F.form(f)


def casimir(F: FrobeniusPair) -> list:
    """The Casimir element as a list of (left, right) polynomial pairs."""
    return list(zip(F.basis(), F.dual_basis()))


def expand_in_basis(F: FrobeniusPair, f: Poly, check: bool = False) -> list:
    """Coefficients c_k in the coarse ring with f = sum basis_k * c_k."""
    # clear denominators so the inner loop runs on ints
    denom = 1
    for coef in f.terms.values():
        if isinstance(coef, Fraction):
            denom = math.lcm(denom, coef.denominator)
    acc = [{} for _ in range(F.rank)]
    for e, coef in f.terms.items():
        coef = int(coef * denom)
        for k, c in _expand_monomial(F, e):
            d = acc[k]
            for e2, v in c.terms.items():
                d[e2] = d.get(e2, 0) + v * coef
    out = []
    for k, d in enumerate(acc):
        c = Poly({e: _tidy(Fraction(v, denom)) for e, v in d.items() if v}, F.m, _trusted=True)
        if c.terms:
            if check and not is_invariant(c, F.target_generators()):
                raise AssertionError(f"coefficient {c} of {f} escaped the base ring of {F}")
            out.append((k, c))
    return out


def _tidy(v):
    if isinstance(v, Fraction) and v.denominator == 1:
        return v.numerator
    return v


@lru_cache(maxsize=None)
def _expand_monomial(F: FrobeniusPair, exps: tuple) -> tuple:
    mono = Poly({exps: 1}, F.m, _trusted=True)
    out = []
    for k, d in enumerate(_dual_basis(F)):
        c = F.form(mono * d)
        if c.terms:
            out.append((k, c))
    return tuple(out)


def closed_form_split(F: FrobeniusPair, k: int) -> Poly:
    """Value of the trace on a power of the split variable, from the symmetric function formulas."""
    if F.kind == JBLOCK:
        if k % 2 == 0:
            return Poly.zero(F.m)
        return complete_j((k - 1) // 2 - F.a + 1, (1, F.a), F.m)
    return complete(k - F.b + F.a, (F.a, F.b), F.m)
