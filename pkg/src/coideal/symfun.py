"""Elementary and complete symmetric polynomials on blocks of consecutive variables.

A block is an interval [lo, hi] of variable indices; lo > hi is the empty block.
The squared-variable versions elem_j / complete_j use t_i^2 in place of t_i.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .polyring import Poly


def _block(lo: int, hi: int):
    return range(lo, hi + 1)


@lru_cache(maxsize=None)
def _elem(p: int, lo: int, hi: int, m: int, power: int) -> Poly:
    idx = list(_block(lo, hi))
    if p < 0 or p > len(idx):
        return Poly.zero(m)
    terms = {}
    for subset in combinations(idx, p):
        e = [0] * m
        for i in subset:
            e[i - 1] = power
        terms[tuple(e)] = 1
    return Poly(terms, m, _trusted=True)


@lru_cache(maxsize=None)
def _complete(p: int, lo: int, hi: int, m: int, power: int) -> Poly:
    # h_p = sum_{k>=1} (-1)^(k+1) e_k h_{p-k}, the Euler identity solved for h_p
    if p < 0:
        return Poly.zero(m)
    if p == 0:
        return Poly.const(1, m)
    n = max(0, hi - lo + 1)
    acc = Poly.zero(m)
    for k in range(1, min(p, n) + 1):
        term = _elem(k, lo, hi, m, power) * _complete(p - k, lo, hi, m, power)
        acc = acc + term if k % 2 else acc - term
    return acc


def _check_interval(interval, m):
    lo, hi = interval
    if lo <= hi and (lo < 1 or hi > m):
        raise ValueError(f"interval [{lo},{hi}] outside t1..t{m}")
    return lo, hi


def elem(p: int, interval: tuple[int, int], m: int) -> Poly:
    lo, hi = _check_interval(interval, m)
    return _elem(p, lo, hi, m, 1)


def complete(p: int, interval: tuple[int, int], m: int) -> Poly:
    lo, hi = _check_interval(interval, m)
    return _complete(p, lo, hi, m, 1)


def elem_j(p: int, interval: tuple[int, int], m: int) -> Poly:
    lo, hi = _check_interval(interval, m)
    return _elem(p, lo, hi, m, 2)


def complete_j(p, interval: tuple[int, int], m: int) -> Poly:
    """Complete symmetric polynomial in squares; zero unless p is a nonnegative integer."""
    lo, hi = _check_interval(interval, m)
    p = Fraction(p)
    if p.denominator != 1 or p < 0:
        return Poly.zero(m)
    return _complete(int(p), lo, hi, m, 2)
