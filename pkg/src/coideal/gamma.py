"""The representation 2-functor: diagrams act on tensor products of invariant rings.

A 1-morphism word on an object a is sent to the bimodule R^{b_1} (x)_{R^{c_1}} ... (x) R^{b_l};
elements are kept in the canonical form of :class:`coideal.flagcat.TensorElement`.
Generators act on pure tensors locally and the result is renormalized.
"""
from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import diagram as dg
from .demazure import casimir, demazure_simple, expand_in_basis
from .flagcat import (
    DIAMOND,
    FlagObject,
    TensorElement,
    Word,
    Zero,
    local_frobenius,
    slot,
    step,
    weight_of,
)
from .polyring import Poly
from .symfun import complete, complete_j, elem, elem_j

# The literal images of the diamond cup eta and cap eps give clockwise degree-zero
# diamond bubbles equal to 1 and counterclockwise ones equal to 2. Scaling eta by 1/2
# and eps by 2 keeps the zigzag identities and matches the bubble relations as stated.
DIAMOND_CUP_SCALE = Fraction(1, 2)
DIAMOND_CAP_SCALE = Fraction(2)


@dataclass(frozen=True)
class OperatorMatrix:
    source: Word
    target: Word
    columns: tuple  # (basis tuple, TensorElement) in source basis order

    def column(self, tup: tuple) -> TensorElement:
        for t, el in self.columns:
            if t == tuple(tup):
                return el
        raise KeyError(tup)

    def apply(self, el: TensorElement) -> TensorElement:
        """Image of an arbitrary element, using right R^a-linearity."""
        out = TensorElement(self.target)
        cols = dict(self.columns)
        for tup, c in el.coeffs.items():
            out = out + cols[tup].scale(c)
        return out

    def compose(self, inner: "OperatorMatrix") -> "OperatorMatrix":
        """self after inner."""
        if inner.target != self.source:
            raise ValueError("cannot compose: word mismatch")
        return OperatorMatrix(inner.source, self.target, tuple((t, self.apply(el)) for t, el in inner.columns))

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        _check_shape(self, other)
        cols = dict(other.columns)
        return OperatorMatrix(self.source, self.target, tuple((t, el + cols[t]) for t, el in self.columns))

    def scale(self, c) -> "OperatorMatrix":
        return OperatorMatrix(self.source, self.target, tuple((t, el.scale(c)) for t, el in self.columns))

    def is_zero(self) -> bool:
        return all(el.is_zero() for _, el in self.columns)

    def to_json(self) -> dict:
        return {
            "source": str(self.source),
            "target": str(self.target),
            "columns": [{"tuple": list(t), "element": el.to_json()} for t, el in self.columns],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def _check_shape(A: OperatorMatrix, B: OperatorMatrix):
    if A.source != B.source or A.target != B.target:
        raise ValueError(f"shape mismatch: {A.source} -> {A.target} vs {B.source} -> {B.target}")


def equal(A: OperatorMatrix, B: OperatorMatrix) -> bool:
    _check_shape(A, B)
    cols = dict(B.columns)
    return all(el == cols[t] for t, el in A.columns)


def identity_matrix(word: Word) -> OperatorMatrix:
    return OperatorMatrix(word, word, tuple((t, TensorElement.basis(word, t)) for t in word.basis_tuples()))


def zero_matrix(source: Word, target: Word) -> OperatorMatrix:
    return OperatorMatrix(source, target, tuple((t, TensorElement(target)) for t in source.basis_tuples()))


# generators on pure tensors

def _var(i: int, m: int) -> Poly:
    return Poly.var(i, m)


def _unmultiply(word_out: Word, pos: int, product: Poly, rest_left: tuple, rest_right: tuple) -> list:
    """Split an element of the ring between factors pos and pos+1 back into two factors."""
    F = word_out.frobenius()[pos]
    out = []
    for k, c in expand_in_basis(F, product):
        out.append(rest_left + (F.basis()[k], c) + rest_right)
    return out


def _lift_product(o, first: int, second: int, product: Poly, rest_left: tuple, rest_right: tuple) -> list:
    """Crossing that multiplies by a difference of dots, landing on the swapped word.

    The swapped word's multiplication map to R is not injective, so the product is
    expanded over R^o in the split variables of both strands and the multiplier is
    realized as (dot on the left strand) - (dot on the right strand).
    """
    m = o.m
    F_first = local_frobenius(o, first)
    F_second = local_frobenius(o, second)
    if first > 0:
        left_dot = _var(o.ext(slot(second)) + 1, m)
        right_dot = _var(o.ext(slot(first)) + 1, m)
        sign = 1
    else:
        left_dot = _var(o.ext(slot(second)), m)
        right_dot = _var(o.ext(slot(first)), m)
        # the printed multiplier has the opposite sign; this one is forced by cyclicity
        sign = 1
    first_basis, second_basis = F_first.basis(), F_second.basis()
    out = []
    for kf, d in expand_in_basis(F_first, product):
        for ks, c in expand_in_basis(F_second, d):
            left, right = second_basis[ks], first_basis[kf] * c
            out.append(rest_left + ((left * left_dot).scale(sign), right) + rest_right)
            out.append(rest_left + (left, (right * right_dot).scale(-sign)) + rest_right)
    return out


def _apply_step(atom: dg.Atom, pos: int, w_in: Word, w_out: Word, pures: list) -> list:
    objs = w_in.objects()
    m = w_in.obj.m
    k = atom.kind
    out = []
    if k == dg.DOT:
        o = objs[pos + 1]
        p = slot(atom.labels[0])
        v = _var(o.ext(p) + 1, m) if atom.labels[0] > 0 else _var(o.ext(p), m)
        v = v ** atom.count
        for f in pures:
            out.append(f[:pos] + (f[pos] * v,) + f[pos + 1:])
        return out
    if k in (dg.CROSS_UP, dg.CROSS_DOWN):
        o = objs[pos + 2]
        i, j = atom.labels
        pi, pj = slot(i), slot(j)
        for f in pures:
            prod = f[pos] * f[pos + 1]
            if k == dg.CROSS_UP:
                if pi == pj:
                    prod = -demazure_simple(o.ext(pi) + 1, prod)
                elif pi == pj + 1:
                    out.extend(_lift_product(o, i, j, prod, f[:pos], f[pos + 2:]))
                    continue
            else:
                if pi == pj:
                    prod = -demazure_simple(o.ext(pi) - 1, prod)
                elif pj == pi + 1:
                    out.extend(_lift_product(o, -i, -j, prod, f[:pos], f[pos + 2:]))
                    continue
            if prod.is_zero():
                continue
            out.extend(_unmultiply(w_out, pos, prod, f[:pos], f[pos + 2:]))
        return out
    if k in (dg.CAP_CW, dg.CAP_CCW):
        F = local_frobenius(objs[pos + 2], w_in.letters[pos + 1])
        scale = DIAMOND_CAP_SCALE if (k == dg.CAP_CW and abs(atom.labels[0]) == DIAMOND) else 1
        n = len(w_in.letters)
        for f in pures:
            c = F.form(f[pos] * f[pos + 1])
            if scale != 1:
                c = c.scale(scale)
            if c.is_zero():
                continue
            if pos + 2 < n:
                out.append(f[:pos] + (c * f[pos + 2],) + f[pos + 3:])
            elif pos > 0:
                out.append(f[:pos - 1] + (f[pos - 1] * c,))
            else:
                out.append((c,))
        return out
    if k in (dg.CUP_CW, dg.CUP_CCW):
        F = w_out.frobenius()[pos]
        pairs = casimir(F)
        if k == dg.CUP_CCW and abs(atom.labels[0]) == DIAMOND:
            pairs = [(b, d.scale(DIAMOND_CUP_SCALE)) for b, d in pairs]
        empty = not w_in.letters
        for f in pures:
            for b, d in pairs:
                if empty:
                    out.append((b, d * f[0]))
                else:
                    out.append(f[:pos] + (b, d) + f[pos:])
        return out
    if k == dg.BUBBLE:
        v = bubble(atom.labels[0], atom.count, atom.clockwise, objs[pos])
        if v.is_zero():
            return []
        n = len(w_in.letters)
        for f in pures:
            if pos < n:
                out.append(f[:pos] + (v * f[pos],) + f[pos + 1:])
            elif n:
                out.append(f[:-1] + (f[-1] * v,))
            else:
                out.append((f[0] * v,))
        return out
    raise ValueError(f"cannot evaluate atom {k} directly")


def eval_atom(atom: dg.Atom, pos: int, word: Word) -> OperatorMatrix:
    """Matrix of a single generator placed at ``pos`` on ``word``."""
    d = dg.Diagram(word.obj, word.letters, (((atom, pos),),))
    return eval_diagram(d)


def _column(steps: list, words: list, tup: tuple) -> TensorElement:
    el = TensorElement.basis(words[0], tup)
    for (atom, pos), w_in, w_out in zip(steps, words, words[1:]):
        if w_out.is_zero():
            return TensorElement(words[-1])
        pures = el.pure_tensors()
        pures = _apply_step(atom, pos, w_in, w_out, pures)
        el = _normalize(w_out, pures)
        if el.is_zero():
            return TensorElement(words[-1])
    return el


def _normalize(word: Word, pures: list) -> TensorElement:
    from .flagcat import normalize

    return normalize(word, pures)


def eval_diagram(d: dg.Diagram, jobs: int = 1) -> OperatorMatrix:
    steps = [(a, p) for _, a, p in d.steps()]
    bounds = [d.bottom]
    for a, p in steps:
        bounds.append(dg.apply_atom(bounds[-1], a, p))
    words = [Word(d.obj, b) for b in bounds]
    source, target = words[0], words[-1]
    tuples = source.basis_tuples()
    if target.is_zero() or any(w.is_zero() for w in words):
        return zero_matrix(source, target)
    if jobs > 1 and len(tuples) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            cols = list(pool.map(lambda t: _column(steps, words, t), tuples))
    else:
        cols = [_column(steps, words, t) for t in tuples]
    return OperatorMatrix(source, target, tuple(zip(tuples, cols)))


# bubbles

def bubble(i: int, s: int, clockwise: bool, a: FlagObject) -> Poly:
    """Value in R^a of a closed i-loop carrying s dots (s may be formal/negative)."""
    return _bubble(abs(i), s, clockwise, a)


@lru_cache(maxsize=None)
def _bubble(i: int, s: int, clockwise: bool, a: FlagObject) -> Poly:
    m = a.m
    p = slot(i)
    lam = weight_of(a)[p - 1]
    lo, mid, hi = a.ext(p - 1), a.ext(p), a.ext(p + 1)
    acc = Poly.zero(m)
    if clockwise:
        # sum_r (-1)^r e_r[a_p+1, a_{p+1}] * H(s - lam + 1 - r)
        for r in range(0, hi - mid + 1):
            e = elem(r, (mid + 1, hi), m)
            n = s - lam + 1 - r
            if p == 1:
                h = complete_j(Fraction(n, 2), (1, mid), m)
            else:
                h = complete(n, (lo + 1, mid), m)
            term = e * h
            acc = acc + term if r % 2 == 0 else acc - term
        if p == 1:
            acc = acc.scale(DIAMOND_CAP_SCALE)
        return acc
    if p == 1:
        for r in range(0, mid + 1):
            term = elem_j(r, (1, mid), m) * complete(s + lam + 2 - 2 * r, (mid + 1, hi), m)
            acc = acc + term if r % 2 == 0 else acc - term
        return acc.scale(2 * DIAMOND_CUP_SCALE)
    for r in range(0, mid - lo + 1):
        term = elem(r, (lo + 1, mid), m) * complete(s + lam + 1 - r, (mid + 1, hi), m)
        acc = acc + term if r % 2 == 0 else acc - term
    return acc


def bubble_threshold(i: int, clockwise: bool, a: FlagObject) -> int:
    """Smallest dot count of a genuine (non-fake) bubble; degree-zero value sits here."""
    lam = weight_of(a)[slot(i) - 1]
    if clockwise:
        return lam - 1
    return -lam - 1 - (1 if abs(i) == DIAMOND else 0)
