"""Objects, weights, words of E/F functors and their bimodules.

Labels are half-integers 1/2, 3/2, ..., r-1/2 stored doubled (1, 3, ..., 2r-1);
the distinguished label 1/2 is the diamond node. A signed label +i stands for E_i
and -i for F_i. Internally a label i sits in slot (i+1)//2 of the sequence a.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .demazure import FrobeniusPair, expand_in_basis
from .polyring import Poly
from .scalar import LaurentQ

DIAMOND = 1


class _Zero:
    """The zero object / zero 1-morphism."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "Zero"

    def __bool__(self):
        return False


Zero = _Zero()


def slot(label: int) -> int:
    """Position (1-based) of a doubled label inside a."""
    label = abs(label)
    if label <= 0 or label % 2 == 0:
        raise ValueError(f"not a doubled half-integer label: {label}")
    return (label + 1) // 2


def label_of_slot(p: int) -> int:
    return 2 * p - 1


def format_label(label: int) -> str:
    return f"{abs(label)}/2"


def parse_label(text: str) -> int:
    x = Fraction(text.strip())
    doubled = 2 * x
    if doubled.denominator != 1 or doubled.numerator % 2 == 0 or doubled <= 0:
        raise ValueError(f"label must be a positive half-integer, got {text!r}")
    return int(doubled)


def theta_pairing(k: int, i: int) -> int:
    """Change of the k-th weight coordinate under E_i (doubled labels)."""
    pk, pi = slot(k), slot(i)
    if pk == pi:
        return 3 if pk == 1 else 2
    if abs(pk - pi) == 1:
        return -1
    return 0


def cartan(i: int, j: int) -> int:
    """Type A Cartan entry <alpha_i^vee, alpha_j> used for crossing degrees."""
    pi, pj = slot(i), slot(j)
    if pi == pj:
        return 2
    if abs(pi - pj) == 1:
        return -1
    return 0


def t_sign(i: int, j: int) -> int:
    """t_ij = -1 if j = i - 1 else 1."""
    return -1 if slot(j) == slot(i) - 1 else 1


@dataclass(frozen=True)
class FlagObject:
    r: int
    m: int
    a: tuple

    def __post_init__(self):
        a = tuple(int(x) for x in self.a)
        object.__setattr__(self, "a", a)
        if self.r < 1 or len(a) != self.r:
            raise ValueError(f"need {self.r} entries, got {a}")
        if any(x < 0 or x > self.m for x in a):
            raise ValueError(f"entries of {a} must lie in [0,{self.m}]")
        if any(x > y for x, y in zip(a, a[1:])):
            raise ValueError(f"{a} is not increasing")

    def ext(self, p: int) -> int:
        """a_p with the boundary conventions a_0 = -a_1 and a_{r+1} = m (slot indices)."""
        if p == 0:
            return -self.a[0]
        if p == self.r + 1:
            return self.m
        return self.a[p - 1]

    def __str__(self):
        return f"a={','.join(map(str, self.a))} ; r={self.r} m={self.m}"

    @property
    def labels(self) -> list:
        return [label_of_slot(p) for p in range(1, self.r + 1)]

    def blocks(self) -> list:
        """The blocks of I_a: ('B', 1, a_1) then type A blocks [lo, hi] (possibly empty)."""
        out = [("B", 1, self.a[0])]
        for p in range(1, self.r + 1):
            out.append(("A", self.ext(p) + 1, self.ext(p + 1)))
        return out

    def invariance_generators(self) -> tuple:
        """Simple reflections s_p fixing R^a."""
        removed = {x for x in self.a if x < self.m}
        return tuple(p for p in range(self.m) if p not in removed)


def all_objects(r: int, m: int) -> list:
    out = []

    def rec(prefix, lo):
        if len(prefix) == r:
            out.append(FlagObject(r, m, tuple(prefix)))
            return
        for x in range(lo, m + 1):
            rec(prefix + [x], x)

    rec([], 0)
    return out


def weight_of(a: FlagObject) -> tuple:
    """(lambda_i) over slots 1..r."""
    return tuple(-a.ext(p - 1) + 2 * a.ext(p) - a.ext(p + 1) for p in range(1, a.r + 1))


def shift_weight(weight: tuple, letter: int) -> tuple:
    sign = 1 if letter > 0 else -1
    i = abs(letter)
    return tuple(w + sign * theta_pairing(label_of_slot(k + 1), i) for k, w in enumerate(weight))


def step(a, letter: int):
    """Apply E_i (letter > 0) or F_i (letter < 0) to an object; Zero if it leaves the set."""
    if a is Zero:
        return Zero
    p = slot(letter)
    if p > a.r:
        raise ValueError(f"label {format_label(letter)} outside rank {a.r}")
    new = list(a.a)
    if letter > 0:
        if a.ext(p) + 1 > a.ext(p + 1):
            return Zero
        new[p - 1] += 1
    else:
        lower = 0 if p == 1 else a.ext(p - 1)
        if a.ext(p) - 1 < lower:
            return Zero
        new[p - 1] -= 1
    return FlagObject(a.r, a.m, tuple(new))


@lru_cache(maxsize=None)
def local_frobenius(a: FlagObject, letter: int) -> FrobeniusPair:
    """Extension R^{a^{+-i}} over R^a for the factor of E_i / F_i applied at a."""
    if step(a, letter) is Zero:
        raise ValueError(f"{'E' if letter > 0 else 'F'}({format_label(letter)}) kills {a}")
    p = slot(letter)
    if letter > 0:
        return FrobeniusPair.split_left(a.ext(p + 1), a.ext(p) + 1, a.m)
    if p == 1:
        return FrobeniusPair.jblock(a.ext(1), a.m)
    return FrobeniusPair.split_right(a.ext(p - 1) + 1, a.ext(p), a.m)


@dataclass(frozen=True)
class Word:
    """A word of signed labels, leftmost letter applied last, on the object ``obj``."""

    obj: FlagObject
    letters: tuple

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        for x in self.letters:
            if slot(x) > self.obj.r:
                raise ValueError(f"label {format_label(x)} outside rank {self.obj.r}")

    def __len__(self):
        return len(self.letters)

    def objects(self) -> tuple:
        """Region objects left to right: objects()[k] sits left of letter k; the last is obj."""
        return _word_objects(self.obj, self.letters)

    def is_zero(self) -> bool:
        return any(o is Zero for o in self.objects())

    def target(self):
        return self.objects()[0]

    def weights(self) -> tuple:
        """Region weights left to right (defined even when objects vanish)."""
        out = [weight_of(self.obj)]
        for x in reversed(self.letters):
            out.append(shift_weight(out[-1], x))
        return tuple(reversed(out))

    def frobenius(self) -> tuple:
        """Local Frobenius pair of each letter (left to right)."""
        objs = self.objects()
        return tuple(local_frobenius(objs[k + 1], x) for k, x in enumerate(self.letters))

    def ranks(self) -> tuple:
        if self.is_zero():
            return ()
        return tuple(F.rank for F in self.frobenius())

    def basis_tuples(self) -> list:
        if self.is_zero():
            return []
        out = [()]
        for n in self.ranks():
            out = [t + (k,) for t in out for k in range(n)]
        return out

    def __str__(self):
        body = " ".join(("E" if x > 0 else "F") + f"({format_label(x)})" for x in self.letters)
        return f"{body} | {self.obj}".strip()

    @classmethod
    def parse(cls, text: str) -> "Word":
        m = re.fullmatch(r"\s*(.*?)\s*\|\s*a\s*=\s*([\d,\s]*?)\s*;\s*r\s*=\s*(\d+)\s+m\s*=\s*(\d+)\s*", text)
        if not m:
            raise ValueError(f"cannot parse word {text!r}")
        obj = FlagObject(int(m.group(3)), int(m.group(4)), tuple(int(x) for x in m.group(2).split(",") if x.strip()))
        return cls(obj, parse_letters(m.group(1)))


def parse_letters(text: str) -> tuple:
    letters = []
    for tok in re.findall(r"\S+", text):
        mm = re.fullmatch(r"([EF])\(([^)]*)\)", tok)
        if not mm:
            raise ValueError(f"bad letter {tok!r}")
        lab = parse_label(mm.group(2))
        letters.append(lab if mm.group(1) == "E" else -lab)
    return tuple(letters)


@lru_cache(maxsize=None)
def _word_objects(obj: FlagObject, letters: tuple) -> tuple:
    objs = [obj]
    for x in reversed(letters):
        objs.append(step(objs[-1], x))
    return tuple(reversed(objs))


def graded_rank(w: Word) -> LaurentQ:
    """Graded rank of the bimodule of w as a free right module over R^a."""
    if w.is_zero():
        return LaurentQ()
    result = LaurentQ(1)
    for F in w.frobenius():
        result = result * LaurentQ({2 * k + F.shift: 1 for k in range(F.rank)})
    return result


class TensorElement:
    """Canonical element of the bimodule of a word: basis tuple -> coefficient in R^a."""

    __slots__ = ("word", "coeffs")

    def __init__(self, word: Word, coeffs: dict | None = None):
        self.word = word
        self.coeffs = {k: v for k, v in (coeffs or {}).items() if not v.is_zero()}

    @classmethod
    def basis(cls, word: Word, tup: tuple) -> "TensorElement":
        return cls(word, {tuple(tup): Poly.const(1, word.obj.m)})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "TensorElement") -> "TensorElement":
        if self.word != other.word:
            raise ValueError("adding elements of different bimodules")
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out[k] + v if k in out else v
        return TensorElement(self.word, out)

    def __neg__(self):
        return TensorElement(self.word, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "TensorElement":
        if isinstance(c, Poly):
            return TensorElement(self.word, {k: v * c for k, v in self.coeffs.items()})
        return TensorElement(self.word, {k: v.scale(c) for k, v in self.coeffs.items()})

    def __eq__(self, other):
        return isinstance(other, TensorElement) and self.word == other.word and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.word, frozenset(self.coeffs.items())))

    def pure_tensors(self) -> list:
        """Expand into pure tensors (tuples of factor polynomials)."""
        return [(factors_of(self.word, tup, c)) for tup, c in self.coeffs.items()]

    def render(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        frob = self.word.frobenius()
        for tup in sorted(self.coeffs):
            c = self.coeffs[tup]
            factors = [str(Poly.var(F.split_var, F.m, k)) if k else "1" for F, k in zip(frob, tup)]
            parts.append(f"({c})*[" + " ⊗ ".join(factors) + "]")
        return " + ".join(parts)

    def __repr__(self):
        return f"TensorElement({self.render()})"

    def to_json(self) -> list:
        return [{"tuple": list(t), "coefficient": str(c)} for t, c in sorted(self.coeffs.items())]


def factors_of(word: Word, tup: tuple, coeff: Poly) -> tuple:
    """Pure tensor of basis monomials with the coefficient on the rightmost factor."""
    if not word.letters:
        return (coeff,)
    frob = word.frobenius()
    fs = [Poly.var(F.split_var, F.m, k) for F, k in zip(frob, tup)]
    fs[-1] = fs[-1] * coeff
    return tuple(fs)


def normalize(word: Word, pure: Iterable[Sequence[Poly]]) -> TensorElement:
    """Canonical form of a sum of pure tensors.

    For a non-empty word each pure tensor has one polynomial per letter; for the
    empty word it is a 1-tuple holding an element of R^a.
    """
    if word.is_zero():
        return TensorElement(word)
    m = word.obj.m
    if not word.letters:
        total = Poly.zero(m)
        for p in pure:
            total = total + p[0]
        return TensorElement(word, {(): total})
    frob = word.frobenius()
    n = len(word.letters)
    # state: (prefix indices, tail factors from position j+1 on) -> factor at position j
    state: dict = {}
    for p in pure:
        if len(p) != n:
            raise ValueError(f"pure tensor of length {len(p)} for a word of length {n}")
        if any(f.is_zero() for f in p):
            continue
        key = ((), tuple(p[1:]))
        state[key] = state[key] + p[0] if key in state else p[0]
    for j in range(n):
        F = frob[j]
        new: dict = {}
        for (prefix, tail), f in state.items():
            if f.is_zero():
                continue
            for k, c in expand_in_basis(F, f):
                if tail:
                    nxt = tail[0] * c
                    key = (prefix + (k,), tail[1:])
                    new[key] = new[key] + nxt if key in new else nxt
                else:
                    key = (prefix + (k,), ())
                    new[key] = new[key] + c if key in new else c
        state = new
    return TensorElement(word, {prefix: c for (prefix, _), c in state.items()})
