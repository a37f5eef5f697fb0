"""Decategorified layer: the idempotented coideal algebra acting on one copy of
Z[q, q^-1] per flag object, with structure constants read off graded ranks."""

from __future__ import annotations

import itertools
import json
from functools import lru_cache

from .flagcat import (
    DIAMOND,
    FlagObject,
    Word,
    Zero,
    all_objects,
    cartan,
    format_label,
    graded_rank,
    slot,
    step,
    weight_of,
)
from .scalar import LaurentQ, bar, quantum_factorial, quantum_int


class IntegralityError(ArithmeticError):
    """A divided power whose image is not integral."""


def varpi(r: int) -> tuple:
    """Weight with 1 in the diamond slot and 0 elsewhere."""
    return tuple(1 if p == 0 else 0 for p in range(r))


def partner_weight(weight: tuple) -> tuple:
    """-lambda - varpi, the weight swapped with lambda by the omega and sigma symmetries."""
    return tuple(-x - v for x, v in zip(weight, varpi(len(weight))))


def _letter(x) -> tuple:
    """Normalize a word entry to (signed label, power)."""
    if isinstance(x, tuple):
        letter, n = x
        return int(letter), int(n)
    return int(x), 1


def format_monomial(word) -> str:
    parts = []
    for x in word:
        letter, n = _letter(x)
        name = ("E" if letter > 0 else "F") + f"({format_label(letter)})"
        parts.append(name if n == 1 else f"{name}^({n})")
    return " ".join(parts) or "1"


class K0Module:
    """The module spanned by u_a over all flag objects a with given (r, m).

    A vector is a dict {FlagObject: LaurentQ}; zero coefficients are dropped.
    """

    def __init__(self, r: int, m: int):
        if r < 1 or m < 0:
            raise ValueError("need r >= 1 and m >= 0")
        self.r, self.m = r, m
        self.basis = tuple(all_objects(r, m))
        self._by_weight = {weight_of(a): a for a in self.basis}
        self.labels = [2 * p - 1 for p in range(1, r + 1)]

    # generators

    @lru_cache(maxsize=None)
    def generator(self, letter: int, a: FlagObject):
        """(target, coefficient) of E_i / F_i on u_a, or None when it vanishes."""
        target = step(a, letter)
        if target is Zero:
            return None
        return target, graded_rank(Word(a, (letter,)))

    def matrix(self, letter: int) -> dict:
        """{(source, target): coefficient} for one generator."""
        out = {}
        for a in self.basis:
            hit = self.generator(letter, a)
            if hit is not None:
                out[(a, hit[0])] = hit[1]
        return out

    @lru_cache(maxsize=None)
    def divided_power(self, letter: int, n: int, a: FlagObject):
        """(target, coefficient) of the n-th divided power on u_a, or None."""
        obj, coeff = a, LaurentQ(1)
        for _ in range(n):
            hit = self.generator(letter, obj)
            if hit is None:
                return None
            obj, c = hit
            coeff = coeff * c
        quotient, remainder = coeff.divmod(quantum_factorial(n))
        if not remainder.is_zero() or not quotient.is_integral():
            raise IntegralityError(f"{format_monomial([(letter, n)])} on {a}: {coeff} not divisible by [{n}]!")
        return obj, quotient

    def apply_monomial(self, word, a: FlagObject) -> dict:
        """Image of u_a under a word; entries are labels or (label, power), leftmost applied last."""
        obj, coeff = a, LaurentQ(1)
        for x in reversed(list(word)):
            letter, n = _letter(x)
            if n == 0:
                continue
            hit = self.divided_power(letter, n, obj)
            if hit is None:
                return {}
            obj, c = hit
            coeff = coeff * c
        return {} if coeff.is_zero() else {obj: coeff}

    def apply(self, combination, a: FlagObject) -> dict:
        """Image of u_a under sum of coef * word, given as [(coef, word), ...]."""
        out: dict = {}
        for coef, word in combination:
            for obj, c in self.apply_monomial(word, a).items():
                out[obj] = out.get(obj, LaurentQ()) + c * coef
        return {k: v for k, v in out.items() if not v.is_zero()}

    def object_of_weight(self, weight: tuple):
        return self._by_weight.get(tuple(weight))

    # relations

    def relation(self, name: str, a: FlagObject, i: int = 0, j: int = 0):
        """(lhs, rhs) combinations for a defining relation at the object a, or None when not applicable."""
        lam = weight_of(a)
        one = LaurentQ(1)
        D = DIAMOND
        if name == "commutator-distinct":
            if i == j:
                return None
            return [(one, (i, -j)), (-one, (-j, i))], []
        if name == "commutator":
            if i == D:
                return None
            return [(one, (i, -i)), (-one, (-i, i))], [(quantum_int(lam[slot(i) - 1]), ())]
        if name in ("serre-E", "serre-F"):
            if i == j or cartan(i, j) == 0:
                return None
            sign = 1 if name == "serre-E" else -1
            top = 1 - cartan(i, j)
            lhs = [(LaurentQ((-1) ** p), ((sign * i, p), sign * j, (sign * i, top - p))) for p in range(top + 1)]
            return lhs, []
        ld = lam[0]
        if name == "jserre-E":
            lhs = [(one, ((D, 2), -D)), (-one, (D, -D, D)), (one, (-D, (D, 2)))]
            return lhs, [(-(LaurentQ.q(ld + 2) + LaurentQ.q(-ld - 2)), (D,))]
        if name == "jserre-F":
            lhs = [(one, ((-D, 2), D)), (-one, (-D, D, -D)), (one, (D, (-D, 2)))]
            return lhs, [(-(LaurentQ.q(ld - 1) + LaurentQ.q(1 - ld)), (-D,))]
        raise ValueError(f"unknown relation {name!r}")

    def expansion(self, name: str, a: FlagObject):
        """(lhs, rhs) for a rewriting of F E F or E F E in its weight regime, or None outside it."""
        ld = weight_of(a)[0]
        D = DIAMOND
        one = LaurentQ(1)
        fef = [(one, (-D, D, -D))]
        efe = [(one, (D, -D, D))]
        f2e, ef2 = (one, ((-D, 2), D)), (one, (D, (-D, 2)))
        e2f, fe2 = (one, ((D, 2), -D)), (one, (-D, (D, 2)))
        if name == "FEF-high" and ld >= 2:
            return fef, [f2e, ef2, (quantum_int(ld) - quantum_int(ld - 2), (-D,))]
        if name == "FEF-one" and ld == 1:
            return fef, [f2e, ef2, (LaurentQ(2), (-D,))]
        if name == "FEF-low" and ld <= 0:
            return fef, [ef2, f2e, (quantum_int(-ld + 2) - quantum_int(-ld), (-D,))]
        if name == "EFE-low" and ld <= -3:
            return efe, [e2f, fe2, (quantum_int(-1 - ld) - quantum_int(-3 - ld), (D,))]
        if name == "EFE-minus-two" and ld == -2:
            return efe, [fe2, e2f, (LaurentQ(2), (D,))]
        if name == "EFE-high" and ld >= -1:
            return efe, [fe2, e2f, (quantum_int(ld + 3) - quantum_int(ld + 1), (D,))]
        if name not in EXPANSIONS:
            raise ValueError(f"unknown expansion {name!r}")
        return None

    def _compare(self, pair, a) -> bool:
        lhs, rhs = pair
        return self.apply(lhs, a) == self.apply(rhs, a)

    def check_relation(self, name: str) -> dict:
        """{(object, labels): bool} over every object and applicable label choice."""
        arity = ARITY[name]
        out = {}
        for a in self.basis:
            for labels in itertools.product(self.labels, repeat=arity):
                pair = self.relation(name, a, *labels)
                if pair is None:
                    continue
                try:
                    out[(a, labels)] = self._compare(pair, a)
                except IntegralityError:
                    out[(a, labels)] = False
        return out

    def check_expansions(self) -> dict:
        """{name: {"pass", "fail", "objects"}} for each rewriting in its regime."""
        report = {}
        for name in EXPANSIONS:
            entry = {"pass": 0, "fail": 0, "objects": []}
            for a in self.basis:
                pair = self.expansion(name, a)
                if pair is None:
                    continue
                ok = self._compare(pair, a)
                entry["pass" if ok else "fail"] += 1
                entry["objects"].append(a.a)
            report[name] = entry
        return report

    def check_involutions(self) -> dict:
        """Bar-invariance of generator entries and the varpi index bijection for omega / sigma."""
        report = {"bar_invariant": 0, "not_bar_invariant": 0, "nonnegative": 0, "negative": 0,
                  "omega": 0, "sigma": 0, "mismatch": 0, "skipped": 0, "partner_involution": True}
        for letter in self.labels + [-x for x in self.labels]:
            for c in self.matrix(letter).values():
                report["bar_invariant" if bar(c) == c else "not_bar_invariant"] += 1
                report["nonnegative" if c.is_integral() and c.is_nonnegative() else "negative"] += 1
        for a in self.basis:
            p = self.partner(a)
            if p is not None and self.partner(p) != a:
                report["partner_involution"] = False
            for i in self.labels:
                target = step(a, i)
                if target is Zero:
                    continue
                pa, pt = p, self.partner(target)
                if pa is None or pt is None:
                    report["skipped"] += 1
                    continue
                # omega: F_i from the partner of a lands on the partner of E_i a
                report["omega" if step(pa, -i) == pt else "mismatch"] += 1
                # sigma reverses arrows: E_i from the partner of the target lands on the partner of a
                report["sigma" if step(pt, i) == pa else "mismatch"] += 1
        return report

    def partner(self, a: FlagObject):
        return self.object_of_weight(partner_weight(weight_of(a)))

    def failures(self) -> list:
        """Every failing relation or expansion instance, as readable strings."""
        bad = []
        for name in RELATIONS:
            for (a, labels), ok in self.check_relation(name).items():
                if not ok:
                    bad.append(f"{name} {a} labels={labels}")
        for name, entry in self.check_expansions().items():
            if entry["fail"]:
                bad.append(f"{name} failures={entry['fail']}")
        inv = self.check_involutions()
        if inv["not_bar_invariant"] or inv["negative"] or inv["mismatch"] or not inv["partner_involution"]:
            bad.append(f"involutions {inv}")
        return bad

    def to_json(self) -> str:
        """Generator matrices keyed by generator and source object."""
        data = {}
        for letter in self.labels + [-x for x in self.labels]:
            gen = format_monomial([letter])
            for (src, tgt), c in self.matrix(letter).items():
                data[f"{gen} | {','.join(map(str, src.a))}"] = {"target": list(tgt.a), "coefficient": str(c)}
        return json.dumps({"r": self.r, "m": self.m, "matrices": data}, indent=1)


RELATIONS = ("commutator-distinct", "commutator", "serre-E", "serre-F", "jserre-E", "jserre-F")
ARITY = {"commutator-distinct": 2, "commutator": 1, "serre-E": 2, "serre-F": 2, "jserre-E": 0, "jserre-F": 0}
EXPANSIONS = ("FEF-high", "FEF-one", "FEF-low", "EFE-low", "EFE-minus-two", "EFE-high")


def k0_suite(r_max: int, m_max: int) -> dict:
    """Relations, expansions and involution checks for every (r, m) within bounds."""
    report = {"relations": {n: {"pass": 0, "fail": 0} for n in RELATIONS},
              "expansions": {n: {"pass": 0, "fail": 0} for n in EXPANSIONS},
              "involutions": {}, "failures": []}
    for r in range(1, r_max + 1):
        for m in range(1, m_max + 1):
            mod = K0Module(r, m)
            for name in RELATIONS:
                for (a, labels), ok in mod.check_relation(name).items():
                    report["relations"][name]["pass" if ok else "fail"] += 1
                    if not ok:
                        report["failures"].append(f"{name} {a} labels={labels}")
            for name, entry in mod.check_expansions().items():
                report["expansions"][name]["pass"] += entry["pass"]
                report["expansions"][name]["fail"] += entry["fail"]
                if entry["fail"]:
                    report["failures"].append(f"{name} r={r} m={m}")
            inv = mod.check_involutions()
            for k, v in inv.items():
                if isinstance(v, bool):
                    report["involutions"][k] = report["involutions"].get(k, True) and v
                else:
                    report["involutions"][k] = report["involutions"].get(k, 0) + v
            if inv["not_bar_invariant"] or inv["negative"] or inv["mismatch"] or not inv["partner_involution"]:
                report["failures"].append(f"involutions r={r} m={m}")
    return report


def serre_word_compatibility(r_max: int, m_max: int) -> dict:
    """graded_rank of each diamond Serre word against its K0 evaluation.

    Also compares words with a repeated letter against [2] times the divided power.
    """
    from .relcheck import EFF, F1, FEF, FFE

    report = {"pass": 0, "fail": 0, "failures": []}
    two = quantum_int(2)
    pairs = [(w, [(LaurentQ(1), w)]) for w in (EFF, FFE, FEF, F1)]
    pairs += [(EFF, [(two, (DIAMOND, (-DIAMOND, 2)))]), (FFE, [(two, ((-DIAMOND, 2), DIAMOND))])]
    for r in range(1, r_max + 1):
        for m in range(1, m_max + 1):
            mod = K0Module(r, m)
            for a in mod.basis:
                for letters, combination in pairs:
                    w = Word(a, letters)
                    expected = {} if w.is_zero() else {w.target(): graded_rank(w)}
                    expected = {k: v for k, v in expected.items() if not v.is_zero()}
                    ok = mod.apply(combination, a) == expected
                    report["pass" if ok else "fail"] += 1
                    if not ok:
                        report["failures"].append(f"{format_monomial(letters)} on {a}")
    return report
