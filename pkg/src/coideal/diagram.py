"""String diagrams for 2-morphisms: atoms, layered diagrams, the text DSL, degrees and symmetries.

Boundaries are tuples of signed doubled labels (+i upward strand E_i, -i downward strand F_i).
A layer is a list of (atom, position) pairs acting on disjoint intervals of the boundary
below it; positions index that boundary.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .flagcat import (
    DIAMOND,
    FlagObject,
    all_objects,
    cartan,
    format_label,
    parse_label,
    parse_letters,
    shift_weight,
    slot,
    theta_pairing,
    weight_of,
)

ID = "Id"
DOT = "Dot"
CROSS_UP = "CrossUp"
CROSS_DOWN = "CrossDown"
CAP_CW = "CapCW"      # E_i F_i -> 1
CAP_CCW = "CapCCW"    # F_i E_i -> 1
CUP_CW = "CupCW"      # 1 -> E_i F_i
CUP_CCW = "CupCCW"    # 1 -> F_i E_i
CHI_LEFT = "ChiLeft"  # F_j E_i -> E_i F_j, upward strand moving left
CHI_RIGHT = "ChiRight"  # E_j F_i -> F_i E_j, upward strand moving right
BUBBLE = "Bubble"     # closed loop, possibly with a negative (formal) dot count

KINDS = (ID, DOT, CROSS_UP, CROSS_DOWN, CAP_CW, CAP_CCW, CUP_CW, CUP_CCW, CHI_LEFT, CHI_RIGHT, BUBBLE)


class DiagramError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None, layer: int | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        if layer is not None:
            where.append(f"layer {layer}")
        super().__init__(f"{message}" + (f" ({', '.join(where)})" if where else ""))
        self.line, self.column, self.layer = line, column, layer


@dataclass(frozen=True)
class Atom:
    kind: str
    labels: tuple
    count: int = 0
    clockwise: bool = True

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown atom kind {self.kind}")

    def source(self) -> tuple:
        k, lab = self.kind, self.labels
        if k in (ID, DOT):
            return (lab[0],)
        if k == CROSS_UP:
            return (lab[0], lab[1])
        if k == CROSS_DOWN:
            return (-lab[0], -lab[1])
        if k == CAP_CW:
            return (lab[0], -lab[0])
        if k == CAP_CCW:
            return (-lab[0], lab[0])
        if k == CHI_RIGHT:
            i, j = lab
            return (j, -i)
        if k == CHI_LEFT:
            i, j = lab
            return (-j, i)
        return ()

    def target(self) -> tuple:
        k, lab = self.kind, self.labels
        if k in (ID, DOT):
            return (lab[0],)
        if k == CROSS_UP:
            return (lab[1], lab[0])
        if k == CROSS_DOWN:
            return (-lab[1], -lab[0])
        if k == CUP_CW:
            return (lab[0], -lab[0])
        if k == CUP_CCW:
            return (-lab[0], lab[0])
        if k == CHI_RIGHT:
            i, j = lab
            return (-i, j)
        if k == CHI_LEFT:
            i, j = lab
            return (i, -j)
        return ()

    def render(self) -> str:
        k, lab = self.kind, self.labels
        if k == ID:
            return f"id({_signed(lab[0])})"
        if k == DOT:
            return f"dot({_signed(lab[0])},{self.count})"
        if k in (CROSS_UP, CROSS_DOWN):
            return f"x({format_label(lab[0])},{format_label(lab[1])},{'up' if k == CROSS_UP else 'down'})"
        if k in (CAP_CW, CAP_CCW):
            return f"cap({format_label(lab[0])},{'cw' if k == CAP_CW else 'ccw'})"
        if k in (CUP_CW, CUP_CCW):
            return f"cup({format_label(lab[0])},{'cw' if k == CUP_CW else 'ccw'})"
        if k in (CHI_LEFT, CHI_RIGHT):
            return f"chi({format_label(lab[0])},{format_label(lab[1])},{'l' if k == CHI_LEFT else 'r'})"
        return f"bubble({format_label(lab[0])},{self.count},{'cw' if self.clockwise else 'ccw'})"


def _signed(x: int) -> str:
    return ("-" if x < 0 else "") + format_label(x)


# constructors

def id_(x: int) -> Atom:
    return Atom(ID, (x,))


def dot(x: int, n: int = 1) -> Atom:
    return Atom(DOT, (x,), count=n)


def cross_up(i: int, j: int) -> Atom:
    return Atom(CROSS_UP, (i, j))


def cross_down(i: int, j: int) -> Atom:
    return Atom(CROSS_DOWN, (i, j))


def cap(i: int, clockwise: bool) -> Atom:
    return Atom(CAP_CW if clockwise else CAP_CCW, (i,))


def cup(i: int, clockwise: bool) -> Atom:
    return Atom(CUP_CW if clockwise else CUP_CCW, (i,))


def chi_left(i: int, j: int) -> Atom:
    return Atom(CHI_LEFT, (i, j))


def chi_right(i: int, j: int) -> Atom:
    return Atom(CHI_RIGHT, (i, j))


def bubble(i: int, s: int, clockwise: bool) -> Atom:
    return Atom(BUBBLE, (i,), count=s, clockwise=clockwise)


@dataclass(frozen=True)
class Diagram:
    obj: FlagObject
    bottom: tuple
    layers: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "bottom", tuple(self.bottom))
        object.__setattr__(self, "layers", tuple(tuple((a, int(p)) for a, p in layer) for layer in self.layers))
        self.boundaries()

    def boundaries(self) -> list:
        """Boundary words below each layer and above the last one."""
        out = [self.bottom]
        for n, layer in enumerate(self.layers):
            out.append(apply_layer(out[-1], layer, n, self.obj.r))
        return out

    @property
    def top(self) -> tuple:
        return self.boundaries()[-1]

    def then(self, *atoms_at) -> "Diagram":
        """Append one layer given as (atom, position) pairs."""
        return Diagram(self.obj, self.bottom, self.layers + (tuple(atoms_at),))

    def steps(self) -> list:
        """Single-atom steps (boundary below, atom, position) with chi atoms expanded."""
        out = []
        for below, layer in zip(self.boundaries(), self.layers):
            cur = below
            for atom, pos in sorted(layer, key=lambda ap: -ap[1]):
                for a2, p2 in _expand(atom, pos):
                    out.append((cur, a2, p2))
                    cur = apply_atom(cur, a2, p2)
        return out

    def expanded(self) -> "Diagram":
        """Same 2-morphism with one generator per layer and chi atoms expanded."""
        return Diagram(self.obj, self.bottom, tuple(((a, p),) for _, a, p in self.steps()))

    def degree(self) -> int:
        total = 0
        for below, atom, pos in self.steps():
            total += atom_degree(atom, _right_weight(self.obj, below, pos + len(atom.source())))
        return total

    def render(self) -> str:
        lines = [f"object a={','.join(map(str, self.obj.a))}; r={self.obj.r}; m={self.obj.m}",
                 "bottom " + render_word(self.bottom)]
        for layer in self.layers:
            lines.append("layer " + ", ".join(f"{a.render()}@{p}" for a, p in layer))
        return "\n".join(lines) + "\n"


def render_word(word: Sequence[int]) -> str:
    return " ".join(("E" if x > 0 else "F") + f"({format_label(x)})" for x in word)


def _right_weight(obj: FlagObject, boundary: Sequence[int], pos: int) -> tuple:
    w = weight_of(obj)
    for x in reversed(boundary[pos:]):
        w = shift_weight(w, x)
    return w


def region_weights(obj: FlagObject, boundary: Sequence[int]) -> list:
    return [_right_weight(obj, boundary, k) for k in range(len(boundary) + 1)]


def apply_atom(boundary: tuple, atom: Atom, pos: int, r: int | None = None, layer: int | None = None) -> tuple:
    src = atom.source()
    for lab in atom.labels:
        if r is not None and slot(lab) > r:
            raise DiagramError(f"label {format_label(lab)} outside rank {r}", layer=layer)
    if pos < 0 or pos + len(src) > len(boundary) or tuple(boundary[pos:pos + len(src)]) != src:
        raise DiagramError(
            f"{atom.render()}@{pos} does not fit boundary {render_word(boundary) or '(empty)'}", layer=layer
        )
    return tuple(boundary[:pos]) + atom.target() + tuple(boundary[pos + len(src):])


def apply_layer(boundary: tuple, layer: Iterable, n: int | None = None, r: int | None = None) -> tuple:
    spans = []
    for atom, pos in layer:
        spans.append((pos, pos + len(atom.source()), atom))
    spans.sort(key=lambda s: (s[0], s[1]))
    for (s1, e1, a1), (s2, e2, a2) in zip(spans, spans[1:]):
        if s2 < e1 or (s1 == s2 == e1 == e2):
            raise DiagramError("atoms in one layer overlap", layer=n)
    cur = tuple(boundary)
    for start, _, atom in sorted(spans, key=lambda s: -s[0]):
        cur = apply_atom(cur, atom, start, r, n)
    return cur


def _expand(atom: Atom, pos: int) -> list:
    if atom.kind == ID:
        return []
    if atom.kind == CHI_RIGHT:
        i, j = atom.labels
        return [(cup(i, False), pos), (cross_up(i, j), pos + 1), (cap(i, True), pos + 2)]
    if atom.kind == CHI_LEFT:
        i, j = atom.labels
        return [(cup(i, True), pos), (cross_down(i, j), pos + 1), (cap(i, False), pos + 2)]
    return [(atom, pos)]


def atom_degree(atom: Atom, right: tuple) -> int:
    """Degree of a generator whose right-hand region has weight ``right``."""
    k = atom.kind
    if k == ID:
        return 0
    if k == DOT:
        return 2 * atom.count
    if k in (CROSS_UP, CROSS_DOWN):
        return -cartan(*atom.labels)
    if k in (CHI_LEFT, CHI_RIGHT):
        total = 0
        bnd = atom.source()
        w = {0: right}
        for a2, p2 in _expand(atom, 0):
            r2 = right
            for x in reversed(bnd[p2 + len(a2.source()):]):
                r2 = shift_weight(r2, x)
            total += atom_degree(a2, r2)
            bnd = apply_atom(bnd, a2, p2)
        return total
    i = atom.labels[0]
    lam = right[slot(i) - 1]
    up = lam + theta_pairing(i, i) - 1
    down = 1 - lam
    if k in (CUP_CCW, CAP_CCW):
        return up
    if k in (CUP_CW, CAP_CW):
        return down
    if k == BUBBLE:
        return 2 * atom.count + 2 * (down if atom.clockwise else up)
    raise ValueError(k)


# composition

def identity(obj: FlagObject, word: Sequence[int]) -> Diagram:
    return Diagram(obj, tuple(word), ())


def compose_vertical(g: Diagram, f: Diagram) -> Diagram:
    """g after f."""
    if f.obj != g.obj:
        raise DiagramError("objects differ")
    if f.top != g.bottom:
        raise DiagramError(f"boundary mismatch: {render_word(f.top)} vs {render_word(g.bottom)}")
    return Diagram(f.obj, f.bottom, f.layers + g.layers)


def shift_layers(d: Diagram, offset: int) -> tuple:
    return tuple(tuple((a, p + offset) for a, p in layer) for layer in d.layers)


# symmetries

PSI, OMEGA, OMEGA_INV, SIGMA, SIGMA_INV = "psi", "omega", "omega_inv", "sigma", "sigma_inv"


def _object_with_weight(like: FlagObject, weight: tuple):
    for o in all_objects(like.r, like.m):
        if weight_of(o) == weight:
            return o
    return None


def _partner_weight(w: tuple) -> tuple:
    return tuple(-x - (1 if k == 0 else 0) for k, x in enumerate(w))


def symmetry(d: Diagram, which: str):
    """Apply a symmetry; returns (diagram or None, rational scalar).

    None means the transformed diagram lives on a weight with no object at this (r, m).
    """
    e = d.expanded()
    steps = [(a, p) for layer in e.layers for a, p in layer]
    bounds = e.boundaries()
    scalar = Fraction(1)
    if which == PSI:
        new_layers = []
        for (atom, pos), below in zip(reversed(steps), reversed(bounds[:-1])):
            new_layers.append(((_psi_atom(atom), pos),))
        return Diagram(e.obj, e.top, tuple(new_layers)), scalar
    if which in (OMEGA, OMEGA_INV):
        obj = _object_with_weight(e.obj, _partner_weight(weight_of(e.obj)))
        new_layers = []
        for atom, pos in steps:
            a2, c = _omega_atom(atom, which == OMEGA_INV)
            scalar *= c
            new_layers.append(((a2, pos),))
        if obj is None:
            return None, scalar
        return Diagram(obj, tuple(-x for x in e.bottom), tuple(new_layers)), scalar
    if which in (SIGMA, SIGMA_INV):
        left = region_weights(e.obj, e.bottom)[0]
        obj = _object_with_weight(e.obj, _partner_weight(left))
        new_layers = []
        for (atom, pos), below in zip(steps, bounds[:-1]):
            a2, c = _sigma_atom(atom, which == SIGMA_INV)
            scalar *= c
            new_layers.append(((a2, len(below) - pos - len(atom.source())),))
        if obj is None:
            return None, scalar
        return Diagram(obj, tuple(reversed(e.bottom)), tuple(new_layers)), scalar
    raise ValueError(f"unknown symmetry {which}")


def _two(i: int) -> Fraction:
    return Fraction(2) if abs(i) == DIAMOND else Fraction(1)


def _psi_atom(atom: Atom) -> Atom:
    k = atom.kind
    if k == CROSS_UP:
        return cross_up(atom.labels[1], atom.labels[0])
    if k == CROSS_DOWN:
        return cross_down(atom.labels[1], atom.labels[0])
    swap = {CAP_CW: CUP_CW, CUP_CW: CAP_CW, CAP_CCW: CUP_CCW, CUP_CCW: CAP_CCW}
    if k in swap:
        return Atom(swap[k], atom.labels)
    return atom


def _omega_atom(atom: Atom, inverse: bool):
    k, lab = atom.kind, atom.labels
    if k == DOT:
        return dot(-lab[0], atom.count), Fraction(1)
    if k == CROSS_UP:
        return cross_down(*lab), Fraction(-1)
    if k == CROSS_DOWN:
        return cross_up(*lab), Fraction(-1)
    return _adjunction_swap(atom, inverse)


def _sigma_atom(atom: Atom, inverse: bool):
    k, lab = atom.kind, atom.labels
    if k == DOT:
        return atom, Fraction(1)
    if k == CROSS_UP:
        return cross_up(lab[1], lab[0]), Fraction(-1)
    if k == CROSS_DOWN:
        return cross_down(lab[1], lab[0]), Fraction(-1)
    return _adjunction_swap(atom, inverse)


def _adjunction_swap(atom: Atom, inverse: bool):
    """eta <-> eta', eps <-> eps' with the powers of 2 of the two symmetries."""
    k, lab = atom.kind, atom.labels
    two = _two(lab[0])
    if k == CUP_CCW:   # eta
        return cup(lab[0], True), (Fraction(1) if inverse else 1 / two)
    if k == CUP_CW:    # eta'
        return cup(lab[0], False), (two if inverse else Fraction(1))
    if k == CAP_CW:    # eps
        return cap(lab[0], False), (Fraction(1) if inverse else two)
    if k == CAP_CCW:   # eps'
        return cap(lab[0], True), (1 / two if inverse else Fraction(1))
    if k == BUBBLE:
        # cw = eps . eta' and ccw = eps' . eta; both directions give the same factor
        c = two if atom.clockwise else 1 / two
        return bubble(lab[0], atom.count, not atom.clockwise), c
    raise ValueError(k)


# the DSL

_ATOM_RE = re.compile(r"\s*([a-z]+)\(([^)]*)\)\s*@\s*(-?\d+)\s*")


def parse_atom(text: str, line: int = 0, column: int = 0) -> tuple:
    m = _ATOM_RE.fullmatch(text)
    if not m:
        raise DiagramError(f"cannot parse atom {text.strip()!r}", line, column)
    name, args, pos = m.group(1), [x.strip() for x in m.group(2).split(",")], int(m.group(3))
    try:
        if name == "id" and len(args) == 1:
            atom = id_(_parse_signed(args[0]))
        elif name == "dot" and len(args) == 2:
            atom = dot(_parse_signed(args[0]), int(args[1]))
        elif name == "x" and len(args) == 3 and args[2] in ("up", "down"):
            i, j = parse_label(args[0]), parse_label(args[1])
            atom = cross_up(i, j) if args[2] == "up" else cross_down(i, j)
        elif name in ("cap", "cup") and len(args) == 2 and args[1] in ("cw", "ccw"):
            i = parse_label(args[0])
            atom = (cap if name == "cap" else cup)(i, args[1] == "cw")
        elif name == "chi" and len(args) == 3 and args[2] in ("l", "r"):
            i, j = parse_label(args[0]), parse_label(args[1])
            atom = chi_left(i, j) if args[2] == "l" else chi_right(i, j)
        elif name == "bubble" and len(args) == 3 and args[2] in ("cw", "ccw"):
            atom = bubble(parse_label(args[0]), int(args[1]), args[2] == "cw")
        else:
            raise DiagramError(f"unknown atom or wrong arguments: {name}({','.join(args)})", line, column)
    except DiagramError:
        raise
    except ValueError as exc:
        raise DiagramError(str(exc), line, column) from None
    return atom, pos


def _parse_signed(text: str) -> int:
    text = text.strip()
    if text.startswith("-"):
        return -parse_label(text[1:])
    return parse_label(text.lstrip("+"))


def parse(text: str) -> Diagram:
    obj = None
    bottom = None
    layers = []
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        col = len(line) - len(line.lstrip()) + 1
        stripped = line.strip()
        if stripped.startswith("object"):
            m = re.fullmatch(r"object\s+a\s*=\s*([\d,\s]*?)\s*;\s*r\s*=\s*(\d+)\s*;\s*m\s*=\s*(\d+)", stripped)
            if not m:
                raise DiagramError("malformed object header", n, col)
            try:
                obj = FlagObject(int(m.group(2)), int(m.group(3)),
                                 tuple(int(x) for x in m.group(1).split(",") if x.strip()))
            except ValueError as exc:
                raise DiagramError(str(exc), n, col) from None
        elif stripped.startswith("bottom"):
            try:
                bottom = parse_letters(stripped[len("bottom"):])
            except ValueError as exc:
                raise DiagramError(str(exc), n, col + len("bottom")) from None
        elif stripped.startswith("layer"):
            if obj is None or bottom is None:
                raise DiagramError("layer before object/bottom header", n, col)
            body = line[line.index("layer") + len("layer"):]
            offset = line.index("layer") + len("layer") + 1
            items = []
            for piece in _split_top(body):
                items.append(parse_atom(piece[0], n, offset + piece[1]))
            layers.append(tuple(items))
        else:
            raise DiagramError(f"unknown directive {stripped.split()[0]!r}", n, col)
    if obj is None or bottom is None:
        raise DiagramError("missing object or bottom line")
    for lab in bottom:
        if slot(lab) > obj.r:
            raise DiagramError(f"label {format_label(lab)} outside rank {obj.r}", layer=None)
    return Diagram(obj, bottom, tuple(layers))


def _split_top(body: str) -> list:
    """Split on commas outside parentheses, keeping start offsets."""
    out, depth, start = [], 0, 0
    for k, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            out.append((body[start:k], start))
            start = k + 1
    out.append((body[start:], start))
    return [p for p in out if p[0].strip()]


def render(d: Diagram) -> str:
    return d.render()
