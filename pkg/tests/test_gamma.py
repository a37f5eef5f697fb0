from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from coideal import diagram as dg
from coideal import gamma
from coideal.demazure import casimir, demazure_word
from coideal.flagcat import FlagObject, TensorElement, Word, all_objects, factors_of, normalize, weight_of
from coideal.polyring import Poly

D = 1


def _atom_diagram(a, atom, bottom=None):
    bottom = atom.source() if bottom is None else bottom
    return dg.Diagram(a, bottom, (((atom, 0),),))


def _live(a, letters):
    return not Word(a, letters).is_zero()


def test_cup_is_casimir_of_left_letter():
    seen = 0
    for a in all_objects(2, 4):
        w = Word(a, (3, -3))
        if w.is_zero():
            continue
        col = gamma.eval_diagram(_atom_diagram(a, dg.cup(3, True))).column(())
        assert col == normalize(w, casimir(w.frobenius()[0]))
        seen += 1
    assert seen > 5


def test_ccw_cap_is_split_demazure_of_product():
    seen = 0
    for a in all_objects(2, 4):
        w = Word(a, (-3, 3))
        if w.is_zero():
            continue
        F = w.frobenius()[1]
        M = gamma.eval_diagram(_atom_diagram(a, dg.cap(3, False)))
        for tup, el in M.columns:
            left, right = factors_of(w, tup, Poly.const(1, a.m))
            expected = demazure_word(F.word(), left * right).scale(F.sign())
            assert el.coeffs.get((), Poly.zero(a.m)) == expected
        seen += 1
    assert seen > 5


def test_cup_cap_example_values():
    a = FlagObject(2, 3, (1, 2))
    col = gamma.eval_diagram(_atom_diagram(a, dg.cup(3, True))).column(())
    assert col.render() == "(-t3)*[1 ⊗ 1] + (1)*[t2 ⊗ 1]"
    M = gamma.eval_diagram(_atom_diagram(FlagObject(2, 3, (1, 1)), dg.cap(3, False)))
    assert [str(el.coeffs.get((), 0)) for _, el in M.columns] == ["0", "1"]


@pytest.mark.parametrize("label", [D, 3])
def test_zigzag_is_identity(label):
    for a in all_objects(2, 3):
        if not _live(a, (label, -label, label)):
            continue
        up = dg.Diagram(a, (label,), (((dg.cup(label, False), 1),), ((dg.cap(label, True), 0),)))
        assert gamma.equal(gamma.eval_diagram(up), gamma.identity_matrix(Word(a, (label,))))
        down = dg.Diagram(a, (-label,), (((dg.cup(label, True), 1),), ((dg.cap(label, False), 0),)))
        if _live(a, (-label, label, -label)):
            assert gamma.equal(gamma.eval_diagram(down), gamma.identity_matrix(Word(a, (-label,))))


def test_same_label_crossing_is_negated_demazure():
    a = FlagObject(1, 3, (1,))
    M = gamma.eval_diagram(_atom_diagram(a, dg.cross_up(D, D)))
    w = M.source
    for tup, el in M.columns:
        left, right = factors_of(w, tup, Poly.const(1, a.m))
        o = w.objects()[2]
        image = sum((left_ * right_ for left_, right_ in el.pure_tensors()), Poly.zero(a.m))
        p = o.ext(1) + 1
        assert image == -demazure_word((p,), left * right)


def test_sideways_crossings_frozen():
    # Both sideways crossings come out as the negatives of the printed values; see the
    # sideways-recheck entry in the decisions ledger for why the crossing sign is kept.
    a = FlagObject(1, 3, (1,))
    right = dg.parse("object a=1; r=1; m=3\nbottom E(1/2) F(1/2)\nlayer chi(1/2,1/2,r)@0")
    assert gamma.eval_diagram(right).column((0, 0)).render() == "(1)*[1 ⊗ t2] + (1)*[t2 ⊗ 1]"
    left = dg.parse("object a=1; r=1; m=3\nbottom F(1/2) E(1/2)\nlayer chi(1/2,1/2,l)@0")
    assert gamma.eval_diagram(left).column((0, 0)).render() == "(-1)*[1 ⊗ 1]"
    assert right.obj == a


def _bubble_objects():
    for r in (1, 2, 3):
        for m in range(1, 5):
            yield from all_objects(r, m)


def test_degree_zero_bubbles():
    for a in _bubble_objects():
        for p in range(1, a.r + 1):
            i = 2 * p - 1
            one = Poly.const(1, a.m)
            cw0 = gamma.bubble_threshold(i, True, a)
            ccw0 = gamma.bubble_threshold(i, False, a)
            assert gamma.bubble(i, cw0, True, a) == one.scale(2 if i == D else 1)
            assert gamma.bubble(i, ccw0, False, a) == one
            for s in (cw0 - 1, cw0 - 2):
                assert gamma.bubble(i, s, True, a).is_zero()
            for s in (ccw0 - 1, ccw0 - 2):
                assert gamma.bubble(i, s, False, a).is_zero()


def test_bubble_series_product():
    a = FlagObject(2, 4, (1, 3))
    for i in (D, 3):
        cw0 = gamma.bubble_threshold(i, True, a)
        ccw0 = gamma.bubble_threshold(i, False, a)
        for n in range(0, 11):
            total = Poly.zero(a.m)
            for k in range(n + 1):
                total = total + gamma.bubble(i, cw0 + k, True, a) * gamma.bubble(i, ccw0 + n - k, False, a)
            expected = (2 if i == D else 1) if n == 0 else 0
            assert total == Poly.const(expected, a.m)


def test_bubble_degree_matches_dots():
    a = FlagObject(1, 4, (2,))
    cw0 = gamma.bubble_threshold(D, True, a)
    for k in range(4):
        v = gamma.bubble(D, cw0 + k, True, a)
        assert v.is_zero() or v.degree() == 2 * k


def test_equal_and_shape_errors():
    a = FlagObject(1, 3, (1,))
    dot = gamma.eval_diagram(_atom_diagram(a, dg.dot(D)))
    idn = gamma.identity_matrix(Word(a, (D,)))
    assert gamma.equal(dot, dot)
    assert not gamma.equal(dot, idn)
    assert gamma.equal(idn.scale(Fraction(1, 2)) + idn.scale(Fraction(1, 2)), idn)
    assert (dot + dot.scale(-1)).is_zero()
    other = gamma.identity_matrix(Word(a, (-D,)))
    with pytest.raises(ValueError):
        gamma.equal(dot, other)


def test_generators_are_homogeneous():
    for a in all_objects(2, 3):
        for atom in _generators(2):
            try:
                d = _atom_diagram(a, atom)
            except dg.DiagramError:
                continue
            if not (_live(a, d.bottom) and _live(a, d.top)):
                continue
            _assert_homogeneous(d)


def _generators(r):
    labels = [2 * p - 1 for p in range(1, r + 1)]
    out = []
    for i in labels:
        out += [dg.dot(i), dg.dot(-i), dg.cap(i, True), dg.cap(i, False), dg.cup(i, True), dg.cup(i, False)]
        for j in labels:
            out += [dg.cross_up(i, j), dg.cross_down(i, j), dg.chi_left(i, j), dg.chi_right(i, j)]
    return out


def _tuple_degree(word, tup):
    if not word.letters:
        return 0
    return sum(2 * k + F.shift for F, k in zip(word.frobenius(), tup))


def _assert_homogeneous(d):
    M = gamma.eval_diagram(d)
    for tup, el in M.columns:
        target = _tuple_degree(M.source, tup) + d.degree()
        for t2, c in el.coeffs.items():
            assert c.degree() + _tuple_degree(el.word, t2) == target, (d, tup, t2)


@st.composite
def stackable_pairs(draw):
    r = draw(st.integers(1, 2))
    a = draw(st.sampled_from(all_objects(r, 3)))
    atoms = _generators(r) + [dg.bubble(D, 1, True)]
    bottom = tuple(draw(st.lists(st.sampled_from([1, -1, 3, -3][: 2 * r]), max_size=3)))
    d = dg.identity(a, bottom)
    parts = []
    for _ in range(2):
        top = d.top
        fits = [(x, p) for x in atoms for p in range(len(top) + 1)
                if tuple(top[p:p + len(x.source())]) == x.source() and p + len(x.source()) <= len(top)]
        if not fits:
            break
        atom, pos = draw(st.sampled_from(fits))
        step = dg.Diagram(a, top, (((atom, pos),),))
        parts.append(step)
        d = d.then((atom, pos))
    return a, bottom, parts


@given(stackable_pairs())
def test_evaluation_is_functorial(case):
    a, bottom, parts = case
    if len(parts) < 2 or not _live(a, bottom):
        return
    f, g = parts
    whole = dg.compose_vertical(g, f)
    assert gamma.equal(gamma.eval_diagram(whole), gamma.eval_diagram(g).compose(gamma.eval_diagram(f)))


def test_weight_helper_consistency():
    assert weight_of(FlagObject(1, 3, (1,)))[0] == gamma.bubble_threshold(D, True, FlagObject(1, 3, (1,))) + 1


def test_matrix_json_roundtrip_shape():
    a = FlagObject(1, 3, (1,))
    M = gamma.eval_diagram(_atom_diagram(a, dg.dot(D)))
    js = M.to_json()
    assert js["source"] == str(M.source)
    assert len(js["columns"]) == len(M.columns)
    assert isinstance(TensorElement.basis(M.source, (0,)), TensorElement)
