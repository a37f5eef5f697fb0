from hypothesis import given
from hypothesis import strategies as st

from coideal.polyring import Poly, WeylElement, act, degree, is_invariant

M = 4


def P(text, m=M):
    return Poly.parse(text, m)


def polys(m=M, max_exp=3):
    exps = st.tuples(*[st.integers(0, max_exp)] * m)
    return st.dictionaries(exps, st.integers(-4, 4), max_size=4).map(lambda d: Poly(d, m))


words = st.lists(st.integers(0, M - 1), max_size=6)


def test_act_examples():
    s1 = WeylElement.simple(1, 2)
    assert act(s1, P("t1", 2)) == P("t2", 2)
    assert act(WeylElement.simple(0, 2), P("t1^2", 2)) == P("t1^2", 2)
    gamma2 = WeylElement.from_word([1, 0, 1], 2)
    # direct substitution: s1 s0 s1 sends t2 -> -t2 and fixes t1
    assert act(gamma2, P("t2*t1", 2)) == P("-t1*t2", 2)


def test_is_invariant_examples():
    assert is_invariant(P("t1 + t2", 2), [1])
    assert not is_invariant(P("t1", 2), [0])
    assert is_invariant(P("t1^2*t2^2", 2), [0, 1])


def test_degree_examples():
    assert degree(P("t1*t2")) == 4
    assert degree(P("t1^2 + t2^2")) == 4
    assert degree(P("t1 + t1^2")) == "heterogeneous"


def test_coxeter_relations():
    gens = [P(f"t{i}") for i in range(1, M + 1)]
    for w, order in [([0, 1], 4)] + [([i, i + 1], 3) for i in range(1, M - 1)]:
        g = WeylElement.from_word(w * order, M)
        assert g == WeylElement.identity(M)
        assert all(act(g, t) == t for t in gens)


def test_render_roundtrip_with_fractions():
    f = P("3/2*t1^2*t3 - t2")
    assert Poly.parse(str(f), M) == f


@given(words, words, polys())
def test_action_is_a_group_action(u, v, f):
    U, V = WeylElement.from_word(u, M), WeylElement.from_word(v, M)
    assert act(U * V, f) == act(U, act(V, f))


@given(words, polys(), polys())
def test_action_is_a_ring_map(w, f, g):
    W = WeylElement.from_word(w, M)
    assert act(W, f * g) == act(W, f) * act(W, g)
    assert act(W, f + g) == act(W, f) + act(W, g)
    if not f.is_zero():
        assert degree(act(W, f)) == degree(f)


@given(polys())
def test_parse_roundtrip(f):
    assert Poly.parse(str(f), M) == f
