import pytest

from coideal.flagcat import FlagObject, all_objects, weight_of
from coideal.k0 import (
    EXPANSIONS,
    RELATIONS,
    IntegralityError,
    K0Module,
    k0_suite,
    partner_weight,
    serre_word_compatibility,
)
from coideal.scalar import LaurentQ, bar, quantum_int

D = 1


def test_generator_examples():
    mod = K0Module(2, 4)
    a = FlagObject(2, 4, (1, 3))
    assert mod.generator(3, a) == (FlagObject(2, 4, (1, 4)), quantum_int(1))
    assert mod.generator(-3, a) == (FlagObject(2, 4, (1, 2)), quantum_int(2))
    low = K0Module(1, 4)
    assert low.generator(D, FlagObject(1, 4, (0,))) == (FlagObject(1, 4, (1,)), quantum_int(4))
    assert low.generator(-D, FlagObject(1, 4, (0,))) is None
    assert low.generator(D, FlagObject(1, 4, (4,))) is None


def test_split_generators_are_quantum_integers():
    mod = K0Module(3, 4)
    for a in mod.basis:
        for p in (2, 3):
            i = 2 * p - 1
            hit = mod.generator(i, a)
            if hit is not None:
                assert hit[1] == quantum_int(a.ext(p + 1) - a.ext(p))
            hit = mod.generator(-i, a)
            if hit is not None:
                assert hit[1] == quantum_int(a.ext(p) - a.ext(p - 1))


def test_divided_powers_examples():
    mod = K0Module(1, 4)
    assert mod.divided_power(-D, 2, FlagObject(1, 4, (2,))) == (FlagObject(1, 4, (0,)), quantum_int(4))
    target, c = mod.divided_power(D, 2, FlagObject(1, 4, (0,)))
    assert target == FlagObject(1, 4, (2,))
    assert c == LaurentQ({4: 1, 2: 1, 0: 2, -2: 1, -4: 1})


def test_divided_powers_integral_and_nonnegative():
    for r in (1, 2, 3):
        for m in range(1, 5):
            mod = K0Module(r, m)
            for a in mod.basis:
                for i in mod.labels:
                    for n in range(1, 5):
                        for letter in (i, -i):
                            hit = mod.divided_power(letter, n, a)
                            if hit is None:
                                continue
                            c = hit[1]
                            assert c.is_integral()
                            assert all(v >= 0 for v in c.coeffs.values())
                            assert bar(c) == c


def test_apply_order_is_right_to_left():
    mod = K0Module(1, 2)
    a = FlagObject(1, 2, (0,))
    # F E on u_0: E first, then F
    out = mod.apply_monomial((-D, D), a)
    assert set(out) == {a}
    assert mod.apply_monomial((D, -D), a) == {}


@pytest.mark.parametrize("name", RELATIONS)
def test_relations_hold(name):
    for r in (1, 2, 3):
        for m in range(1, 5):
            assert all(K0Module(r, m).check_relation(name).values())


def test_expansions_hold_and_cover_regimes():
    seen = set()
    for r in (1, 2, 3):
        for m in range(1, 5):
            mod = K0Module(r, m)
            for a in mod.basis:
                for name in EXPANSIONS:
                    pair = mod.expansion(name, a)
                    if pair is None:
                        continue
                    seen.add(name)
                    assert mod.apply(pair[0], a) == mod.apply(pair[1], a), (name, a)
    assert seen == set(EXPANSIONS)


def test_weight_one_expansion_coefficient_is_two():
    mod = K0Module(1, 2)
    a = next(x for x in mod.basis if weight_of(x)[0] == 1)
    lhs, rhs = mod.expansion("FEF-one", a)
    assert mod.apply(lhs, a) == mod.apply(rhs, a)
    wrong = rhs[:2] + [(LaurentQ(1), rhs[2][1])]
    assert mod.apply(lhs, a) != mod.apply(wrong, a)


def test_mutated_serre_coefficient_fails():
    for m in range(2, 5):
        mod = K0Module(1, m)
        for a in mod.basis:
            lhs, rhs = mod.relation("jserre-E", a)
            if mod.apply(lhs, a) == {}:
                continue
            mutated = [(rhs[0][0] + LaurentQ(1), rhs[0][1])]
            assert mod.apply(lhs, a) != mod.apply(mutated, a)
            return
    pytest.fail("no object exercises the relation")


def test_unknown_relation_name():
    with pytest.raises(ValueError):
        K0Module(1, 2).relation("nope", FlagObject(1, 2, (0,)))


def test_partner_weight_is_involution():
    for a in all_objects(2, 3):
        w = weight_of(a)
        assert partner_weight(partner_weight(w)) == w


def test_k0_suite_is_clean():
    report = k0_suite(3, 4)
    assert report["failures"] == []
    assert report["involutions"]["omega"] > 0


def test_serre_words_match_graded_rank():
    report = serre_word_compatibility(2, 4)
    assert report["fail"] == 0 and report["pass"] > 0


def test_integrality_error_type():
    assert issubclass(IntegralityError, ArithmeticError)
