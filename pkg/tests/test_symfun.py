from fractions import Fraction

from coideal.polyring import Poly
from coideal.symfun import complete, complete_j, elem, elem_j

M = 4


def P(text, m=M):
    return Poly.parse(text, m)


def intervals():
    return [(lo, hi) for lo in range(1, M + 1) for hi in range(lo - 1, M + 1)]


def test_elem_examples():
    assert elem(0, (1, 3), M) == P("1")
    assert elem(2, (1, 3), M) == P("t1*t2 + t1*t3 + t2*t3")
    assert elem(4, (1, 3), M).is_zero()


def test_complete_examples():
    assert complete(2, (1, 2), M) == P("t1^2 + t1*t2 + t2^2")
    assert complete(-1, (1, 2), M).is_zero()
    assert complete(1, (2, 2), M) == P("t2")


def test_squared_variants():
    assert elem_j(1, (1, 2), M) == P("t1^2 + t2^2")
    assert complete_j(Fraction(1, 2), (1, 2), M).is_zero()
    assert complete_j(1, (1, 1), M) == P("t1^2")
    assert complete_j(-1, (1, 1), M).is_zero()


def test_euler_identity():
    for iv in intervals():
        for k in range(9):
            for e, h in ((elem, complete), (elem_j, complete_j)):
                total = Poly.zero(M)
                for p in range(k + 1):
                    term = e(p, iv, M) * h(k - p, iv, M)
                    total = total + (term if p % 2 == 0 else term.scale(-1))
                assert total == (P("1") if k == 0 else Poly.zero(M)), (iv, k)


def test_generating_series_matches_elem():
    # coefficients of prod (1 + t_i z) built by repeated multiplication
    for iv in intervals():
        coeffs = [P("1")]
        for i in range(iv[0], iv[1] + 1):
            t = P(f"t{i}")
            coeffs = [(coeffs[p] if p < len(coeffs) else Poly.zero(M)) +
                      (coeffs[p - 1] * t if p >= 1 else Poly.zero(M)) for p in range(len(coeffs) + 1)]
        for p in range(9):
            expected = coeffs[p] if p < len(coeffs) else Poly.zero(M)
            assert elem(p, iv, M) == expected


def test_empty_interval():
    assert elem(0, (3, 2), M) == P("1")
    assert complete(0, (3, 2), M) == P("1")
    assert complete(2, (3, 2), M).is_zero()
