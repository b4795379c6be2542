"""Truncated Puiseux series: arithmetic, powers, inversion, substitution."""

from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbimirror.series import (BadConstantTerm, BranchCutViolation,
                               PuiseuxSeries, ZeroLinearTerm, eval_complex,
                               lagrange_invert, make_roster, multivar_invert,
                               series_compose, series_exp, series_from_json,
                               series_log, series_pow, series_to_json,
                               substitute)

R1 = make_roster(["t"])


def uni(terms, order=12, roster=R1):
    return PuiseuxSeries(roster, order, {(k,): F(v) for k, v in terms.items()})


coef = st.fractions(min_value=-5, max_value=5, max_denominator=6)

uni_series = st.dictionaries(st.integers(1, 8), coef, min_size=0, max_size=6)


def test_basic_arithmetic():
    a = uni({1: 1, 2: 3})
    b = uni({1: -1, 3: F(1, 2)})
    assert (a + b).sorted_terms() == [((F(2),), F(3)), ((F(3),), F(1, 2))]
    assert (a * b).coefficient({"t": 3}) == F(-3)
    assert (a * b).coefficient({"t": 4}) == F(1, 2)
    assert (a - a).is_zero()


def test_truncation_by_weight():
    a = uni({1: 1, 5: 1}, order=3)
    assert a.coefficient({"t": 5}) == 0
    assert (a * a).order == 3


def test_exp_log_inverse():
    s = uni({1: 1, 2: F(-1, 3)})
    assert series_log(series_exp(s) ) == s
    with pytest.raises(BadConstantTerm):
        series_exp(uni({0: 1, 1: 1}))


@settings(max_examples=60, deadline=None)
@given(uni_series)
def test_exp_log_roundtrip(terms):
    s = uni(terms, order=10)
    assert series_log(series_exp(s)) == s


@settings(max_examples=60, deadline=None)
@given(uni_series)
def test_square_matches_pow(terms):
    s = uni(terms, order=10)
    if s.is_zero():
        return
    # the power extends beyond the input order; agreement is required on
    # the common range
    assert series_pow(s, 2).truncate(10) == (s * s).truncate(10)


def test_pow_rational():
    rq = make_roster(["q"], [2])
    s = PuiseuxSeries(rq, 6, {(2,): F(1), (4,): F(2)})  # q + 2q^2
    half = series_pow(s, F(1, 2))
    assert (half * half).truncate(min(6, half.order)) == s.truncate(min(6, half.order))
    inv = series_pow(s, -1)
    one = PuiseuxSeries.constant(rq, inv.order, 1)
    assert (inv * s).truncate(inv.order - 1) == one.truncate(inv.order - 1)


def test_pow_high_power_keeps_order():
    # the k-th power of a series of valuation v is reliable up to
    # kv + (order - v), beyond the input order
    s = uni({1: 1, 2: 1}, order=5)
    p = series_pow(s, 3)
    assert p.order == F(7)
    brute = (s * s) * s
    for k in range(3, 6):
        assert p.coefficient({"t": k}) == brute.coefficient({"t": k})


def test_lagrange_invert_sin_like():
    import math
    # g = 2*sin(t/2) has inverse 2*arcsin(t/2)
    g = PuiseuxSeries(R1, 9, {(2 * k + 1,): F((-1) ** k, math.factorial(2 * k + 1) * 4 ** k)
                              for k in range(5)})
    f = lagrange_invert(g, 9)
    comp = series_compose(g, f)
    t = PuiseuxSeries.monomial(R1, comp.order, {"t": 1})
    assert comp == t.truncate(comp.order)
    # arcsin expansion: t + t^3/24 + 3 t^5/640
    assert f.coefficient({"t": 3}) == F(1, 24)
    assert f.coefficient({"t": 5}) == F(3, 640)


def test_lagrange_invert_requires_linear_term():
    with pytest.raises(ZeroLinearTerm):
        lagrange_invert(uni({2: 1}), 8)
    with pytest.raises(ZeroLinearTerm):
        lagrange_invert(uni({0: 1, 1: 1}), 8)


def test_substitute_negative_monomial_shift():
    # Regression: a negative-weight monomial image must not erase
    # contributions computed at high intermediate weight. With
    # B = sum_k x^k for x = y1^{-1} y2 and images y1 = q, y2 = q * f,
    # the result must reproduce sum f^k exactly through the full order.
    ry = make_roster(["y1", "y2"])
    order = 8
    B = PuiseuxSeries(ry, order, {(-k, k): F(1) for k in range(1, order + 1)})
    tgt = make_roster(["q", "u"], [1, 1], [False, True])
    # images are carried one weight beyond the target order so that the
    # q^{-1} shift still reaches full accuracy
    q = PuiseuxSeries.monomial(tgt, order + 1, {"q": 1})
    f = PuiseuxSeries(tgt, order + 1, {(0, 1): F(1), (0, 2): F(1, 2)})
    images = {"y1": q, "y2": q * f}
    got = substitute(B, images, order)
    expect = PuiseuxSeries.zero(tgt, order)
    p = PuiseuxSeries.constant(tgt, order, 1)
    for _ in range(order):
        p = p * f.truncate(order)
        expect = expect + p
    assert got == expect


def test_substitute_fractional_shift_top_order():
    # same regression with half-integer weights, mirroring the inverse
    # mirror map shape q^{1/2} * series
    ry = make_roster(["y1", "y2"], [2, 1])
    order = 9
    B = PuiseuxSeries(ry, order, {(-k, k): F(1, k) for k in range(1, 10)})
    tgt = make_roster(["q", "u"], [2, 1], [False, True])
    q = PuiseuxSeries.monomial(tgt, order, {"q": 1})
    Y2 = PuiseuxSeries(tgt, order, {(1, 1): F(1), (1, 3): F(-1, 24)})
    got = substitute(B, {"y1": q, "y2": Y2}, order)
    # x = y1^{-1/2} y2 evaluates to u - u^3/24 with no q left over;
    # the images determine the result up to weight 8.5
    assert all(e[0] == 0 for e, _ in got.terms.items())
    assert got.order == F(17, 2)
    assert got.coefficient({"u": 8}) == F(11, 128)  # top weight retained


def test_multivar_invert_simple():
    ry = make_roster(["y1"])
    # log q = log y + y  ->  y = q * exp(-A(y)) fixed point
    A = PuiseuxSeries(ry, 8, {(1,): F(1)})
    Y = multivar_invert([A], [], ["q1"], [], [1], 8)[0]
    # verify q = Y * exp(A(Y))
    res = substitute(A, {"y1": Y}, 8)
    prod = Y * series_exp(res)
    q = PuiseuxSeries.monomial(prod.roster, prod.order, {"q1": 1})
    assert prod == q.truncate(prod.order)


def test_eval_complex_and_branch():
    rq = make_roster(["q"], [2])
    s = PuiseuxSeries(rq, 4, {(1,): F(1)})  # q^{1/2}
    assert abs(eval_complex(s, {"q": 0.25}) - 0.5) < 1e-14
    with pytest.raises(BranchCutViolation):
        eval_complex(s, {"q": -1.0})


def test_json_roundtrip():
    rq = make_roster(["q", "tau"], [2, 1], [False, True])
    s = PuiseuxSeries(rq, 5, {(1, 2): F(-3, 4), (3, 0): F(5)})
    data = series_to_json(s)
    assert data["terms"][0]["coef"] in ("-3/4", "5")
    back = series_from_json(data)
    assert back == s
    assert back.order == s.order
