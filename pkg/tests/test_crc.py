"""Crepant resolution checks: gluing, continuation, potential identities."""

import cmath
import math
from fractions import Fraction as F

import pytest

from orbimirror.crc import (ChangeOfVariables, MismatchBeyondTolerance,
                            ResolutionPair, TauPoly, UnsupportedN,
                            change_of_variables, continuation_wpn,
                            crc_exact_identities, crc_numeric_samples,
                            crc_verify, glue_charts, pair_report,
                            specialization_check, verify_crepant,
                            wpn_f_series, wpn_g_series)
from orbimirror.families import f2_fan, kp_bundle_fan, p2_fan, wpn_fan
from orbimirror.fan import StackyFan
from orbimirror.series import eval_complex


def wpn_pair(n):
    return ResolutionPair.make(wpn_fan(n), kp_bundle_fan(n))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_verify_crepant_family(n):
    rep = verify_crepant(wpn_pair(n))
    assert rep.crepant and rep.refinement


def test_verify_crepant_trivial():
    pair = ResolutionPair.make(p2_fan(), p2_fan())
    assert verify_crepant(pair).crepant


def test_verify_not_crepant():
    # blowing up a smooth point of P^2 is a resolution of nothing: the new
    # ray (1,1) is not a Box element, so the morphism is discrepant
    blown = StackyFan.make(2, ((1, 0), (0, 1), (-1, -1), (1, 1)),
                           ((0, 3), (1, 3), (1, 2), (0, 2)))
    pair = ResolutionPair.make(p2_fan(), blown)
    rep = verify_crepant(pair)
    assert rep.refinement and not rep.crepant


@pytest.mark.parametrize("n", [2, 3, 4])
def test_glue_charts(n):
    gl = glue_charts(wpn_pair(n))
    # y1 = U1 U2^n, y2 = U2
    assert gl.y_of_u == ((1, n), (0, 1))
    # inverse chart: U1 = y1 y2^{-n}, U2 = y2
    assert gl.u_of_y == ((F(1), F(-n)), (F(0), F(1)))


def test_g_and_f_are_inverse():
    from orbimirror.series import series_compose
    from orbimirror.series import PuiseuxSeries
    for n in (2, 3):
        g = wpn_g_series(n, 13)
        f = wpn_f_series(n, 13)
        comp = series_compose(g, f)
        t = PuiseuxSeries.monomial(f.roster, comp.order, {"t": 1})
        assert comp == t.truncate(comp.order)


def test_f_closed_form_n2():
    # the inverse of g for n = 2 is 2 sin(t/2)
    # 2 sin(t/2) = sum (-1)^k t^{2k+1} / ((2k+1)! 4^k)
    f = wpn_f_series(2, 12)
    for k in range(6):
        assert f.coefficient({"t": 2 * k + 1}) == \
            F((-1) ** k, math.factorial(2 * k + 1) * 4 ** k)


def test_continuation_unsupported():
    with pytest.raises(UnsupportedN):
        continuation_wpn(1, 8)


def test_continuation_n2_exact_reduction():
    # log Q1 = -i (pi - g(x)) for n = 2
    cont = continuation_wpn(2, 10)
    assert cont.parity == "even"
    assert abs(cont.constant - (-1j * math.pi)) < 1e-15
    g = wpn_g_series(2, 10)
    for (k,), c in g.terms.items():
        assert abs(cont.coefficients[k] - 1j * complex(c)) < 1e-12
    for e, c in cont.coefficients.items():
        if (e,) not in g.terms:
            assert abs(c) < 1e-12


def test_continuation_n3():
    cont = continuation_wpn(3, 8)
    assert cont.parity == "odd"
    assert cont.constant == 0
    # leading coefficient: sum over l of -pi/(Gamma(1-l/3)^3 sin(l pi/3))
    # restricted to the x^1 term, which only l = 1 reaches
    lead = -2 * math.sqrt(3) * math.pi / (3 * math.gamma(2 / 3) ** 3)
    assert abs(cont.coefficients[1] - lead) < 1e-13
    # odd n: no imaginary parts
    assert all(abs(c.imag) < 1e-13 for c in cont.coefficients.values())


def test_change_of_variables_tau_zero():
    cov = change_of_variables(2, 12)
    # at tau = 0: Q1 = -1 exactly and Q2 = i sqrt(q1)
    assert abs(cov.q1_closed(0.0) + 1.0) < 1e-15
    q1 = 0.04
    assert abs(cov.q2_closed(0.0, q1) - 1j * math.sqrt(q1)) < 1e-14
    # |Q1| = 1 for real tau, Q1 = 1 at tau = pi
    for tau in (0.3, -0.7, 1.2):
        assert abs(abs(cov.q1_closed(tau)) - 1.0) < 1e-14
    assert abs(cov.q1_closed(math.pi) - 1.0) < 1e-14


def test_tau_poly_matches_cmath():
    p = TauPoly.zero(10)
    p.c[1] = 0.5 - 0.25j
    p.c[2] = 0.125
    e = p.exp()
    # truncation at order 10 costs ~|tau|^11 / 11!
    for tau in (0.0, 0.1, -0.2):
        z = 0.5 * tau - 0.25j * tau + 0.125 * tau ** 2
        assert abs(e.eval(tau) - cmath.exp(z)) < 1e-12


def test_crc_exact_identities():
    reports = crc_exact_identities(order=12, tol=1e-12)
    assert all(r.status == "pass" for r in reports)
    assert max(r.max_error for r in reports) < 1e-12


def test_crc_numeric_samples():
    rep = crc_numeric_samples(samples=20, tol=1e-10)
    assert rep.status == "pass"
    assert rep.max_error < 1e-10


def test_crc_numeric_deterministic():
    a = crc_numeric_samples(samples=10, tol=1e-10).to_json()
    b = crc_numeric_samples(samples=10, tol=1e-10).to_json()
    assert a == b


def test_crc_verify_n2_and_n3():
    rep2 = crc_verify(2, order=10, samples=10, tol=1e-10)
    assert all(r.status == "pass" for r in rep2)
    rep3 = crc_verify(3, order=8, samples=5, tol=1e-10)
    assert all(r.status == "pass" for r in rep3)


def test_crc_verify_strict_raises():
    with pytest.raises(MismatchBeyondTolerance):
        crc_verify(2, order=10, samples=10, tol=1e-30, strict=True)


def test_specialization():
    reports = specialization_check(order=12)
    assert all(r.status == "pass" for r in reports)
    with pytest.raises(UnsupportedN):
        specialization_check(pair=wpn_pair(3))


def test_pair_report_wpn():
    rep = pair_report(wpn_pair(2), order=10)
    assert rep["crepancy"]["crepant"] and rep["crepancy"]["refinement"]
    assert rep["gluing"]["y_of_u"] == [[1, 2], [0, 1]]
    assert rep["wpn"] == 2
    assert all(r["status"] == "pass" for r in rep["reports"])


def test_pair_report_non_family():
    pair = ResolutionPair.make(p2_fan(), p2_fan())
    rep = pair_report(pair, order=6)
    assert rep["crepancy"]["crepant"]
    assert "not implemented" in rep["continuation"]
