import math
from fractions import Fraction

import numpy as np
import pytest

from borelcontour import adler
from borelcontour import contour as C
from borelcontour import series
from borelcontour.errors import (
    InsufficientOrders,
    NonPositiveBound,
    NonSimplePole,
    PoleOnContour,
)
from borelcontour.functions import AnalyticFunction

import oracles

B_POLE2 = adler.model_from_function(AnalyticFunction.rational([2.0], [-1.0]), beta0=1.0)


def test_factorial_growth_cancelled():
    beta0 = Fraction(9, 4)
    D = [math.factorial(n) * beta0**n for n in range(8)]
    assert adler.borel_transform(D, beta0).b == (1,) * 8


def test_two_term_by_hand():
    beta0 = Fraction(9, 4)
    assert adler.borel_transform([1, 2 * beta0], beta0).b == (1, 2)


def test_round_trip_integers():
    D = [1, -3, 17, 0, 250, -1024, 7, 99999, 3, 12]
    m = adler.borel_transform(D, 2.25)
    assert adler.perturbative_coefficients(m) == D


def test_borel_requires_data():
    with pytest.raises(adler.AdlerError):
        adler.borel_transform([], 1.0)


def test_canonical_model():
    m = adler.canonical_model()
    assert m.beta0 == 2.25 and m.rho == 1.0
    assert [p for p, _, _ in m.positive_poles] == [2.0]
    np.testing.assert_allclose(m.b[:3], [4.0, -2.5, 3.25])  # 3(-1)^n + 2^-n


def test_resum_constant():
    m = adler.model_from_function(AnalyticFunction.constant(1.0), beta0=1.0)
    v = adler.resum(m, C.ray_contour(5.0), 0.1)
    assert v == pytest.approx(oracles.RESUM_CONST, abs=1e-14)


def test_resum_instanton_pole():
    m = adler.model_from_function(AnalyticFunction.rational([-1.0], [1.0]), beta0=1.0)
    v = adler.resum(m, C.ray_contour(1.5), 0.1)
    assert abs(v - oracles.INSTANTON_RAY) < 1e-9


def test_resum_through_renormalon():
    with pytest.raises(PoleOnContour):
        adler.resum(B_POLE2, C.ray_contour(3.0), 0.5)


def test_pv_against_deletion_and_closed_form():
    r = adler.pv_resum(B_POLE2, c=40.0, a=1.0, detail=True)
    assert abs(r.pv - adler.pv_deletion(B_POLE2, c=40.0, a=1.0)) < 1e-8
    assert abs(r.pv - oracles.PV_INV2MU) < 1e-10


def test_pv_lips():
    r = adler.pv_resum(B_POLE2, c=40.0, a=1.0, detail=True)
    assert abs(0.5 * (r.upper + r.lower) - r.pv) < 1e-8
    assert r.lip_gap == pytest.approx(oracles.LIP_GAP_INV2MU, rel=1e-6)
    jump = adler.lip_gap_oracle(B_POLE2, 1.0, 40.0)
    assert abs((r.upper - r.pv) - jump) <= 1e-6 * abs(jump)
    assert abs(r.pv.imag) < 1e-9


def test_pv_pole_free_equals_resum():
    m = adler.model_from_function(AnalyticFunction.rational([-1.0], [1.0]), beta0=1.0)
    pv = adler.pv_resum(m, c=40.0, a=1.0)
    assert abs(pv - adler.resum(m, C.ray_contour(40.0), 1.0)) < 1e-10


def test_double_pole_rejected():
    m = adler.model_from_function(AnalyticFunction.rational([2.0], [1.0], orders=[2]), beta0=1.0)
    with pytest.raises(NonSimplePole):
        adler.pv_resum(m, c=40.0, a=1.0)


def test_asymptotic_match_canonical():
    m = adler.canonical_model()
    D = adler.perturbative_coefficients(m)
    a = 0.05
    v = adler.pv_resum(m, a=a)
    assert abs(v.imag) < 1e-9
    for N in range(1, 6):
        assert abs(adler.perturbative_partial_sum(D, a, N) - v) <= abs(float(D[N]) * a ** (N + 1))


def _reports(f, lams, n_max):
    return [series.remainder_scan(C.ray_contour(1.0), f, 1, 1, N, lams) for N in range(n_max + 1)]


def test_sac_geometric_pole():
    sigma0 = 2.0
    f = AnalyticFunction.rational([-sigma0], [sigma0])  # 1/(1+u/2)
    fit = adler.sac_fit(_reports(f, np.geomspace(20, 160, 6), 5))
    assert fit.sigma_hat == pytest.approx(1 / sigma0, rel=0.15)
    assert fit.ok


def test_sac_entire_function():
    coeffs = [1 / math.factorial(k) for k in range(40)]
    f = AnalyticFunction.taylor_series(coeffs, math.inf)
    fit = adler.sac_fit(_reports(f, np.geomspace(20, 160, 6), 5))
    assert fit.sigma_hat < 0.5


def test_sac_needs_orders():
    f = AnalyticFunction.rational([-1.0], [1.0])
    with pytest.raises(InsufficientOrders):
        adler.sac_fit(_reports(f, np.geomspace(20, 160, 4), 0))


def test_carleman_factorial_diverges():
    M = 10_000
    res = adler.carleman_partial_sums(log_b=adler.factorial_log_bounds(M))
    assert res.divergent
    assert res.partial_sums[-1] == pytest.approx(math.e * math.log(M), rel=0.15)


def test_carleman_double_factorial_converges():
    res = adler.carleman_partial_sums(log_b=adler.factorial_log_bounds(10_000, scale=2))
    assert not res.divergent


def test_carleman_unit():
    res = adler.carleman_partial_sums(np.ones(50))
    np.testing.assert_allclose(res.partial_sums, np.arange(1, 51))
    assert res.divergent


def test_carleman_nonpositive():
    with pytest.raises(NonPositiveBound):
        adler.carleman_partial_sums([1.0, 0.0, 2.0])
