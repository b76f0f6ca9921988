import math

import numpy as np
import pytest

from borelcontour import contour as C
from borelcontour import quad
from borelcontour.errors import NoConvergence, PoleOnContour, QuadError
from borelcontour.functions import AnalyticFunction

import oracles

ONE = AnalyticFunction.constant(1.0)
INV1P = AnalyticFunction.rational([-1.0], [1.0])


def test_watson_closed_form():
    r = quad.integrate(C.ray_contour(), ONE, 10.0)
    assert r.converged
    assert abs(r.value - oracles.WATSON_LAMBDA10) < 1e-12
    assert r.abs_error_estimate <= max(1e-12, 1e-10 * abs(r.value))


def test_beta_half_endpoint_transform():
    r = quad.integrate(C.ray_contour(), ONE, 1.0, beta=0.5)
    assert abs(r.value - oracles.WATSON_HALF) < 1e-10


def test_closed_form_with_pole():
    r = quad.integrate(C.ray_contour(1.5), INV1P, 10.0)
    assert abs(r.value - oracles.INSTANTON_RAY) < 1e-13


def test_fig1_against_refinement_oracle():
    ct = C.fig1_contour()
    r = quad.integrate(ct, INV1P, 30.0)
    ref = quad.fixed_rule(ct, INV1P, 30.0, panels_per_piece=256)
    assert abs(r.value - ref) <= 1e-10 * abs(ref)


def test_alpha_two_ray():
    # int_0^1 e^{-lam u^2} du = sqrt(pi/lam) erf(sqrt(lam)) / 2
    lam = 4.0
    r = quad.integrate(C.ray_contour(), ONE, lam, alpha=2.0)
    assert r.value == pytest.approx(math.sqrt(math.pi / lam) * math.erf(2.0) / 2, abs=1e-12)


def test_subinterval():
    r = quad.integrate(C.ray_contour(), ONE, 2.0, a=0.25, b=0.75)
    assert r.value == pytest.approx((math.exp(-0.5) - math.exp(-1.5)) / 2.0, abs=1e-13)


def test_pole_on_contour():
    with pytest.raises(PoleOnContour):
        quad.integrate(C.ray_contour(3.0), AnalyticFunction.rational([2.0], [1.0]), 1.0)


def test_bad_limits():
    with pytest.raises(QuadError):
        quad.integrate(C.ray_contour(), ONE, 1.0, a=0.5, b=0.2)


def test_no_convergence_carries_result():
    tol = quad.ToleranceSpec(atol=1e-30, rtol=1e-30, max_evals=200)
    with pytest.raises(NoConvergence) as exc:
        quad.integrate(C.fig1_contour(), INV1P, 5.0 + 40j, tol=tol)
    assert exc.value.result is not None and not exc.value.result.converged


def test_out_of_sector_warns_not_raises():
    r = quad.integrate(C.ray_contour(), ONE, 2.0j)
    assert r.warning
    assert r.value == pytest.approx((1 - np.exp(-2j)) / 2j, abs=1e-12)


def test_lambda_scan_values_and_order():
    lams = [5.0, 10.0, 20.0]
    res = quad.lambda_scan(C.ray_contour(), ONE, 1.0, 1.0, lams, jobs=3)
    for lam, r in zip(lams, res):
        assert r.lam == lam
        assert abs(r.value - (1 - math.exp(-lam)) / lam) < 1e-12
    assert quad.lambda_scan(C.ray_contour(), ONE, 1.0, 1.0, []) == []


def test_lambda_scan_straddling_sector():
    ct = C.fig1_contour()
    sec = C.validate_lemma3(ct, INV1P, 0.1).sector
    inside = 20.0 * np.exp(1j * sec.middle)
    outside = 20.0 * np.exp(1j * (sec.arg_max + 0.5))
    res = quad.lambda_scan(ct, INV1P, 1.0, 1.0, [inside, outside], sector=sec)
    assert res[0].converged and not res[0].warning
    assert res[1].warning


def test_lambda_scan_records_errors():
    res = quad.lambda_scan(C.ray_contour(3.0), AnalyticFunction.rational([2.0], [1.0]), 1.0, 1.0,
                           [1.0, 2.0])
    assert all("PoleOnContour" in r.error for r in res)


def test_large_lambda_peak_not_missed():
    # damping is weakest at the far end of this contour for arg(lambda) near the edge
    ct = C.fig1_contour()
    sec = C.validate_lemma3(ct, INV1P, 0.1).sector
    lam = 1.5e4 * np.exp(1j * sec.middle)
    r = quad.integrate(ct, INV1P, lam)
    ref = quad.fixed_rule(ct, INV1P, lam, panels_per_piece=512)
    assert abs(r.value - ref) <= 1e-9 * abs(ref) + 1e-15


def test_tail_monotone_along_ray():
    ct = C.fig1_contour()
    rep = C.validate_lemma3(ct, INV1P, 0.1)
    vals = [abs(quad.integrate(ct, INV1P, m * np.exp(1j * rep.sector.middle), a=rep.s1).value)
            for m in (10, 20, 40, 80)]
    assert all(b <= 1.05 * a for a, b in zip(vals, vals[1:]))


def test_csv_row_shape():
    r = quad.integrate(C.ray_contour(), ONE, 1.0)
    assert len(r.csv_row()) == len(quad.CSV_HEADER) == 7
