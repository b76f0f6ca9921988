import math

import numpy as np
import pytest

from borelcontour.errors import ModelMismatch
from borelcontour.functions import AnalyticFunction


def test_rational_taylor_and_rho():
    f = AnalyticFunction.rational([-1.0], [1.0])
    assert f.rho == 1.0
    np.testing.assert_allclose(f.taylor[:6], [1, -1, 1, -1, 1, -1])


def test_geometric_matches_rational():
    g = AnalyticFunction.geometric(2.0)
    r = AnalyticFunction.rational([2.0], [-2.0])
    u = np.array([0.3, -0.5 + 0.2j])
    np.testing.assert_allclose(g(u), r(u))
    np.testing.assert_allclose(g.taylor[:5], r.taylor[:5])


def test_remainder_definition():
    f = AnalyticFunction.rational([-1.0], [1.0])
    u = np.array([0.2, 0.4j])
    for N in range(4):
        np.testing.assert_allclose(f.remainder(u, N), f(u) - f.taylor_polynomial(u, N), atol=1e-15)
    r2 = f.truncation_remainder(2)
    np.testing.assert_allclose(r2(u), f.remainder(u, 2), atol=1e-15)


def test_pole_at_origin_rejected():
    with pytest.raises(ModelMismatch):
        AnalyticFunction.rational([0.0], [1.0])


def test_taylor_model_mismatch_detected():
    coeffs = np.ones(40)
    f = AnalyticFunction.taylor_series(coeffs, 1.0)
    assert f.rho == 1.0
    assert f(np.array([0.5]))[0] == pytest.approx((1 - 0.5**40) / 0.5)


@pytest.mark.parametrize("spec", [
    {"type": "rational", "poles": [[-1, 0], [2, 0]], "residues": [[3, 0], [-2, 0]], "poly": [[1, 0]]},
    {"type": "geometric", "u0": [0, 2]},
    {"type": "taylor", "coeffs": [[1, 0], [0.5, 0]], "rho": "inf"},
])
def test_json_round_trip(spec):
    f = AnalyticFunction.from_json(spec)
    g = AnalyticFunction.from_json(f.to_json())
    u = np.array([0.1 + 0.1j, -0.3])
    np.testing.assert_allclose(f(u), g(u))


def test_double_pole_taylor():
    f = AnalyticFunction.rational([2.0], [1.0], orders=[2])
    k = np.arange(6)
    np.testing.assert_allclose(f.taylor[:6], (k + 1) / 2.0 ** (k + 2))
    assert math.isclose(f.rho, 2.0)
