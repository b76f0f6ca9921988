import math

import numpy as np
import pytest
from scipy import special

from borelcontour import bounds
from borelcontour import contour as C
from borelcontour.errors import BoundsError, DeltaOutOfRange, OutOfSector
from borelcontour.functions import AnalyticFunction

ONE = AnalyticFunction.constant(1.0)
INV1P = AnalyticFunction.rational([-1.0], [1.0])


def _cert(**kw):
    base = dict(K1=1.0, K2=1.0, eta=1.0, s1=0.5, c=1.0, rho=math.inf, epsilon=math.pi / 6,
                G_s1=0.5 + 0j, C_N=np.ones(6), sector=C.sector(0.0, 0.0, math.pi / 6))
    base.update(kw)
    return bounds.BoundCertificate(**base)


def test_tail_envelope_formula():
    assert bounds.tail_envelope(_cert(), 10.0) == pytest.approx(math.exp(-5.0), rel=1e-14)


def test_tail_out_of_sector():
    with pytest.raises(OutOfSector):
        bounds.tail_envelope(_cert(), 10j)


def test_incomplete_k0_example():
    # |lambda G(s1)| sin eps = 5 with sin eps = 1/2 and G(s1) = 1, |lambda| = 10
    cert = _cert(G_s1=1.0 + 0j)
    lam = 10.0
    bound = bounds.incomplete_tail_bound(cert, 0, lam, delta=0.5)
    assert bound == pytest.approx(2 * math.exp(-2.5) / (lam * 0.5), rel=1e-14)
    rewrite = bounds.incomplete_tail_rewrite(cert, 0, lam)
    assert rewrite == pytest.approx(math.exp(-5) / (lam * 0.5), rel=1e-13)
    assert rewrite < bound


def test_incomplete_k2_grid():
    cert = _cert(G_s1=0.7 + 0.2j, sector=C.sector(0.3, 0.3, math.pi / 6))
    for lam in [5.0, 20.0, 80.0, 30 * np.exp(-0.5j)]:
        if cert.sector.contains(lam):
            assert abs(bounds.incomplete_tail_exact(cert, 2, lam)) <= \
                bounds.incomplete_tail_bound(cert, 2, lam)


def test_delta_range():
    cert = _cert()
    vals = [bounds.incomplete_tail_bound(cert, 1, 10.0, d) for d in (0.9, 0.99, 0.999)]
    assert vals[0] < vals[1] < vals[2]
    with pytest.raises(DeltaOutOfRange):
        bounds.incomplete_tail_bound(cert, 1, 10.0, 1.0)
    with pytest.raises(DeltaOutOfRange):
        _cert(delta=0.0)


def test_small_lambda_rejected():
    with pytest.raises(BoundsError):
        bounds.incomplete_tail_bound(_cert(), 0, 0.5)


def test_taylor_bound_formula():
    eps = math.pi / 2 - 0.01
    cert = _cert(epsilon=eps, sector=C.sector(0.0, 0.0, eps))
    v = bounds.taylor_remainder_bound(cert, 0, 10.0)
    assert v == pytest.approx(1.0 / (100 * math.sin(eps) ** 2), rel=1e-14)
    assert v == pytest.approx(1.0001e-2, rel=1e-4)
    r = bounds.taylor_remainder_bound(cert, 5, 20.0) / bounds.taylor_remainder_bound(cert, 5, 40.0)
    assert r == pytest.approx(2.0**7)


def test_gammaincc_matches_scipy():
    for a in (1.0, 2.0, 3.5, 6.0):
        for z in (0.3, 2.0, 7.0, 40.0):
            ref = special.gammaincc(a, z) * special.gamma(a)
            assert bounds.gammaincc(a, z).real == pytest.approx(ref, rel=1e-12)


def test_gammaincc_complex_integer_order():
    # Gamma(k+1, z) = k! e^{-z} sum_{j<=k} z^j / j!
    z = 3.0 + 4.0j
    for k in range(5):
        ref = math.factorial(k) * np.exp(-z) * sum(z**j / math.factorial(j) for j in range(k + 1))
        assert abs(bounds.gammaincc(k + 1.0, z) - ref) <= 1e-13 * abs(ref)


def test_K_k_delta():
    assert bounds.K_k_delta(0, 0.5) == 1.0
    y = np.linspace(0, 50, 20001)
    for k in (1, 3):
        assert np.max(y**k * np.exp(-0.5 * y)) <= bounds.K_k_delta(k, 0.5) * (1 + 1e-9)


def test_C_N_covers_samples():
    cert = bounds.build_certificate(C.fig1_contour(), INV1P, 0.1, 3)
    u = 0.9 * np.exp(1j * np.linspace(0, 2 * np.pi, 200))
    for N in range(4):
        assert np.max(np.abs(INV1P.remainder(u, N)) / 0.9 ** (N + 1)) <= cert.C_N[N] * 1.001


def test_certify_ray_constant():
    rep = bounds.certify(C.ray_contour(), ONE, 0.1, 2, [10.0, 40.0], s1=0.5)
    assert rep.passes and not rep.violations


def test_certify_fig1():
    rep = bounds.certify(C.fig1_contour(), INV1P, 0.1, 4, [20, 40, 80, 160])
    assert not rep.violations
    assert rep.max_residual < 1e-9
    js = rep.to_json()
    assert set(js["rows"][0]["tail"]) == {"measured", "envelope", "ok"}


def test_undersized_certificate_flagged():
    ct = C.fig1_contour()
    cert = bounds.build_certificate(ct, INV1P, 0.1, 4)
    bad = bounds.tampered(cert, C_N=cert.C_N * 1e-6)
    rep = bounds.certify(ct, INV1P, 0.1, 4, [20, 40], certificate=bad)
    assert rep.violations
    assert all(not r.taylor["ok"] for r in rep.violations)


def test_envelopes_decrease():
    cert = bounds.build_certificate(C.fig1_contour(), INV1P, 0.1, 3)
    phi = cert.sector.middle
    lams = [m * np.exp(1j * phi) for m in (10, 20, 40, 80)]
    for fn in (lambda l: bounds.tail_envelope(cert, l),
               lambda l: bounds.incomplete_tail_bound(cert, 2, l),
               lambda l: bounds.taylor_remainder_bound(cert, 3, l)):
        v = [fn(l) for l in lams]
        assert all(b < a for a, b in zip(v, v[1:]))
