"""Property-based checks of the structural identities."""
import math
from fractions import Fraction

import numpy as np
from hypothesis import assume, given
from hypothesis import strategies as st

from borelcontour import adler, quad, series
from borelcontour import contour as C
from borelcontour.functions import AnalyticFunction

INV1P = AnalyticFunction.rational([-1.0], [1.0])
finite = dict(allow_nan=False, allow_infinity=False)


def _poly_contour(a1, b1, a2, b2, end):
    return C.build_contour([{"kind": "poly", "a1": a1, "a2": a2, "b1": b1, "b2": b2,
                             "s_end": end}])


@given(st.floats(0.05, 0.95), st.floats(5.0, 60.0), st.floats(-0.6, 0.6))
def test_additivity(b, mod, arg):
    ct = C.fig1_contour()
    lam = mod * complex(math.cos(arg), math.sin(arg))
    full = quad.integrate(ct, INV1P, lam)
    left = quad.integrate(ct, INV1P, lam, b=b * ct.c)
    right = quad.integrate(ct, INV1P, lam, a=b * ct.c)
    tol = 10 * (full.abs_error_estimate + left.abs_error_estimate + right.abs_error_estimate)
    assert abs(full.value - left.value - right.value) <= tol + 1e-15


@given(st.floats(0.05, 0.3), st.floats(0.05, 0.3), st.floats(2.0, 40.0), st.floats(-0.5, 0.5))
def test_conjugation_symmetry(a1, b1, mod, arg):
    a2, b2 = C.fig1_parameters(a1, b1)
    ct = _poly_contour(a1, b1, a2, b2, 1.0)
    mirror = _poly_contour(a1, -b1, a2, -b2, 1.0)
    lam = mod * complex(math.cos(arg), math.sin(arg))
    x = quad.integrate(ct, INV1P, lam)
    y = quad.integrate(mirror, INV1P, lam.conjugate())
    assert abs(x.value - y.value.conjugate()) <= 10 * (x.abs_error_estimate + y.abs_error_estimate) + 1e-15


@given(st.floats(0.05, 0.4), st.floats(-0.4, 0.4), st.floats(0.0, 0.5), st.floats(-math.pi, math.pi),
       st.floats(1.0, 50.0))
def test_cauchy_invariance(a1, b1, u, phi, mod):
    # G(s) = s (z1 + z2 s) with |z2| < |z1| never returns to the origin
    z2 = u * abs(complex(a1, b1)) * complex(math.cos(phi), math.sin(phi))
    ct = _poly_contour(a1, b1, z2.real, z2.imag, 1.0)
    g = ct.G(np.linspace(0, 1, 400))
    assume(np.all(np.abs(g) < 0.9))
    sec = C.validate_lemma3(ct, INV1P, 0.05, s1=0.5).sector
    assume(sec.nonempty)
    lam = mod * np.exp(1j * sec.middle)
    chord = C.build_contour([{"kind": "polyline", "points": [[0, 0], [g[-1].real, g[-1].imag]]}])
    x = quad.integrate(ct, INV1P, lam)
    y = quad.integrate(chord, INV1P, lam)
    assert abs(x.value - y.value) <= 10 * (x.abs_error_estimate + y.abs_error_estimate) + 1e-14


@given(st.floats(0.0, 1.5), st.floats(0.0, 1.5), st.floats(0.01, 1.5))
def test_sector_arithmetic(A, w, eps):
    B = A + w
    sec = C.sector(A, B, eps)
    assert sec.nonempty == (B - A < math.pi - 2 * eps)
    z = C.sector(0.0, 0.0, eps)
    assert z.arg_min == -math.pi / 2 + eps and z.arg_max == math.pi / 2 - eps


@given(st.lists(st.integers(-50, 50), min_size=2, max_size=12), st.integers(1, 10),
       st.floats(1.0, 500.0), st.floats(-1.0, 1.0), st.sampled_from([(1.0, 1.0), (2.0, 0.5), (0.5, 1.5)]))
def test_remainder_telescoping(coeffs, N, mod, arg, ab):
    alpha, beta = ab
    N = min(N, len(coeffs) - 1)
    f = AnalyticFunction.taylor_series(coeffs, math.inf)
    s = series.asymptotic_coefficients(f, alpha, beta, N)
    lam = np.array([mod * complex(math.cos(arg), math.sin(arg))])
    phi = np.array([0.3 + 0.1j])
    r_prev, _ = series.remainders_from_values(lam, phi, [0.0], s, N - 1)
    r_N, _ = series.remainders_from_values(lam, phi, [0.0], s, N)
    term = s.term(N, lam)
    assert abs((r_prev - r_N - term)[0]) <= 1e-12 * (abs(phi[0]) + s.partial_sum_abs(lam, N)[0])


@given(st.lists(st.integers(-10**6, 10**6), min_size=1, max_size=21))
def test_gamma_cancellation(taylor):
    f = AnalyticFunction.taylor_series(taylor, math.inf)
    s = series.asymptotic_coefficients(f, 1.0, 1.0, len(taylor) - 1)
    for k, t in enumerate(taylor):
        assert s.coeffs[k] == math.factorial(k) * t


@given(st.lists(st.integers(-10**9, 10**9), min_size=1, max_size=12),
       st.sampled_from([Fraction(9, 4), Fraction(11, 3), 2, Fraction(-7, 5)]))
def test_borel_round_trip(D, beta0):
    assert adler.perturbative_coefficients(adler.borel_transform(D, beta0)) == D


@given(st.floats(0.05, 0.3), st.floats(0.0, 0.3), st.floats(0.0, 0.3), st.floats(-0.05, 0.05),
       st.floats(0.3, 1.5))
def test_lemma_dichotomy(a1, b1, a2, b2, end):
    ct = _poly_contour(a1, b1, a2, b2, end)
    f = AnalyticFunction.rational([-2.0], [2.0])
    l2 = C.validate_lemma2(ct, f, 1.0, 1.0, 0.1)
    if l2.valid:
        assert C.validate_lemma3(ct, f, 0.1).valid


@given(st.floats(0.1, 1.1))
def test_straighten_fidelity(s1):
    ct = C.fig1_contour()
    st_ct = C.straighten(ct, s1)
    g1 = ct.G(np.array([s1]))[0]
    assert st_ct.G(np.array([s1]))[0] == g1
    assert st_ct.G(np.array([ct.c]))[0] == ct.G(np.array([ct.c]))[0]
    s = np.linspace(0, s1, 17)
    np.testing.assert_allclose(np.abs(st_ct.G(s)), s / s1 * abs(g1), rtol=1e-13, atol=1e-16)


@given(st.floats(0.05, 0.4), st.floats(-0.4, 0.4), st.floats(0.5, 6.0))
def test_arg_continuity(a1, b1, turn):
    a2, b2 = C.fig1_parameters(a1, b1)
    ct = C.build_contour([{"kind": "poly", "a1": a1, "a2": a2, "b1": b1, "b2": b2, "s_end": 1.0},
                          {"kind": "arc", "from_s": 1.0, "to_s": 1.0 + turn}])
    _, arg = ct.unwrapped
    assert np.max(np.abs(np.diff(arg))) < math.pi / 2
