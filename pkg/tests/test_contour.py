import math

import numpy as np
import pytest

from borelcontour import contour as C
from borelcontour.errors import (
    CutoffOutOfRange,
    EmptySpec,
    JointDiscontinuity,
    OriginRevisit,
    WindingFailure,
)
from borelcontour.functions import AnalyticFunction

import oracles

INV1P = AnalyticFunction.rational([-1.0], [1.0])


def test_ray_is_identity():
    ct = C.build_contour([{"kind": "ray", "theta": 0.0, "length": 1.0}])
    s = np.linspace(0, 1, 11)
    assert ct.c == 1.0
    np.testing.assert_allclose(ct.G(s), s)
    np.testing.assert_allclose(ct.dG(s), np.ones_like(s))


def test_fig1_parameters():
    a2, b2 = C.fig1_parameters(0.1, 0.1)
    assert a2 == pytest.approx(oracles.FIG1_A2, abs=1e-15)
    assert b2 == pytest.approx(oracles.FIG1_B2, abs=1e-15)


def test_fig1_joint_continuous():
    ct = C.fig1_contour()
    assert ct.c == pytest.approx(1.2)
    left = ct.segments[0].G(np.array([1.0]))[0]
    right = ct.segments[1].G(np.array([1.0]))[0]
    assert abs(left - right) < 1e-12


def test_fig1_radius_profile():
    ct = C.fig1_contour()
    s = np.linspace(0.01, 0.99, 981)
    g, dg = ct.G(s), ct.dG(s)
    rp = (np.conj(g) * dg).real / np.abs(g)
    assert np.all(rp > 0)
    g1, dg1 = ct.segments[0].G(np.array([1.0]))[0], ct.segments[0].dG(np.array([1.0]))[0]
    assert abs((np.conj(g1) * dg1).real / abs(g1)) < 1e-6


def test_origin_revisit():
    with pytest.raises(OriginRevisit):
        C.build_contour([{"kind": "ray", "theta": 0.0, "length": 1.0},
                         {"kind": "ray", "theta": math.pi, "length": 2.0}])


def test_empty_spec():
    with pytest.raises(EmptySpec):
        C.build_contour([])


def test_joint_gap():
    with pytest.raises(JointDiscontinuity):
        C.build_contour([{"kind": "ray", "theta": 0.0, "length": 1.0},
                         {"kind": "arc", "from_s": 0.5, "to_s": 1.0}])


def test_polyline_segment():
    ct = C.build_contour([{"kind": "polyline", "points": [[0, 0], [1, 0], [1, 1]]}])
    assert ct.c == pytest.approx(2.0)
    assert ct.G(np.array([1.5]))[0] == pytest.approx(1 + 0.5j)


def test_json_round_trip():
    ct = C.fig1_contour()
    back = C.build_contour(ct.to_json()["segments"])
    s = np.linspace(0, ct.c, 50)
    np.testing.assert_allclose(back.G(s), ct.G(s), atol=1e-14)


def test_arg_profile_ray():
    prof = C.arg_profile(C.ray_contour(), 0.5)
    assert prof.A == 0.0 and prof.B == 0.0


def test_arg_profile_fig1():
    prof = C.arg_profile(C.fig1_contour(), 0.05)
    assert 0 < prof.A <= prof.B < math.pi / 2
    assert prof.B - prof.A < math.pi / 2
    assert np.max(np.abs(np.diff(prof.unwrapped_arg))) < math.pi / 2


def test_arg_profile_cutoff_range():
    with pytest.raises(CutoffOutOfRange):
        C.arg_profile(C.ray_contour(), 1.5)


def _loop_contour():
    # spiral out then one full turn around the origin
    return C.build_contour([{"kind": "ray", "theta": 0.0, "length": 1.0},
                            {"kind": "arc", "from_s": 1.0, "to_s": 1.0 + 2 * math.pi}])


def test_full_loop_rejected():
    ct = _loop_contour()
    prof = C.arg_profile(ct, 0.5)
    assert prof.winding_excess >= 2 * math.pi - 1e-9
    # the loop must lie in [s1, c]; inside [0, s1] straightening removes it
    rep = C.validate_lemma3(ct, AnalyticFunction.constant(1.0), 0.1, s1=0.5)
    assert not rep.valid
    assert any("B-A >= pi-2*epsilon" in m for m in rep.failures)


def test_winding_failure_reported():
    # 1e7 radians of turning cannot be tracked with 2^20 samples
    with pytest.raises(WindingFailure):
        ct = C.build_contour([{"kind": "ray", "theta": 0.0, "length": 1.0},
                              {"kind": "arc", "from_s": 1.0, "to_s": 1.0 + 1e6, "omega": 10.0}])
        _ = ct.unwrapped


def test_lemma3_ray():
    rep = C.validate_lemma3(C.ray_contour(), INV1P, 0.1)
    assert rep.valid
    assert rep.A == 0.0 and rep.B == 0.0
    assert rep.sector.arg_min == pytest.approx(-math.pi / 2 + 0.1)
    assert rep.sector.arg_max == pytest.approx(math.pi / 2 - 0.1)


def test_lemma3_fig1():
    rep = C.validate_lemma3(C.fig1_contour(), INV1P, 0.1)
    assert rep.valid, rep.failures
    assert rep.B - rep.A < math.pi - 0.2
    assert rep.eta > 0 and math.isfinite(rep.K1) and math.isfinite(rep.K2)


def test_lemma3_explicit_s1():
    rep = C.validate_lemma3(C.fig1_contour(), INV1P, 0.1, s1=0.5)
    assert rep.valid and rep.s1 == 0.5


def test_lemma3_pole_on_path():
    ct = C.ray_contour(3.0)
    rep = C.validate_lemma3(ct, AnalyticFunction.rational([2.0], [1.0]), 0.1)
    assert not rep.valid


def test_lemma2_ray():
    rep = C.validate_lemma2(C.ray_contour(), INV1P, 1.0, 1.0, 0.1)
    assert rep.valid, rep.failures
    assert rep.A == 0.0 and rep.B == 0.0


def test_lemma2_fig1_rejected():
    rep = C.validate_lemma2(C.fig1_contour(), INV1P, 1.0, 1.0, 0.1)
    assert not rep.valid
    first = rep.failures[0]
    assert first.startswith("radius not strictly increasing near s=")
    assert float(first.split("s=")[1]) == pytest.approx(1.0, abs=1e-3)
    assert any("r' = 0 on arc" in m for m in rep.failures)


def test_lemma2_polynomial_only_rejected():
    a2, b2 = C.fig1_parameters()
    ct = C.build_contour([{"kind": "poly", "a1": 0.1, "a2": a2, "b1": 0.1, "b2": b2,
                           "s_end": 1.0}])
    rep = C.validate_lemma2(ct, INV1P, 1.0, 1.0, 0.1)
    assert not rep.valid


def test_watson_validator():
    assert C.validate_watson(C.ray_contour(), INV1P, 1.0, 0.5, 0.1).valid
    assert not C.validate_watson(C.fig1_contour(), INV1P, 1.0, 1.0, 0.1).valid


def test_straighten_ray_identity():
    ct = C.ray_contour()
    st = C.straighten(ct, 0.5)
    s = np.linspace(0, 1, 21)
    np.testing.assert_allclose(st.G(s), ct.G(s), atol=1e-15)


def test_straighten_fig1():
    ct = C.fig1_contour()
    st = C.straighten(ct, 0.5)
    g1 = ct.G(np.array([0.5]))[0]
    s = np.linspace(0, 0.5, 11)
    np.testing.assert_allclose(st.G(s), s / 0.5 * g1, atol=1e-15)
    tail = np.linspace(0.5, 1.2, 15)
    np.testing.assert_allclose(st.G(tail), ct.G(tail), atol=1e-15)


def test_straighten_out_of_range():
    with pytest.raises(CutoffOutOfRange):
        C.straighten(C.fig1_contour(), 1.5)
    with pytest.raises(CutoffOutOfRange):
        C.straighten(C.ray_contour(2.0), 1.5, rho=1.0)


def test_sector_ray_matches_watson():
    sec = C.sector(0.0, 0.0, 0.1)
    assert sec.contains(1.0) and not sec.contains(1j)
    assert not C.sector(0.0, math.pi - 0.2, 0.1).nonempty
