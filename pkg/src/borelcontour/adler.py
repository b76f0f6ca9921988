"""Borel resummation of an Adler-function-like perturbative series.

    D(a) ~ sum_{n>=1} D_n a^n,   B(u) = sum_n b_n u^n,  b_n = D_{n+1} / (beta0^n n!)
    D^G(a) = (1/beta0) int_G exp(-u / (beta0 a)) B(u) du

Poles of B on the positive axis make the straight integral ill defined;
the principal value is the mean of the two rotated rays.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import integrate as sp_integrate

from .contour import Ray, Contour, ray_contour
from .errors import (
    AdlerError,
    ExtrapolationDivergence,
    InsufficientOrders,
    NonPositiveBound,
    NonSimplePole,
)
from .functions import AnalyticFunction
from .quad import ToleranceSpec, integrate

DEFAULT_BETA0 = 9.0 / 4.0
PV_THETAS = (1e-2, 5e-3, 2.5e-3)
PV_TAIL = 40.0
AXIS_TOL = 1e-12
SAC_RESIDUAL = 0.3
PV_TOL = ToleranceSpec(atol=1e-15, rtol=1e-13)


def _exact(x):
    return x if isinstance(x, Fraction) else Fraction(x)


def _plain(x):
    return int(x) if isinstance(x, Fraction) and x.denominator == 1 else x


@dataclass(frozen=True, eq=False)
class BorelModel:
    b: tuple
    beta0: object  # kept exact (int or Fraction) when given exactly
    function: AnalyticFunction = None
    label: str = ""

    @property
    def beta0_value(self):
        return float(self.beta0)

    @property
    def rho(self):
        return self.function.rho if self.function is not None else math.nan

    @property
    def positive_poles(self):
        if self.function is None:
            return []
        rm = self.function.rational_model
        out = []
        for p, r, m in zip(rm.poles, rm.residues, rm.orders):
            if abs(p.imag) <= AXIS_TOL and p.real > 0:
                out.append((float(p.real), complex(r), int(m)))
        return sorted(out)

    def with_function(self, f):
        return BorelModel(self.b, self.beta0, f, self.label)


def borel_transform(D, beta0):
    """b_n = D_{n+1} / (beta0^n n!), exact for integer or rational input."""
    if len(D) == 0:
        raise AdlerError("need at least one perturbative coefficient")
    if beta0 == 0:
        raise AdlerError("beta0 must be nonzero")
    bz = _exact(beta0)
    b = tuple(_plain(_exact(d) / (bz**n * math.factorial(n))) for n, d in enumerate(D))
    return BorelModel(b, beta0)


def perturbative_coefficients(model):
    """Inverse of :func:`borel_transform`: D_{n+1} = b_n beta0^n n!."""
    bz = _exact(model.beta0)
    return [_plain(_exact(bn) * bz**n * math.factorial(n)) for n, bn in enumerate(model.b)]


def model_from_function(f, beta0=DEFAULT_BETA0, label=""):
    b = tuple(complex(x).real if complex(x).imag == 0 else complex(x) for x in f.taylor)
    return BorelModel(b, beta0, f, label or f.label)


def canonical_model(beta0=DEFAULT_BETA0, poly=()):
    """B(u) = 3/(1+u) + 1/(1-u/2) + poly(u): instanton-type pole at u = -1,
    renormalon-type pole at u = 2."""
    f = AnalyticFunction.rational([-1.0, 2.0], [3.0, -2.0], poly, label="3/(1+u)+1/(1-u/2)")
    return model_from_function(f, beta0, f.label)


def coupling_lambda(model, a):
    a = complex(a)
    if a == 0:
        raise AdlerError("coupling a must be nonzero")
    lam = 1.0 / (model.beta0_value * a)
    if not lam.real > 0:
        raise AdlerError("need Re(1/(beta0 a)) > 0")
    return lam


def resum(model, contour, a, tol=None, backend=None):
    """(1/beta0) int_G exp(-u/(beta0 a)) B(u) du along ``contour``."""
    lam = coupling_lambda(model, a)
    res = integrate(contour, model.function, lam, tol=tol, backend=backend)
    return res.value / model.beta0_value


def perturbative_partial_sum(D, a, N):
    """sum_{n=1}^{N} D_n a^n with D = [D_1, D_2, ...]."""
    return sum(complex(D[n - 1]) * a**n for n in range(1, min(N, len(D)) + 1))


def _richardson_theta2(thetas, values):
    """Neville extrapolation to theta = 0 in the variable theta^2."""
    x = np.asarray(thetas, dtype=float) ** 2
    p = [complex(v) for v in values]
    n = len(x)
    prev = None
    for m in range(1, n):
        for i in range(n - m):
            p[i] = (x[i + m] * p[i] - x[i] * p[i + 1]) / (x[i + m] - x[i])
        if m == n - 2:
            prev = p[1]
    return p[0], (abs(p[0] - prev) if prev is not None else 0.0)


@dataclass
class PVResult:
    pv: complex
    upper: complex
    lower: complex
    lip_gap: float
    extrapolation_error: float
    c: float
    lam: float
    poles: list = field(default_factory=list)


def pv_resum(model, c=None, a=1.0, tol=None, thetas=PV_THETAS, backend=None, detail=False):
    """Principal-value Borel sum from rays at +-theta, extrapolated theta -> 0.

    ``c`` defaults to 40/lambda, past which the Laplace weight is below e^-40.
    """
    tol = tol or PV_TOL
    lam = coupling_lambda(model, a)
    if abs(lam.imag) > 1e-14 * abs(lam):
        raise AdlerError("the principal value needs real positive lambda")
    lam = lam.real
    c = PV_TAIL / lam if c is None else float(c)
    poles = [p for p in model.positive_poles if p[0] < c]
    for p, _, m in poles:
        if m != 1:
            raise NonSimplePole(f"pole of order {m} at u={p:.6g}")
    f = model.function
    if not poles:
        v = integrate(ray_contour(c), f, lam, tol=tol, backend=backend).value / model.beta0_value
        out = PVResult(v, v, v, 0.0, 0.0, c, lam, [])
        return out if detail else v

    uppers, lowers = [], []
    for th in thetas:
        for sign, store in ((1.0, uppers), (-1.0, lowers)):
            ct = Contour([Ray.from_angle(sign * th, c)], name=f"lip({sign * th:g})")
            store.append(integrate(ct, f, lam, tol=tol, backend=backend).value)
    up, e_up = _richardson_theta2(thetas, uppers)
    lo, e_lo = _richardson_theta2(thetas, lowers)
    pv = 0.5 * (up + lo) / model.beta0_value
    up /= model.beta0_value
    lo /= model.beta0_value
    err = (e_up + e_lo) / model.beta0_value
    spread = max(abs(u - l) for u, l in zip(uppers, lowers)) / model.beta0_value
    if not err <= 1e-6 * max(abs(pv), spread, 1e-300):
        raise ExtrapolationDivergence(f"theta extrapolation unstable: spread {err:.3g}")
    out = PVResult(pv, up, lo, abs(up - pv), err, c, lam, poles)
    return out if detail else pv


def lip_gap_oracle(model, a, c=None):
    """Half-residue jump (upper lip - PV) = -(pi i / beta0) sum Res_p e^{-lambda p}."""
    lam = coupling_lambda(model, a).real
    c = PV_TAIL / lam if c is None else c
    return sum(-1j * math.pi * r * math.exp(-lam * p) for p, r, _ in model.positive_poles
               if p < c) / model.beta0_value


def pv_deletion(model, c=None, a=1.0, eps_list=(1e-3, 1e-4, 1e-5)):
    """Independent PV oracle: symmetric deletion of (p - e, p + e) around each
    positive pole on the real axis, with the O(e) error extrapolated away."""
    lam = coupling_lambda(model, a).real
    c = PV_TAIL / lam if c is None else float(c)
    f = model.function
    poles = [p for p, _, _ in model.positive_poles if p < c]

    def g(u):
        return (complex(f(np.array([u]))[0]) * math.exp(-lam * u)).real

    def gi(u):
        return (complex(f(np.array([u]))[0]) * math.exp(-lam * u)).imag

    vals = []
    for e in eps_list:
        edges = [0.0]
        for p in poles:
            edges += [p - e, p + e]
        edges.append(c)
        total = 0j
        for lo, hi in zip(edges[::2], edges[1::2]):
            kw = dict(epsabs=1e-14, epsrel=1e-13, limit=400)
            re = sp_integrate.quad(g, lo, hi, **kw)[0]
            im = sp_integrate.quad(gi, lo, hi, **kw)[0]
            total += complex(re, im)
        vals.append(total)
    # linear Richardson in e on the last two deletions
    e1, e2 = eps_list[-2], eps_list[-1]
    v1, v2 = vals[-2], vals[-1]
    return (v2 * e1 - v1 * e2) / (e1 - e2) / model.beta0_value


# ---------------------------------------------------------------------------
# uniqueness diagnostics
# ---------------------------------------------------------------------------

@dataclass
class SACFit:
    A_hat: float
    sigma_hat: float
    ok: bool
    residual: float
    orders: np.ndarray
    log_ratio: np.ndarray


def sac_fit(reports):
    """Fit max_z |R_M(z)| / (M! |z|^M) ~ A sigma^M over the orders M.

    With z = 1/lambda the Borel sum of sum F_n z^n is z^{-1} times the
    Laplace integral, so the remainder after the z^M term is
    R_M = lambda R_N with M = N + 1.
    """
    by_n = {}
    for rep in reports:
        by_n[rep.N] = rep
    if len(by_n) < 5:
        raise InsufficientOrders(f"need reports for at least 5 orders, got {len(by_n)}")
    Ns = sorted(by_n)
    M = np.array([n + 1 for n in Ns], dtype=float)
    y = []
    for n, m in zip(Ns, M):
        rep = by_n[n]
        lam = np.abs(rep.lambda_samples)
        R = rep.envelope() * lam
        y.append(float(np.max(np.log(R) + m * np.log(lam))) - math.lgamma(m + 1))
    y = np.array(y)
    slope, intercept = np.polyfit(M, y, 1)
    resid = float(np.sqrt(np.mean((y - (intercept + slope * M)) ** 2)))
    return SACFit(float(math.exp(intercept)), float(math.exp(slope)), resid < SAC_RESIDUAL,
                  resid, M, y)


@dataclass
class CarlemanResult:
    partial_sums: np.ndarray
    divergent: bool
    slope_last: float
    slope_prev: float


def carleman_partial_sums(bounds_b=None, M=None, log_b=None):
    """Partial sums of b_n^{-1/n}, n = 1..M, and a divergence indicator.

    The indicator compares the growth of S against ln n over the last
    decade with the previous decade: a convergent series flattens (ratio
    -> 0), a divergent one keeps its slope. Diagnostic only.
    """
    if log_b is None:
        b = np.asarray(bounds_b, dtype=float)
        if np.any(~(b > 0)):
            raise NonPositiveBound("Carleman bounds must be positive")
        log_b = np.log(b)
    log_b = np.asarray(log_b, dtype=float)
    if M is not None:
        log_b = log_b[:M]
    M = len(log_b)
    if M < 1:
        raise InsufficientOrders("no bounds given")
    n = np.arange(1, M + 1)
    S = np.cumsum(np.exp(-log_b / n))
    if M >= 100:
        i1, i2, i3 = M // 100, M // 10, M
    else:
        i1, i2, i3 = max(1, M // 9), max(2, M // 3), M
    ln = np.log(n)
    slope_prev = (S[i2 - 1] - S[i1 - 1]) / max(ln[i2 - 1] - ln[i1 - 1], 1e-300)
    slope_last = (S[i3 - 1] - S[i2 - 1]) / max(ln[i3 - 1] - ln[i2 - 1], 1e-300)
    divergent = bool(slope_last > 0 and slope_last > 0.5 * slope_prev)
    return CarlemanResult(S, divergent, float(slope_last), float(slope_prev))


def factorial_log_bounds(M, scale=1):
    """log((scale n)!) for n = 1..M via lgamma."""
    return np.array([math.lgamma(scale * k + 1) for k in range(1, M + 1)])
