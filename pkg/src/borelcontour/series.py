"""Asymptotic power expansions of Phi(lambda): generated coefficients,
numerically extracted coefficients, and remainder scans."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .errors import GammaOverflow, IllConditioned, SeriesError
from .quad import ToleranceSpec, lambda_scan

GAMMA_ARG_MAX = 170.0
SLOPE_MARGIN = 0.1
ILL_CONDITIONED = 0.1
RICHARDSON_POINTS = 4
EPS = np.finfo(float).eps

# remainders are differences of nearly equal numbers; integrate tighter
REMAINDER_TOL = ToleranceSpec(atol=1e-20, rtol=1e-13)


def lam_power(lam, p):
    """lambda^(-p) on the principal branch."""
    return np.exp(-p * np.log(np.asarray(lam, dtype=complex)))


@dataclass(frozen=True, eq=False)
class AsymptoticSeries:
    """Phi(lambda) ~ sum_k coeffs[k] lambda^{-(k+beta)/alpha}."""

    alpha: float
    beta: float
    coeffs: np.ndarray
    overflow: np.ndarray = None
    log_abs: np.ndarray = None
    phase: np.ndarray = None

    @property
    def N_max(self):
        return len(self.coeffs) - 1

    def exponent(self, k):
        return (k + self.beta) / self.alpha

    def term(self, k, lam):
        if self.overflow is not None and self.overflow[k]:
            raise GammaOverflow(f"coefficient {k} exceeds double range")
        return self.coeffs[k] * lam_power(lam, self.exponent(k))

    def partial_sum(self, lam, N):
        out = np.zeros(np.shape(lam), dtype=complex)
        for k in range(N + 1):
            out = out + self.term(k, lam)
        return out

    def partial_sum_abs(self, lam, N):
        out = np.zeros(np.shape(lam))
        for k in range(N + 1):
            out = out + np.abs(self.term(k, lam))
        return out

    def csv_rows(self):
        rows = []
        for k, c in enumerate(self.coeffs):
            if self.overflow is not None and self.overflow[k]:
                rows.append([k, math.nan, math.nan, self.log_abs[k] / math.log(10)])
            else:
                la = math.log10(abs(c)) if c != 0 else -math.inf
                rows.append([k, c.real, c.imag, la])
        return rows


COEFF_CSV_HEADER = ["k", "ck_re", "ck_im", "log10_abs_ck"]


def asymptotic_coefficients(f, alpha=1.0, beta=1.0, N=None):
    """c_k = Gamma((k+beta)/alpha) taylor[k] / alpha, k = 0..N.

    Coefficients whose Gamma argument exceeds 170 are flagged and kept as
    log-magnitude plus phase instead of raising.
    """
    N = f.kmax if N is None else int(N)
    if N > f.kmax:
        raise SeriesError(f"N={N} exceeds the {f.kmax} stored Taylor coefficients")
    if not (alpha > 0 and beta > 0):
        raise SeriesError("alpha and beta must be positive")
    t = np.asarray(f.taylor[: N + 1], dtype=complex)
    coeffs = np.zeros(N + 1, dtype=complex)
    overflow = np.zeros(N + 1, dtype=bool)
    log_abs = np.full(N + 1, -np.inf)
    phase = np.zeros(N + 1)
    integer_case = alpha == 1.0 and float(beta).is_integer()
    for k in range(N + 1):
        x = (k + beta) / alpha
        if t[k] != 0:
            log_abs[k] = gammaln(x) + math.log(abs(t[k])) - math.log(alpha)
            phase[k] = math.atan2(t[k].imag, t[k].real)
        if x > GAMMA_ARG_MAX and t[k] != 0:
            overflow[k] = True
            coeffs[k] = complex(math.nan, math.nan)
        elif integer_case:
            coeffs[k] = math.factorial(int(k + beta) - 1) * t[k]
        else:
            coeffs[k] = math.gamma(x) * t[k] / alpha
    return AsymptoticSeries(float(alpha), float(beta), coeffs, overflow, log_abs, phase)


# ---------------------------------------------------------------------------
# coefficient extraction
# ---------------------------------------------------------------------------

@dataclass
class ExtractionResult:
    values: np.ndarray
    errors: np.ndarray
    stopped_at: int | None
    windows: list = field(default_factory=list)

    def __len__(self):
        return len(self.values)

    def agrees_with(self, reference, k_max=None):
        """Indices k where |value - reference| <= error bar."""
        n = len(self.values) if k_max is None else min(k_max + 1, len(self.values))
        return [k for k in range(n) if abs(self.values[k] - reference[k]) <= self.errors[k]]


def _neville_at_zero(h, y):
    """Tableau of polynomial extrapolants to h = 0; returns (P_full, P_prev)."""
    n = len(h)
    p = list(y)
    prev = None
    for m in range(1, n):
        for i in range(n - m):
            p[i] = (h[i + m] * p[i] - h[i] * p[i + 1]) / (h[i + m] - h[i])
        if m == n - 2:
            prev = p[1]
    return p[0], prev


def _lagrange_at_zero(h):
    """Weights l_i(0) of the interpolating polynomial evaluated at 0."""
    w = np.ones(len(h))
    for i in range(len(h)):
        for j in range(len(h)):
            if j != i:
                w[i] *= h[j] / (h[j] - h[i])
    return w


def extract_coefficients(lams, values, alpha=1.0, beta=1.0, n_max=6, noise=None, check_grid=True):
    """Estimate F_0..F_n_max from samples Phi(lams) along one ray.

    F_n is the limit of (Phi - sum_{k<n} F_k lam^{-(k+beta)/alpha}) lam^{(n+beta)/alpha};
    each limit is Richardson-extrapolated in h = |lam|^{-1/alpha} over 4
    consecutive samples. The error bar of F_n is the spread of the last two
    extrapolants plus the propagated sample noise plus the first-order effect
    of the error bars of F_0..F_{n-1}, taken through the signed sensitivities
    of the (linear) extraction. The 4-point window with the smallest error
    bar is kept. Extraction stops with ``stopped_at = n`` once the error bar
    exceeds 10% of the coefficient scale.
    """
    lams = np.asarray(lams, dtype=complex)
    values = np.asarray(values, dtype=complex)
    order = np.argsort(np.abs(lams))
    lams, values = lams[order], values[order]
    mods = np.abs(lams)
    if len(lams) < n_max + RICHARDSON_POINTS:
        raise SeriesError(f"need at least n_max+4 = {n_max + 4} samples, got {len(lams)}")
    if check_grid:
        ratios = mods[1:] / mods[:-1]
        if np.any(ratios < 2.0 - 1e-9):
            raise SeriesError("samples must lie on a geometric grid with ratio q >= 2")
        args = np.angle(lams)
        if np.ptp(args) > 1e-9:
            raise SeriesError("samples must lie on one ray")
    if noise is None:
        noise = 8.0 * EPS * np.abs(values)
    noise = np.asarray(noise, dtype=float)[order]

    h = mods ** (-1.0 / alpha)
    resid = values.copy()
    resid_noise = noise.copy()
    out, own, errs, windows = [], [], [], []
    # total[n][k] = dF_n / dF_k including indirect paths
    total = []
    stopped = None
    for n in range(n_max + 1):
        up = lam_power(lams, -(n + beta) / alpha)
        y = resid * up
        y_noise = resid_noise * np.abs(up)
        best = None
        for i in range(len(lams) - RICHARDSON_POINTS + 1):
            sl = slice(i, i + RICHARDSON_POINTS)
            p_full, p_prev = _neville_at_zero(h[sl], y[sl])
            w = _lagrange_at_zero(h[sl])
            own_err = abs(p_full - p_prev) + float(np.sum(np.abs(w) * y_noise[sl]))
            direct = [-complex(np.sum(w * up[sl] * lam_power(lams[sl], (k + beta) / alpha)))
                      for k in range(n)]
            sens = []
            for k in range(n):
                t = direct[k] + sum(direct[j] * total[j][k] for j in range(k + 1, n))
                sens.append(t)
            err = own_err + sum(abs(sens[k]) * own[k] for k in range(n))
            if best is None or err < best[1]:
                best = (p_full, err, i, own_err, sens)
        value, err, start, own_err, sens = best
        scale_ref = max(abs(value), 1e-6 * max((abs(v) for v in out), default=0.0))
        if not err <= ILL_CONDITIONED * scale_ref:
            stopped = n
            break
        out.append(value)
        own.append(own_err)
        errs.append(err)
        windows.append(start)
        total.append(sens)
        term = value * lam_power(lams, (n + beta) / alpha)
        resid = resid - term
        resid_noise = resid_noise + EPS * np.abs(term)
    return ExtractionResult(np.array(out, dtype=complex), np.array(errs), stopped, windows)


def extract_or_raise(lams, values, alpha=1.0, beta=1.0, n_max=6, noise=None):
    res = extract_coefficients(lams, values, alpha, beta, n_max, noise)
    if res.stopped_at is not None:
        raise IllConditioned(f"extraction error bar exceeds 10% at n={res.stopped_at}")
    return res


# ---------------------------------------------------------------------------
# remainder scans
# ---------------------------------------------------------------------------

@dataclass
class RemainderReport:
    N: int
    lambda_samples: np.ndarray
    remainders: np.ndarray
    scaled: np.ndarray
    slope_fit: float
    passes: bool
    noise: np.ndarray
    resolved: np.ndarray
    alpha: float = 1.0
    beta: float = 1.0
    threshold: float = field(init=False)

    def __post_init__(self):
        self.threshold = -(self.N + self.beta) / self.alpha - 1.0 / self.alpha + SLOPE_MARGIN

    def envelope(self):
        """|R_N| where resolved, else the noise floor (an upper bound)."""
        return np.where(self.resolved, np.abs(self.remainders), self.noise)


def remainders_from_values(lams, values, errors, series, N):
    lams = np.asarray(lams, dtype=complex)
    values = np.asarray(values, dtype=complex)
    partial = series.partial_sum(lams, N)
    R = values - partial
    noise = np.asarray(errors, dtype=float) + 8.0 * EPS * (np.abs(values) + series.partial_sum_abs(lams, N))
    return R, noise


def slope_report(lams, R, noise, N, alpha, beta):
    lams = np.asarray(lams, dtype=complex)
    mods = np.abs(lams)
    absR = np.abs(R)
    resolved = np.isfinite(absR) & (absR > noise)
    if np.count_nonzero(resolved) >= 2:
        slope = float(np.polyfit(np.log(mods[resolved]), np.log(absR[resolved]), 1)[0])
    else:
        slope = math.nan
    scaled = absR * mods ** ((N + 1 + beta) / alpha)
    rep = RemainderReport(N, lams, np.asarray(R), scaled, slope, False, np.asarray(noise),
                          resolved, float(alpha), float(beta))
    rep.passes = bool(math.isfinite(slope) and slope <= rep.threshold)
    return rep


def remainder_scan(contour, f, alpha, beta, N, lambda_grid, tol=None, jobs=None, results=None,
                   backend=None):
    """Fit the decay of R_N(lambda) = Phi - partial sum on ``lambda_grid``.

    ``passes`` requires the log-log slope over resolved samples (|R_N| above
    the quadrature plus rounding noise) to be at most -(N+1+beta)/alpha + 0.1.
    Pass precomputed quadrature ``results`` to reuse one scan for several N.
    """
    tol = tol or REMAINDER_TOL
    lams = np.asarray(lambda_grid, dtype=complex)
    if results is None:
        results = lambda_scan(contour, f, alpha, beta, lams, tol, jobs, backend=backend)
    bad = [r for r in results if r.error and not np.isfinite(r.value)]
    if bad:
        raise SeriesError(f"quadrature failed: {bad[0].error}")
    series = asymptotic_coefficients(f, alpha, beta, N)
    values = np.array([r.value for r in results])
    errors = np.array([r.abs_error_estimate for r in results])
    R, noise = remainders_from_values(lams, values, errors, series, N)
    return slope_report(lams, R, noise, N, alpha, beta)
