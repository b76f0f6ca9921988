"""How far apart are two resummations that share one asymptotic series?

The difference of two admissible contour integrals is beyond all orders:
it decays exponentially in |lambda| while every coefficient agrees.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .contour import validate_lemma3
from .errors import SectorMismatch
from .quad import lambda_scan, path_sector
from .series import EPS, REMAINDER_TOL, extract_coefficients

RATE_SENTINEL = 1e308
NOISE_FACTOR = 10.0
MATCH_TOL = 1e-13
EXTRACTION_DECAY = 37.0


@dataclass
class AmbiguityReport:
    contour_a: str
    contour_b: str
    lambda_grid: np.ndarray
    delta: np.ndarray
    noise: np.ndarray
    fit_logC: float
    fit_rate: float
    fit_rms: float
    indistinguishable: bool
    shared_coeffs_checked: int
    shared_interval: tuple = (0.0, 0.0)
    alpha: float = 1.0
    beta: float = 1.0
    extraction: tuple = field(default=(), repr=False)

    def envelope_fit(self):
        if self.indistinguishable:
            return np.zeros(len(self.lambda_grid))
        return np.exp(self.fit_logC - self.fit_rate * np.abs(self.lambda_grid))

    def csv_rows(self):
        env = self.envelope_fit()
        return [[abs(l), abs(d), e] for l, d, e in zip(self.lambda_grid, self.delta, env)]

    def summary(self):
        return {"contour_a": self.contour_a, "contour_b": self.contour_b,
                "logC": self.fit_logC, "rate": self.fit_rate, "rms": self.fit_rms,
                "indistinguishable": self.indistinguishable,
                "shared_coeffs_checked": self.shared_coeffs_checked}


CSV_HEADER = ["lambda_abs", "delta_abs", "envelope_fit"]


def _agree(ca, cb, s):
    ga, gb = ca.G(s), cb.G(s)
    return np.abs(ga - gb) <= MATCH_TOL * (1.0 + np.abs(ga))


def shared_pieces(ca, cb):
    """(p, q): the curves coincide on [0, p] and, when both have the same
    length, on [q, c]. Cut points are restricted to segment joints."""
    c_min = min(ca.c, cb.c)
    joints = np.union1d(ca.breaks, cb.breaks)
    joints = joints[joints <= c_min]
    grid = np.union1d(np.linspace(0.0, c_min, 2049), joints)
    ok = _agree(ca, cb, grid)
    p = 0.0
    for t in joints:
        if np.all(ok[grid <= t]):
            p = float(t)
    q = None
    if abs(ca.c - cb.c) <= 1e-14 * ca.c:
        for t in joints[::-1]:
            if t >= p and np.all(ok[grid >= t]):
                q = float(t)
    return p, q


def _intersect_sector(ca, cb, f, alpha, epsilon):
    if alpha == 1.0:
        sa = validate_lemma3(ca, f, epsilon).sector
        sb = validate_lemma3(cb, f, epsilon).sector
    else:
        sa = path_sector(ca, alpha, epsilon=epsilon)
        sb = path_sector(cb, alpha, epsilon=epsilon)
    sec = sa.intersect(sb)
    if not sec.nonempty:
        raise SectorMismatch(f"sectors ({sa.arg_min:.4g}, {sa.arg_max:.4g}) and "
                             f"({sb.arg_min:.4g}, {sb.arg_max:.4g}) do not overlap")
    return sec


def _difference(ca, cb, fa, fb, alpha, beta, lams, tol, jobs, backend):
    if fb is fa:
        p, q = shared_pieces(ca, cb)
    else:
        p, q = 0.0, None
    qa = ca.c if q is None else q
    qb = cb.c if q is None else q
    zero = np.zeros(len(lams), dtype=complex)
    va, ea = zero.copy(), np.zeros(len(lams))
    vb, eb = zero.copy(), np.zeros(len(lams))
    if qa > p:
        ra = lambda_scan(ca, fa, alpha, beta, lams, tol, jobs, a=p, b=qa, backend=backend)
        va = np.array([r.value for r in ra])
        ea = np.array([r.abs_error_estimate for r in ra])
    if qb > p:
        rb = lambda_scan(cb, fb, alpha, beta, lams, tol, jobs, a=p, b=qb, backend=backend)
        vb = np.array([r.value for r in rb])
        eb = np.array([r.abs_error_estimate for r in rb])
    delta = vb - va
    noise = NOISE_FACTOR * (ea + eb) + 8.0 * EPS * (np.abs(va) + np.abs(vb))
    return delta, noise, (p, q)


def _fit(lams, delta, noise):
    mods = np.abs(lams)
    order = np.argsort(mods)
    upper = order[len(order) // 2:]
    upper = [i for i in upper if abs(delta[i]) > noise[i] and abs(delta[i]) > 0]
    if len(upper) < 2:
        return math.nan, RATE_SENTINEL, math.nan, True
    x = mods[upper]
    y = np.log(np.abs(delta[upper]))
    slope, logC = np.polyfit(x, y, 1)
    rms = float(np.sqrt(np.mean((y - (logC + slope * x)) ** 2)))
    return float(logC), float(-slope), rms, False


def _extraction_grid(contour, direction, n_coeffs):
    # the end point term exp(-lambda G(c)) must sit below double precision
    kappa = float((np.exp(1j * direction) * contour.G(contour.c)).real)
    lam0 = EXTRACTION_DECAY / max(kappa, 1e-3)
    return lam0 * 2.0 ** np.arange(n_coeffs + 6) * np.exp(1j * direction)


def shared_coefficients(ca, cb, f, alpha, beta, direction, n_coeffs=6, tol=None, jobs=None,
                        backend=None):
    """Extract F_0..F_{n_coeffs-1} on both contours along arg(lambda) =
    ``direction``; count leading indices where the two agree within the sum
    of their error bars."""
    tol = tol or REMAINDER_TOL
    results = []
    for ct in (ca, cb):
        lams = _extraction_grid(ct, direction, n_coeffs)
        rs = lambda_scan(ct, f, alpha, beta, lams, tol, jobs, backend=backend)
        vals = np.array([r.value for r in rs])
        noise = np.array([r.abs_error_estimate for r in rs]) + 8.0 * EPS * np.abs(vals)
        results.append(extract_coefficients(lams, vals, alpha, beta, n_coeffs - 1, noise))
    ea, eb = results
    count = 0
    for k in range(min(len(ea.values), len(eb.values))):
        if abs(ea.values[k] - eb.values[k]) <= ea.errors[k] + eb.errors[k]:
            count += 1
        else:
            break
    return count, tuple(results)


def compare_contours(ca, cb, f, alpha=1.0, beta=1.0, lambda_grid=(), tol=None, epsilon=0.1,
                     n_coeffs=6, jobs=None, f_b=None, check_coefficients=True, backend=None):
    """Pointwise Delta(lambda) = Phi_b - Phi_a and its exponential fit.

    Only the parts of the two paths that differ are integrated, so an
    exponentially small Delta keeps full relative accuracy. ``f_b`` swaps
    in a different integrand on ``cb`` (negative-control use only).
    """
    tol = tol or REMAINDER_TOL
    sector = _intersect_sector(ca, cb, f, alpha, epsilon)
    lams = np.asarray(lambda_grid, dtype=complex)
    fb = f if f_b is None else f_b
    delta, noise, shared = _difference(ca, cb, f, fb, alpha, beta, lams, tol, jobs, backend)
    logC, rate, rms, flat = _fit(lams, delta, noise)
    checked, extraction = 0, ()
    if check_coefficients and f_b is None:
        checked, extraction = shared_coefficients(ca, cb, f, alpha, beta, sector.middle, n_coeffs,
                                                  tol, jobs, backend)
    return AmbiguityReport(ca.name or repr(ca), cb.name or repr(cb), lams, delta, noise, logC, rate,
                           rms, flat, checked, shared, float(alpha), float(beta), extraction)


def beyond_all_orders_check(report, series=None, N=6):
    """True when |Delta| |lambda|^{(n+beta)/alpha} decreases monotonically over
    the top octave of the grid for every n <= N (vacuously true when the
    two contours are indistinguishable)."""
    if report.indistinguishable:
        return True
    alpha = series.alpha if series is not None else report.alpha
    beta = series.beta if series is not None else report.beta
    mods = np.abs(report.lambda_grid)
    order = np.argsort(mods)
    top = [i for i in order if mods[i] >= 0.5 * mods[order[-1]]]
    if len(top) < 2:
        return False
    d = np.abs(report.delta[top])
    m = mods[top]
    if np.any(d <= report.noise[top]):
        # below the noise floor the magnitude is only bounded; use the bound
        d = np.maximum(d, report.noise[top])
    for n in range(N + 1):
        v = d * m ** ((n + beta) / alpha)
        if not np.all(np.diff(v) < 0):
            return False
    return True
