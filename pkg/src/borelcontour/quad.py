"""Adaptive evaluation of Phi_{a,b}(lambda) along a contour.

    Phi_{a,b} = int_a^b f(G(s)) exp(-lambda G(s)^alpha) G(s)^(beta-1) G'(s) ds

Powers of G use the contour's continuous argument. For beta < 1 the piece
touching s = 0 is integrated in w = s^beta, which removes the endpoint
singularity exactly.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from .contour import SectorRegion
from .errors import BorelContourError, NoConvergence, PoleOnContour, QuadError
from .kernels import numpy_impl

POLE_TOL = 1e-9
DEFAULT_MAX_EVALS = 10_000_000
DECAY_SPLIT = 30.0


@dataclass(frozen=True)
class ToleranceSpec:
    atol: float = 1e-12
    rtol: float = 1e-10
    max_evals: int = DEFAULT_MAX_EVALS


@dataclass
class QuadResult:
    value: complex
    abs_error_estimate: float
    evaluations: int
    converged: bool
    lam: complex = 0j
    warning: str = ""
    error: str = ""

    def csv_row(self):
        return [self.lam.real, self.lam.imag, self.value.real, self.value.imag,
                self.abs_error_estimate, self.evaluations, int(self.converged)]


CSV_HEADER = ["lambda_re", "lambda_im", "phi_re", "phi_im", "abs_err", "evals", "converged"]


def encode(contour, f, alpha, beta):
    kinds, s0, prm, _, _ = contour.pieces
    fkind, poles, residues, orders, coeffs, drop = f.encode()
    grid_s, grid_arg = contour.unwrapped
    return kernels.EncodedIntegrand(kinds, s0, prm, fkind, poles, residues, orders, coeffs,
                                    drop, float(alpha), float(beta), grid_s, grid_arg)


def _decay(contour, lam, alpha, s):
    """Re(lambda G(s)^alpha) using the continuous argument of G."""
    g = contour.G(s)
    if alpha == 1.0:
        return (lam * g).real
    grid_s, grid_arg = contour.unwrapped
    th = np.angle(g)
    ref = np.interp(s, grid_s, grid_arg)
    th = th + 2 * np.pi * np.round((ref - th) / (2 * np.pi))
    return (lam * np.abs(g) ** alpha * np.exp(1j * alpha * th)).real


def _damping_cuts(contour, lam, alpha, lo, hi, n=65):
    """Geometric breakpoints around the least damped point of [lo, hi] so
    that a sharp exponential peak is never missed by the first rule."""
    s = np.linspace(lo, hi, n)
    w = _decay(contour, lam, alpha, s)
    if not np.all(np.isfinite(w)) or np.ptp(w) < DECAY_SPLIT:
        return []
    star = float(s[np.argmin(w)])
    w_star = float(np.min(w))
    cuts = [star] if lo < star < hi else []
    for side in (-1.0, 1.0):
        span = (hi - star) if side > 0 else (star - lo)
        for j in range(1, 60):
            x = star + side * span * 2.0**-j
            if not lo < x < hi:
                break
            cuts.append(x)
            if _decay(contour, lam, alpha, np.array([x]))[0] - w_star < 1.0:
                break
    return cuts


def _panels(contour, f, alpha, beta, a, b, lam=0j):
    """Initial panels: one per piece overlapping [a, b], split where the
    path passes close to a pole and around sharp exponential peaks."""
    _, _, _, sa, sb = contour.pieces
    cuts = []
    for p in f.poles:
        s, d = contour.closest(p, a, b)
        if d <= POLE_TOL:
            raise PoleOnContour(f"pole {p:.6g} lies {d:.3g} from the path at s={s:.6g}")
        cuts.append(s)
    lo_l, hi_l, pc_l, tr_l = [], [], [], []
    for i in range(len(sa)):
        lo, hi = max(a, sa[i]), min(b, sb[i])
        if not hi > lo:
            continue
        local = [x for x in cuts if lo < x < hi] + _damping_cuts(contour, lam, alpha, lo, hi)
        edges = sorted({lo, hi, *local})
        tr = beta < 1.0 and lo == 0.0
        for x, y in zip(edges[:-1], edges[1:]):
            if tr:
                x, y = x**beta, y**beta
            lo_l.append(x)
            hi_l.append(y)
            pc_l.append(i)
            tr_l.append(tr)
    return (np.array(lo_l, dtype=float), np.array(hi_l, dtype=float),
            np.array(pc_l, dtype=np.int64), np.array(tr_l, dtype=np.bool_))


def path_sector(contour, alpha=1.0, a=0.0, b=None, epsilon=0.0):
    """Cone of arg(lambda) where Re(lambda G^alpha) > 0 along [a, b]."""
    b = contour.c if b is None else b
    s, arg = contour.unwrapped
    sel = (s >= a) & (s <= b) & (s > 0)
    if not np.any(sel):
        sel = s > 0
    A = alpha * float(arg[sel].min())
    B = alpha * float(arg[sel].max())
    return SectorRegion(-0.5 * math.pi - A + epsilon, 0.5 * math.pi - B - epsilon, epsilon)


def integrate(contour, f, lam, alpha=1.0, beta=1.0, a=0.0, b=None, tol=None, backend=None,
              sector=None):
    """Adaptive GK15 evaluation of Phi_{a,b}(lam).

    Raises NoConvergence (with the partial result attached) when the error
    target is not met within the evaluation budget.
    """
    tol = tol or ToleranceSpec()
    b = contour.c if b is None else float(b)
    a = float(a)
    if not 0.0 <= a < b <= contour.c + 1e-15:
        raise QuadError(f"need 0 <= a < b <= c, got a={a}, b={b}, c={contour.c}")
    if not (alpha > 0 and beta > 0):
        raise QuadError("alpha and beta must be positive")
    lam = complex(lam)
    panels = _panels(contour, f, alpha, beta, a, b, lam)
    enc = encode(contour, f, alpha, beta)
    value, err, evals, conv = kernels.adaptive_integrate(
        enc, lam, panels, tol.atol, tol.rtol, tol.max_evals, backend=backend)
    sector = sector or path_sector(contour, alpha, a, b)
    warning = "" if sector.contains(lam) else "lambda outside admissible sector"
    res = QuadResult(value, err, evals, conv, lam, warning)
    if not conv:
        why = "evaluation budget exhausted" if evals + 30 > tol.max_evals else "error estimate stalled"
        res.error = f"{why}: err={err:.3g} after {evals} evaluations"
        raise NoConvergence(res.error, result=res)
    return res


def lambda_scan(contour, f, alpha, beta, lambdas, tol=None, jobs=None, a=0.0, b=None,
                backend=None, sector=None):
    """integrate() at every lambda; per-point failures are recorded in the
    result's ``error`` field instead of aborting. Output order follows input."""
    lambdas = [complex(x) for x in lambdas]

    def one(lam):
        try:
            return integrate(contour, f, lam, alpha, beta, a, b, tol, backend, sector)
        except NoConvergence as exc:
            return exc.result
        except BorelContourError as exc:
            return QuadResult(complex("nan+nanj"), math.inf, 0, False, lam, error=f"{exc.code}: {exc}")

    if not lambdas:
        return []
    if jobs is not None and jobs <= 1 or len(lambdas) == 1:
        return [one(x) for x in lambdas]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(one, lambdas))


def lambda_grid(start, stop, count, scale="log", arg=0.0):
    if count < 1:
        raise ValueError("grid count must be >= 1")
    mod = np.geomspace(start, stop, count) if scale == "log" else np.linspace(start, stop, count)
    return mod * complex(math.cos(arg), math.sin(arg))


def fixed_rule(contour, f, lam, alpha=1.0, beta=1.0, a=0.0, b=None, panels_per_piece=64, order=30):
    """Composite Gauss-Legendre on a uniform split of every piece.

    Non-adaptive reference used to cross-check :func:`integrate`; doubling
    ``panels_per_piece`` gives the refinement oracle.
    """
    b = contour.c if b is None else float(b)
    x, w = np.polynomial.legendre.leggauss(order)
    enc = encode(contour, f, alpha, beta)
    p_lo, p_hi, p_pc, p_tr = _panels(contour, f, alpha, beta, a, b, complex(lam))
    total = 0j
    for lo, hi, pc, tr in zip(p_lo, p_hi, p_pc, p_tr):
        edges = np.linspace(lo, hi, panels_per_piece + 1)
        hw = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[1:] + edges[:-1])
        nodes = (mid[:, None] + hw[:, None] * x[None, :]).ravel()
        vals = numpy_impl.integrand(int(pc), nodes, enc, complex(lam), bool(tr)).reshape(len(mid), order)
        total += np.sum(hw[:, None] * w[None, :] * vals)
    return complex(total)
