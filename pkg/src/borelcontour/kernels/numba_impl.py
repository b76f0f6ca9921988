"""numba-compiled path for the contour-integrand quadrature.

Same algorithm as ``numpy_impl``; the whole adaptive loop runs in
nopython mode with the GIL released, so ``lambda_scan`` threads scale.
"""
import heapq
import math

import numpy as np
from numba import njit

from .gk15 import EPS, GAUSS_WEIGHTS, KRONROD_WEIGHTS, NODES

TWO_PI = 2.0 * np.pi
_NB = dict(cache=True, nogil=True)


@njit(**_NB)
def _comb(n, k):
    r = 1.0
    for i in range(1, k + 1):
        r = r * (n - k + i) / i
    return r


@njit(**_NB)
def curve_point(kind, s0, prm, s):
    if kind == 0:
        length = prm[2].real
        tau = (s - s0) / length
        return (1.0 - tau) * prm[0] + tau * prm[1], (prm[1] - prm[0]) / length
    elif kind == 1:
        sig = s - s0
        q = prm[7]
        d = 7.0 * prm[7]
        for j in range(6, 0, -1):
            q = q * sig + prm[j]
            d = d * sig + j * prm[j]
        return prm[0] + sig * q, d
    theta = prm[1].real + prm[2].real * (s - s0)
    g = prm[0].real * (math.cos(theta) + 1j * math.sin(theta))
    return g, 1j * prm[2].real * g


@njit(**_NB)
def function_value(u, fkind, poles, residues, orders, coeffs, drop):
    val = 0j
    if fkind == 0:
        for i in range(poles.shape[0]):
            p = poles[i]
            r = residues[i]
            m = orders[i]
            if m == 1:
                w = u / p
                wd = 1.0 + 0j
                for _ in range(drop):
                    wd *= w
                val += (-r / p) * wd / (1.0 - w)
            else:
                term = r / (u - p) ** m
                if drop > 0:
                    base = r * (-1.0) ** m / p**m
                    upk = 1.0 + 0j
                    for k in range(drop):
                        term -= base * _comb(k + m - 1, m - 1) / p**k * upk
                        upk *= u
                val += term
    upow = 1.0 + 0j
    for _ in range(drop):
        upow *= u
    for k in range(drop, coeffs.shape[0]):
        val += coeffs[k] * upow
        upow *= u
    return val


@njit(**_NB)
def integrand(piece, s, kinds, s0, prm, fkind, poles, residues, orders, coeffs, drop,
              alpha, beta, lam, grid_s, grid_arg, transformed):
    jac = 1.0
    if transformed:
        w = s
        s = w ** (1.0 / beta)
        jac = w ** (1.0 / beta - 1.0) / beta
    g, dg = curve_point(kinds[piece], s0[piece], prm[piece], s)
    fv = function_value(g, fkind, poles, residues, orders, coeffs, drop)
    if alpha == 1.0 and beta == 1.0:
        val = fv * np.exp(-lam * g) * dg
    else:
        ang = math.atan2(g.imag, g.real)
        ref = np.interp(s, grid_s, grid_arg)
        th = ang + TWO_PI * np.round((ref - ang) / TWO_PI)
        logr = math.log(abs(g))
        ga = np.exp(alpha * logr + 1j * alpha * th)
        gb = np.exp((beta - 1.0) * logr + 1j * (beta - 1.0) * th)
        val = fv * np.exp(-lam * ga) * gb * dg
    return val * jac


@njit(**_NB)
def gk15_panel(piece, lo, hi, kinds, s0, prm, fkind, poles, residues, orders, coeffs, drop,
               alpha, beta, lam, grid_s, grid_arg, transformed):
    hw = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    k = 0j
    g = 0j
    resabs = 0.0
    fvals = np.empty(15, dtype=np.complex128)
    for i in range(15):
        fv = integrand(piece, mid + hw * NODES[i], kinds, s0, prm, fkind, poles, residues,
                       orders, coeffs, drop, alpha, beta, lam, grid_s, grid_arg, transformed)
        fvals[i] = fv
        k += KRONROD_WEIGHTS[i] * fv
        g += GAUSS_WEIGHTS[i] * fv
        resabs += KRONROD_WEIGHTS[i] * abs(fv)
    k *= hw
    g *= hw
    resabs *= abs(hw)
    mean = 0.5 * k / hw
    resasc = 0.0
    for i in range(15):
        resasc += KRONROD_WEIGHTS[i] * abs(fvals[i] - mean)
    resasc *= abs(hw)
    err = abs(k - g)
    if resasc != 0.0 and err != 0.0:
        err = resasc * min(1.0, (200.0 * err / resasc) ** 1.5)
    err = max(err, 50.0 * EPS * resabs)
    if not (np.isfinite(k.real) and np.isfinite(k.imag)):
        err = np.inf
    return k, err


@njit(**_NB)
def adaptive_integrate(kinds, s0, prm, fkind, poles, residues, orders, coeffs, drop,
                       alpha, beta, lam, grid_s, grid_arg,
                       p_lo, p_hi, p_piece, p_tr, atol, rtol, max_evals):
    cap = max(64, 4 * p_lo.shape[0])
    vals = np.zeros(cap, dtype=np.complex128)
    errs = np.zeros(cap)
    lo_a = np.zeros(cap)
    hi_a = np.zeros(cap)
    pc_a = np.zeros(cap, dtype=np.int64)
    tr_a = np.zeros(cap, dtype=np.bool_)
    n = 0
    heap = [(0.0, 0)]
    heap.pop()
    total = 0j
    toterr = 0.0
    evals = 0
    for i in range(p_lo.shape[0]):
        k, e = gk15_panel(p_piece[i], p_lo[i], p_hi[i], kinds, s0, prm, fkind, poles, residues,
                          orders, coeffs, drop, alpha, beta, lam, grid_s, grid_arg, p_tr[i])
        evals += 15
        vals[n] = k
        errs[n] = e
        lo_a[n] = p_lo[i]
        hi_a[n] = p_hi[i]
        pc_a[n] = p_piece[i]
        tr_a[n] = p_tr[i]
        heapq.heappush(heap, (-e, n))
        n += 1
        total += k
        toterr += e

    converged = False
    while True:
        if toterr <= max(atol, rtol * abs(total)):
            total = vals[:n].sum()
            toterr = errs[:n].sum()
            if toterr <= max(atol, rtol * abs(total)):
                converged = True
                break
        if not np.isfinite(toterr):
            break
        if evals + 30 > max_evals or len(heap) == 0:
            break
        item = heapq.heappop(heap)
        idx = item[1]
        lo = lo_a[idx]
        hi = hi_a[idx]
        mid = 0.5 * (lo + hi)
        if not (lo < mid < hi) or (hi - lo) <= 4.0 * EPS * max(abs(lo), abs(hi)):
            continue
        piece = pc_a[idx]
        tr = tr_a[idx]
        k1, e1 = gk15_panel(piece, lo, mid, kinds, s0, prm, fkind, poles, residues, orders,
                            coeffs, drop, alpha, beta, lam, grid_s, grid_arg, tr)
        k2, e2 = gk15_panel(piece, mid, hi, kinds, s0, prm, fkind, poles, residues, orders,
                            coeffs, drop, alpha, beta, lam, grid_s, grid_arg, tr)
        evals += 30
        if not (np.isfinite(e1) and np.isfinite(e2)):
            break
        if n + 2 > cap:
            cap *= 2
            vals = _grow_c(vals, cap)
            errs = _grow_f(errs, cap)
            lo_a = _grow_f(lo_a, cap)
            hi_a = _grow_f(hi_a, cap)
            pc_a = _grow_i(pc_a, cap)
            tr_a = _grow_b(tr_a, cap)
        total += k1 + k2 - vals[idx]
        toterr += e1 + e2 - errs[idx]
        vals[idx] = 0j
        errs[idx] = 0.0
        for kk, ee, a, b in ((k1, e1, lo, mid), (k2, e2, mid, hi)):
            vals[n] = kk
            errs[n] = ee
            lo_a[n] = a
            hi_a[n] = b
            pc_a[n] = piece
            tr_a[n] = tr
            heapq.heappush(heap, (-ee, n))
            n += 1
    return vals[:n].sum(), errs[:n].sum(), evals, converged


@njit(**_NB)
def _grow_c(a, cap):
    out = np.zeros(cap, dtype=np.complex128)
    out[: a.shape[0]] = a
    return out


@njit(**_NB)
def _grow_f(a, cap):
    out = np.zeros(cap)
    out[: a.shape[0]] = a
    return out


@njit(**_NB)
def _grow_i(a, cap):
    out = np.zeros(cap, dtype=np.int64)
    out[: a.shape[0]] = a
    return out


@njit(**_NB)
def _grow_b(a, cap):
    out = np.zeros(cap, dtype=np.bool_)
    out[: a.shape[0]] = a
    return out
