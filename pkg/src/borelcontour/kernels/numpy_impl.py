"""Pure-numpy reference path for the contour-integrand quadrature.

Each panel is evaluated as one vectorised 15-node batch; the adaptive
driver is a plain heap loop. Semantics match ``numba_impl`` exactly.
"""
import heapq
import math

import numpy as np

from .gk15 import EPS, GAUSS_WEIGHTS, KRONROD_WEIGHTS, NODES

TWO_PI = 2.0 * np.pi


def curve_points(kind, s0, prm, s):
    """Return ``(G(s), G'(s))`` on one encoded piece."""
    s = np.asarray(s, dtype=float)
    if kind == 0:
        length = prm[2].real
        tau = (s - s0) / length
        g = (1.0 - tau) * prm[0] + tau * prm[1]
        dg = np.full(s.shape, (prm[1] - prm[0]) / length, dtype=complex)
    elif kind == 1:
        sig = s - s0
        q = np.full(s.shape, prm[7], dtype=complex)
        d = np.full(s.shape, 7.0 * prm[7], dtype=complex)
        for j in range(6, 0, -1):
            q = q * sig + prm[j]
            d = d * sig + j * prm[j]
        g = prm[0] + sig * q
        dg = d
    else:
        theta = prm[1].real + prm[2].real * (s - s0)
        g = prm[0].real * np.exp(1j * theta)
        dg = 1j * prm[2].real * g
    return g, dg


def function_values(u, fkind, poles, residues, orders, coeffs, drop):
    """Evaluate the model, minus its first ``drop`` Taylor terms."""
    u = np.asarray(u, dtype=complex)
    val = np.zeros(u.shape, dtype=complex)
    if fkind == 0:
        for p, r, m in zip(poles, residues, orders):
            if m == 1:
                w = u / p
                val += (-r / p) * w**drop / (1.0 - w)
            else:
                term = r / (u - p) ** m
                if drop > 0:
                    base = r * (-1.0) ** m * p ** (-float(m))
                    for k in range(drop):
                        term = term - base * math.comb(k + m - 1, m - 1) * p ** (-float(k)) * u**k
                val += term
    upow = u**drop if drop > 0 else np.ones(u.shape, dtype=complex)
    for k in range(drop, len(coeffs)):
        val += coeffs[k] * upow
        upow = upow * u
    return val


def integrand(piece, s, enc, lam, transformed):
    kind = enc.kinds[piece]
    if transformed:
        w = s
        s = w ** (1.0 / enc.beta)
        jac = w ** (1.0 / enc.beta - 1.0) / enc.beta
    g, dg = curve_points(kind, enc.s0[piece], enc.prm[piece], s)
    fv = function_values(g, enc.fkind, enc.poles, enc.residues, enc.orders, enc.coeffs, enc.drop)
    if enc.alpha == 1.0 and enc.beta == 1.0:
        val = fv * np.exp(-lam * g) * dg
    else:
        ang = np.angle(g)
        ref = np.interp(s, enc.grid_s, enc.grid_arg)
        th = ang + TWO_PI * np.round((ref - ang) / TWO_PI)
        logr = np.log(np.abs(g))
        ga = np.exp(enc.alpha * logr + 1j * enc.alpha * th)
        gb = np.exp((enc.beta - 1.0) * logr + 1j * (enc.beta - 1.0) * th)
        val = fv * np.exp(-lam * ga) * gb * dg
    if transformed:
        val = val * jac
    return val


def gk15_panel(piece, lo, hi, enc, lam, transformed):
    hw = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    fv = integrand(piece, mid + hw * NODES, enc, lam, transformed)
    k = hw * np.dot(KRONROD_WEIGHTS, fv)
    g = hw * np.dot(GAUSS_WEIGHTS, fv)
    resabs = abs(hw) * np.dot(KRONROD_WEIGHTS, np.abs(fv))
    # QUADPACK error scaling: realistic rather than raw |K - G|
    resasc = abs(hw) * np.dot(KRONROD_WEIGHTS, np.abs(fv - 0.5 * k / hw))
    err = abs(k - g)
    if resasc != 0.0 and err != 0.0:
        err = resasc * min(1.0, (200.0 * err / resasc) ** 1.5)
    err = max(err, 50.0 * EPS * resabs)
    if not (np.isfinite(k.real) and np.isfinite(k.imag)):
        err = np.inf
    return k, err


def adaptive_integrate(enc, lam, p_lo, p_hi, p_piece, p_tr, atol, rtol, max_evals):
    """Globally adaptive GK15: bisect the worst panel until the summed
    error estimate meets ``max(atol, rtol*|I|)``.

    Returns ``(value, abs_err, evaluations, converged)``.
    """
    heap = []
    vals = []
    errs = []
    total = 0j
    toterr = 0.0
    evals = 0
    for i in range(len(p_lo)):
        k, e = gk15_panel(p_piece[i], p_lo[i], p_hi[i], enc, lam, p_tr[i])
        evals += 15
        vals.append(k)
        errs.append(e)
        total += k
        toterr += e
        heapq.heappush(heap, (-e, len(vals) - 1, p_lo[i], p_hi[i], p_piece[i], p_tr[i]))

    converged = False
    while True:
        if toterr <= max(atol, rtol * abs(total)):
            total = sum(vals)
            toterr = float(sum(errs))
            if toterr <= max(atol, rtol * abs(total)):
                converged = True
                break
        if not np.isfinite(toterr):
            break
        if evals + 30 > max_evals or not heap:
            break
        neg_e, idx, lo, hi, piece, tr = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not (lo < mid < hi) or (hi - lo) <= 4.0 * EPS * max(abs(lo), abs(hi)):
            # panel cannot be split further; keep its contribution as final
            continue
        k1, e1 = gk15_panel(piece, lo, mid, enc, lam, tr)
        k2, e2 = gk15_panel(piece, mid, hi, enc, lam, tr)
        evals += 30
        if not (np.isfinite(e1) and np.isfinite(e2)):
            break
        total += k1 + k2 - vals[idx]
        toterr += e1 + e2 - errs[idx]
        vals[idx] = 0j
        errs[idx] = 0.0
        vals.append(k1)
        errs.append(e1)
        heapq.heappush(heap, (-e1, len(vals) - 1, lo, mid, piece, tr))
        vals.append(k2)
        errs.append(e2)
        heapq.heappush(heap, (-e2, len(vals) - 1, mid, hi, piece, tr))
    total = complex(sum(vals))
    toterr = float(sum(errs))
    return total, toterr, evals, converged
