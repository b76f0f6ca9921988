"""Explicit constants and envelopes for the curvilinear remainder estimate.

Splitting at s1 and straightening the inner piece gives

    Phi_{0,c} = sum_{k<=N} f_k I^k_{0,s1} + Rem_N + Phi_{s1,c},
    I^k_{0,s1} = k!/lambda^{k+1} - I^k_{s1,inf},

and each measurable piece has an envelope:

    |Phi_{s1,c}|     <= K1 K2 c exp(-|lambda| eta sin eps)
    |I^k_{s1,inf}|   <= K_{k,d} exp(-(1-d)|lambda G(s1)| sin eps) / (|lambda|^{k+1} sin^{k+1} eps (1-d))
    |Rem_N|          <= C_N (N+1)! / (|lambda| sin eps)^{N+2}
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .contour import HOLOMORPHY_SAFETY, straighten, validate_lemma3
from .errors import BoundsError, DeltaOutOfRange, OutOfSector
from .quad import integrate
from .series import REMAINDER_TOL

C_N_SAMPLES = 32
C_N_INFLATION = 0.05
DEFAULT_DELTA = 0.5
DECOMPOSITION_RTOL = 1e-9


# ---------------------------------------------------------------------------
# upper incomplete gamma for complex argument
# ---------------------------------------------------------------------------

def _gamma_series(a, z, max_terms=2000):
    # lower gamma(a, z) = z^a e^{-z} sum z^n / (a (a+1) ... (a+n))
    term = 1.0 / a
    total = term
    for n in range(1, max_terms):
        term *= z / (a + n)
        total += term
        if abs(term) < 1e-17 * abs(total):
            break
    return np.exp(a * np.log(z) - z) * total


def _gamma_cf(a, z, max_iter=2000):
    # modified Lentz on e^{-z} z^a / (z+1-a- 1(1-a)/(z+3-a- ...))
    tiny = 1e-300
    b = z + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, max_iter):
        an = -i * (i - a)
        b = b + 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        step = d * c
        h *= step
        if abs(step - 1.0) < 1e-16:
            break
    return np.exp(a * np.log(z) - z) * h


def gammaincc(a, z):
    """Upper incomplete gamma Gamma(a, z), a > 0, z complex with Re z >= 0,
    by continued fraction (series complement for |z| < a + 1)."""
    z = complex(z)
    if a <= 0:
        raise BoundsError("gammaincc needs a > 0")
    if z == 0:
        return complex(math.gamma(a))
    if abs(z) < a + 1.0:
        return complex(math.gamma(a) - _gamma_series(a, z))
    return complex(_gamma_cf(a, z))


def K_k_delta(k, delta):
    """Smallest K with y^k <= K e^{delta y} for all y >= 0."""
    return 1.0 if k == 0 else (k / (delta * math.e)) ** k


# ---------------------------------------------------------------------------
# certificate
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class BoundCertificate:
    K1: float
    K2: float
    eta: float
    s1: float
    c: float
    rho: float
    epsilon: float
    G_s1: complex
    C_N: np.ndarray
    sector: object
    delta: float = DEFAULT_DELTA
    K_k_delta: np.ndarray = field(default=None)

    def __post_init__(self):
        if not 0.0 < self.delta < 1.0:
            raise DeltaOutOfRange(f"delta={self.delta} outside (0, 1)")
        if self.K_k_delta is None:
            ks = np.array([K_k_delta(k, self.delta) for k in range(len(self.C_N))])
            object.__setattr__(self, "K_k_delta", ks)

    @property
    def N_max(self):
        return len(self.C_N) - 1

    def to_json(self):
        return {"K1": self.K1, "K2": self.K2, "eta": self.eta, "s1": self.s1, "c": self.c,
                "rho": self.rho if math.isfinite(self.rho) else "inf", "epsilon": self.epsilon,
                "G_s1": [self.G_s1.real, self.G_s1.imag], "delta": self.delta,
                "C_N": [float(x) for x in self.C_N],
                "K_k_delta": [float(x) for x in self.K_k_delta]}


def taylor_constants(f, N_max, radius):
    """C_N >= max |r_N(u)| / |u|^{N+1} on |u| = radius, inflated 5%."""
    u = radius * np.exp(2j * np.pi * np.arange(C_N_SAMPLES) / C_N_SAMPLES)
    out = np.empty(N_max + 1)
    for N in range(N_max + 1):
        out[N] = np.max(np.abs(f.remainder(u, N)) / radius ** (N + 1)) * (1.0 + C_N_INFLATION)
    return out


def build_certificate(contour, f, epsilon, N_max, s1=None, delta=DEFAULT_DELTA, report=None):
    report = report or validate_lemma3(contour, f, epsilon, s1)
    if not report.valid:
        raise BoundsError("curvilinear hypotheses fail: " + "; ".join(report.failures))
    g1 = report.G_s1
    if math.isfinite(f.rho):
        radius = max(HOLOMORPHY_SAFETY * f.rho, abs(g1))
        if radius >= f.rho:
            raise BoundsError("G(s1) lies outside the holomorphy disc")
    else:
        radius = abs(g1)
    return BoundCertificate(report.K1, report.K2, report.eta, report.s1, report.c, f.rho,
                            float(epsilon), complex(g1), taylor_constants(f, N_max, radius),
                            report.sector, float(delta))


def _check_sector(cert, lam):
    if not cert.sector.contains(lam):
        raise OutOfSector(f"arg(lambda)={math.atan2(complex(lam).imag, complex(lam).real):.6g} "
                          f"outside ({cert.sector.arg_min:.6g}, {cert.sector.arg_max:.6g})")


def tail_envelope(cert, lam):
    """Bound on |Phi_{s1,c}(lambda)|."""
    _check_sector(cert, lam)
    return cert.K1 * cert.K2 * cert.c * math.exp(-abs(lam) * cert.eta * math.sin(cert.epsilon))


def _delta(cert, delta):
    d = cert.delta if delta is None else float(delta)
    if not 0.0 < d < 1.0:
        raise DeltaOutOfRange(f"delta={d} outside (0, 1)")
    return d


def incomplete_tail_bound(cert, k, lam, delta=None):
    """Bound on |I^k_{s1,inf}(lambda)|."""
    d = _delta(cert, delta)
    if not abs(lam) > 1.0:
        raise BoundsError("the incomplete-integral bound needs |lambda| > 1")
    _check_sector(cert, lam)
    se = math.sin(cert.epsilon)
    m = abs(lam)
    return (K_k_delta(k, d) / (m ** (k + 1) * se ** (k + 1) * (1.0 - d))
            * math.exp(-(1.0 - d) * m * abs(cert.G_s1) * se))


def incomplete_tail_exact(cert, k, lam):
    """I^k_{s1,inf} = int_{G(s1)}^{inf} u^k e^{-lambda u} du = Gamma(k+1, lambda G(s1)) / lambda^{k+1}."""
    lam = complex(lam)
    return gammaincc(k + 1.0, lam * cert.G_s1) / lam ** (k + 1)


def incomplete_tail_rewrite(cert, k, lam):
    """Intermediate real bound Gamma(k+1, Y) / (|lambda| sin eps)^{k+1}, Y = |lambda G(s1)| sin eps."""
    se = math.sin(cert.epsilon)
    y = abs(lam) * abs(cert.G_s1) * se
    return gammaincc(k + 1.0, y).real / (abs(lam) * se) ** (k + 1)


def taylor_remainder_bound(cert, N, lam):
    """Bound on the straightened-piece remainder integral of order N."""
    _check_sector(cert, lam)
    if N > cert.N_max:
        raise BoundsError(f"certificate holds C_N only up to N={cert.N_max}")
    se = math.sin(cert.epsilon)
    return cert.C_N[N] * math.gamma(N + 2) / (abs(lam) * se) ** (N + 2)


# ---------------------------------------------------------------------------
# full certification run
# ---------------------------------------------------------------------------

@dataclass
class CertificateRow:
    N: int
    lam: complex
    tail: dict
    incomplete: dict
    taylor: dict
    main: complex
    residual: float

    @property
    def ok(self):
        return bool(self.tail["ok"] and self.incomplete["ok"] and self.taylor["ok"]
                    and self.residual < DECOMPOSITION_RTOL)

    def to_json(self):
        return {"N": self.N, "lambda": [self.lam.real, self.lam.imag],
                "tail": self.tail, "incomplete": self.incomplete, "taylor": self.taylor,
                "main": [self.main.real, self.main.imag], "residual": self.residual,
                "ok": self.ok}


@dataclass
class CertificateReport:
    certificate: BoundCertificate
    rows: list

    @property
    def violations(self):
        return [r for r in self.rows if not (r.tail["ok"] and r.incomplete["ok"] and r.taylor["ok"])]

    @property
    def max_residual(self):
        return max((r.residual for r in self.rows), default=0.0)

    @property
    def passes(self):
        return all(r.ok for r in self.rows)

    def to_json(self):
        return {"certificate": self.certificate.to_json(), "passes": self.passes,
                "violations": len(self.violations), "max_residual": self.max_residual,
                "rows": [r.to_json() for r in self.rows]}


def _entry(measured, envelope):
    return {"measured": float(measured), "envelope": float(envelope), "ok": bool(measured <= envelope)}


def certify(contour, f, epsilon, N_max, lambda_grid, s1=None, delta=DEFAULT_DELTA, tol=None,
            certificate=None, backend=None):
    """Measure every piece of the split integral and compare with its envelope.

    Pass ``certificate`` to audit a hand-built (for instance deliberately
    undersized) certificate instead of the computed one.
    """
    tol = tol or REMAINDER_TOL
    cert = certificate or build_certificate(contour, f, epsilon, N_max, s1, delta)
    if cert.N_max < N_max:
        raise BoundsError(f"certificate holds C_N only up to N={cert.N_max}")
    bent = straighten(contour, cert.s1)
    rows = []
    for lam in lambda_grid:
        lam = complex(lam)
        full = integrate(contour, f, lam, tol=tol, backend=backend).value
        outer = integrate(contour, f, lam, a=cert.s1, tol=tol, backend=backend).value
        tail = _entry(abs(outer), tail_envelope(cert, lam))
        exact = [incomplete_tail_exact(cert, k, lam) for k in range(N_max + 1)]
        bound = [incomplete_tail_bound(cert, k, lam) for k in range(N_max + 1)]
        for N in range(N_max + 1):
            rem = integrate(bent, f.truncation_remainder(N), lam, b=cert.s1, tol=tol,
                            backend=backend).value
            main = sum(f.taylor[k] * (math.factorial(k) / lam ** (k + 1) - exact[k])
                       for k in range(N + 1))
            inc_meas = max(abs(exact[k]) / bound[k] for k in range(N + 1))
            incomplete = {"measured": float(sum(abs(f.taylor[k] * exact[k]) for k in range(N + 1))),
                          "envelope": float(sum(abs(f.taylor[k]) * bound[k] for k in range(N + 1))),
                          "ok": bool(inc_meas <= 1.0)}
            taylor = _entry(abs(rem), taylor_remainder_bound(cert, N, lam))
            residual = abs(full - (main + rem + outer)) / abs(full)
            rows.append(CertificateRow(N, lam, tail, incomplete, taylor, complex(main), float(residual)))
    return CertificateReport(cert, rows)


def tampered(cert, **changes):
    """Copy of a certificate with selected constants replaced (negative controls)."""
    if "delta" in changes and "K_k_delta" not in changes:
        changes["K_k_delta"] = None
    return replace(cert, **changes)
