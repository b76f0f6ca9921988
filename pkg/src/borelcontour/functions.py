"""Models of the Borel-plane function f(u).

An :class:`AnalyticFunction` couples a global evaluator (rational, single
geometric pole, or truncated Taylor series) with its Taylor coefficients at
the origin and the radius of the holomorphy disc around 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ModelMismatch

K_MAX = 64


def _as_complex_array(values):
    out = []
    for v in values:
        if isinstance(v, (list, tuple)):
            out.append(complex(v[0], v[1]))
        else:
            out.append(complex(v))
    return np.array(out, dtype=complex)


def _pairs(values):
    return [[float(np.real(v)), float(np.imag(v))] for v in values]


@dataclass(frozen=True, eq=False)
class RationalModel:
    """sum_i r_i / (u - p_i)^{m_i} + sum_k poly_k u^k"""

    poles: np.ndarray
    residues: np.ndarray
    orders: np.ndarray
    poly: np.ndarray

    @property
    def rho(self):
        if len(self.poles) == 0:
            return math.inf
        return float(np.min(np.abs(self.poles)))

    def __call__(self, u):
        u = np.asarray(u, dtype=complex)
        val = np.zeros(u.shape, dtype=complex)
        for p, r, m in zip(self.poles, self.residues, self.orders):
            val += r / (u - p) ** int(m)
        return val + np.polynomial.polynomial.polyval(u, self.poly) if len(self.poly) else val

    def taylor(self, kmax):
        k = np.arange(kmax + 1)
        coeffs = np.zeros(kmax + 1, dtype=complex)
        for p, r, m in zip(self.poles, self.residues, self.orders):
            m = int(m)
            binom = np.array([math.comb(int(j) + m - 1, m - 1) for j in k], dtype=float)
            coeffs += r * (-1.0) ** m * p ** (-float(m)) * binom * p ** (-k.astype(float))
        n = min(len(self.poly), kmax + 1)
        coeffs[:n] += self.poly[:n]
        return coeffs

    def tail(self, u, drop):
        """f(u) minus its first ``drop`` Taylor terms, without cancellation
        for simple poles."""
        u = np.asarray(u, dtype=complex)
        val = np.zeros(u.shape, dtype=complex)
        for p, r, m in zip(self.poles, self.residues, self.orders):
            m = int(m)
            if m == 1:
                w = u / p
                val += -(r / p) * w**drop / (1.0 - w)
            else:
                term = r / (u - p) ** m
                base = r * (-1.0) ** m * p ** (-float(m))
                for j in range(drop):
                    term = term - base * math.comb(j + m - 1, m - 1) * p ** (-float(j)) * u**j
                val += term
        for j in range(drop, len(self.poly)):
            val += self.poly[j] * u**j
        return val


@dataclass(frozen=True, eq=False)
class GeometricModel:
    """1 / (1 - u/u0)"""

    u0: complex

    def as_rational(self):
        return RationalModel(np.array([self.u0]), np.array([-self.u0]),
                             np.array([1]), np.zeros(0, dtype=complex))


@dataclass(frozen=True, eq=False)
class TaylorModel:
    coeffs: np.ndarray
    rho: float

    def __call__(self, u):
        return np.polynomial.polynomial.polyval(np.asarray(u, dtype=complex), self.coeffs)

    def tail(self, u, drop):
        u = np.asarray(u, dtype=complex)
        c = self.coeffs.copy()
        c[:drop] = 0.0
        return np.polynomial.polynomial.polyval(u, c)


@dataclass(frozen=True, eq=False)
class AnalyticFunction:
    """Holomorphic f(u) on the disc |u| < rho with a global evaluator.

    ``drop`` > 0 represents the Taylor remainder f(u) - sum_{k<drop} f_k u^k;
    use :meth:`truncation_remainder` rather than setting it directly.
    """

    model: object
    taylor: np.ndarray
    rho: float
    drop: int = 0
    label: str = field(default="", compare=False)

    # constructors ----------------------------------------------------------
    @classmethod
    def rational(cls, poles=(), residues=(), poly=(), orders=None, kmax=K_MAX, label=""):
        poles = _as_complex_array(poles)
        residues = _as_complex_array(residues)
        if len(poles) != len(residues):
            raise ModelMismatch("poles and residues differ in length")
        if np.any(poles == 0):
            raise ModelMismatch("a pole at the origin leaves no holomorphy disc")
        orders = np.ones(len(poles), dtype=np.int64) if orders is None else np.asarray(orders, dtype=np.int64)
        if len(orders) != len(poles) or np.any(orders < 1):
            raise ModelMismatch("pole orders must be positive integers, one per pole")
        model = RationalModel(poles, residues, orders, _as_complex_array(poly))
        kmax = max(kmax, len(model.poly) - 1)
        return cls._checked(model, model.taylor(kmax), model.rho, label)

    @classmethod
    def geometric(cls, u0, kmax=K_MAX, label=""):
        u0 = complex(*u0) if isinstance(u0, (list, tuple)) else complex(u0)
        if u0 == 0:
            raise ModelMismatch("geometric pole must be nonzero")
        model = GeometricModel(u0)
        taylor = u0 ** (-np.arange(kmax + 1, dtype=float))
        return cls._checked(model, taylor, abs(u0), label)

    @classmethod
    def taylor_series(cls, coeffs, rho, label=""):
        coeffs = _as_complex_array(coeffs)
        if not rho > 0:
            raise ModelMismatch("rho must be positive")
        model = TaylorModel(coeffs, float(rho))
        return cls(model, coeffs.copy(), float(rho), 0, label)

    @classmethod
    def constant(cls, value=1.0):
        return cls.rational(poly=[value], label=f"const({value})")

    @classmethod
    def monomial(cls, k, coeff=1.0):
        c = np.zeros(k + 1, dtype=complex)
        c[k] = coeff
        return cls.taylor_series(c, math.inf, label=f"u^{k}")

    @classmethod
    def _checked(cls, model, taylor, rho, label):
        f = cls(model, np.asarray(taylor, dtype=complex), float(rho), 0, label)
        f.check_consistency()
        return f

    # evaluation ------------------------------------------------------------
    @property
    def rational_model(self):
        if isinstance(self.model, GeometricModel):
            return self.model.as_rational()
        return self.model if isinstance(self.model, RationalModel) else None

    @property
    def poles(self):
        rm = self.rational_model
        return np.zeros(0, dtype=complex) if rm is None else rm.poles

    @property
    def kmax(self):
        return len(self.taylor) - 1

    def __call__(self, u):
        u = np.asarray(u, dtype=complex)
        if self.drop:
            return self._tail(u, self.drop)
        if isinstance(self.model, GeometricModel):
            return 1.0 / (1.0 - u / self.model.u0)
        return self.model(u)

    def _tail(self, u, drop):
        rm = self.rational_model
        if rm is not None:
            return rm.tail(u, drop)
        return self.model.tail(u, drop)

    def remainder(self, u, N):
        """r_N(u) = f(u) - sum_{k<=N} f^(k)(0)/k! u^k."""
        return self._tail(np.asarray(u, dtype=complex), max(N + 1, self.drop))

    def truncation_remainder(self, N):
        """The function u -> r_N(u) as an AnalyticFunction of its own."""
        taylor = self.taylor.copy()
        taylor[: N + 1] = 0.0
        return AnalyticFunction(self.model, taylor, self.rho, N + 1, f"r_{N}[{self.label}]")

    def taylor_polynomial(self, u, N):
        return np.polynomial.polynomial.polyval(np.asarray(u, dtype=complex), self.taylor[: N + 1])

    def check_consistency(self, tol=1e-8):
        if self.kmax < 30:
            return
        radius = 0.5 * self.rho if math.isfinite(self.rho) else 0.5
        u = radius * np.exp(2j * np.pi * np.arange(16) / 16)
        gap = np.max(np.abs(self(u) - self.taylor_polynomial(u, self.kmax)))
        if not gap <= tol:
            raise ModelMismatch(f"evaluator and Taylor data disagree by {gap:.3g} on |u|=rho/2")

    def encode(self):
        """Array form consumed by the quadrature kernels."""
        rm = self.rational_model
        if rm is not None:
            return (0, rm.poles.astype(complex), rm.residues.astype(complex),
                    rm.orders.astype(np.int64), rm.poly.astype(complex), int(self.drop))
        return (1, np.zeros(0, dtype=complex), np.zeros(0, dtype=complex),
                np.zeros(0, dtype=np.int64), self.model.coeffs.astype(complex), int(self.drop))

    # JSON --------------------------------------------------------------------
    def to_json(self):
        m = self.model
        if isinstance(m, GeometricModel):
            return {"type": "geometric", "u0": [m.u0.real, m.u0.imag]}
        if isinstance(m, RationalModel):
            out = {"type": "rational", "poles": _pairs(m.poles),
                   "residues": _pairs(m.residues), "poly": _pairs(m.poly)}
            if np.any(m.orders != 1):
                out["orders"] = [int(o) for o in m.orders]
            return out
        rho = m.rho if math.isfinite(m.rho) else "inf"
        return {"type": "taylor", "coeffs": _pairs(m.coeffs), "rho": rho}

    @classmethod
    def from_json(cls, spec, kmax=K_MAX):
        kind = spec.get("type")
        if kind == "rational":
            return cls.rational(spec.get("poles", []), spec.get("residues", []),
                                spec.get("poly", []), spec.get("orders"), kmax=kmax)
        if kind == "geometric":
            return cls.geometric(spec["u0"], kmax=kmax)
        if kind == "taylor":
            return cls.taylor_series(spec["coeffs"], float(spec["rho"]))
        raise ModelMismatch(f"unknown function type {kind!r}")
