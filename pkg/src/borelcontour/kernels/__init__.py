"""Hot quadrature kernels with a selectable backend.

``BORELCONTOUR_BACKEND=numba`` (default when numba imports) runs the whole
adaptive loop compiled; ``BORELCONTOUR_BACKEND=numpy`` uses the vectorised
pure-numpy path. Both take the same encoded integrand.
"""
import os
from collections import namedtuple

import numpy as np

from . import numpy_impl

try:
    from . import numba_impl
except ImportError:  # pragma: no cover - numba is an optional accelerator
    numba_impl = None

BACKENDS = ("numba", "numpy")

EncodedIntegrand = namedtuple(
    "EncodedIntegrand",
    "kinds s0 prm fkind poles residues orders coeffs drop alpha beta grid_s grid_arg",
)


def _default_backend():
    name = os.environ.get("BORELCONTOUR_BACKEND", "").strip().lower()
    if name in BACKENDS:
        if name == "numba" and numba_impl is None:
            return "numpy"
        return name
    return "numba" if numba_impl is not None else "numpy"


DEFAULT_BACKEND = _default_backend()


def resolve_backend(backend=None):
    name = backend or DEFAULT_BACKEND
    if name not in BACKENDS:
        raise ValueError(f"unknown backend {name!r}; choose from {BACKENDS}")
    if name == "numba" and numba_impl is None:
        raise ValueError("numba backend requested but numba is not importable")
    return name


def adaptive_integrate(enc, lam, panels, atol, rtol, max_evals, backend=None):
    """Run the adaptive GK15 driver on ``panels = (lo, hi, piece, transformed)``."""
    p_lo, p_hi, p_piece, p_tr = panels
    lam = complex(lam)
    if resolve_backend(backend) == "numpy":
        return numpy_impl.adaptive_integrate(
            enc, lam, p_lo, p_hi, p_piece, p_tr, atol, rtol, max_evals)
    value, err, evals, conv = numba_impl.adaptive_integrate(
        enc.kinds, enc.s0, enc.prm, enc.fkind, enc.poles, enc.residues, enc.orders,
        enc.coeffs, enc.drop, enc.alpha, enc.beta, lam, enc.grid_s, enc.grid_arg,
        np.asarray(p_lo, dtype=float), np.asarray(p_hi, dtype=float),
        np.asarray(p_piece, dtype=np.int64), np.asarray(p_tr, dtype=np.bool_),
        float(atol), float(rtol), int(max_evals))
    return complex(value), float(err), int(evals), bool(conv)
