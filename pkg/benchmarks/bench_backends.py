"""Wall-clock comparison of the numba and numpy quadrature backends.

    python3 benchmarks/bench_backends.py [--repeat 3]

The numba kernels are compiled (or loaded from cache) before timing.
"""
import argparse
import time

import numpy as np

from borelcontour import AnalyticFunction, fig1_contour, integrate, ray_contour
from borelcontour.kernels import numba_impl

CASES = {
    "ray, f=1, lambda=10": (ray_contour(), AnalyticFunction.constant(1.0), [10.0], 1.0, 1.0),
    "ray, 1/(1+u), beta=1/2, 16 lambdas": (ray_contour(), AnalyticFunction.rational([-1.0], [1.0]),
                                           list(np.geomspace(1, 1e3, 16)), 1.0, 0.5),
    "fig1, 1/(1+u), 16 lambdas": (fig1_contour(), AnalyticFunction.rational([-1.0], [1.0]),
                                  list(np.geomspace(5, 5e3, 16)), 1.0, 1.0),
    "fig1, r_4[1/(1+u)], complex lambda": (
        fig1_contour(), AnalyticFunction.rational([-1.0], [1.0]).truncation_remainder(4),
        list(np.geomspace(5, 5e3, 16) * np.exp(-0.7j)), 1.0, 1.0),
}


def run(case, backend):
    ct, f, lams, alpha, beta = case
    evals = 0
    for lam in lams:
        evals += integrate(ct, f, lam, alpha, beta, backend=backend).evaluations
    return evals


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if numba_impl is None:
        raise SystemExit("numba is not importable; nothing to compare")
    t0 = time.perf_counter()
    for case in CASES.values():
        run(case, "numba")
    print(f"numba warm-up (compile or cache load): {time.perf_counter() - t0:.2f}s\n")
    print(f"{'case':40s} {'evals':>8s} {'numpy ms':>10s} {'numba ms':>10s} {'speedup':>8s}")
    for name, case in CASES.items():
        times = {}
        for backend in ("numpy", "numba"):
            best = float("inf")
            for _ in range(args.repeat):
                t = time.perf_counter()
                evals = run(case, backend)
                best = min(best, time.perf_counter() - t)
            times[backend] = best
        print(f"{name:40s} {evals:8d} {1e3 * times['numpy']:10.2f} {1e3 * times['numba']:10.2f} "
              f"{times['numpy'] / times['numba']:8.1f}x")


if __name__ == "__main__":
    main()
