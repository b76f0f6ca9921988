"""Command-line entry point.

Exit status: 0 on success, 1 when a hypothesis or validity check fails,
2 on numerical failure or bad input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import adler, ambiguity, bounds, contour, quad, series
from .errors import (
    AmbiguityError,
    BorelContourError,
    BoundsError,
    ConfigParse,
    ContourError,
    FileIO,
)
from .functions import AnalyticFunction

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 1, 2

BUILTIN_FUNCTIONS = {
    "one": lambda: AnalyticFunction.constant(1.0),
    "inv1p": lambda: AnalyticFunction.rational([-1.0], [1.0], label="1/(1+u)"),
    "inv1m": lambda: AnalyticFunction.geometric(1.0, label="1/(1-u)"),
}


# ---------------------------------------------------------------------------
# input
# ---------------------------------------------------------------------------

def _read_json(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FileIO(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigParse(f"{path}: {exc}") from exc


def load_contour(ref, name=None):
    """``builtin:fig1``, ``builtin:ray[:c]``, a JSON file, or an inline dict."""
    if isinstance(ref, dict):
        spec = ref
    elif isinstance(ref, str) and ref.startswith("builtin:"):
        key, _, arg = ref[len("builtin:"):].partition(":")
        if key == "fig1":
            return contour.fig1_contour()
        if key == "ray":
            return contour.ray_contour(float(arg) if arg else 1.0)
        raise ConfigParse(f"unknown builtin contour {key!r}")
    else:
        spec = _read_json(ref)
    if not isinstance(spec, dict) or "segments" not in spec:
        raise ConfigParse("contour JSON needs a 'segments' list")
    label = name or spec.get("name") or (Path(ref).stem if isinstance(ref, str) else "")
    return contour.build_contour(spec["segments"], name=label)


def load_function(ref):
    if isinstance(ref, dict):
        spec = ref
    elif isinstance(ref, str) and ref.startswith("builtin:"):
        key = ref[len("builtin:"):]
        if key not in BUILTIN_FUNCTIONS:
            raise ConfigParse(f"unknown builtin function {key!r}")
        return BUILTIN_FUNCTIONS[key]()
    else:
        spec = _read_json(ref)
    try:
        f = AnalyticFunction.from_json(spec)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigParse(f"bad function JSON: {exc}") from exc
    if f is None:
        raise ConfigParse(f"unknown function type {spec.get('type')!r}")
    return f


def _tol(args):
    return quad.ToleranceSpec(args.atol, args.rtol, args.max_evals)


def _grid(args):
    if args.lam_count < 1:
        raise ConfigParse("grid count must be >= 1")
    return quad.lambda_grid(args.lam_start, args.lam_stop, args.lam_count, args.lam_scale,
                            args.lam_arg)


def _jobs(args):
    return args.jobs if args.jobs is not None else (os.cpu_count() or 1)


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return x


def _write(args, text):
    if args.out in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        Path(args.out).write_text(text)
    except OSError as exc:
        raise FileIO(f"cannot write {args.out}: {exc.strerror}") from exc


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(x) for x in row])
    return buf.getvalue()


def _json_safe(x):
    # strict JSON has no nan/inf; spell them as strings
    if isinstance(x, dict):
        return {k: _json_safe(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_json_safe(v) for v in x]
    if isinstance(x, (float, np.floating)) and not math.isfinite(x):
        return str(float(x))
    if isinstance(x, (complex, np.complexfloating)):
        return [_json_safe(float(x.real)), _json_safe(float(x.imag))]
    if isinstance(x, np.ndarray):
        return _json_safe(x.tolist())
    return x


def _json_text(obj):
    return json.dumps(_json_safe(obj), indent=2, default=_json_default, allow_nan=False) + "\n"


def _json_default(x):
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, np.ndarray):
        return x.tolist()
    raise TypeError(f"not serializable: {type(x).__name__}")


def _emit(args, header, rows, payload):
    if args.format == "json":
        _write(args, _json_text(payload))
    else:
        _write(args, _csv_text(header, rows))


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_validate(args):
    ct = load_contour(args.contour)
    f = load_function(args.function)
    if args.lemma == 3:
        rep = contour.validate_lemma3(ct, f, args.epsilon, args.s1)
    elif args.lemma == 2:
        rep = contour.validate_lemma2(ct, f, args.alpha, args.beta, args.epsilon)
    else:
        rep = contour.validate_watson(ct, f, args.alpha, args.beta, args.epsilon)
    _write(args, _json_text(rep.to_json()))
    if not rep.valid:
        for msg in rep.failures:
            print(f"lemma {args.lemma}: {msg}", file=sys.stderr)
    return EXIT_OK if rep.valid else EXIT_INVALID


def cmd_sum(args):
    ct = load_contour(args.contour)
    f = load_function(args.function)
    results = quad.lambda_scan(ct, f, args.alpha, args.beta, _grid(args), _tol(args), _jobs(args),
                               backend=args.backend)
    rows = [r.csv_row() for r in results]
    payload = [dict(zip(quad.CSV_HEADER, row), error=r.error, warning=r.warning)
               for row, r in zip(rows, results)]
    _emit(args, quad.CSV_HEADER, rows, payload)
    failed = [r for r in results if not r.converged]
    for r in failed:
        print(f"lambda={r.lam:.6g}: {r.error}", file=sys.stderr)
    return EXIT_NUMERIC if failed else EXIT_OK


def cmd_coeffs(args):
    f = load_function(args.function)
    s = series.asymptotic_coefficients(f, args.alpha, args.beta, args.N)
    rows = s.csv_rows()
    payload = {"alpha": s.alpha, "beta": s.beta,
               "coeffs": [dict(zip(series.COEFF_CSV_HEADER, r)) for r in rows]}
    if args.extract:
        ct = load_contour(args.contour)
        lams = _grid(args)
        res = quad.lambda_scan(ct, f, args.alpha, args.beta, lams, series.REMAINDER_TOL,
                               _jobs(args), backend=args.backend)
        vals = np.array([r.value for r in res])
        noise = np.array([r.abs_error_estimate for r in res]) + 8 * series.EPS * np.abs(vals)
        ex = series.extract_coefficients(lams, vals, args.alpha, args.beta, args.N, noise)
        payload["extracted"] = {"values": list(ex.values), "errors": list(ex.errors),
                                "stopped_at": ex.stopped_at,
                                "agree": ex.agrees_with(s.coeffs)}
        if args.format == "csv":
            print(_json_text(payload["extracted"]), file=sys.stderr, end="")
    _emit(args, series.COEFF_CSV_HEADER, rows, payload)
    return EXIT_OK


REMAINDER_HEADER = ["N", "lambda_re", "lambda_im", "R_re", "R_im", "scaled", "resolved"]


def cmd_remainders(args):
    ct = load_contour(args.contour)
    f = load_function(args.function)
    lams = _grid(args)
    tol = quad.ToleranceSpec(min(args.atol, series.REMAINDER_TOL.atol),
                             min(args.rtol, series.REMAINDER_TOL.rtol), args.max_evals)
    results = quad.lambda_scan(ct, f, args.alpha, args.beta, lams, tol, _jobs(args),
                               backend=args.backend)
    reports = [series.remainder_scan(ct, f, args.alpha, args.beta, n, lams, results=results)
               for n in range(args.N + 1)]
    rows = []
    for rep in reports:
        for lam, R, sc, ok in zip(rep.lambda_samples, rep.remainders, rep.scaled, rep.resolved):
            rows.append([rep.N, lam.real, lam.imag, R.real, R.imag, sc, ok])
    summary = [{"N": r.N, "slope": r.slope_fit, "threshold": r.threshold, "passes": r.passes}
               for r in reports]
    _emit(args, REMAINDER_HEADER, rows, {"reports": summary})
    if args.format == "csv":
        for s in summary:
            print(f"N={s['N']} slope={s['slope']:.4g} threshold={s['threshold']:.4g} "
                  f"{'PASS' if s['passes'] else 'FAIL'}", file=sys.stderr)
    return EXIT_OK if all(r.passes for r in reports) else EXIT_INVALID


def cmd_certify(args):
    ct = load_contour(args.contour)
    f = load_function(args.function)
    lams = [complex(x) for x in args.lambdas] if args.lambdas else _grid(args)
    rep = bounds.certify(ct, f, args.epsilon, args.N, lams, args.s1, args.delta,
                         backend=args.backend)
    _write(args, _json_text(rep.to_json()))
    return EXIT_OK if rep.passes else EXIT_INVALID


def cmd_compare(args):
    ca = load_contour(args.contour)
    cb = load_contour(args.contour_b)
    f = load_function(args.function)
    rep = ambiguity.compare_contours(ca, cb, f, args.alpha, args.beta, _grid(args),
                                     epsilon=args.epsilon, n_coeffs=args.n_coeffs,
                                     jobs=_jobs(args), check_coefficients=not args.no_coeffs,
                                     backend=args.backend)
    summary = rep.summary()
    summary["beyond_all_orders"] = ambiguity.beyond_all_orders_check(rep, N=args.N)
    if args.format == "json":
        _write(args, _json_text(summary))
    else:
        _write(args, _csv_text(ambiguity.CSV_HEADER, rep.csv_rows()))
        print(_json_text(summary), file=sys.stderr, end="")
    return EXIT_OK


ADLER_HEADER = ["a", "D_pv_re", "D_pv_im", "D_upper_re", "D_upper_im", "lip_gap_abs",
                "partial_sum_N3"]


def _adler_model(cfg):
    beta0 = float(cfg.get("beta0", adler.DEFAULT_BETA0))
    spec = cfg.get("borel", {"canonical": True})
    if spec.get("canonical"):
        return adler.canonical_model(beta0, spec.get("poly", ()))
    return adler.model_from_function(load_function(spec), beta0)


def cmd_adler(args):
    cfg = _read_json(args.config) if args.config else {}
    if not isinstance(cfg, dict):
        raise ConfigParse("adler config must be a JSON object")
    model = _adler_model(cfg)
    a_grid = cfg.get("a_grid", args.a)
    if not a_grid:
        raise ConfigParse("no couplings given (a_grid or --a)")
    prescription = cfg.get("prescription", "pv")
    if prescription not in ("pv", "ray", "contour-file"):
        raise ConfigParse(f"unknown prescription {prescription!r}")
    D = adler.perturbative_coefficients(model)
    c_cfg = cfg.get("c")
    rows = []
    for a in a_grid:
        a = float(a)
        pv = adler.pv_resum(model, c=c_cfg, a=a, detail=True)
        if prescription == "pv":
            upper = pv.upper
        else:
            if prescription == "ray":
                ct = contour.ray_contour(pv.c if c_cfg is None else float(c_cfg))
            else:
                ct = load_contour(cfg.get("contour") or args.contour)
            upper = adler.resum(model, ct, a)
        ps = adler.perturbative_partial_sum(D, a, 3)
        rows.append([a, pv.pv.real, pv.pv.imag, upper.real, upper.imag, abs(upper - pv.pv),
                     ps.real])
    payload = [dict(zip(ADLER_HEADER, r)) for r in rows]
    _emit(args, ADLER_HEADER, rows, payload)
    return EXIT_OK


FIG1_HEADER = ["s", "re_G", "im_G"]


def cmd_fig1(args):
    ct = contour.fig1_contour(args.a1, args.b1, args.arc_end)
    a2, b2 = contour.fig1_parameters(args.a1, args.b1)
    s = ct.grid(args.samples)
    g = ct.G(s)
    rows = [[si, gi.real, gi.imag] for si, gi in zip(s, g)]
    payload = {"a1": args.a1, "b1": args.b1, "a2": a2, "b2": b2, "contour": ct.to_json(),
               "samples": [dict(zip(FIG1_HEADER, r)) for r in rows]}
    _emit(args, FIG1_HEADER, rows, payload)
    print(f"a2={a2:.12g} b2={b2:.12g}", file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _common(p, contour_required=True, function=True):
    if contour_required is not None:
        p.add_argument("--contour", required=contour_required,
                       help="contour JSON file or builtin:fig1 / builtin:ray[:c]")
    if function:
        p.add_argument("--function", required=True,
                       help="function JSON file or builtin:one / inv1p / inv1m")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--epsilon", type=float, default=0.1)


def _numerics(p):
    p.add_argument("--atol", type=float, default=1e-12)
    p.add_argument("--rtol", type=float, default=1e-10)
    p.add_argument("--max-evals", type=int, default=quad.DEFAULT_MAX_EVALS)
    p.add_argument("--jobs", type=int, default=None, help="worker threads (default: all cores)")
    p.add_argument("--backend", choices=["numpy", "numba"], default=None)


def _grid_flags(p, start=20.0, stop=320.0, count=9, scale="log"):
    p.add_argument("--lam-start", type=float, default=start)
    p.add_argument("--lam-stop", type=float, default=stop)
    p.add_argument("--lam-count", type=int, default=count)
    p.add_argument("--lam-scale", choices=["log", "linear"], default=scale)
    p.add_argument("--lam-arg", type=float, default=0.0, help="arg(lambda) in radians")


def _output(p, fmt="csv"):
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    p.add_argument("--format", choices=["csv", "json"], default=fmt)


def build_parser():
    ap = argparse.ArgumentParser(prog="borelcontour",
                                 description="Laplace-Borel integrals on curvilinear contours.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check contour hypotheses")
    _common(p)
    p.add_argument("--lemma", type=int, choices=[1, 2, 3], default=3)
    p.add_argument("--s1", type=float, default=None)
    _output(p, "json")
    p.set_defaults(run=cmd_validate)

    p = sub.add_parser("sum", help="evaluate Phi(lambda) on a grid")
    _common(p)
    _numerics(p)
    _grid_flags(p, 1.0, 100.0, 9)
    _output(p)
    p.set_defaults(run=cmd_sum)

    p = sub.add_parser("coeffs", help="asymptotic coefficients")
    _common(p, contour_required=False)
    p.add_argument("--N", type=int, default=10)
    p.add_argument("--extract", action="store_true",
                   help="also extract the coefficients numerically along --contour")
    _numerics(p)
    _grid_flags(p, 40.0, 40.0 * 2**15, 16)
    _output(p)
    p.set_defaults(run=cmd_coeffs)

    p = sub.add_parser("remainders", help="remainder decay scan for N = 0..N")
    _common(p)
    p.add_argument("--N", type=int, default=4)
    _numerics(p)
    _grid_flags(p)
    _output(p)
    p.set_defaults(run=cmd_remainders)

    p = sub.add_parser("certify", help="measure pieces against the explicit envelopes")
    _common(p)
    p.add_argument("--N", type=int, default=4)
    p.add_argument("--s1", type=float, default=None)
    p.add_argument("--delta", type=float, default=bounds.DEFAULT_DELTA)
    p.add_argument("--lambdas", type=float, nargs="*", default=None)
    _numerics(p)
    _grid_flags(p, 20.0, 160.0, 4)
    _output(p, "json")
    p.set_defaults(run=cmd_certify)

    p = sub.add_parser("compare", help="difference of two contour integrals")
    _common(p)
    p.add_argument("--contour-b", required=True)
    p.add_argument("--N", type=int, default=6, help="orders for the beyond-all-orders check")
    p.add_argument("--n-coeffs", type=int, default=6)
    p.add_argument("--no-coeffs", action="store_true", help="skip the shared-coefficient check")
    _numerics(p)
    _grid_flags(p, 5.0, 40.0, 15, "linear")
    _output(p)
    p.set_defaults(run=cmd_compare)

    p = sub.add_parser("adler", help="Borel resummation of an Adler-type series")
    p.add_argument("--config", default=None, help="JSON with borel, beta0, a_grid, prescription")
    p.add_argument("--a", type=float, nargs="*", default=None, help="couplings if no a_grid")
    p.add_argument("--contour", default=None, help="contour for prescription contour-file")
    _output(p)
    p.set_defaults(run=cmd_adler)

    p = sub.add_parser("fig1", help="sample the polynomial-plus-arc example contour")
    p.add_argument("--a1", type=float, default=0.1)
    p.add_argument("--b1", type=float, default=0.1)
    p.add_argument("--arc-end", type=float, default=1.2)
    p.add_argument("--samples", type=int, default=241)
    _output(p)
    p.set_defaults(run=cmd_fig1)
    return ap


def _exit_code(exc):
    if isinstance(exc, (ContourError, BoundsError, AmbiguityError)) and not isinstance(
            exc, bounds.DeltaOutOfRange):
        return EXIT_INVALID
    return EXIT_NUMERIC


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except BorelContourError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return _exit_code(exc)
    except (ValueError, FloatingPointError, OverflowError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
