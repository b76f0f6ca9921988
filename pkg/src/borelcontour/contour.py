"""Piecewise parametric integration contours in the Borel plane.

A :class:`Contour` is an ordered chain of segments G(s), s in [0, c], that
starts at the origin. Besides evaluation it answers the geometric questions
the remainder lemmas ask: the continuous argument along the curve, the
admissible cone of arg(lambda), and the constants K1, K2, eta.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import (
    ContourSpecError,
    CutoffOutOfRange,
    EmptySpec,
    JointDiscontinuity,
    OriginRevisit,
    WindingFailure,
)

JOINT_TOL = 1e-12
ORIGIN_TOL = 1e-14
TOL_MONO = 1e-9
HOLOMORPHY_SAFETY = 0.9
EXTREMUM_INFLATION = 0.01
MAX_GRID = 2**20
POLY_MAX_DEGREE = 7


def _linspace_inside(lo, hi, n):
    return np.linspace(lo, hi, n)


# ---------------------------------------------------------------------------
# segments
# ---------------------------------------------------------------------------

class _Segment:
    kind = ""

    @property
    def start_point(self):
        return complex(self.G(np.array([self.s_a]))[0])

    @property
    def end_point(self):
        return complex(self.G(np.array([self.s_b]))[0])

    def closest(self, point, lo=None, hi=None, n=513):
        """Parameter in [lo, hi] nearest to ``point`` and the distance."""
        lo = self.s_a if lo is None else max(lo, self.s_a)
        hi = self.s_b if hi is None else min(hi, self.s_b)
        s = np.linspace(lo, hi, n)
        d = np.abs(self.G(s) - point)
        i = int(np.argmin(d))
        best_s, best_d = s[i], d[i]
        a, b = s[max(i - 1, 0)], s[min(i + 1, n - 1)]
        if b > a:
            res = minimize_scalar(lambda x: abs(complex(self.G(np.array([x]))[0]) - point),
                                  bounds=(a, b), method="bounded",
                                  options={"xatol": 1e-14 * max(1.0, abs(b))})
            if res.fun < best_d:
                best_s, best_d = float(res.x), float(res.fun)
        return float(best_s), float(best_d)


@dataclass(frozen=True)
class Ray(_Segment):
    """Straight piece G(s) = (1 - t) start + t end, t = (s - s0)/length.

    Anchored at the origin with unit speed this is G(s) = s e^{i theta}.
    """

    start: complex
    end: complex
    s0: float
    length: float
    s_a: float
    s_b: float
    kind = "ray"

    @classmethod
    def from_angle(cls, theta, length, start=0j, s_start=0.0):
        end = complex(start) + length * complex(math.cos(theta), math.sin(theta))
        return cls(complex(start), end, s_start, float(length), s_start, s_start + float(length))

    @property
    def theta(self):
        return math.atan2((self.end - self.start).imag, (self.end - self.start).real)

    def G(self, s):
        t = (np.asarray(s, dtype=float) - self.s0) / self.length
        return (1.0 - t) * self.start + t * self.end

    def dG(self, s):
        return np.full(np.shape(s), (self.end - self.start) / self.length, dtype=complex)

    def restrict(self, lo, hi):
        return Ray(self.start, self.end, self.s0, self.length, lo, hi)

    def encode(self):
        prm = np.zeros(8, dtype=complex)
        prm[0], prm[1], prm[2] = self.start, self.end, self.length
        return [(0, self.s0, prm, self.s_a, self.s_b)]

    def closest(self, point, lo=None, hi=None, n=None):
        lo = self.s_a if lo is None else max(lo, self.s_a)
        hi = self.s_b if hi is None else min(hi, self.s_b)
        d = self.end - self.start
        t = ((point - self.start) * d.conjugate()).real / abs(d) ** 2
        s = float(np.clip(self.s0 + t * self.length, lo, hi))
        return s, float(abs(complex(self.G(np.array([s]))[0]) - point))

    def to_json(self):
        return {"kind": "ray", "theta": self.theta, "length": self.s_b - self.s_a}


@dataclass(frozen=True)
class PolynomialCurve(_Segment):
    """G(s) = origin + t(s - s0) + i v(s - s0) with real polynomials t, v
    without constant term; ``t_coeffs[j-1]`` multiplies (s - s0)^j."""

    origin: complex
    t_coeffs: tuple
    v_coeffs: tuple
    s0: float
    s_a: float
    s_b: float
    kind = "poly"

    def __post_init__(self):
        if max(len(self.t_coeffs), len(self.v_coeffs)) > POLY_MAX_DEGREE:
            raise ContourSpecError(f"polynomial degree above {POLY_MAX_DEGREE}")

    @property
    def _coeffs(self):
        n = max(len(self.t_coeffs), len(self.v_coeffs))
        t = np.zeros(n)
        v = np.zeros(n)
        t[: len(self.t_coeffs)] = self.t_coeffs
        v[: len(self.v_coeffs)] = self.v_coeffs
        return t + 1j * v

    def G(self, s):
        sig = np.asarray(s, dtype=float) - self.s0
        c = np.concatenate([[0.0], self._coeffs])
        return self.origin + np.polynomial.polynomial.polyval(sig, c)

    def dG(self, s):
        sig = np.asarray(s, dtype=float) - self.s0
        c = self._coeffs * np.arange(1, len(self._coeffs) + 1)
        return np.polynomial.polynomial.polyval(sig, c) + 0j

    def restrict(self, lo, hi):
        return PolynomialCurve(self.origin, self.t_coeffs, self.v_coeffs, self.s0, lo, hi)

    def encode(self):
        prm = np.zeros(8, dtype=complex)
        prm[0] = self.origin
        c = self._coeffs
        prm[1: 1 + len(c)] = c
        return [(1, self.s0, prm, self.s_a, self.s_b)]

    def to_json(self):
        out = {"kind": "poly", "s_end": self.s_b}
        if len(self.t_coeffs) <= 2 and len(self.v_coeffs) <= 2:
            t = list(self.t_coeffs) + [0.0] * (2 - len(self.t_coeffs))
            v = list(self.v_coeffs) + [0.0] * (2 - len(self.v_coeffs))
            out.update(a1=t[0], a2=t[1], b1=v[0], b2=v[1])
        else:
            out.update(t=list(self.t_coeffs), v=list(self.v_coeffs))
        return out


@dataclass(frozen=True)
class CircularArc(_Segment):
    """G(s) = R exp(i(phi0 + omega (s - s0))), constant modulus R."""

    radius: float
    phi0: float
    omega: float
    s0: float
    s_a: float
    s_b: float
    kind = "arc"

    def G(self, s):
        th = self.phi0 + self.omega * (np.asarray(s, dtype=float) - self.s0)
        return self.radius * np.exp(1j * th)

    def dG(self, s):
        return 1j * self.omega * self.G(s)

    def restrict(self, lo, hi):
        return CircularArc(self.radius, self.phi0, self.omega, self.s0, lo, hi)

    def encode(self):
        prm = np.zeros(8, dtype=complex)
        prm[0], prm[1], prm[2] = self.radius, self.phi0, self.omega
        return [(2, self.s0, prm, self.s_a, self.s_b)]

    def to_json(self):
        out = {"kind": "arc", "from_s": self.s_a, "to_s": self.s_b}
        if self.omega != 1.0:
            out["omega"] = self.omega
        return out


@dataclass(frozen=True)
class SampledPolyline(_Segment):
    """Linear interpolation through ``points``, parametrised by arc length."""

    points: tuple
    s_a: float
    knots: tuple = field(default=(), compare=False)
    kind = "polyline"

    def __post_init__(self):
        pts = [complex(p) for p in self.points]
        keep = [pts[0]]
        for p in pts[1:]:
            if abs(p - keep[-1]) > 0:
                keep.append(p)
        if len(keep) < 2:
            raise ContourSpecError("polyline needs two distinct points")
        object.__setattr__(self, "points", tuple(keep))
        lengths = np.abs(np.diff(np.array(keep)))
        object.__setattr__(self, "knots", tuple(self.s_a + np.concatenate([[0.0], np.cumsum(lengths)])))

    @property
    def s_b(self):
        return self.knots[-1]

    def _edge(self, s):
        return np.clip(np.searchsorted(self.knots, s, side="right") - 1, 0, len(self.points) - 2)

    def G(self, s):
        s = np.asarray(s, dtype=float)
        i = self._edge(s)
        k = np.asarray(self.knots)
        p = np.asarray(self.points)
        t = (s - k[i]) / (k[i + 1] - k[i])
        return (1.0 - t) * p[i] + t * p[i + 1]

    def dG(self, s):
        s = np.asarray(s, dtype=float)
        i = self._edge(s)
        k = np.asarray(self.knots)
        p = np.asarray(self.points)
        return (p[i + 1] - p[i]) / (k[i + 1] - k[i])

    def edges(self):
        return [Ray(self.points[i], self.points[i + 1], self.knots[i],
                    self.knots[i + 1] - self.knots[i], self.knots[i], self.knots[i + 1])
                for i in range(len(self.points) - 1)]

    def restrict(self, lo, hi):
        k = np.asarray(self.knots)
        inner = [self.points[i] for i in range(len(k)) if lo < k[i] < hi]
        pts = [complex(self.G(np.array([lo]))[0])] + inner + [complex(self.G(np.array([hi]))[0])]
        return SampledPolyline(tuple(pts), lo)

    def encode(self):
        rows = []
        for e in self.edges():
            rows.extend(e.encode())
        return rows

    def closest(self, point, lo=None, hi=None, n=None):
        best = (self.s_a, math.inf)
        lo = self.s_a if lo is None else lo
        hi = self.s_b if hi is None else hi
        for e in self.edges():
            if e.s_b < lo or e.s_a > hi:
                continue
            cand = e.closest(point, lo, hi)
            if cand[1] < best[1]:
                best = cand
        return best

    def to_json(self):
        return {"kind": "polyline", "points": [[p.real, p.imag] for p in self.points]}


# ---------------------------------------------------------------------------
# contour
# ---------------------------------------------------------------------------

class Contour:
    """Validated chain of segments with G(0) = 0 and G(s) != 0 for s > 0."""

    def __init__(self, segments, name=""):
        segments = tuple(segments)
        if not segments:
            raise EmptySpec("contour needs at least one segment")
        self.segments = segments
        self.name = name
        self._closest_cache = {}
        self._validate()

    @property
    def c(self):
        return float(self.segments[-1].s_b)

    @cached_property
    def breaks(self):
        return np.array([seg.s_a for seg in self.segments] + [self.c])

    def __repr__(self):
        kinds = ",".join(seg.kind for seg in self.segments)
        return f"Contour({self.name or kinds}, c={self.c:.6g})"

    def _validate(self):
        first = self.segments[0]
        if abs(first.s_a) > JOINT_TOL or abs(first.start_point) > JOINT_TOL:
            raise JointDiscontinuity("first segment must start at the origin with s = 0")
        for i in range(len(self.segments) - 1):
            a, b = self.segments[i], self.segments[i + 1]
            if abs(a.s_b - b.s_a) > JOINT_TOL:
                raise JointDiscontinuity(f"parameter gap between segments {i} and {i + 1}")
            gap = abs(a.end_point - b.start_point)
            if gap > JOINT_TOL:
                raise JointDiscontinuity(f"segments {i} and {i + 1} are {gap:.3g} apart at the joint")
            if not b.s_b > b.s_a:
                raise ContourSpecError(f"segment {i + 1} has empty parameter range")
        s_min = 1e-6 * self.c
        for i, seg in enumerate(self.segments):
            if seg.s_b <= s_min:
                continue
            s, d = seg.closest(0j, max(seg.s_a, s_min), seg.s_b)
            if d < ORIGIN_TOL:
                raise OriginRevisit(f"contour returns to the origin at s={s:.6g}")

    def segment_index(self, s):
        i = np.searchsorted(self.breaks, np.asarray(s, dtype=float), side="right") - 1
        return np.clip(i, 0, len(self.segments) - 1)

    def _dispatch(self, method, s):
        s = np.asarray(s, dtype=float)
        flat = np.atleast_1d(s)
        out = np.empty(flat.shape, dtype=complex)
        idx = self.segment_index(flat)
        for i in np.unique(idx):
            m = idx == i
            out[m] = getattr(self.segments[i], method)(flat[m])
        return out.reshape(s.shape) if s.ndim else out[0]

    def G(self, s):
        return self._dispatch("G", s)

    def dG(self, s):
        return self._dispatch("dG", s)

    @cached_property
    def pieces(self):
        """Kernel encoding: (kinds, s0, prm, s_a, s_b) arrays."""
        rows = []
        for seg in self.segments:
            rows.extend(seg.encode())
        kinds = np.array([r[0] for r in rows], dtype=np.int64)
        s0 = np.array([r[1] for r in rows], dtype=float)
        prm = np.array([r[2] for r in rows], dtype=complex)
        sa = np.array([r[3] for r in rows], dtype=float)
        sb = np.array([r[4] for r in rows], dtype=float)
        return kinds, s0, prm, sa, sb

    def closest(self, point, lo=0.0, hi=None):
        hi = self.c if hi is None else hi
        key = (complex(point), float(lo), float(hi))
        if key in self._closest_cache:
            return self._closest_cache[key]
        best = (lo, math.inf)
        for seg in self.segments:
            if seg.s_b < lo or seg.s_a > hi:
                continue
            cand = seg.closest(complex(point), max(lo, seg.s_a), min(hi, seg.s_b))
            if cand[1] < best[1]:
                best = cand
        # pole searches repeat for every lambda on a scan
        self._closest_cache[key] = best
        return best

    def grid(self, n):
        """Uniform grid of n points on [0, c] merged with the segment joints."""
        return np.union1d(np.linspace(0.0, self.c, n), self.breaks)

    @cached_property
    def unwrapped(self):
        """(s_grid, continuous arg G) on the first grid that tracks the argument."""
        return _unwrap_refined(self)

    def to_json(self):
        return {"segments": [seg.to_json() for seg in self.segments]}


def _seed_angle(contour):
    d0 = complex(contour.segments[0].dG(np.array([0.0]))[0])
    if abs(d0) > 0:
        return math.atan2(d0.imag, d0.real)
    g = complex(contour.G(1e-9 * contour.c))
    return math.atan2(g.imag, g.real)


def _unwrap_refined(contour, n0=1025, extra=()):
    n = n0
    seed = _seed_angle(contour)
    while True:
        s = np.union1d(contour.grid(n), np.asarray(extra, dtype=float))
        g = contour.G(s)
        ang = np.angle(g)
        ang[0] = seed
        unwrapped = np.unwrap(ang)
        if np.max(np.abs(np.diff(unwrapped))) < 0.5 * np.pi:
            return s, unwrapped
        if n >= MAX_GRID:
            raise WindingFailure("argument jumps exceed pi/2 at the finest grid; "
                                 "the curve winds too tightly around the origin")
        n = 2 * (n - 1) + 1


def build_contour(segment_specs, name=""):
    """Assemble a contour from JSON-style dicts or segment objects."""
    if not segment_specs:
        raise EmptySpec("empty segment list")
    segments = []
    point = 0j
    s = 0.0
    for spec in segment_specs:
        if isinstance(spec, _Segment):
            seg = spec
        else:
            seg = _segment_from_spec(spec, point, s)
        segments.append(seg)
        point = seg.end_point
        s = seg.s_b
    return Contour(segments, name=name)


def _segment_from_spec(spec, point, s):
    try:
        kind = spec["kind"]
        if kind == "ray":
            return Ray.from_angle(float(spec["theta"]), float(spec["length"]), point, s)
        if kind == "poly":
            if "t" in spec or "v" in spec:
                t = tuple(float(x) for x in spec.get("t", ()))
                v = tuple(float(x) for x in spec.get("v", ()))
            else:
                t = (float(spec.get("a1", 0.0)), float(spec.get("a2", 0.0)))
                v = (float(spec.get("b1", 0.0)), float(spec.get("b2", 0.0)))
            return PolynomialCurve(point, t, v, s, s, float(spec["s_end"]))
        if kind == "arc":
            from_s = float(spec.get("from_s", s))
            if abs(from_s - s) > JOINT_TOL:
                raise JointDiscontinuity(f"arc starts at s={from_s} but previous segment ends at s={s}")
            if abs(point) == 0:
                raise ContourSpecError("an arc cannot start at the origin")
            return CircularArc(abs(point), math.atan2(point.imag, point.real),
                               float(spec.get("omega", 1.0)), s, s, float(spec["to_s"]))
        if kind == "polyline":
            pts = [complex(p[0], p[1]) for p in spec["points"]]
            if abs(pts[0] - point) > JOINT_TOL:
                raise JointDiscontinuity("polyline must start at the previous end point")
            return SampledPolyline(tuple(pts), s)
    except (KeyError, TypeError, ValueError) as exc:
        raise ContourSpecError(f"bad segment spec {spec!r}: {exc}") from exc
    raise ContourSpecError(f"unknown segment kind {spec.get('kind')!r}")


def fig1_parameters(a1=0.1, b1=0.1):
    """Second-order coefficients that make r'(1) = 0 for the polynomial curve."""
    return -(3.0 * a1 + b1) / 5.0, (a1 - 3.0 * b1) / 5.0


def fig1_contour(a1=0.1, b1=0.1, arc_end=1.2):
    """Polynomial curve on [0, 1] continued by the circular arc on [1, arc_end]."""
    a2, b2 = fig1_parameters(a1, b1)
    return build_contour([
        {"kind": "poly", "a1": a1, "a2": a2, "b1": b1, "b2": b2, "s_end": 1.0},
        {"kind": "arc", "from_s": 1.0, "to_s": arc_end},
    ], name="fig1")


def ray_contour(length=1.0, theta=0.0):
    return build_contour([{"kind": "ray", "theta": theta, "length": length}],
                         name=f"ray(theta={theta:g}, c={length:g})")


# ---------------------------------------------------------------------------
# sectors and reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SectorRegion:
    """Open cone arg_min < arg(lambda) < arg_max."""

    arg_min: float
    arg_max: float
    epsilon: float

    @property
    def nonempty(self):
        return self.arg_min < self.arg_max

    @property
    def middle(self):
        return 0.5 * (self.arg_min + self.arg_max)

    def contains(self, lam):
        lam = complex(lam)
        if lam == 0 or not self.nonempty:
            return False
        phi = math.atan2(lam.imag, lam.real)
        return any(self.arg_min < phi + k * 2 * math.pi < self.arg_max for k in (-1, 0, 1))

    def intersect(self, other):
        return SectorRegion(max(self.arg_min, other.arg_min), min(self.arg_max, other.arg_max),
                            max(self.epsilon, other.epsilon))

    def to_json(self):
        return {"arg_min": self.arg_min, "arg_max": self.arg_max, "epsilon": self.epsilon}


def sector(A, B, epsilon):
    return SectorRegion(-0.5 * math.pi - A + epsilon, 0.5 * math.pi - B - epsilon, epsilon)


@dataclass(frozen=True, eq=False)
class ArgProfile:
    s_grid: np.ndarray
    unwrapped_arg: np.ndarray
    A: float
    B: float
    winding_excess: float
    s1: float


def arg_profile(contour, s1):
    """Continuous argument along the contour; A, B over [s1, c] only."""
    if not 0.0 < s1 < contour.c:
        raise CutoffOutOfRange(f"s1={s1} outside (0, {contour.c})")
    s, arg = contour.unwrapped
    if not np.any(s == s1):
        s, arg = _unwrap_refined(contour, n0=len(contour.grid(1025)) if len(s) < 1025 else _grid_n(s, contour), extra=[s1])
    tail = s >= s1
    return ArgProfile(s, arg, float(arg[tail].min()), float(arg[tail].max()),
                      float(arg.max() - arg.min()), float(s1))


def _grid_n(s, contour):
    # recover the uniform resolution used for an existing refined grid
    return len(s) - len(contour.breaks) + 2


@dataclass
class ValidityReport:
    lemma: str
    valid: bool
    epsilon: float
    A: float
    B: float
    sector: SectorRegion
    s1: float
    rho: float
    eta: float
    K1: float
    K2: float
    gamma1: float = float("nan")
    gamma2: float = float("nan")
    failures: list = field(default_factory=list)
    G_s1: complex = 0j
    c: float = float("nan")

    def to_json(self):
        return {
            "lemma": self.lemma, "valid": self.valid, "epsilon": self.epsilon,
            "A": self.A, "B": self.B, "sector": self.sector.to_json(),
            "s1": _finite_or_str(self.s1), "rho": _finite_or_str(self.rho),
            "eta": _finite_or_str(self.eta),
            "K1": _finite_or_str(self.K1), "K2": _finite_or_str(self.K2),
            "gamma1": _finite_or_str(self.gamma1), "gamma2": _finite_or_str(self.gamma2),
            "c": self.c, "failures": list(self.failures),
        }


def _finite_or_str(x):
    return x if math.isfinite(x) else str(x)


def _polished(func, s, vals, mode, same_piece):
    """Grid extremum refined by one parabolic (Newton-on-derivative) step."""
    i = int(np.argmax(vals) if mode == "max" else np.argmin(vals))
    best_s, best = s[i], vals[i]
    if 0 < i < len(s) - 1 and same_piece(s[i - 1], s[i + 1]):
        h0, h1, h2 = vals[i - 1], vals[i], vals[i + 1]
        denom = h0 - 2 * h1 + h2
        if denom != 0:
            x = s[i] - 0.5 * (s[i + 1] - s[i - 1]) * 0.5 * (h2 - h0) / denom
            if s[i - 1] < x < s[i + 1]:
                v = float(func(np.array([x]))[0])
                if (mode == "max" and v > best) or (mode == "min" and v < best):
                    best_s, best = x, v
    return float(best_s), float(best)


def _same_segment(contour):
    def check(a, b):
        return contour.segment_index(a) == contour.segment_index(b)
    return check


def _pole_distance_failures(contour, f, failures, lo=0.0, hi=None):
    dmin = math.inf
    for p in f.poles:
        s, d = contour.closest(p, lo, hi)
        dmin = min(dmin, d)
        if d <= 1e-9:
            failures.append(f"pole of f at {p:.6g} lies on the contour (s={s:.6g})")
    return dmin


def _auto_s1(contour, s, rho):
    r = np.abs(contour.G(s))
    limit = HOLOMORPHY_SAFETY * rho
    outside = np.nonzero(r > limit)[0]
    if len(outside):
        j = outside[0] - 1
        return float(s[j]) if j > 0 else None
    return float(s[-2])


def validate_lemma3(contour, f, epsilon, s1=None):
    """Check the curvilinear-contour hypotheses (alpha = beta = 1, c finite)."""
    failures = []
    if not 0 < epsilon < 0.5 * math.pi:
        failures.append("epsilon must lie in (0, pi/2)")
    c = contour.c
    if not math.isfinite(c):
        failures.append("contour length c must be finite")
    if abs(complex(contour.G(0.0))) > ORIGIN_TOL:
        failures.append("G(0) != 0")
    s_grid, _ = contour.unwrapped
    rho = f.rho
    if s1 is None:
        s1 = _auto_s1(contour, s_grid, rho)
        if s1 is None:
            failures.append("contour leaves the holomorphy disc immediately; no admissible s1")
            s1 = 0.5 * s_grid[1]
    elif not 0 < s1 < c:
        failures.append(f"s1={s1} outside (0, c)")
        s1 = min(max(s1, 0.5 * s_grid[1]), s_grid[-2])
    prof = arg_profile(contour, s1)
    s = prof.s_grid
    g = contour.G(s)
    head = s <= s1
    if np.max(np.abs(g[head])) >= rho:
        failures.append(f"contour leaves the disc |u| < rho={rho:.6g} before s1={s1:.6g}")
    same = _same_segment(contour)

    tail = s >= s1
    _, eta = _polished(lambda x: np.abs(contour.G(x)), s[tail], np.abs(g[tail]), "min", same)
    eta *= 1.0 - EXTREMUM_INFLATION
    if not eta > 0:
        failures.append("G vanishes on [s1, c] (eta = 0)")
    _, K1 = _polished(lambda x: np.abs(contour.dG(x)), s, np.abs(contour.dG(s)), "max", same)
    K1 *= 1.0 + EXTREMUM_INFLATION

    dmin = _pole_distance_failures(contour, f, failures)
    if dmin > 1e-9:
        fabs = np.abs(f(g))
        _, K2 = _polished(lambda x: np.abs(f(contour.G(x))), s, fabs, "max", same)
        K2 *= 1.0 + EXTREMUM_INFLATION
    else:
        K2 = math.inf
    if not (math.isfinite(K1) and math.isfinite(K2)):
        failures.append("K1 or K2 not finite")
    A, B = prof.A, prof.B
    if not B - A < math.pi - 2 * epsilon:
        failures.append(f"B-A >= pi-2*epsilon (B-A={B - A:.6g})")
    return ValidityReport("Lemma3", not failures, epsilon, A, B, sector(A, B, epsilon),
                          float(s1), rho, float(eta), float(K1), float(K2), failures=failures,
                          G_s1=complex(contour.G(s1)), c=c)


def validate_lemma2(contour, f, alpha, beta, epsilon):
    """Check the radius-parametrised hypotheses; reject non-monotone |G|."""
    failures = []
    if not (alpha > 0 and beta > 0 and epsilon > 0):
        failures.append("alpha, beta and epsilon must be positive")
    s, arg = contour.unwrapped
    g = contour.G(s)
    dg = contour.dG(s)
    r = np.abs(g)
    pos = s > 0
    rprime = np.full(len(s), np.nan)
    rprime[pos] = (np.conj(g[pos]) * dg[pos]).real / r[pos]
    bad = pos & ~(rprime > TOL_MONO)
    nan = float("nan")
    if np.any(bad):
        s_bad = float(s[np.argmax(bad)])
        failures.append(f"radius not strictly increasing near s={s_bad:.6g}")
        for i, seg in enumerate(contour.segments):
            if isinstance(seg, CircularArc):
                failures.append(f"r' = 0 on arc (segment {i}, s in [{seg.s_a:.6g}, {seg.s_b:.6g}])")
        A = float(alpha * arg[pos].min())
        B = float(alpha * arg[pos].max())
        return ValidityReport("Lemma2", False, epsilon, A, B, sector(A, B, epsilon), nan, f.rho,
                              nan, nan, nan, failures=failures, c=contour.c)

    r_max = float(r[-1])
    r0 = min(HOLOMORPHY_SAFETY * f.rho, 0.5 * r_max)
    sel = r >= r0
    A = float(alpha * arg[sel].min())
    B = float(alpha * arg[sel].max())
    gprime_r = np.abs(dg[sel]) / rprime[sel]
    K1, gamma1 = _power_envelope(r[sel], gprime_r)
    dmin = _pole_distance_failures(contour, f, failures)
    if dmin > 1e-9:
        K2, gamma2 = _power_envelope(r[sel], np.abs(f(g[sel])))
    else:
        K2, gamma2 = math.inf, nan
    if not (math.isfinite(K1) and math.isfinite(K2)):
        failures.append("growth constants K1, K2 not finite")
    if not B - A < math.pi - 2 * epsilon:
        failures.append(f"B-A >= pi-2*epsilon (B-A={B - A:.6g})")
    s_r0 = float(s[np.argmax(sel)])
    return ValidityReport("Lemma2", not failures, epsilon, A, B, sector(A, B, epsilon), s_r0,
                          f.rho, r0, K1, K2, gamma1, gamma2, failures=failures,
                          G_s1=complex(contour.G(s_r0)), c=contour.c)


def _power_envelope(r, y):
    """Fit y <= K r^gamma: gamma from a log-log least squares slope, K the
    smallest constant covering every sample (inflated 1%)."""
    y = np.maximum(y, np.finfo(float).tiny)
    if np.ptp(r) > 0 and len(r) > 1:
        gamma = float(np.polyfit(np.log(r), np.log(y), 1)[0])
    else:
        gamma = 0.0
    K = float(np.max(y / r**gamma)) * (1.0 + EXTREMUM_INFLATION)
    return K, gamma


def validate_watson(contour, f, alpha, beta, epsilon):
    """Real-axis Laplace integral: the contour must be the segment [0, c]."""
    failures = []
    seg = contour.segments
    straight = all(isinstance(x, Ray) for x in seg)
    if not straight or np.max(np.abs(contour.G(contour.grid(257)).imag)) > 0 \
            or np.any(contour.G(contour.grid(257)).real < 0):
        failures.append("contour is not the real segment [0, c]")
    if not (alpha > 0 and beta > 0 and 0 < epsilon < 0.5 * math.pi):
        failures.append("need alpha, beta > 0 and epsilon in (0, pi/2)")
    _pole_distance_failures(contour, f, failures)
    return ValidityReport("Watson", not failures, epsilon, 0.0, 0.0, sector(0.0, 0.0, epsilon),
                          float("nan"), f.rho, float("nan"), float("nan"), float("nan"),
                          failures=failures, c=contour.c)


def straighten(contour, s1, rho=None):
    """Replace the piece on [0, s1] by the straight ray to G(s1)."""
    c = contour.c
    if not 0.0 < s1 < c:
        raise CutoffOutOfRange(f"s1={s1} outside (0, {c})")
    if rho is not None:
        s = np.linspace(0.0, s1, 2049)
        if np.max(np.abs(contour.G(s))) >= rho:
            raise CutoffOutOfRange(f"contour leaves |u| < {rho} before s1={s1}")
    g1 = complex(contour.G(s1))
    segments = [Ray(0j, g1, 0.0, s1, 0.0, s1)]
    for seg in contour.segments:
        if seg.s_b <= s1:
            continue
        segments.append(seg.restrict(max(seg.s_a, s1), seg.s_b))
    return Contour(segments, name=f"straightened({contour.name}, s1={s1:g})")
