"""Numerical kernels: adaptive quadrature, nested cubature, root finding,
1-D maximisation and straight-line fits.

All integrators expect *vectorised* integrands: ``f`` receives an ndarray of
abscissae and returns an ndarray of the same shape.  Results depend only on
the inputs and tolerances, never on timing, so repeated runs are
bit-identical.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np

from .errors import BracketError, ConvergenceError, FitError

# 7-point Gauss / 15-point Kronrod pair on [-1, 1] (QUADPACK qk15).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# full 15-point layout: -x0 ... -x6, 0, x6 ... x0
NODES = np.concatenate([-_XGK[:-1], [0.0], _XGK[-2::-1]])
KRONROD = np.concatenate([_WGK[:-1], [_WGK[-1]], _WGK[-2::-1]])
GAUSS = np.zeros(15)
GAUSS[1:14:2] = np.concatenate([_WG[:-1], [_WG[-1]], _WG[-2::-1]])

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class QuadResult:
    value: float
    err: float
    evals: int
    intervals: int = 1


@dataclass(frozen=True)
class SingularityHint:
    """Location and per-axis scales of a near-singular feature."""

    center: tuple
    widths: tuple

    def __post_init__(self):
        if len(self.center) != len(self.widths):
            raise ValueError("center and widths must have the same length")
        if not all(w > 0 and math.isfinite(w) for w in self.widths):
            raise ValueError(f"hint widths must be positive and finite: {self.widths}")


class MaxResult(NamedTuple):
    x: float
    fx: float
    at_boundary: bool


class LineFit(NamedTuple):
    slope: float
    intercept: float
    r2: float


def _panel_errors(fv, half):
    """QUADPACK-style error estimate for rows of 15 samples.

    ``fv`` has shape (..., 15); ``half`` the matching half-widths.
    Returns (kronrod, err).
    """
    res_k = np.sum(fv * KRONROD, axis=-1) * half
    res_g = np.sum(fv * GAUSS, axis=-1) * half
    mean = res_k / (2.0 * np.where(half == 0, 1.0, half))
    resabs = np.sum(np.abs(fv) * KRONROD, axis=-1) * np.abs(half)
    resasc = np.sum(np.abs(fv - mean[..., None]) * KRONROD, axis=-1) * np.abs(half)
    diff = np.abs(res_k - res_g)
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = np.where(resasc > 0, resasc * np.minimum(1.0, (200.0 * diff / resasc) ** 1.5), diff)
    floor = 50.0 * _EPS * resabs
    err = np.where(floor > scaled, floor, scaled)
    return res_k, err


def gk15(f, a, b):
    """Apply the 15-point Kronrod rule on each panel [a_i, b_i].

    ``f`` may return an array or a ``(values, inner_errors)`` pair; inner
    errors are propagated with the absolute Kronrod weights.
    Returns (values, quadrature errors, propagated inner errors).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    xs = center[..., None] + half[..., None] * NODES
    out = f(xs)
    if isinstance(out, tuple):
        fv, inner = out
        inner_err = np.sum(np.asarray(inner) * KRONROD, axis=-1) * np.abs(half)
    else:
        fv = out
        inner_err = np.zeros_like(center)
    fv = np.asarray(fv, dtype=float)
    val, err = _panel_errors(fv, half)
    return val, err, inner_err


def graded_points(center, width, lo, hi, ratio=4.0, max_levels=60):
    """Breakpoints ``center ± width*ratio**k`` (k = 0, 1, ...) inside (lo, hi).

    The centre itself is included when it lies inside the interval.
    """
    if width <= 0:
        raise ValueError("width must be positive")
    pts = []
    if lo < center < hi:
        pts.append(center)
    span = hi - lo
    step = width
    for _ in range(max_levels):
        for p in (center - step, center + step):
            if lo < p < hi:
                pts.append(p)
        if step > span + abs(center - lo) + abs(center - hi):
            break
        step *= ratio
    return sorted(set(pts))


def integrate_1d(f, a, b, tol_rel=1e-10, tol_abs=0.0, points=None,
                 max_intervals=4000):
    """Globally adaptive Gauss-Kronrod (7/15) quadrature on [a, b].

    ``points`` are forced breakpoints of the initial partition.  Refinement
    stops once the quadrature error estimate is below
    ``max(tol_abs, tol_rel*|value|)``.  When ``f`` returns
    ``(values, errors)`` the inner errors are added to the reported error but
    do not drive refinement.

    Raises ConvergenceError (carrying the best estimate) if the interval
    budget runs out.
    """
    if not (a < b):
        raise ValueError(f"need a < b, got a={a!r}, b={b!r}")
    edges = [a] + sorted(p for p in (points or ()) if a < p < b) + [b]
    edges = np.array(sorted(set(edges)))
    lefts, rights = edges[:-1], edges[1:]
    vals, errs, inner = gk15(f, lefts, rights)
    evals = 15 * len(lefts)
    # panels keyed by left endpoint; heap ordered by error (ties by position)
    panels = {}
    heap = []
    for lft, rgt, v, e, ie in zip(lefts, rights, vals, errs, inner):
        panels[lft] = (rgt, v, e, ie)
        heapq.heappush(heap, (-e, lft))

    def totals():
        keys = sorted(panels)
        v = math.fsum(panels[k][1] for k in keys)
        e = math.fsum(panels[k][2] for k in keys)
        ie = math.fsum(panels[k][3] for k in keys)
        return v, e, ie

    value, err, inner_err = totals()
    while err > max(tol_abs, tol_rel * abs(value)):
        if len(panels) >= max_intervals:
            raise ConvergenceError(
                f"integrate_1d: {len(panels)} intervals, err={err:.3e}",
                value=value, err=err + inner_err)
        chosen = []
        # split every panel within a factor of the worst one
        e_cut = -0.25 * heap[0][0] if heap else 0.0
        while heap and (not chosen or -heap[0][0] >= e_cut):
            e_neg, lft = heapq.heappop(heap)
            rgt = panels[lft][0]
            mid = 0.5 * (lft + rgt)
            if not (lft < mid < rgt) or (rgt - lft) <= 64 * _EPS * max(abs(lft), abs(rgt), 1e-300):
                # cannot split further; keep it out of the heap
                continue
            chosen.append(lft)
        if not chosen:
            raise ConvergenceError(
                "integrate_1d: roundoff limit reached", value=value, err=err + inner_err)
        lefts = []
        rights = []
        for lft in chosen:
            rgt = panels.pop(lft)[0]
            mid = 0.5 * (lft + rgt)
            lefts += [lft, mid]
            rights += [mid, rgt]
        vals, errs, inn = gk15(f, np.array(lefts), np.array(rights))
        evals += 15 * len(lefts)
        for lft, rgt, v, e, ie in zip(lefts, rights, vals, errs, inn):
            panels[lft] = (rgt, v, e, ie)
            heapq.heappush(heap, (-e, lft))
        value, err, inner_err = totals()
    return QuadResult(value=value, err=err + inner_err, evals=evals, intervals=len(panels))


def _graded_panel_edges(lo, hi, centers, widths, fixed, ratio):
    """Per-row breakpoints for the non-adaptive graded rule.

    lo, hi: (n,); centers, widths: (n, p); fixed: (n, q).
    Returns sorted edges (n, m) clipped to [lo, hi].
    """
    span = (hi - lo)[:, None]
    h = np.maximum(widths, 1e-14 * np.maximum(span, 1e-300))
    if h.size == 0:
        levels = 0
    else:
        levels = int(np.clip(np.ceil(np.log(np.max(span / h)) / np.log(ratio)) + 1, 1, 60))
    steps = h[..., None] * ratio ** np.arange(levels)
    c = centers[..., None]
    pts = np.concatenate([
        (c - steps).reshape(len(lo), -1),
        (c + steps).reshape(len(lo), -1),
        centers,
        fixed,
        lo[:, None],
        hi[:, None],
    ], axis=1)
    pts = np.clip(pts, lo[:, None], hi[:, None])
    pts.sort(axis=1)
    return pts


def integrate_graded(f, lo, hi, centers=None, widths=None, fixed=None, ratio=4.0,
                     tol_rel=None, max_halvings=6):
    """Vectorised quadrature for rows of Lorentzian-like peaks.

    Row ``i`` integrates ``f`` over [lo[i], hi[i]] on a partition graded
    geometrically around every ``centers[i, j]`` with smallest scale
    ``widths[i, j]``.  On such a partition each panel sees the nearest
    complex singularity at a distance comparable to its own length, so one
    15-point Kronrod rule per panel is usually enough.  With ``tol_rel`` set,
    every panel of the batch is halved until the summed error estimate drops
    below ``tol_rel`` times the summed magnitude (at most ``max_halvings``
    times).

    ``f(w)`` receives an array of shape (n, panels, 15).
    Returns (values, errors), both of shape (n,).
    """
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    n = lo.shape[0]
    centers = np.zeros((n, 0)) if centers is None else np.asarray(centers, dtype=float)
    widths = np.zeros((n, 0)) if widths is None else np.asarray(widths, dtype=float)
    fixed = np.zeros((n, 0)) if fixed is None else np.asarray(fixed, dtype=float)
    edges = _graded_panel_edges(lo, hi, centers, widths, fixed, ratio)
    for level in range(max_halvings + 1):
        a = edges[:, :-1]
        b = edges[:, 1:]
        half = 0.5 * (b - a)
        xs = (0.5 * (a + b))[..., None] + half[..., None] * NODES
        fv = np.asarray(f(xs), dtype=float)
        val, err = _panel_errors(fv, half)
        # zero-length panels contribute nothing
        val = np.sum(np.where(half > 0, val, 0.0), axis=1)
        err = np.sum(np.where(half > 0, err, 0.0), axis=1)
        if tol_rel is None or np.sum(err) <= tol_rel * np.sum(np.abs(val)) or level == max_halvings:
            return val, err
        mid = 0.5 * (a + b)
        edges = np.concatenate([np.stack([a, mid], axis=-1).reshape(len(lo), -1), b[:, -1:]], axis=1)


def integrate_3d(f, box, hint: Optional[SingularityHint] = None, tol_rel=1e-3,
                 tol_abs=0.0, points=None, inner_poles=None, ratio=4.0,
                 outer_ratio=5.0, max_intervals=4000):
    """Nested cubature: outer y, middle x, inner w.

    ``f(w, x, y)`` is vectorised.  ``box = ((w_lo, w_hi), (x_lo, x_hi),
    (y_lo, y_hi))``; the w limits may be callables ``g(x, y)`` returning
    arrays.  The x and y integrals are adaptive Gauss-Kronrod whose initial
    partitions are graded around ``hint`` with step ratio ``outer_ratio``;
    the w integral uses
    :func:`integrate_graded` around the hint, optional fixed ``points[0]`` and
    the per-node peaks reported by ``inner_poles(x, y) -> (centers, widths)``,
    halving its panels while the batch error exceeds tol_rel/8.
    """
    (w_lo, w_hi), (x_lo, x_hi), (y_lo, y_hi) = box
    points = points or ((), (), ())
    x_pts = list(points[1])
    y_pts = list(points[2])
    w_fixed = list(points[0])
    if hint is not None:
        (wc, xc, yc), (ww, xw, yw) = hint.center, hint.widths
        # coarser grading suffices on the adaptive axes
        x_pts += graded_points(xc, xw, x_lo, x_hi, outer_ratio)
        y_pts += graded_points(yc, yw, y_lo, y_hi, outer_ratio)
    counter = [0]

    def inner(xs, y):
        shape = xs.shape
        xf = xs.ravel()
        lo = w_lo(xf, y) if callable(w_lo) else np.full(xf.shape, float(w_lo))
        hi = w_hi(xf, y) if callable(w_hi) else np.full(xf.shape, float(w_hi))
        cs = []
        ws = []
        if hint is not None:
            cs.append(np.full((xf.size, 1), wc))
            ws.append(np.full((xf.size, 1), ww))
        if inner_poles is not None:
            pc, pw = inner_poles(xf, y)
            cs.append(pc)
            ws.append(pw)
        centers = np.concatenate(cs, axis=1) if cs else None
        widths = np.concatenate(ws, axis=1) if ws else None
        fixed = np.tile(np.asarray(w_fixed, dtype=float), (xf.size, 1)) if w_fixed else None
        xb = xf[:, None, None]

        def fw(w):
            counter[0] += w.size
            return f(w, xb, y)

        vals, errs = integrate_graded(fw, lo, hi, centers, widths, fixed, ratio, tol_rel=tol_inner)
        return vals.reshape(shape), errs.reshape(shape)

    tol_mid = 0.25 * tol_rel
    tol_inner = 0.125 * tol_rel

    def middle(ys):
        out = np.empty(ys.shape)
        out_err = np.empty(ys.shape)
        for idx, y in np.ndenumerate(ys):
            res = integrate_1d(lambda xs: inner(xs, y), x_lo, x_hi, tol_rel=tol_mid,
                               tol_abs=0.25 * tol_abs / max(y_hi - y_lo, 1e-300),
                               points=x_pts, max_intervals=max_intervals)
            out[idx] = res.value
            out_err[idx] = res.err
        return out, out_err

    res = integrate_1d(middle, y_lo, y_hi, tol_rel=tol_rel, tol_abs=tol_abs,
                       points=y_pts, max_intervals=max_intervals)
    return QuadResult(value=res.value, err=res.err, evals=counter[0], intervals=res.intervals)


def find_root(f: Callable[[float], float], a: float, b: float, tol: float = 1e-12,
              max_iter: int = 200) -> float:
    """Brent's method: bisection safeguarded inverse quadratic interpolation.

    Returns a point within ``tol`` of a sign change of ``f`` in [a, b].
    """
    fa = f(a)
    fb = f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if not (fa * fb < 0):
        raise BracketError(f"f(a)={fa!r} and f(b)={fb!r} do not bracket a root")
    c, fc = a, fa
    d = e = b - a
    for _ in range(max_iter):
        if fb * fc > 0:
            c, fc = a, fa
            d = e = b - a
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol1 = 2.0 * _EPS * abs(b) + 0.5 * tol
        xm = 0.5 * (c - b)
        if abs(xm) <= tol1 or fb == 0.0:
            return b
        if abs(e) >= tol1 and abs(fa) > abs(fb):
            s = fb / fa
            if a == c:
                p = 2.0 * xm * s
                q = 1.0 - s
            else:
                q = fa / fc
                r = fb / fc
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0:
                q = -q
            p = abs(p)
            if 2.0 * p < min(3.0 * xm * q - abs(tol1 * q), abs(e * q)):
                e, d = d, p / q
            else:
                d = e = xm
        else:
            d = e = xm
        a, fa = b, fb
        b += d if abs(d) > tol1 else math.copysign(tol1, xm)
        fb = f(b)
    raise ConvergenceError(f"find_root: no convergence in {max_iter} iterations", value=b)


_GOLD = 0.5 * (3.0 - math.sqrt(5.0))


def _finite(v):
    return v if (v is not None and math.isfinite(v)) else -math.inf


def maximize_1d(f: Callable[[float], Optional[float]], a: float, b: float,
                tol: float = 1e-10, n_scan: int = 200,
                grid: Optional[Sequence[float]] = None) -> MaxResult:
    """Coarse scan followed by golden-section refinement.

    ``f`` may return None or NaN where undefined; such points count as
    -inf.  For multimodal functions pass a ``grid`` dense enough to land in
    the basin of the global maximum.
    """
    if not (a < b):
        raise ValueError("need a < b")
    xs = np.linspace(a, b, n_scan) if grid is None else np.unique(np.clip(np.asarray(grid, float), a, b))
    fs = [_finite(f(float(x))) for x in xs]
    i = int(np.argmax(fs))
    if fs[i] == -math.inf:
        return MaxResult(float("nan"), float("nan"), False)
    lo = float(xs[max(i - 1, 0)])
    hi = float(xs[min(i + 1, len(xs) - 1)])
    best_x, best_f = float(xs[i]), fs[i]
    if hi > lo:
        x1 = lo + _GOLD * (hi - lo)
        x2 = hi - _GOLD * (hi - lo)
        f1, f2 = _finite(f(x1)), _finite(f(x2))
        while hi - lo > max(tol, 4.0 * _EPS * max(abs(lo), abs(hi))):
            if f1 >= f2:
                hi, x2, f2 = x2, x1, f1
                x1 = lo + _GOLD * (hi - lo)
                f1 = _finite(f(x1))
            else:
                lo, x1, f1 = x1, x2, f2
                x2 = hi - _GOLD * (hi - lo)
                f2 = _finite(f(x2))
        for x, fx in ((x1, f1), (x2, f2)):
            if fx > best_f:
                best_x, best_f = x, fx
    at_boundary = best_x <= xs[0] or best_x >= xs[-1]
    return MaxResult(best_x, best_f, bool(at_boundary))


def fit_log_slope(points) -> LineFit:
    """Least-squares line ``F = slope*s + intercept`` through (s, F) pairs.

    Callers choose the abscissa (e.g. s = ln(1/eps) or s = ln(eta)).
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 3:
        raise FitError("need at least three (s, F) pairs")
    s, F = pts[:, 0], pts[:, 1]
    ds = s - s.mean()
    sxx = float(np.dot(ds, ds))
    if sxx <= 1e-300 * max(1.0, float(np.dot(s, s))):
        raise FitError("abscissae are degenerate")
    slope = float(np.dot(ds, F - F.mean()) / sxx)
    intercept = float(F.mean() - slope * s.mean())
    resid = F - (slope * s + intercept)
    sst = float(np.dot(F - F.mean(), F - F.mean()))
    r2 = 1.0 - float(np.dot(resid, resid)) / sst if sst > 0 else 1.0
    return LineFit(slope, intercept, r2)
