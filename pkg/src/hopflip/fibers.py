"""Point preimages of maps S^3 -> S^2(r): tracing, orientation and geometry.

A fibre f^{-1}(y) is followed by predictor-corrector continuation: the
predictor steps along the unit kernel vector of df restricted to T_p S^3,
the corrector is Gauss-Newton onto {f = y} with minimum-norm updates (which
are orthogonal to the kernel, so the corrector does not slide back along
the curve).
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, replace

import numpy as np

from .manifolds import Sphere, arc
from .maps import MapDescriptor, jacobians

logger = logging.getLogger(__name__)

__all__ = [
    "FiberCurve",
    "GreatCircleFit",
    "FiberDistance",
    "TracingError",
    "RankDeficient",
    "NoPreimage",
    "StepCollapse",
    "DegenerateCloud",
    "TraceConfig",
    "trace_fiber",
    "orient_fiber",
    "fit_great_circle",
    "fiber_distance_stats",
    "distance_to_curve",
    "polyline_distance",
    "hausdorff",
    "write_fiber_csv",
    "read_fiber_csv",
]

DEFAULT_STEP = 5e-3
DEFAULT_TOL = 1e-8
RANK_FLOOR = 1e-4


class TracingError(RuntimeError):
    pass


class RankDeficient(TracingError):
    pass


class NoPreimage(TracingError):
    pass


class StepCollapse(TracingError):
    pass


class DegenerateCloud(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FiberCurve:
    """Closed polyline on S^3; ``orientation`` is +1 if the stored order is the
    positive direction, -1 if it is the negative one, 0 if not yet oriented."""

    points: np.ndarray
    closed: bool
    orientation: int = 0
    residual: float = 0.0
    step: float = DEFAULT_STEP

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 4:
            raise ValueError("fibre points must have shape (N, 4)")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return len(self.points)

    def oriented_points(self) -> np.ndarray:
        if self.orientation == 0:
            raise ValueError("fibre has not been oriented")
        return self.points if self.orientation > 0 else self.points[::-1]

    def gaps(self) -> np.ndarray:
        pts = self.points
        nxt = np.roll(pts, -1, axis=0) if self.closed else pts[1:]
        return arc(pts[: len(nxt)], nxt)

    def length(self) -> float:
        return float(self.gaps().sum())

    def reversed(self) -> FiberCurve:
        return replace(self, points=self.points[::-1].copy(), orientation=-self.orientation)


@dataclass(frozen=True, eq=False)
class GreatCircleFit:
    plane: np.ndarray  # (2, 4) orthonormal rows
    max_residual: float


@dataclass(frozen=True)
class FiberDistance:
    min: float
    max: float

    @property
    def spread(self) -> float:
        return self.max - self.min


@dataclass(frozen=True)
class TraceConfig:
    seeds: int = 64
    step: float = DEFAULT_STEP
    tol: float = DEFAULT_TOL
    seed: int = 0
    max_length: float = 80.0
    fd_step: float = 1e-6


# ---------------------------------------------------------------------------
# Gauss-Newton machinery
# ---------------------------------------------------------------------------

def _check_map(m: MapDescriptor):
    if m.domain != Sphere(3) or not isinstance(m.codomain, Sphere) or m.codomain.n != 2:
        raise ValueError("fibre tracing needs a map S^3 -> S^2(r)")


# left multiplication by the quaternion units i, j, k: for unit p the vectors
# (ip, jp, kp) are an orthonormal frame of the tangent space of S^3 at p
_QUAT_UNITS = np.array([
    [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]],
    [[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]],
    [[0, 0, 0, -1], [0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0]],
], dtype=float)


def s3_frames(x) -> np.ndarray:
    """Orthonormal tangent frames (B, 3, 4) of S^3 at unit points x (B, 4)."""
    return np.einsum("kij,bj->bki", _QUAT_UNITS, np.atleast_2d(x))


def _jac(m, x, h):
    """Ambient-valued Jacobians (B, 3, 3) in domain frames, plus frames and values."""
    x = np.atleast_2d(x)
    e = s3_frames(x)
    fx = m._eval(x)
    bsz = len(x)
    plus = m.domain.retract(x[:, None, :] + h * e).reshape(-1, 4)
    minus = m.domain.retract(x[:, None, :] - h * e).reshape(-1, 4)
    diff = (m._eval(plus) - m._eval(minus)).reshape(bsz, 3, -1) / (2 * h)
    return np.swapaxes(diff, 1, 2), e, fx


def _gn_step(m, x, y, h):
    """One minimum-norm Gauss-Newton update towards f = y; returns (new x, |f(x) - y|, sigmas)."""
    a, e, fx = _jac(m, x, h)
    r = fx - y
    u, s, vt = np.linalg.svd(a)
    # rank-2 pseudo-inverse: the third singular direction is the kernel
    coef = np.einsum("bij,bi->bj", u[:, :, :2], r) / s[:, :2]
    delta = -np.einsum("bjk,bj->bk", vt[:, :2, :], coef)
    new = m.domain.retract(x + np.einsum("bk,bkn->bn", delta, e))
    return new, np.linalg.norm(r, axis=1), s


def _solve(m, x, y, h, iters=60, target=1e-13):
    """Damped batched Gauss-Newton; returns (points, residuals)."""
    x = np.array(np.atleast_2d(x), dtype=float)
    res = np.linalg.norm(m._eval(x) - y, axis=1)
    for _ in range(iters):
        active = res > target
        if not active.any():
            break
        idx = np.flatnonzero(active)
        cand, _, _ = _gn_step(m, x[idx], y, h)
        cres = np.linalg.norm(m._eval(cand) - y, axis=1)
        # backtrack on points where the full step does not reduce the residual
        worse = cres >= res[idx]
        t = 1.0
        while worse.any() and t > 1e-3:
            t *= 0.5
            w = idx[worse]
            trial = m.domain.retract(x[w] + t * (cand[worse] - x[w]))
            tres = np.linalg.norm(m._eval(trial) - y, axis=1)
            better = tres < res[w]
            cand[np.flatnonzero(worse)[better]] = trial[better]
            cres[np.flatnonzero(worse)[better]] = tres[better]
            worse[np.flatnonzero(worse)[better]] = False
        moved = ~worse
        x[idx[moved]] = cand[moved]
        res[idx[moved]] = cres[moved]
        if not moved.any():
            break
    return x, res


def _kernel(m, p, h):
    a, e, _ = _jac(m, p[None], h)
    _, s, vt = np.linalg.svd(a[0])
    t = vt[2] @ e[0]
    return t / np.linalg.norm(t), s


# ---------------------------------------------------------------------------
# tracing
# ---------------------------------------------------------------------------

def _trace_component(m, start, y, cfg: TraceConfig) -> FiberCurve:
    h = cfg.fd_step
    ctarget = min(cfg.tol * 1e-3, 1e-11)
    t0, s = _kernel(m, start, h)
    if s[1] < RANK_FLOOR:
        raise RankDeficient(f"df has rank < 2 at the fibre (sigma_2 = {s[1]:.2e})")
    pts = [start]
    p, t = start, t0
    max_steps = int(np.ceil(cfg.max_length / cfg.step))
    closed = False
    worst = float(np.linalg.norm(m._eval(start[None])[0] - y))
    for k in range(max_steps):
        step = cfg.step
        for _ in range(7):
            q = np.cos(step) * p + np.sin(step) * t
            q = q / np.linalg.norm(q)
            ok = False
            for _ in range(10):
                q, res, _ = _gn_step(m, q[None], y, h)
                q = q[0]
                r = float(np.linalg.norm(m._eval(q[None])[0] - y))
                if r < ctarget:
                    ok = True
                    break
            if ok and abs(float(arc(p, q)) - step) < 0.25 * step:
                break
            ok = False
            step *= 0.5
        if not ok:
            raise StepCollapse(f"corrector stalled after {k} steps")
        t_new, s = _kernel(m, q, h)
        if s[1] < RANK_FLOOR:
            raise RankDeficient(f"df has rank < 2 along the fibre (sigma_2 = {s[1]:.2e})")
        if t_new @ t < 0:
            t_new = -t_new
        worst = max(worst, r)
        p, t = q, t_new
        if k + 1 >= 10 and arc(p, start) < 0.5 * cfg.step and t @ t0 > 0.9:
            closed = True
            # p duplicates the start to within step/2; the closing segment replaces it
            break
        pts.append(p)
    if not closed:
        logger.warning("fibre did not close within length %.1f", cfg.max_length)
    return FiberCurve(np.array(pts), closed, 0, worst, cfg.step)


def distance_to_curve(points, curve: FiberCurve) -> np.ndarray:
    """Geodesic distance from each point to the nearest curve vertex."""
    pts = np.atleast_2d(points)
    g = np.clip(pts @ curve.points.T, -1.0, 1.0)
    return np.arccos(g.max(axis=1))


def hausdorff(a: FiberCurve, b: FiberCurve) -> float:
    return float(max(distance_to_curve(a.points, b).max(), distance_to_curve(b.points, a).max()))


def trace_fiber(m: MapDescriptor, y, seeds: int = 64, step: float = DEFAULT_STEP, *,
                seed: int = 0, tol: float = DEFAULT_TOL, max_length: float = 80.0) -> list[FiberCurve]:
    """All components of f^{-1}(y) reachable from ``seeds`` random starts."""
    _check_map(m)
    if not 1e-4 <= step <= 1e-1:
        raise ValueError("step must lie in [1e-4, 1e-1]")
    y = np.asarray(y, dtype=float)
    if m.codomain.residual(y) > 1e-9:
        raise ValueError("target value is not on the codomain sphere")
    cfg = TraceConfig(seeds=seeds, step=step, tol=tol, seed=seed, max_length=max_length)
    rng = np.random.default_rng(seed)
    starts = m.domain.sample(seeds, rng)
    pts, res = _solve(m, starts, y, cfg.fd_step)
    good = pts[res < 1e-11]
    if len(good) == 0:
        raise NoPreimage(f"no start converged onto f^-1(y); best residual {res.min():.3e}")
    curves: list[FiberCurve] = []
    for p in good:
        if any(distance_to_curve(p, c)[0] < 2 * step for c in curves):
            continue
        curves.append(_trace_component(m, p, y, cfg))
    merged: list[FiberCurve] = []
    for c in curves:
        if not any(hausdorff(c, other) < step for other in merged):
            merged.append(c)
    return merged


# ---------------------------------------------------------------------------
# orientation
# ---------------------------------------------------------------------------

def _orientation_at(m, p, direction, h=1e-6) -> float:
    """+1 if ``direction`` is the positive tangent of the fibre through p."""
    d, dom, cod, fx = jacobians(m, p[None], h)
    d, dom, cod, fx = d[0], dom[0], cod[0], fx[0]
    u, s, vt = np.linalg.svd(d)
    if s[1] < RANK_FLOOR:
        raise RankDeficient("df has rank < 2 where the fibre is oriented")
    h1, h2, t = vt[0] @ dom, vt[1] @ dom, vt[2] @ dom
    # orient the transverse disk so f restricted to it preserves orientation on S^2
    img = d @ vt[:2].T  # columns: pushforwards of h1, h2 in codomain frame coordinates
    c1, c2 = img[:, 0] @ cod, img[:, 1] @ cod
    if np.linalg.det(np.stack([fx, c1, c2])) < 0:
        h1, h2 = h2, h1
    # then (h1, h2, t) must be positive on S^3 (outward normal first)
    if np.linalg.det(np.stack([p, h1, h2, t])) < 0:
        t = -t
    return 1.0 if t @ direction > 0 else -1.0


def orient_fiber(m: MapDescriptor, curve: FiberCurve, probes: int = 8) -> FiberCurve:
    """Set ``orientation`` so that the transverse disk, followed by the fibre, is
    positively oriented in S^3 when the disk maps orientation-preservingly."""
    _check_map(m)
    if curve.residual > max(curve.step, DEFAULT_TOL):
        raise ValueError("curve is not on a fibre")
    pts = curve.points
    n = len(pts)
    idx = np.unique(np.linspace(0, n - 1, min(probes, n), dtype=int))
    votes = []
    for i in idx:
        j = (i + 1) % n if curve.closed else min(i + 1, n - 1)
        k = (i - 1) % n if curve.closed else max(i - 1, 0)
        direction = pts[j] - pts[k]
        votes.append(_orientation_at(m, pts[i], direction))
    total = sum(votes)
    if abs(total) != len(votes):
        logger.warning("orientation probes disagree (%s)", votes)
    return replace(curve, orientation=1 if total > 0 else -1)


# ---------------------------------------------------------------------------
# geometry of fibres
# ---------------------------------------------------------------------------

def fit_great_circle(points) -> GreatCircleFit:
    """Best 2-plane through the origin (top two right singular vectors).

    ``max_residual`` is the largest distance from a point to that plane,
    i.e. sin of its geodesic distance to the plane's unit circle.
    """
    pts = np.asarray(points, dtype=float)
    if len(pts) < 8:
        raise ValueError("need at least 8 points")
    _, s, vt = np.linalg.svd(pts, full_matrices=False)
    plane = vt[:2]
    proj = pts @ plane.T
    off = pts - proj @ plane
    res = float(np.linalg.norm(off, axis=1).max())
    if s[1] <= 1e-12 * max(s[0], 1.0) or (s[1] - s[2] < 1e-12 and res > 1e-6):
        raise DegenerateCloud("points do not determine a 2-plane")
    return GreatCircleFit(plane, res)


def _golden(f, lo, hi, iters=60):
    g = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo.copy(), hi.copy()
    c = b - g * (b - a)
    d = a + g * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        left = fc < fd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        d_new = np.where(left, c, a + g * (b - a))
        c_new = np.where(left, b - g * (b - a), d)
        fd_new = np.where(left, fc, np.nan)
        fc_new = np.where(left, np.nan, fd)
        need_c = left
        need_d = ~left
        c, d = c_new, d_new
        fc = np.where(need_c, f(c), fc_new)
        fd = np.where(need_d, f(d), fd_new)
    x = 0.5 * (a + b)
    return x, f(x)


def polyline_distance(points, curve: FiberCurve) -> np.ndarray:
    """Distance from each point to the closed polyline, each chord pushed onto S^3."""
    pts = np.atleast_2d(points)
    verts = curve.points
    n = len(verts)
    g = np.clip(pts @ verts.T, -1.0, 1.0)
    j = np.argmax(g, axis=1)
    prev = verts[(j - 1) % n]
    here = verts[j]
    nxt = verts[(j + 1) % n]

    def dist(s):
        # s in [-1, 1]: negative walks towards prev, positive towards next
        q = np.where((s < 0)[:, None], here + (-s)[:, None] * (prev - here), here + s[:, None] * (nxt - here))
        q = q / np.linalg.norm(q, axis=1, keepdims=True)
        return arc(pts, q)

    lo = -np.ones(len(pts))
    hi = np.ones(len(pts))
    if not curve.closed:
        lo = np.where(j == 0, 0.0, lo)
        hi = np.where(j == n - 1, 0.0, hi)
    _, best = _golden(dist, lo, hi)
    return np.minimum(best, arc(pts, here))


def fiber_distance_stats(k1: FiberCurve, k2: FiberCurve) -> FiberDistance:
    """min and max over K1 vertices of the distance to K2."""
    d = polyline_distance(k1.points, k2)
    return FiberDistance(float(d.min()), float(d.max()))


# ---------------------------------------------------------------------------
# CSV import / export
# ---------------------------------------------------------------------------

def write_fiber_csv(curve: FiberCurve, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(f"# closed={int(curve.closed)} orientation={curve.orientation} "
                 f"residual={curve.residual!r} step={curve.step!r}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["index", "x0", "x1", "x2", "x3"])
        for i, p in enumerate(curve.points):
            w.writerow([i] + [repr(float(c)) for c in p])


def read_fiber_csv(path) -> FiberCurve:
    meta: dict[str, str] = {}
    rows = []
    with open(path, newline="") as fh:
        for line in fh:
            if line.startswith("#"):
                for item in line[1:].split():
                    k, v = item.split("=", 1)
                    meta[k] = v
                continue
            rows.append(line)
    reader = csv.DictReader(rows)
    data = sorted(((int(r["index"]), [float(r[f"x{i}"]) for i in range(4)]) for r in reader))
    pts = np.array([p for _, p in data])
    return FiberCurve(
        pts,
        closed=bool(int(meta.get("closed", "1"))),
        orientation=int(meta.get("orientation", "0")),
        residual=float(meta.get("residual", "0.0")),
        step=float(meta.get("step", repr(DEFAULT_STEP))),
    )

