"""Linking numbers of closed curves in S^3 and the Hopf invariant of maps S^3 -> S^2."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .fibers import (
    DEFAULT_STEP,
    FiberCurve,
    NoPreimage,
    RankDeficient,
    orient_fiber,
    trace_fiber,
)
from .maps import MapDescriptor

logger = logging.getLogger(__name__)

BLOCK = 256
NEAR_FACTOR = 5.0
SUBDIVISIONS = 8
POLE_CANDIDATES = 100
POLE_CLEARANCE = 0.2
ACCEPT_GAP = 0.1
MAX_REFINEMENTS = 3
MAX_JITTERS = 50


class LinkingError(RuntimeError):
    pass


class CurvesTooClose(LinkingError):
    pass


class PoleSearchFailed(LinkingError):
    pass


class OracleDisagreement(LinkingError):
    pass


class NoGenericProjection(LinkingError):
    pass


@dataclass(frozen=True)
class LinkingResult:
    raw: float
    rounded: int
    gap: float

    @classmethod
    def from_raw(cls, raw: float) -> LinkingResult:
        r = int(round(raw))
        return cls(float(raw), r, abs(float(raw) - r))


# ---------------------------------------------------------------------------
# projection to R^3
# ---------------------------------------------------------------------------

def pole_rotation(pole) -> np.ndarray:
    """An element of SO(4) taking ``pole`` to e4."""
    pole = np.asarray(pole, dtype=float)
    e4 = np.array([0.0, 0.0, 0.0, 1.0])
    v = pole - e4
    if np.linalg.norm(v) < 1e-12:
        return np.eye(4)
    house = np.eye(4) - 2.0 * np.outer(v, v) / (v @ v)
    return np.diag([-1.0, 1.0, 1.0, 1.0]) @ house


def stereographic(points, pole) -> np.ndarray:
    """Orientation-preserving projection S^3 minus {pole} -> R^3."""
    q = np.asarray(points) @ pole_rotation(pole).T
    return q[:, :3] / (1.0 - q[:, 3:4])


def choose_pole(curves, seed: int = 0, candidates: int = POLE_CANDIDATES) -> np.ndarray:
    pts = np.concatenate([c.points for c in curves])
    cand = np.random.default_rng(seed).standard_normal((candidates, 4))
    cand /= np.linalg.norm(cand, axis=1, keepdims=True)
    clearance = np.arccos(np.clip((cand @ pts.T).max(axis=1), -1.0, 1.0))
    best = int(np.argmax(clearance))
    if clearance[best] <= POLE_CLEARANCE:
        raise PoleSearchFailed(f"best pole clearance {clearance[best]:.3f}")
    return cand[best]


def _closed_check(*curves: FiberCurve):
    for c in curves:
        if not c.closed:
            raise ValueError("linking needs closed curves")
        if c.orientation == 0:
            raise ValueError("linking needs oriented curves")


def _separation(k1: FiberCurve, k2: FiberCurve) -> float:
    g = np.clip(k1.points @ k2.points.T, -1.0, 1.0)
    return float(np.arccos(g.max()))


def _check_apart(k1: FiberCurve, k2: FiberCurve):
    step = max(k1.step, k2.step)
    sep = _separation(k1, k2)
    if sep <= 10 * step:
        raise CurvesTooClose(f"curves are {sep:.2e} apart, need > {10 * step:.2e}")


# ---------------------------------------------------------------------------
# Gauss integral
# ---------------------------------------------------------------------------

def _segments(poly: np.ndarray):
    nxt = np.roll(poly, -1, axis=0)
    return poly, nxt - poly


def _kernel_sum(m1, d1, m2, d2) -> float:
    diff = m1[:, None, :] - m2[None, :, :]
    dist = np.linalg.norm(diff, axis=2)
    cross = np.cross(d1[:, None, :], d2[None, :, :])
    return float(np.sum(np.einsum("ijk,ijk->ij", diff, cross) / dist**3))


def _sub(start, vec, k):
    """Split each segment into k pieces; returns midpoints and vectors."""
    s = (np.arange(k) + 0.5) / k
    mids = start[:, None, :] + s[None, :, None] * vec[:, None, :]
    return mids.reshape(-1, 3), np.repeat(vec / k, k, axis=0)


def gauss_integral(poly1: np.ndarray, poly2: np.ndarray) -> float:
    """(1/4pi) times the midpoint-rule Gauss double sum over two closed polygons in R^3.

    Segment pairs closer than NEAR_FACTOR times their length are re-evaluated
    with each segment split into SUBDIVISIONS pieces.  Blocks have a fixed
    size and are reduced in a fixed order, so the value is reproducible.
    """
    s1, d1 = _segments(poly1)
    s2, d2 = _segments(poly2)
    mid1, mid2 = s1 + 0.5 * d1, s2 + 0.5 * d2
    len1, len2 = np.linalg.norm(d1, axis=1), np.linalg.norm(d2, axis=1)
    partial = []
    for a in range(0, len(s1), BLOCK):
        sl = slice(a, a + BLOCK)
        diff = mid1[sl, None, :] - mid2[None, :, :]
        dist = np.linalg.norm(diff, axis=2)
        cross = np.cross(d1[sl, None, :], d2[None, :, :])
        term = np.einsum("ijk,ijk->ij", diff, cross) / dist**3
        near = dist < NEAR_FACTOR * np.maximum(len1[sl, None], len2[None, :])
        if near.any():
            for i, j in zip(*np.nonzero(near)):
                i0 = a + i
                pm1, pd1 = _sub(s1[i0:i0 + 1], d1[i0:i0 + 1], SUBDIVISIONS)
                pm2, pd2 = _sub(s2[j:j + 1], d2[j:j + 1], SUBDIVISIONS)
                term[i, j] = _kernel_sum(pm1, pd1, pm2, pd2)
        partial.append(np.sum(term, axis=1).sum())
    return float(np.sum(partial)) / (4.0 * np.pi)


def gauss_linking(k1: FiberCurve, k2: FiberCurve, *, seed: int = 0, pole=None) -> LinkingResult:
    _closed_check(k1, k2)
    _check_apart(k1, k2)
    if pole is None:
        pole = choose_pole([k1, k2], seed)
    p1 = stereographic(k1.oriented_points(), pole)
    p2 = stereographic(k2.oriented_points(), pole)
    return LinkingResult.from_raw(gauss_integral(p1, p2))


# ---------------------------------------------------------------------------
# crossing count
# ---------------------------------------------------------------------------

class _NotGeneric(Exception):
    pass


def _frame(w):
    w = w / np.linalg.norm(w)
    a = np.cross(w, [1.0, 0.0, 0.0])
    if np.linalg.norm(a) < 0.5:
        a = np.cross(w, [0.0, 1.0, 0.0])
    a /= np.linalg.norm(a)
    return a, np.cross(w, a), w


def crossing_count(poly1: np.ndarray, poly2: np.ndarray, w) -> int:
    """Signed crossings between two closed polygons viewed from direction ``w``.

    Returns twice the linking number.  Raises _NotGeneric when the view has
    a crossing too close to a vertex or a near-tangency.
    """
    a, b, w = _frame(np.asarray(w, dtype=float))
    s1, d1 = _segments(poly1)
    s2, d2 = _segments(poly2)
    P1 = np.stack([s1 @ a, s1 @ b], axis=1)
    V1 = np.stack([d1 @ a, d1 @ b], axis=1)
    P2 = np.stack([s2 @ a, s2 @ b], axis=1)
    V2 = np.stack([d2 @ a, d2 @ b], axis=1)
    total = 0
    eps = 1e-9
    for start in range(0, len(s1), BLOCK):
        sl = slice(start, start + BLOCK)
        p, v = P1[sl, None, :], V1[sl, None, :]
        q, u = P2[None, :, :], V2[None, :, :]
        den = v[..., 0] * u[..., 1] - v[..., 1] * u[..., 0]
        r = q - p
        with np.errstate(divide="ignore", invalid="ignore"):
            s = (r[..., 0] * u[..., 1] - r[..., 1] * u[..., 0]) / den
            t = (r[..., 0] * v[..., 1] - r[..., 1] * v[..., 0]) / den
        scale = np.linalg.norm(v, axis=2) * np.linalg.norm(u, axis=2)
        hit = (s >= -eps) & (s <= 1 + eps) & (t >= -eps) & (t <= 1 + eps)
        if not hit.any():
            continue
        i, j = np.nonzero(hit)
        si, tj = s[i, j], t[i, j]
        if (np.abs(den[i, j]) < 1e-6 * scale[i, j]).any():
            raise _NotGeneric("near-tangent crossing")
        margin = np.minimum.reduce([np.abs(si), np.abs(1 - si), np.abs(tj), np.abs(1 - tj)])
        if (margin < 1e-6).any():
            raise _NotGeneric("crossing at a vertex")
        ii = i + start
        x1 = s1[ii] + si[:, None] * d1[ii]
        x2 = s2[j] + tj[:, None] * d2[j]
        h1, h2 = x1 @ w, x2 @ w
        if (np.abs(h1 - h2) < 1e-9).any():
            raise _NotGeneric("curves meet in the projection direction")
        over_is_1 = h1 > h2
        t_over = np.where(over_is_1[:, None], d1[ii], d2[j])
        t_under = np.where(over_is_1[:, None], d2[j], d1[ii])
        sign = np.sign(np.cross(t_over, t_under) @ w)
        total += int(np.sum(sign))
    return total


def crossing_linking(k1: FiberCurve, k2: FiberCurve, *, seed: int = 0, pole=None) -> int:
    _closed_check(k1, k2)
    _check_apart(k1, k2)
    if pole is None:
        pole = choose_pole([k1, k2], seed)
    p1 = stereographic(k1.oriented_points(), pole)
    p2 = stereographic(k2.oriented_points(), pole)
    rng = np.random.default_rng(seed + 1)
    for _ in range(MAX_JITTERS):
        w = rng.standard_normal(3)
        try:
            twice = crossing_count(p1, p2, w)
        except _NotGeneric as exc:
            logger.debug("projection rejected: %s", exc)
            continue
        if twice % 2:
            raise LinkingError("odd crossing count between closed curves")
        return twice // 2
    raise NoGenericProjection(f"no generic projection after {MAX_JITTERS} directions")


# ---------------------------------------------------------------------------
# Hopf invariant
# ---------------------------------------------------------------------------

def base_point(polar: float, azimuth: float, radius: float = 0.5) -> np.ndarray:
    return radius * np.array([np.sin(polar) * np.cos(azimuth), np.sin(polar) * np.sin(azimuth), np.cos(polar)])


DEFAULT_VALUES = (base_point(1.0, 0.3), base_point(2.0, 2.0))


@dataclass
class HopfInvariantResult:
    value: int
    raw: float
    gap: float
    crossing: int
    y: np.ndarray
    y_other: np.ndarray
    step: float
    fibers: list = field(default_factory=list)
    fibers_other: list = field(default_factory=list)
    pairs: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "invariant": self.value,
            "gauss_raw": self.raw,
            "gauss_gap": self.gap,
            "crossing": self.crossing,
            "y": [float(c) for c in self.y],
            "y_other": [float(c) for c in self.y_other],
            "step": self.step,
            "components": [len(self.fibers), len(self.fibers_other)],
            "pairs": self.pairs,
        }


def _jitter(y, rng, radius=1e-3):
    v = rng.standard_normal(3)
    v -= (v @ y) / (y @ y) * y
    v *= radius * np.linalg.norm(y) / np.linalg.norm(v)
    z = y + v
    return z * np.linalg.norm(y) / np.linalg.norm(z)


def _fibers(m, y, step, seed, rng, tries=5):
    for _ in range(tries):
        try:
            curves = trace_fiber(m, y, step=step, seed=seed)
            return y, [orient_fiber(m, c) for c in curves]
        except NoPreimage:
            return y, []
        except RankDeficient as exc:
            logger.info("value %s not regular (%s); jittering", y, exc)
            y = _jitter(y, rng)
    raise RankDeficient("no regular value found near the requested point")


def compute_hopf_invariant(m: MapDescriptor, y=None, y_other=None, *, step: float = DEFAULT_STEP,
                           seed: int = 0) -> HopfInvariantResult:
    """Total linking number of the oriented preimages of two regular values."""
    y = np.asarray(DEFAULT_VALUES[0] if y is None else y, dtype=float)
    y_other = np.asarray(DEFAULT_VALUES[1] if y_other is None else y_other, dtype=float)
    rng = np.random.default_rng(seed + 7)
    for _ in range(MAX_REFINEMENTS + 1):
        y1, ks = _fibers(m, y, step, seed, rng)
        y2, ks2 = _fibers(m, y_other, step, seed + 1, rng)
        raw, crossing, pairs = 0.0, 0, []
        for a, k in enumerate(ks):
            for b, k2 in enumerate(ks2):
                pole = choose_pole([k, k2], seed)
                g = gauss_linking(k, k2, pole=pole)
                c = crossing_linking(k, k2, seed=seed, pole=pole)
                pairs.append({"pair": [a, b], "gauss_raw": g.raw, "crossing": c})
                raw += g.raw
                crossing += c
        result = LinkingResult.from_raw(raw)
        if result.gap < ACCEPT_GAP:
            if result.rounded != crossing:
                raise OracleDisagreement(f"Gauss integral gives {raw:.4f}, crossings give {crossing}")
            return HopfInvariantResult(result.rounded, raw, result.gap, crossing, y1, y2, step, ks, ks2, pairs)
        logger.info("gap %.3f at step %.1e; refining", result.gap, step)
        step /= 2
    raise LinkingError(f"Gauss integral did not settle (gap {result.gap:.3f})")


def hopf_invariant(m: MapDescriptor, y=None, y_other=None, *, step: float = DEFAULT_STEP,
                   seed: int = 0) -> int:
    return compute_hopf_invariant(m, y, y_other, step=step, seed=seed).value
