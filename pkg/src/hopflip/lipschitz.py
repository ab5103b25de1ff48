"""Lipschitz constants, energy and curve lengths by sampling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .manifolds import arc, tangent_frames
from .maps import MapDescriptor, jacobians

LOCAL_SCALE = 1e-3
PAIR_REFINE = 50
SPECTRAL_REFINE = 20
CHUNK = 2048
# path resolution for domains whose distance is a measured path length
FINE_SEGMENTS = 512
FINAL_SEGMENTS = 4096


@dataclass(frozen=True)
class LipschitzReport:
    pair_lower: float
    spectral_sup: float
    witness: tuple
    samples: int
    seed: int

    def to_dict(self) -> dict:
        x, x2, ratio = self.witness
        return {
            "pair_lower": self.pair_lower,
            "spectral_sup": self.spectral_sup,
            "witness": {"x": [float(c) for c in x], "x_other": [float(c) for c in x2], "ratio": ratio},
            "samples": self.samples,
            "seed": self.seed,
        }


def _ratio(m: MapDescriptor, a, b, segments=None):
    a, b = np.atleast_2d(a), np.atleast_2d(b)
    num = m.codomain.distance(m._eval(a), m._eval(b))
    den = m.domain.distance_upper(a, b, segments=segments)
    return np.asarray(num, dtype=float) / np.asarray(den, dtype=float)


def _move(space, x, direction, size):
    return space.retract(x + size * direction)


def _top_directions(m, x):
    """Unit ambient tangent vectors realising the top singular value at each point."""
    out = np.empty_like(x)
    sig = np.empty(len(x))
    for a in range(0, len(x), CHUNK):
        d, dom, _, _ = jacobians(m, x[a:a + CHUNK])
        _, s, vt = np.linalg.svd(d)
        out[a:a + CHUNK] = np.einsum("bk,bkn->bn", vt[:, 0, :], dom)
        sig[a:a + CHUNK] = s[:, 0]
    return out, sig


def _ascend_pair(m, x, x2, ratio, rng, iters=PAIR_REFINE):
    """Geodesic coordinate ascent on the distance ratio, moving one endpoint per trial."""
    step = 0.25 * float(np.asarray(m.domain.distance_upper(x[None], x2[None])).ravel()[0])
    for _ in range(iters):
        improved = False
        for which in (0, 1):
            p = x if which == 0 else x2
            frame = tangent_frames(m.domain, p[None])[0]
            trial = np.concatenate([p + step * frame, p - step * frame])
            trial = m.domain.retract(trial)
            other = np.repeat((x2 if which == 0 else x)[None], len(trial), axis=0)
            r = _ratio(m, trial, other, FINE_SEGMENTS)
            r[~np.isfinite(r)] = -np.inf
            k = int(np.argmax(r))
            if r[k] > ratio:
                ratio = float(r[k])
                if which == 0:
                    x = trial[k]
                else:
                    x2 = trial[k]
                improved = True
        if not improved:
            step *= 0.5
    return x, x2, ratio


def pair_lower_bound(m: MapDescriptor, samples: int = 10_000, seed: int = 0,
                     refine: int = PAIR_REFINE) -> tuple[float, tuple]:
    """Largest sampled d(f x, f x') / d(x, x') over global and local pairs, then ascent.

    Local pairs step LOCAL_SCALE along the top singular direction of df.
    Returns (ratio, (x, x', ratio)).
    """
    if samples < 2:
        raise ValueError("need at least 2 samples")
    rng = np.random.default_rng(seed)
    xs = m.domain.sample(samples, rng)
    partner = m.domain.sample(samples, rng)
    ratios = _ratio(m, xs, partner)
    dirs, _ = _top_directions(m, xs)
    local = _move(m.domain, xs, dirs, LOCAL_SCALE)
    local_ratios = _ratio(m, xs, local)
    both = np.concatenate([ratios, local_ratios])
    both[~np.isfinite(both)] = -np.inf
    k = int(np.argmax(both))
    x = xs[k % samples]
    x2 = partner[k] if k < samples else local[k - samples]
    start = float(_ratio(m, x, x2, FINE_SEGMENTS)[0])
    x, x2, _ = _ascend_pair(m, x, x2, start, rng, refine)
    best = float(_ratio(m, x, x2, FINAL_SEGMENTS)[0])
    return best, (x, x2, best)


def spectral_estimate(m: MapDescriptor, samples: int = 10_000, seed: int = 0,
                      refine: int = SPECTRAL_REFINE) -> float:
    """Sup over samples of the top singular value of df, then local ascent."""
    rng = np.random.default_rng(seed)
    xs = m.domain.sample(samples, rng)
    _, sig = _top_directions(m, xs)
    k = int(np.argmax(sig))
    x, best = xs[k], float(sig[k])
    step = 0.1
    for _ in range(refine):
        frame = tangent_frames(m.domain, x[None])[0]
        trial = m.domain.retract(np.concatenate([x + step * frame, x - step * frame]))
        _, s = _top_directions(m, trial)
        j = int(np.argmax(s))
        if s[j] > best:
            x, best = trial[j], float(s[j])
        else:
            step *= 0.5
    return best


def lipschitz_report(m: MapDescriptor, samples: int = 10_000, seed: int = 0) -> LipschitzReport:
    lower, witness = pair_lower_bound(m, samples, seed)
    sup = spectral_estimate(m, samples, seed)
    return LipschitzReport(lower, sup, witness, samples, seed)


def energy(m: MapDescriptor, samples: int = 10_000, seed: int = 0) -> tuple[float, float]:
    """Monte Carlo estimate of 1/2 * integral of |df|^2; returns (value, standard error)."""
    if samples < 1000:
        raise ValueError("energy needs at least 1000 samples")
    rng = np.random.default_rng(seed)
    xs = m.domain.sample(samples, rng)
    dens = np.empty(samples)
    for a in range(0, samples, CHUNK):
        d = jacobians(m, xs[a:a + CHUNK])[0]
        dens[a:a + CHUNK] = 0.5 * np.sum(d**2, axis=(1, 2))
    vol = m.domain.volume()
    return float(dens.mean() * vol), float(dens.std(ddof=1) / np.sqrt(samples) * vol)


def curve_length(xs, vs, metric: str = "product", closed: bool = False) -> float:
    """Length of a discretised curve (x(t), v(t)) in the unit tangent bundle.

    ``product`` treats v as a point of the unit sphere; ``sasaki`` keeps only
    the part of the change in v tangent to the base sphere at the midpoint.
    """
    xs = np.asarray(xs, dtype=float)
    vs = np.asarray(vs, dtype=float)
    if xs.ndim != 2 or xs.shape != vs.shape or len(xs) < 2:
        raise ValueError("curve must be two equal (N, n+1) arrays with N >= 2")
    if metric not in ("product", "sasaki"):
        raise ValueError(f"unknown metric {metric!r}")
    if (np.abs(np.linalg.norm(xs, axis=1) - 1) > 1e-9).any() or (np.abs(np.linalg.norm(vs, axis=1) - 1) > 1e-9).any():
        raise ValueError("base points and vectors must be unit")
    if (np.abs(np.sum(xs * vs, axis=1)) > 1e-9).any():
        raise ValueError("vectors must be tangent to the base sphere")
    if closed:
        xs = np.concatenate([xs, xs[:1]])
        vs = np.concatenate([vs, vs[:1]])
    dx = arc(xs[:-1], xs[1:])
    if (dx >= 0.1).any():
        raise ValueError("consecutive base points must be closer than 0.1")
    dv = arc(vs[:-1], vs[1:])
    if metric == "sasaki":
        mid = xs[:-1] + xs[1:]
        mid /= np.linalg.norm(mid, axis=1, keepdims=True)
        delta = vs[1:] - vs[:-1]
        chord = np.linalg.norm(delta, axis=1)
        tangential = delta - np.sum(delta * mid, axis=1, keepdims=True) * mid
        with np.errstate(invalid="ignore", divide="ignore"):
            dv = np.where(chord > 0, np.linalg.norm(tangential, axis=1) * dv / chord, 0.0)
    return float(np.sum(np.hypot(dx, dv)))
