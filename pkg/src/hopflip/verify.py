"""Composite numerical checks on the extremal maps and their competitors.

Every verifier is a pure function of its descriptor, seed and tolerances,
and returns a :class:`VerificationReport`.  Reports with several sub-checks
carry one sub-report per check; the parent residual is the worst ratio of
sub-residual to sub-tolerance, so the parent tolerance is 1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    HODGE_BASIS,
    OrthogonalComplexStructure,
    ocs_conjugator,
    qconj,
    qmul,
    random_ocs,
    random_rotation,
    wedge,
)
from .fibers import fiber_distance_stats, fit_great_circle, polyline_distance, trace_fiber
from .lipschitz import curve_length, spectral_estimate
from .manifolds import Diagonal, Product, Sphere, arc, tangent_frames
from .maps import (
    BumpPerturb,
    DiagonalInclusion,
    HopfComplex,
    Identity,
    IsometryConjugate,
    MapDescriptor,
    StiefelQuat,
    Suspension,
    jacobians,
)

# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


@dataclass
class VerificationReport:
    check: str
    passed: bool
    residual: float
    tolerance: float
    params: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)
    details: list = field(default_factory=list)
    inconclusive: bool = False

    @property
    def status(self) -> str:
        if self.passed:
            return "pass"
        return "inconclusive" if self.inconclusive else "fail"

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "status": self.status,
            "passed": self.passed,
            "residual": jsonable(self.residual),
            "tolerance": self.tolerance,
            "params": jsonable(self.params),
            "provenance": jsonable(self.provenance),
            "details": [d.to_dict() for d in self.details],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if np.isfinite(v) else repr(v)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def report(check, residual, tolerance, params=None, provenance=None, inconclusive=False) -> VerificationReport:
    residual = float(residual)
    passed = bool(np.isfinite(residual) and residual < tolerance)
    return VerificationReport(check, passed, residual, tolerance, params or {}, provenance or {},
                              [], inconclusive and not passed)


def combine(check, subs, params=None, provenance=None) -> VerificationReport:
    worst = max(s.residual / s.tolerance if np.isfinite(s.residual) else np.inf for s in subs)
    rep = VerificationReport(check, all(s.passed for s in subs), float(worst), 1.0,
                             params or {}, provenance or {}, list(subs),
                             any(s.inconclusive for s in subs) and not all(s.passed for s in subs))
    return rep


def _prov(m: MapDescriptor | None, seed) -> dict:
    out = {"seed": seed}
    if m is not None:
        out["map"] = m.to_dict()
    return out


# ---------------------------------------------------------------------------
# fibre geometry of maps S^3 -> S^2
# ---------------------------------------------------------------------------

def random_values(count: int, seed: int, radius: float = 0.5) -> np.ndarray:
    x = np.random.default_rng(seed).standard_normal((count, 3))
    return radius * x / np.linalg.norm(x, axis=1, keepdims=True)


def verify_great_circle_fibers(m: MapDescriptor, values=None, tol: float = 1e-6, *, count: int = 20,
                               seed: int = 0, step: float = 5e-3) -> VerificationReport:
    if values is None:
        values = random_values(count, seed, m.codomain.radius)
    worst, per = 0.0, []
    for y in np.atleast_2d(values):
        for c in trace_fiber(m, y, step=step, seed=seed):
            r = fit_great_circle(c.points).max_residual
            per.append(r)
            worst = max(worst, r)
    return report("great-circles", worst, tol, {"values": np.atleast_2d(values), "residuals": per,
                                                 "step": step}, _prov(m, seed))


def _main_fiber(m, y, seed, step):
    curves = trace_fiber(m, y, step=step, seed=seed)
    return max(curves, key=len)


def verify_parallel_fibers(m: MapDescriptor, value_pairs=None, tol: float = 1e-6, *, count: int = 10,
                           seed: int = 0, step: float = 5e-3) -> VerificationReport:
    """Fibres over y and y' should sit at constant distance d(y, y') from each other."""
    if value_pairs is None:
        ys = random_values(2 * count, seed, m.codomain.radius)
        value_pairs = list(zip(ys[0::2], ys[1::2]))
    worst, rows = 0.0, []
    for y, y2 in value_pairs:
        k1 = _main_fiber(m, y, seed, step)
        k2 = _main_fiber(m, y2, seed + 1, step)
        stats = fiber_distance_stats(k1, k2)
        base = float(m.codomain.distance(np.asarray(y), np.asarray(y2)))
        err = max(stats.spread, abs(stats.min - base), abs(stats.max - base))
        rows.append({"min": stats.min, "max": stats.max, "base_distance": base})
        worst = max(worst, err)
    return report("parallel", worst, tol, {"pairs": rows, "step": step}, _prov(m, seed))


def _rotate_toward(y, angle, seed):
    y = np.asarray(y, dtype=float)
    r = np.linalg.norm(y)
    u = y / r
    w = np.random.default_rng(seed).standard_normal(3)
    w -= (w @ u) * u
    w /= np.linalg.norm(w)
    return r * (np.cos(angle) * u + np.sin(angle) * w)


def verify_torus(m: MapDescriptor, y=None, alpha: float = 0.6, tol: float = 1e-6, *, seed: int = 0,
                 step: float = 5e-3) -> VerificationReport:
    """K over y, K' over -y, K'' over a point at distance alpha from y: K'' lies on the torus
    of points at distance alpha from K and pi/2 - alpha from K'."""
    r = m.codomain.radius
    if not 0 < alpha < np.pi * r:
        raise ValueError("alpha must lie strictly between 0 and the diameter of the base")
    y = random_values(1, seed, r)[0] if y is None else np.asarray(y, dtype=float)
    y3 = _rotate_toward(y, alpha / r, seed + 1)
    k = _main_fiber(m, y, seed, step)
    k_anti = _main_fiber(m, -y, seed + 1, step)
    k3 = _main_fiber(m, y3, seed + 2, step)
    far = float(m.codomain.distance(y, -y))
    d1 = polyline_distance(k3.points, k)
    d2 = polyline_distance(k3.points, k_anti)
    res = max(np.abs(d1 - alpha).max(), np.abs(d2 - (far - alpha)).max())
    return report("torus", res, tol, {"y": y, "alpha": alpha, "antipodal_distance": far, "step": step},
                  _prov(m, seed))


# ---------------------------------------------------------------------------
# Key Lemma search
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KeyLemmaResult:
    u: np.ndarray
    v: np.ndarray
    residual: float
    starts: int


def _ambient_jac(f, x):
    d, dom, cod, fx = jacobians(f, x, h=1e-6, richardson=False)
    return np.einsum("blm,blk->bmk", cod, d), dom, fx


def _key_parts(f1, f2, u, v):
    a1u, du, f1u = _ambient_jac(f1, u)
    a1v, dv, f1v = _ambient_jac(f1, v)
    a2u, _, f2u = _ambient_jac(f2, u)
    a2v, _, f2v = _ambient_jac(f2, v)
    res = np.concatenate([f1u + f1v, f2u + f2v], axis=1)
    jac = np.concatenate([np.concatenate([a1u, a1v], axis=2), np.concatenate([a2u, a2v], axis=2)], axis=1)
    return res, jac, du, dv


def _key_value(f1, f2, u, v):
    return np.sum((f1._eval(u) + f1._eval(v)) ** 2, axis=1) + np.sum((f2._eval(u) + f2._eval(v)) ** 2, axis=1)


def key_lemma_search(f1: MapDescriptor, f2: MapDescriptor, starts: int = 200, seed: int = 0, *,
                     descent_steps: int = 100, polish: int = 5, polish_steps: int = 30) -> KeyLemmaResult:
    """Minimise |f1(u) + f1(v)|^2 + |f2(u) + f2(v)|^2 over pairs (u, v) of points of S^n.

    Projected gradient descent from ``starts`` seeded pairs, then Gauss-Newton
    on the best few.
    """
    sphere = f1.domain
    if f2.domain != sphere or f1.codomain != sphere or f2.codomain != sphere:
        raise ValueError("both maps must go from one sphere S^n to itself")
    rng = np.random.default_rng(seed)
    u = sphere.sample(starts, rng)
    v = sphere.sample(starts, rng)
    k = sphere.n
    eta = np.full(starts, 0.1)
    val = _key_value(f1, f2, u, v)
    for _ in range(descent_steps):
        res, jac, du, dv = _key_parts(f1, f2, u, v)
        grad = np.einsum("bmk,bm->bk", jac, res)
        nu = sphere.retract(u - eta[:, None] * np.einsum("bk,bkn->bn", grad[:, :k], du))
        nv = sphere.retract(v - eta[:, None] * np.einsum("bk,bkn->bn", grad[:, k:], dv))
        nval = _key_value(f1, f2, nu, nv)
        ok = nval < val
        u[ok], v[ok], val[ok] = nu[ok], nv[ok], nval[ok]
        eta = np.where(ok, np.minimum(eta * 1.5, 0.5), eta * 0.5)
    best = np.argsort(val, kind="stable")[:polish]
    u, v, val = u[best], v[best], val[best]
    for _ in range(polish_steps):
        res, jac, du, dv = _key_parts(f1, f2, u, v)
        step = -np.linalg.lstsq(jac[0], res[0], rcond=None)[0][None] if len(u) == 1 else np.stack(
            [-np.linalg.lstsq(jac[i], res[i], rcond=None)[0] for i in range(len(u))])
        t = np.ones(len(u))
        for _ in range(20):
            nu = sphere.retract(u + t[:, None] * np.einsum("bk,bkn->bn", step[:, :k], du))
            nv = sphere.retract(v + t[:, None] * np.einsum("bk,bkn->bn", step[:, k:], dv))
            nval = _key_value(f1, f2, nu, nv)
            ok = nval < val
            u[ok], v[ok], val[ok] = nu[ok], nv[ok], nval[ok]
            t = np.where(ok, 0.0, t * 0.5)
            if not (t > 0).any():
                break
    j = int(np.argmin(val))
    return KeyLemmaResult(u[j], v[j], float(val[j]), starts)


def _random_homotopic_to_identity(rng, n):
    """A self-map of S^n homotopic to the identity, drawn from the family algebra."""
    kind = int(rng.integers(3))
    sphere = Sphere(n)
    if kind == 0:
        return IsometryConjugate(Identity(sphere), None, random_rotation(n + 1, rng))
    plane = tuple(int(i) for i in rng.choice(n + 1, 2, replace=False))
    bump = BumpPerturb(Identity(sphere), rng.standard_normal(n + 1), float(rng.uniform(0.2, 0.6)),
                       float(rng.uniform(0.5, 1.5)), plane)
    if kind == 1:
        return bump
    return IsometryConjugate(bump, None, random_rotation(n + 1, rng))


def key_lemma_cases(seed: int = 0, count: int = 20, n: int = 2) -> list[tuple[MapDescriptor, MapDescriptor]]:
    rng = np.random.default_rng(seed)
    cases = []
    for i in range(count):
        f1 = _random_homotopic_to_identity(rng, n)
        f2 = profile_sphere_map(build_profile(), n) if i % 5 == 4 else _random_homotopic_to_identity(rng, n)
        cases.append((f1, f2))
    return cases


def verify_key_lemma(seed: int = 0, count: int = 20, tol: float = 1e-6, starts: int = 200,
                     n: int = 2) -> VerificationReport:
    subs = []
    for i, (f1, f2) in enumerate(key_lemma_cases(seed, count, n)):
        r = key_lemma_search(f1, f2, starts, seed + i)
        sub = report(f"case-{i}", r.residual, tol, {"u": r.u, "v": r.v, "f1": f1.to_dict(), "f2": f2.to_dict()},
                     inconclusive=True)
        subs.append(sub)
    return combine("key-lemma", subs, {"count": count, "starts": starts, "n": n}, _prov(None, seed))


# ---------------------------------------------------------------------------
# reflection-symmetric profile and the induced sphere map
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Profile:
    """Piecewise-linear increasing bijection of [0, 1] given by breakpoints and values."""

    breakpoints: tuple
    values: tuple

    def __post_init__(self):
        xs, ys = np.asarray(self.breakpoints, float), np.asarray(self.values, float)
        if xs.shape != ys.shape or len(xs) < 2:
            raise ValueError("breakpoints and values must match and have length >= 2")
        if xs[0] != 0 or xs[-1] != 1 or ys[0] != 0 or ys[-1] != 1:
            raise ValueError("profile must fix 0 and 1")
        if (np.diff(xs) <= 0).any() or (np.diff(ys) <= 0).any():
            raise ValueError("profile must be strictly increasing")

    def __call__(self, x):
        return np.interp(x, self.breakpoints, self.values)

    def slopes(self) -> np.ndarray:
        return np.diff(self.values) / np.diff(self.breakpoints)

    def symmetry_residual(self, grid: int = 10_001) -> float:
        """max |f(1 - f(x)) - (1 - x)|: the graph is invariant under (x, y) -> (1 - y, 1 - x)."""
        x = np.linspace(0.0, 1.0, grid)
        return float(np.abs(self(1.0 - self(x)) - (1.0 - x)).max())

    def to_dict(self) -> dict:
        return {"breakpoints": list(self.breakpoints), "values": list(self.values)}


def build_profile() -> Profile:
    """f(x) = 2x on [0, 1/3] and (1 + x)/2 on [1/3, 1]."""
    return Profile((0.0, 1.0 / 3.0, 1.0), (0.0, 2.0 / 3.0, 1.0))


class ProfileSphereMap(MapDescriptor):
    """(w sin t, cos t) -> (w sin(pi p(t/pi)), cos(pi p(t/pi))); the last coordinate is the pole axis."""

    family = "profile"

    def __init__(self, profile: Profile, n: int = 2):
        self.profile = profile
        self.n = int(n)
        self.domain = self.codomain = Sphere(self.n)

    def _eval(self, x):
        x = np.asarray(x, dtype=float)
        head, c = x[..., :-1], np.clip(x[..., -1], -1.0, 1.0)
        s = np.linalg.norm(head, axis=-1)
        theta = np.arctan2(s, c)
        phi = np.pi * self.profile(theta / np.pi)
        w = head / np.where(s > 0, s, 1.0)[..., None]
        return np.concatenate([w * np.sin(phi)[..., None], np.cos(phi)[..., None]], axis=-1)

    def params(self):
        return {"n": self.n, **self.profile.to_dict()}

    @classmethod
    def from_dict(cls, data: dict) -> ProfileSphereMap:
        return cls(Profile(tuple(data["breakpoints"]), tuple(data["values"])), data.get("n", 2))


def profile_sphere_map(p: Profile, n: int = 2) -> ProfileSphereMap:
    return ProfileSphereMap(p, n)


def fixed_points(m: MapDescriptor, samples: int = 2000, seed: int = 0, keep: int = 20,
                 iters: int = 200, tol: float = 1e-9) -> np.ndarray:
    """Solutions of m(x) = x found by dense sampling followed by coordinate descent."""
    sphere = m.domain
    xs = sphere.sample(samples, np.random.default_rng(seed))
    disp = np.linalg.norm(m._eval(xs) - xs, axis=1)
    found = []
    for i in np.argsort(disp, kind="stable")[:keep]:
        x, d, step = xs[i], disp[i], 0.1
        for _ in range(iters):
            frame = tangent_frames(sphere, x[None])[0]
            trial = sphere.retract(np.concatenate([x + step * frame, x - step * frame]))
            td = np.linalg.norm(m._eval(trial) - trial, axis=1)
            j = int(np.argmin(td))
            if td[j] < d:
                x, d = trial[j], td[j]
            else:
                step *= 0.5
        if d < tol and not any(np.linalg.norm(x - f) < 1e-6 for f in found):
            found.append(x)
    return np.array(found).reshape(-1, sphere.ambient_dim)


def verify_lemma_f(n: int = 2, grid: int = 10_001, samples: int = 1000, seed: int = 0,
                   cap: float = 0.1, margin: float = 0.05) -> VerificationReport:
    p = build_profile()
    F = profile_sphere_map(p, n)
    subs = [report("symmetry", p.symmetry_residual(grid), 1e-12, {"grid": grid})]
    sl = p.slopes()
    subs.append(report("end-slopes", max(abs(sl[0] - 2.0), abs(sl[-1] - 0.5)), 1e-12,
                       {"slopes": sl}))
    xs = F.domain.sample(samples, np.random.default_rng(seed))
    back = -F._eval(-F._eval(xs))
    subs.append(report("involution", np.abs(back - xs).max(), 1e-10, {"samples": samples}))
    # displacement along longitudes outside the polar caps
    theta = np.linspace(cap, np.pi - cap, 20_003)[1:-1]
    pts = np.zeros((len(theta), n + 1))
    pts[:, 0], pts[:, -1] = np.sin(theta), np.cos(theta)
    least = float(arc(F._eval(pts), pts).min())
    subs.append(report("displacement-outside-caps", margin / least, 1.0,
                       {"cap": cap, "margin": margin, "min_displacement": least}))
    fps = fixed_points(F, seed=seed)
    poles = np.zeros((2, n + 1))
    poles[0, -1], poles[1, -1] = 1.0, -1.0
    off = max((float(arc(f, poles).min()) for f in fps), default=0.0)
    subs.append(report("fixed-points-at-poles", off, 1e-6, {"fixed_points": fps}))
    return combine("lemma-f", subs, {"n": n, "profile": p.to_dict()}, _prov(F, seed))


# ---------------------------------------------------------------------------
# diagonal and suspension identities
# ---------------------------------------------------------------------------

def verify_diagonal(n: int = 2, samples: int = 1000, seed: int = 0, tol: float = 1e-9) -> VerificationReport:
    m = DiagonalInclusion(n)
    rng = np.random.default_rng(seed)
    a, b = m.domain.sample(samples, rng), m.domain.sample(samples, rng)
    x, y = a[:, : n + 1], b[:, : n + 1]
    prod = Product(Sphere(n), Sphere(n)).distance(m._eval(a), m._eval(b))
    closed = np.sqrt(2.0) * np.arccos(np.clip(np.sum(x * y, axis=1), -1.0, 1.0))
    subs = [report("product-distance", np.abs(prod - closed).max(), tol, {"samples": samples})]
    far = Product(Sphere(n), Sphere(n)).distance(m._eval(a), m._eval(-a))
    subs.append(report("max-distance", np.abs(far - np.pi * np.sqrt(2.0)).max(), tol))
    return combine("diagonal", subs, {"n": n}, _prov(m, seed))


def verify_suspension(m: MapDescriptor, samples: int = 1000, seed: int = 0, tol: float = 1e-12) -> VerificationReport:
    s = Suspension(m)
    xs = m.domain.sample(samples, np.random.default_rng(seed))
    if isinstance(m.domain, Diagonal):
        k = m.domain.n + 1
        lifted = np.concatenate([xs[:, :k], np.zeros((samples, 1))], axis=1)
        lifted = np.concatenate([lifted, lifted], axis=1)
    else:
        lifted = np.concatenate([xs, np.zeros((samples, 1))], axis=1)
    out = s._eval(lifted)
    inner = m._eval(xs)
    parts, off, pieces = s._parts, 0, []
    for part in parts:
        pieces.append(out[:, off: off + part.ambient_dim])
        off += part.ambient_dim + 1
    res = np.abs(np.concatenate(pieces, axis=1) - inner).max()
    heights = np.abs(out[:, [sum(p.ambient_dim + 1 for p in parts[: i + 1]) - 1 for i in range(len(parts))]]).max()
    return report("suspension-equator", max(res, heights), tol, {"samples": samples}, _prov(m, seed))


# ---------------------------------------------------------------------------
# Hopf vector fields
# ---------------------------------------------------------------------------

def _as_matrix(J):
    return J.matrix if isinstance(J, OrthogonalComplexStructure) else np.asarray(J, dtype=float)


def theorem_c_checks(J, J_other=None, samples: int = 1000, seed: int = 0) -> VerificationReport:
    """Graph of a Hopf vector field: unit tangent, isometric to the diagonal, conjugate graphs match."""
    mat = _as_matrix(J)
    dim = mat.shape[0]
    sphere = Sphere(dim - 1)
    rng = np.random.default_rng(seed)
    x, y = sphere.sample(samples, rng), sphere.sample(samples, rng)
    jx, jy = x @ mat.T, y @ mat.T
    ip_res = max(np.abs(np.sum(x * jx, axis=1)).max(), np.abs(np.linalg.norm(jx, axis=1) - 1.0).max())
    subs = [report("a-unit-tangent", ip_res, 1e-10)]
    prod = np.hypot(arc(x, y), arc(jx, jy))
    diag = np.sqrt(2.0) * np.arccos(np.clip(np.sum(x * y, axis=1), -1.0, 1.0))
    subs.append(report("b-isometric-to-diagonal", np.abs(prod - diag).max(), 1e-9))
    try:
        J1 = J if isinstance(J, OrthogonalComplexStructure) else OrthogonalComplexStructure(dim, mat)
        J2 = J_other if J_other is not None else random_ocs(dim, seed + 1)
        g = ocs_conjugator(J1, J2)
        gx = x @ g.T
        res_c = max(np.abs(jx @ g.T - gx @ _as_matrix(J2).T).max(), np.abs(g.T @ g - np.eye(dim)).max())
    except ValueError:
        res_c = np.inf
    subs.append(report("c-conjugate-graphs", res_c, 1e-9))
    return combine("theorem-c", subs, {"dim": dim, "samples": samples, "J": mat}, _prov(None, seed))


def verify_sasaki_lengths(n: int = 3, points: int = 20_000, tol: float = 1e-6) -> VerificationReport:
    """Velocity lift of a great circle, a parallel field along it, and a spinning vector at a point."""
    t = np.linspace(0.0, 2 * np.pi, points, endpoint=False)
    e = np.eye(n + 1)
    x = np.outer(np.cos(t), e[0]) + np.outer(np.sin(t), e[1])
    vel = np.outer(-np.sin(t), e[0]) + np.outer(np.cos(t), e[1])
    par = np.tile(e[2], (points, 1))
    fixed = np.tile(e[0], (points, 1))
    spin = np.outer(np.cos(t), e[1]) + np.outer(np.sin(t), e[2])
    rows = {
        "velocity-sasaki": (curve_length(x, vel, "sasaki", closed=True), 2 * np.pi),
        "velocity-product": (curve_length(x, vel, "product", closed=True), 2 * np.pi * np.sqrt(2.0)),
        "parallel-sasaki": (curve_length(x, par, "sasaki", closed=True), 2 * np.pi),
        "spin-sasaki": (curve_length(fixed, spin, "sasaki", closed=True), 2 * np.pi),
        "spin-product": (curve_length(fixed, spin, "product", closed=True), 2 * np.pi),
    }
    subs = [report(k, abs(v - want), tol, {"length": v, "expected": want}) for k, (v, want) in rows.items()]
    return combine("sasaki-lengths", subs, {"n": n, "points": points})


# ---------------------------------------------------------------------------
# quaternionic Stiefel map
# ---------------------------------------------------------------------------

def _unit_quats(rng, count):
    q = rng.standard_normal((count, 4))
    return q / np.linalg.norm(q, axis=1, keepdims=True)


def _pure_units(rng, count):
    q = rng.standard_normal((count, 4))
    q[:, 0] = 0.0
    return q / np.linalg.norm(q, axis=1, keepdims=True)


def theorem_d_checks(seed: int = 0, samples: int = 1000, hodge=None, spectral_samples: int = 2000) -> VerificationReport:
    rng = np.random.default_rng(seed)
    p = StiefelQuat()
    x, u = _unit_quats(rng, samples), _pure_units(rng, samples)
    ux = qmul(u, x)
    img = p._eval(np.concatenate([x, ux], axis=1))
    expect = np.concatenate([u[:, 1:], qmul(qconj(x), ux)[:, 1:]], axis=1)
    subs = [report("a-identity", np.abs(img - expect).max(), 1e-12)]

    frames = Product(Sphere(3), Sphere(3)).sample(samples, rng)
    a = frames[:, :4]
    b = frames[:, 4:] - np.sum(frames[:, 4:] * a, axis=1, keepdims=True) * a
    b /= np.linalg.norm(b, axis=1, keepdims=True)
    full_l, full_r = qmul(b, qconj(a)), qmul(qconj(a), b)
    res_b = max(np.abs(full_l[:, 0]).max(), np.abs(full_r[:, 0]).max(),
                np.abs(np.linalg.norm(full_l, axis=1) - 1).max(), np.abs(np.linalg.norm(full_r, axis=1) - 1).max())
    subs.append(report("b-pure-unit-image", res_b, 1e-12))

    basis = HODGE_BASIS if hodge is None else np.asarray(hodge, dtype=float)
    split = wedge(a, b) @ basis.T
    eq = np.abs(np.linalg.norm(split[:, :3], axis=1) - np.linalg.norm(split[:, 3:], axis=1)).max()
    generic = rng.standard_normal((samples, 6))
    generic /= np.linalg.norm(generic, axis=1, keepdims=True)
    pf = generic[:, 0] * generic[:, 5] - generic[:, 1] * generic[:, 4] + generic[:, 2] * generic[:, 3]
    keep = np.abs(pf) > 1e-3
    gs = generic[keep] @ basis.T
    gap = np.abs(np.linalg.norm(gs[:, :3], axis=1) - np.linalg.norm(gs[:, 3:], axis=1))
    # a non-decomposable bivector must show unequal projections
    res_c = eq if gap.min() > 1e-6 else np.inf
    subs.append(report("c-equal-projections", res_c, 1e-12,
                       {"decomposable_gap": eq, "nondecomposable_min_gap": float(gap.min())}))

    sup = spectral_estimate(p, spectral_samples, seed)
    subs.append(report("d-spectral", abs(sup - np.sqrt(2.0)), 1e-4, {"spectral_sup": sup}))

    u0 = _pure_units(rng, 1)[0]
    x1, x2 = _unit_quats(rng, samples), _unit_quats(rng, samples)
    p1 = np.concatenate([x1, qmul(u0[None], x1)], axis=1)
    p2 = np.concatenate([x2, qmul(u0[None], x2)], axis=1)
    geo = np.sqrt(2.0) * np.arccos(np.clip(np.sum(x1 * x2, axis=1), -1.0, 1.0))
    chord = np.linalg.norm(p1 - p2, axis=1)
    prod = Product(Sphere(3), Sphere(3)).distance(p1, p2)
    res_e = max(np.abs(np.linalg.norm(p1, axis=1) - np.sqrt(2.0)).max(),
                np.abs(chord - 2 * np.sqrt(2.0) * np.sin(geo / (2 * np.sqrt(2.0)))).max(),
                np.abs(prod - geo).max())
    subs.append(report("e-round-sphere", res_e, 1e-9, {"u": u0}))
    return combine("theorem-d", subs, {"samples": samples}, _prov(p, seed))


# ---------------------------------------------------------------------------
# defaults used by the command line
# ---------------------------------------------------------------------------

CHECKS = ("great-circles", "parallel", "torus", "key-lemma", "lemma-f", "theorem-c", "theorem-d", "sasaki-lengths")


def default_map() -> MapDescriptor:
    return HopfComplex(1)
