"""Points, metrics, samplers and tangent spaces.

Every space embeds in a Euclidean ambient space whose inner product induces
the Riemannian metric we want: spheres, products of spheres, the diagonal
of S^n x S^n, the Stiefel manifold / unit tangent bundle inside S x S,
projective spaces (through unit representatives and their horizontal
spaces) and the oriented Grassmannian G2(R^4) as unit decomposable
bivectors.  Points are handled as float arrays whose last axis is the
ambient coordinate; leading axes are batch axes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import HODGE_BASIS, qconj, qmul

__all__ = [
    "SpherePoint",
    "ProductPoint",
    "ProjectivePoint",
    "Space",
    "Sphere",
    "Product",
    "Diagonal",
    "Stiefel",
    "ProjectiveSpace",
    "Grassmann24",
    "TangentFrame",
    "FrameError",
    "arc",
    "sphere_volume",
    "sphere_distance",
    "product_distance",
    "projective_distance",
    "hermitian_inner",
    "uniform_sample",
    "ip",
    "classify_ip",
    "tangent_project",
    "tangent_frames",
    "tangent_frame",
    "space_from_dict",
    "IP_TOL",
]

IP_TOL = 1e-9


class FrameError(RuntimeError):
    pass


def arc(a, b, radius: float = 1.0):
    """Great-circle distance between points of the sphere of ``radius``.

    Uses 2 atan2(|a-b|, |a+b|), which stays accurate for nearly equal and
    nearly antipodal points alike.
    """
    a = np.asarray(a, dtype=float) / radius
    b = np.asarray(b, dtype=float) / radius
    return radius * 2.0 * np.arctan2(np.linalg.norm(a - b, axis=-1), np.linalg.norm(a + b, axis=-1))


def sphere_volume(n: int, radius: float = 1.0) -> float:
    """Volume of the round n-sphere of the given radius."""
    return 2.0 * math.pi ** ((n + 1) / 2) / math.gamma((n + 1) / 2) * radius**n


# ---------------------------------------------------------------------------
# point types
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SpherePoint:
    coords: np.ndarray
    radius: float = 1.0

    def __post_init__(self):
        c = np.array(self.coords, dtype=float).reshape(-1)
        if self.radius <= 0:
            raise ValueError("radius must be positive")
        if abs(np.linalg.norm(c) - self.radius) > 1e-12 * max(1.0, self.radius):
            raise ValueError(f"|coords| = {np.linalg.norm(c)!r} differs from radius {self.radius}")
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    @classmethod
    def normalized(cls, coords, radius: float = 1.0) -> SpherePoint:
        c = np.asarray(coords, dtype=float)
        return cls(radius * c / np.linalg.norm(c), radius)

    @property
    def dim(self) -> int:
        return self.coords.shape[0] - 1

    def __neg__(self) -> SpherePoint:
        return SpherePoint(-self.coords, self.radius)


@dataclass(frozen=True, eq=False)
class ProductPoint:
    first: SpherePoint
    second: SpherePoint

    def coords(self) -> np.ndarray:
        return np.concatenate([self.first.coords, self.second.coords])


@dataclass(frozen=True, eq=False)
class ProjectivePoint:
    """A line in F^{n+1}, F complex or quaternionic, given by a unit representative.

    Complex representatives are complex arrays of length n+1; quaternionic
    ones are real arrays of shape (n+1, 4).  Quaternionic lines are right
    lines {v q}, so two representatives agree when they differ by a unit
    quaternion multiplied on the right.
    """

    representative: np.ndarray
    field: str = "complex"

    def __post_init__(self):
        if self.field == "complex":
            r = np.array(self.representative, dtype=complex).reshape(-1)
            nrm = np.sqrt(np.sum(np.abs(r) ** 2))
        elif self.field == "quaternionic":
            r = np.array(self.representative, dtype=float).reshape(-1, 4)
            nrm = np.linalg.norm(r)
        else:
            raise ValueError(f"unknown field {self.field!r}")
        if abs(nrm - 1.0) > 1e-12:
            raise ValueError("projective representatives must have unit norm")
        r.setflags(write=False)
        object.__setattr__(self, "representative", r)

    @property
    def n(self) -> int:
        return self.representative.shape[0] - 1

    def real_coords(self) -> np.ndarray:
        if self.field == "complex":
            return np.stack([self.representative.real, self.representative.imag], axis=-1).reshape(-1)
        return self.representative.reshape(-1)

    @classmethod
    def from_real(cls, coords, field: str = "complex") -> ProjectivePoint:
        c = np.asarray(coords, dtype=float)
        c = c / np.linalg.norm(c)
        if field == "complex":
            return cls(c[0::2] + 1j * c[1::2], field)
        return cls(c.reshape(-1, 4), field)


# ---------------------------------------------------------------------------
# distances and elementary operations on point types
# ---------------------------------------------------------------------------

def sphere_distance(a: SpherePoint, b: SpherePoint) -> float:
    if a.coords.shape != b.coords.shape:
        raise ValueError("points lie on spheres of different dimension")
    if abs(a.radius - b.radius) > 1e-12:
        raise ValueError("points lie on spheres of different radius")
    return float(arc(a.coords, b.coords, a.radius))


def product_distance(p: ProductPoint, q: ProductPoint) -> float:
    d1 = sphere_distance(p.first, q.first)
    d2 = sphere_distance(p.second, q.second)
    return math.hypot(d1, d2)


def hermitian_inner(a, b, field: str = "complex"):
    """<a, b> = sum conj(a_k) b_k on real-coordinate arrays; returns complex or quaternion."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if field == "complex":
        za = a[..., 0::2] + 1j * a[..., 1::2]
        zb = b[..., 0::2] + 1j * b[..., 1::2]
        return np.sum(np.conj(za) * zb, axis=-1)
    qa = a.reshape(a.shape[:-1] + (-1, 4))
    qb = b.reshape(b.shape[:-1] + (-1, 4))
    return qmul(qconj(qa), qb).sum(axis=-2)


def _right_scale(v, s, field: str):
    """v * s with s a complex number / quaternion per batch entry."""
    v = np.asarray(v, dtype=float)
    if field == "complex":
        z = (v[..., 0::2] + 1j * v[..., 1::2]) * np.asarray(s)[..., None]
        out = np.empty(v.shape)
        out[..., 0::2] = z.real
        out[..., 1::2] = z.imag
        return out
    q = v.reshape(v.shape[:-1] + (-1, 4))
    return qmul(q, np.asarray(s)[..., None, :]).reshape(v.shape)


def _line_angle(a, b, field: str):
    """Angle between the F-lines through unit vectors a and b, in [0, pi/2]."""
    h = hermitian_inner(a, b, field)
    perp = b - _right_scale(a, h, field)
    hmod = np.abs(h) if field == "complex" else np.linalg.norm(h, axis=-1)
    return np.arctan2(np.linalg.norm(perp, axis=-1), hmod)


def projective_distance(a: ProjectivePoint, b: ProjectivePoint) -> float:
    if a.field != b.field:
        raise ValueError("points live in projective spaces over different fields")
    if a.representative.shape != b.representative.shape:
        raise ValueError("points live in projective spaces of different dimension")
    return float(_line_angle(a.real_coords(), b.real_coords(), a.field))


def uniform_sample(dim: int, count: int, seed: int, radius: float = 1.0) -> list[SpherePoint]:
    """``count`` i.i.d. uniform points on S^dim(radius) (normalised Gaussians)."""
    if count < 1:
        raise ValueError("count must be at least 1")
    pts = _gaussian_sphere(np.random.default_rng(seed), count, dim + 1) * radius
    return [SpherePoint(p, radius) for p in pts]


def _gaussian_sphere(rng, count: int, ambient: int) -> np.ndarray:
    g = rng.standard_normal((count, ambient))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def ip(x: SpherePoint, y: SpherePoint) -> float:
    """The function IP(x, y) = x . y on S^n x S^n."""
    if x.coords.shape != y.coords.shape:
        raise ValueError("points of different dimension")
    return float(x.coords @ y.coords)


def classify_ip(value: float, tol: float = IP_TOL) -> str:
    """'D' on the diagonal level set, 'A' on the anti-diagonal, 'U' on the unit tangent bundle."""
    if abs(value - 1.0) <= tol:
        return "D"
    if abs(value + 1.0) <= tol:
        return "A"
    if abs(value) <= tol:
        return "U"
    return "generic"


def tangent_project(x: SpherePoint, v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    c = x.coords
    return v - (v @ c) / x.radius**2 * c


# ---------------------------------------------------------------------------
# spaces
# ---------------------------------------------------------------------------

class Space:
    """A Riemannian submanifold of Euclidean ambient space (induced metric)."""

    dim: int
    ambient_dim: int

    def residual(self, x) -> np.ndarray:
        raise NotImplementedError

    def retract(self, x) -> np.ndarray:
        raise NotImplementedError

    def projector(self, x) -> np.ndarray:
        """Orthogonal projector onto the tangent space, shape (..., N, N)."""
        raise NotImplementedError

    def distance(self, a, b):
        """Intrinsic distance where known in closed form, otherwise a lower bound."""
        raise NotImplementedError

    def distance_upper(self, a, b, segments: int | None = None):
        """An upper bound for the intrinsic distance (equal to it where exact).

        ``segments`` sets the resolution where the bound is a measured path length.
        """
        return self.distance(a, b)

    def chart(self, base, y):
        """Ambient displacement from ``base`` to ``y``, correct to first order."""
        return np.asarray(y, dtype=float) - np.asarray(base, dtype=float)

    def sample(self, count: int, rng) -> np.ndarray:
        raise NotImplementedError

    def volume(self) -> float:
        raise NotImplementedError(f"no closed-form volume for {self!r}")

    def to_dict(self) -> dict:
        raise NotImplementedError

    def __eq__(self, other):
        return type(self) is type(other) and self.to_dict() == other.to_dict()

    def __hash__(self):
        return hash(repr(self.to_dict()))

    def __repr__(self):
        return f"{type(self).__name__}({self.to_dict()})"


class Sphere(Space):
    def __init__(self, n: int, radius: float = 1.0):
        if n < 0 or radius <= 0:
            raise ValueError("need n >= 0 and radius > 0")
        self.n = int(n)
        self.radius = float(radius)
        self.dim = self.n
        self.ambient_dim = self.n + 1

    def residual(self, x):
        return np.abs(np.linalg.norm(x, axis=-1) - self.radius)

    def retract(self, x):
        x = np.asarray(x, dtype=float)
        return self.radius * x / np.linalg.norm(x, axis=-1, keepdims=True)

    def projector(self, x):
        u = np.asarray(x, dtype=float) / self.radius
        return np.eye(self.ambient_dim) - u[..., :, None] * u[..., None, :]

    def distance(self, a, b):
        return arc(a, b, self.radius)

    def sample(self, count, rng):
        return self.radius * _gaussian_sphere(np.random.default_rng(rng), count, self.ambient_dim)

    def volume(self):
        return sphere_volume(self.n, self.radius)

    def to_dict(self):
        return {"type": "sphere", "n": self.n, "radius": self.radius}


class Product(Space):
    def __init__(self, first: Space, second: Space):
        self.first = first
        self.second = second
        self.dim = first.dim + second.dim
        self.ambient_dim = first.ambient_dim + second.ambient_dim
        self._k = first.ambient_dim

    def split(self, x):
        x = np.asarray(x, dtype=float)
        return x[..., : self._k], x[..., self._k:]

    def residual(self, x):
        a, b = self.split(x)
        return np.maximum(self.first.residual(a), self.second.residual(b))

    def retract(self, x):
        a, b = self.split(x)
        return np.concatenate([self.first.retract(a), self.second.retract(b)], axis=-1)

    def projector(self, x):
        a, b = self.split(x)
        pa, pb = self.first.projector(a), self.second.projector(b)
        out = np.zeros(pa.shape[:-2] + (self.ambient_dim, self.ambient_dim))
        out[..., : self._k, : self._k] = pa
        out[..., self._k:, self._k:] = pb
        return out

    def distance(self, a, b):
        a1, a2 = self.split(a)
        b1, b2 = self.split(b)
        return np.hypot(self.first.distance(a1, b1), self.second.distance(a2, b2))

    def chart(self, base, y):
        b1, b2 = self.split(base)
        y1, y2 = self.split(y)
        return np.concatenate([self.first.chart(b1, y1), self.second.chart(b2, y2)], axis=-1)

    def sample(self, count, rng):
        rng = np.random.default_rng(rng)
        return np.concatenate([self.first.sample(count, rng), self.second.sample(count, rng)], axis=-1)

    def volume(self):
        return self.first.volume() * self.second.volume()

    def to_dict(self):
        return {"type": "product", "first": self.first.to_dict(), "second": self.second.to_dict()}


class Diagonal(Space):
    """The diagonal {(x, x)} in S^n x S^n, isometric to S^n(sqrt 2)."""

    def __init__(self, n: int):
        self.n = int(n)
        self.dim = self.n
        self.ambient_dim = 2 * (self.n + 1)
        self._k = self.n + 1

    def base(self, x):
        """The S^n point x of (x, x)."""
        return np.asarray(x, dtype=float)[..., : self._k]

    def lift(self, x):
        x = np.asarray(x, dtype=float)
        return np.concatenate([x, x], axis=-1)

    def residual(self, x):
        x = np.asarray(x, dtype=float)
        a, b = x[..., : self._k], x[..., self._k:]
        return np.maximum(np.abs(np.linalg.norm(a, axis=-1) - 1.0), np.linalg.norm(a - b, axis=-1))

    def retract(self, x):
        x = np.asarray(x, dtype=float)
        m = x[..., : self._k] + x[..., self._k:]
        return self.lift(m / np.linalg.norm(m, axis=-1, keepdims=True))

    def projector(self, x):
        p = 0.5 * Sphere(self.n).projector(self.base(x))
        row = np.concatenate([p, p], axis=-1)
        return np.concatenate([row, row], axis=-2)

    def distance(self, a, b):
        return np.sqrt(2.0) * arc(self.base(a), self.base(b))

    def sample(self, count, rng):
        return self.lift(_gaussian_sphere(np.random.default_rng(rng), count, self._k))

    def volume(self):
        return sphere_volume(self.n, np.sqrt(2.0))

    def to_dict(self):
        return {"type": "diagonal", "n": self.n}


class Stiefel(Space):
    """Orthonormal 2-frames (x, y) in R^m with the metric induced from S^{m-1} x S^{m-1}.

    For m even this is also the unit tangent bundle U S^{m-1}.
    """

    def __init__(self, m: int):
        if m < 2:
            raise ValueError("need m >= 2")
        self.m = int(m)
        self.dim = 2 * self.m - 3
        self.ambient_dim = 2 * self.m

    def split(self, x):
        x = np.asarray(x, dtype=float)
        return x[..., : self.m], x[..., self.m:]

    def residual(self, x):
        a, b = self.split(x)
        return np.maximum.reduce(
            [
                np.abs(np.linalg.norm(a, axis=-1) - 1.0),
                np.abs(np.linalg.norm(b, axis=-1) - 1.0),
                np.abs(np.sum(a * b, axis=-1)),
            ]
        )

    def retract(self, x):
        a, b = self.split(x)
        frame = np.stack([a, b], axis=-1)
        u, _, vt = np.linalg.svd(frame, full_matrices=False)
        q = u @ vt
        return np.concatenate([q[..., 0], q[..., 1]], axis=-1)

    def projector(self, x):
        a, b = self.split(x)
        z = np.zeros_like(a)
        g = np.stack(
            [np.concatenate([a, z], -1), np.concatenate([z, b], -1), np.concatenate([b, a], -1)],
            axis=-2,
        )
        gram = g @ np.swapaxes(g, -1, -2)
        return np.eye(self.ambient_dim) - np.swapaxes(g, -1, -2) @ np.linalg.solve(gram, g)

    def distance(self, a, b):
        # distance in the ambient S x S: a lower bound for the induced metric
        a1, a2 = self.split(a)
        b1, b2 = self.split(b)
        return np.hypot(arc(a1, b1), arc(a2, b2))

    def distance_upper(self, a, b, segments: int | None = None):
        """Length of the retracted product geodesic, measured segment by segment."""
        segments = 32 if segments is None else segments
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        a1, a2 = self.split(a)
        b1, b2 = self.split(b)
        ts = np.linspace(0.0, 1.0, segments + 1).reshape((-1,) + (1,) * a1.ndim)
        path = self.retract(np.concatenate([_slerp(a1[None], b1[None], ts), _slerp(a2[None], b2[None], ts)], -1))
        total = np.sum(self.distance(path[:-1], path[1:]), axis=0)
        return np.maximum(total, self.distance(a, b))

    def sample(self, count, rng):
        rng = np.random.default_rng(rng)
        a = _gaussian_sphere(rng, count, self.m)
        b = rng.standard_normal((count, self.m))
        b = b - np.sum(a * b, axis=1, keepdims=True) * a
        b = b / np.linalg.norm(b, axis=1, keepdims=True)
        return np.concatenate([a, b], axis=1)

    def volume(self):
        # fibres over x are unit spheres in x-perp; the base direction along y is stretched by sqrt 2
        return np.sqrt(2.0) * sphere_volume(self.m - 1) * sphere_volume(self.m - 2)

    def to_dict(self):
        return {"type": "stiefel", "m": self.m}


def _slerp(a, b, t):
    theta = arc(a, b)[..., None]
    s = np.sin(theta)
    small = s < 1e-12
    s = np.where(small, 1.0, s)
    w0 = np.where(small, 1.0 - t, np.sin((1.0 - t) * theta) / s)
    w1 = np.where(small, t, np.sin(t * theta) / s)
    out = w0 * a + w1 * b
    return out / np.linalg.norm(out, axis=-1, keepdims=True)


_UNITS = {
    "complex": np.array([[1.0, 0.0], [0.0, 1.0]]),
    "quaternionic": np.eye(4),
}


class ProjectiveSpace(Space):
    """F P^n with the submersion metric from the unit sphere of F^{n+1}.

    Points are unit representatives in real coordinates (complex z_k =
    x[2k] + i x[2k+1]; quaternion q_k = x[4k:4k+4]).  Tangent vectors are
    horizontal vectors at the representative.
    """

    def __init__(self, n: int, field: str = "complex"):
        if field not in _UNITS:
            raise ValueError(f"unknown field {field!r}")
        self.n = int(n)
        self.field = field
        self.d = 2 if field == "complex" else 4
        self.ambient_dim = self.d * (self.n + 1)
        self.dim = self.d * self.n

    def residual(self, x):
        return np.abs(np.linalg.norm(x, axis=-1) - 1.0)

    def retract(self, x):
        x = np.asarray(x, dtype=float)
        return x / np.linalg.norm(x, axis=-1, keepdims=True)

    def vertical(self, x):
        """Orthonormal vertical vectors x*u, u running over the unit basis of F."""
        x = np.asarray(x, dtype=float)
        if self.field == "complex":
            units = [np.array(1.0 + 0j), np.array(1j)]
        else:
            units = list(np.eye(4))
        return np.stack([_right_scale(x, np.broadcast_to(u, x.shape[:-1] + np.shape(u)), self.field)
                         for u in units], axis=-2)

    def projector(self, x):
        x = self.retract(x)
        v = self.vertical(x)
        return np.eye(self.ambient_dim) - np.swapaxes(v, -1, -2) @ v

    def distance(self, a, b):
        return _line_angle(self.retract(a), self.retract(b), self.field)

    def chart(self, base, y):
        base = np.asarray(base, dtype=float)
        y = np.asarray(y, dtype=float)
        h = hermitian_inner(y, base, self.field)
        if self.field == "complex":
            phase = h / np.maximum(np.abs(h), 1e-300)
        else:
            phase = h / np.maximum(np.linalg.norm(h, axis=-1, keepdims=True), 1e-300)
        return _right_scale(y, phase, self.field) - base

    def sample(self, count, rng):
        return _gaussian_sphere(np.random.default_rng(rng), count, self.ambient_dim)

    def volume(self):
        if self.field == "complex":
            return math.pi**self.n / math.factorial(self.n)
        return math.pi ** (2 * self.n) / math.factorial(2 * self.n + 1)

    def to_dict(self):
        return {"type": "projective", "n": self.n, "field": self.field}


class Grassmann24(Space):
    """Oriented 2-planes in R^4 as unit decomposable bivectors.

    In the Hodge eigenbasis this is S^2(1/sqrt 2) x S^2(1/sqrt 2).
    """

    def __init__(self):
        self.dim = 4
        self.ambient_dim = 6
        self._r = 1.0 / np.sqrt(2.0)

    def hodge_split(self, x):
        c = np.asarray(x, dtype=float) @ HODGE_BASIS.T
        return c[..., :3], c[..., 3:]

    def _join(self, plus, minus):
        return np.concatenate([plus, minus], axis=-1) @ HODGE_BASIS

    def residual(self, x):
        p, m = self.hodge_split(x)
        return np.maximum(np.abs(np.linalg.norm(p, axis=-1) - self._r), np.abs(np.linalg.norm(m, axis=-1) - self._r))

    def retract(self, x):
        p, m = self.hodge_split(x)
        s = Sphere(2, self._r)
        return self._join(s.retract(p), s.retract(m))

    def projector(self, x):
        p, m = self.hodge_split(x)
        s = Sphere(2, self._r)
        pp, pm = s.projector(p), s.projector(m)
        block = np.zeros(pp.shape[:-2] + (6, 6))
        block[..., :3, :3] = pp
        block[..., 3:, 3:] = pm
        return HODGE_BASIS.T @ block @ HODGE_BASIS

    def distance(self, a, b):
        ap, am = self.hodge_split(a)
        bp, bm = self.hodge_split(b)
        return np.hypot(arc(ap, bp, self._r), arc(am, bm, self._r))

    def sample(self, count, rng):
        rng = np.random.default_rng(rng)
        return self._join(self._r * _gaussian_sphere(rng, count, 3), self._r * _gaussian_sphere(rng, count, 3))

    def volume(self):
        return sphere_volume(2, self._r) ** 2

    def to_dict(self):
        return {"type": "grassmann24"}


def space_from_dict(data: dict) -> Space:
    kind = data["type"]
    if kind == "sphere":
        return Sphere(data["n"], data.get("radius", 1.0))
    if kind == "product":
        return Product(space_from_dict(data["first"]), space_from_dict(data["second"]))
    if kind == "diagonal":
        return Diagonal(data["n"])
    if kind == "stiefel":
        return Stiefel(data["m"])
    if kind == "projective":
        return ProjectiveSpace(data["n"], data["field"])
    if kind == "grassmann24":
        return Grassmann24()
    raise ValueError(f"unknown space type {kind!r}")


# ---------------------------------------------------------------------------
# tangent frames
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class TangentFrame:
    base: np.ndarray
    basis: np.ndarray  # (k, N) orthonormal rows

    def orthonormality_residual(self) -> float:
        g = self.basis @ self.basis.T
        return float(np.abs(g - np.eye(len(g))).max()) if len(g) else 0.0


def tangent_frames(space: Space, x, accept: float = 1e-3) -> np.ndarray:
    """Orthonormal tangent bases, shape (B, dim, N), for a batch of points (B, N).

    Gram-Schmidt over the projected ambient axes, taken in order of
    decreasing projected length; on a sphere this drops exactly the axis of
    the largest |component|.
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    bsz, n = x.shape
    k = space.dim
    cols = space.projector(x)  # (B, N, N), symmetric; column i = P e_i
    lengths = np.linalg.norm(cols, axis=-2)
    order = np.argsort(-lengths, axis=1, kind="stable")
    frames = np.zeros((bsz, k, n))
    count = np.zeros(bsz, dtype=int)
    rows = np.arange(bsz)
    for step in range(n):
        v = cols[rows, :, order[:, step]]
        for _ in range(2):
            v = v - np.einsum("bkn,bk->bn", frames, np.einsum("bkn,bn->bk", frames, v))
        nv = np.linalg.norm(v, axis=1)
        ok = (nv > accept) & (count < k)
        if ok.any():
            idx = rows[ok]
            frames[idx, count[ok]] = v[ok] / nv[ok, None]
            count[ok] += 1
        if (count == k).all():
            break
    if (count < k).any():
        raise FrameError("could not build a full tangent frame")
    return frames


def tangent_frame(space: Space, x) -> TangentFrame:
    x = np.asarray(x, dtype=float)
    return TangentFrame(x, tangent_frames(space, x[None])[0])
