"""A closed family of analytic maps between the spaces in :mod:`hopflip.manifolds`.

Each descriptor is an immutable object with a ``domain``, a ``codomain``
and a batched ``evaluate``.  Conventions fixed here:

* complex coordinates on R^{2n+2}: z_k = x[2k] + i x[2k+1];
* the complex Hopf map S^3 -> S^2(1/2) is
  (z1, z2) -> (Re z1 conj(z2), Im z1 conj(z2), (|z1|^2 - |z2|^2) / 2);
* the quaternionic and octonionic maps put the height coordinate first:
  (u, v) -> ((|u|^2 - |v|^2) / 2, u conj(v)), landing on S^4(1/2), S^8(1/2);
* S^3 and S^2 are oriented by the outward normal followed by the standard
  orientation of the ambient space.
"""

from __future__ import annotations

import logging
import re

import numpy as np

from .algebra import (
    OrthogonalComplexStructure,
    oconj,
    omul,
    qconj,
    qmul,
    standard_ocs,
    wedge,
)
from .manifolds import (
    Diagonal,
    Grassmann24,
    Product,
    ProjectiveSpace,
    Space,
    Sphere,
    Stiefel,
    TangentFrame,
    arc,
    space_from_dict,
    tangent_frames,
)

logger = logging.getLogger(__name__)

__all__ = [
    "DomainError",
    "MapDescriptor",
    "HopfComplex",
    "HopfQuaternionic",
    "HopfOctonionic",
    "DiagonalInclusion",
    "HopfVectorField",
    "StiefelPluecker",
    "StiefelQuat",
    "PowerPrecompose",
    "Suspension",
    "IsometryConjugate",
    "BumpPerturb",
    "Identity",
    "Constant",
    "evaluate",
    "differential",
    "jacobians",
    "singular_values",
    "suspend",
    "power_precompose",
    "bump_perturb",
    "map_from_dict",
    "builtin_map",
    "DOMAIN_TOL",
]

DOMAIN_TOL = 1e-9


class DomainError(ValueError):
    pass


class MapDescriptor:
    family: str = ""
    domain: Space
    codomain: Space

    def evaluate(self, x, check: bool = True) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.domain.ambient_dim:
            raise DomainError(f"{self.family}: expected {self.domain.ambient_dim} coordinates, got {x.shape[-1]}")
        if check:
            res = np.max(self.domain.residual(x))
            if res > DOMAIN_TOL:
                raise DomainError(f"{self.family}: point off the domain by {res:.3e}")
        return self._eval(x)

    __call__ = evaluate

    def _eval(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def params(self) -> dict:
        return {}

    def to_dict(self) -> dict:
        return {"family": self.family, **self.params()}

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.params()})"


def evaluate(m: MapDescriptor, x) -> np.ndarray:
    return m.evaluate(x)


class HopfComplex(MapDescriptor):
    """S^{2n+1} -> CP^n; for n = 1 the default form lands on S^2(1/2)."""

    family = "hopf_complex"

    def __init__(self, n: int = 1, form: str | None = None):
        self.n = int(n)
        if self.n < 1:
            raise ValueError("n must be >= 1")
        self.form = form or ("sphere" if self.n == 1 else "projective")
        if self.form == "sphere" and self.n != 1:
            raise ValueError("the sphere form exists only for n = 1")
        self.domain = Sphere(2 * self.n + 1)
        self.codomain = Sphere(2, 0.5) if self.form == "sphere" else ProjectiveSpace(self.n, "complex")

    def _eval(self, x):
        if self.form == "projective":
            return x / np.linalg.norm(x, axis=-1, keepdims=True)
        z1 = x[..., 0] + 1j * x[..., 1]
        z2 = x[..., 2] + 1j * x[..., 3]
        w = z1 * np.conj(z2)
        return np.stack([w.real, w.imag, 0.5 * (np.abs(z1) ** 2 - np.abs(z2) ** 2)], axis=-1)

    def params(self):
        return {"n": self.n, "form": self.form}


class HopfQuaternionic(MapDescriptor):
    """S^{4n+3} -> HP^n (right lines); for n = 1 the default form lands on S^4(1/2)."""

    family = "hopf_quaternionic"

    def __init__(self, n: int = 1, form: str | None = None):
        self.n = int(n)
        if self.n < 1:
            raise ValueError("n must be >= 1")
        self.form = form or ("sphere" if self.n == 1 else "projective")
        if self.form == "sphere" and self.n != 1:
            raise ValueError("the sphere form exists only for n = 1")
        self.domain = Sphere(4 * self.n + 3)
        self.codomain = Sphere(4, 0.5) if self.form == "sphere" else ProjectiveSpace(self.n, "quaternionic")

    def _eval(self, x):
        if self.form == "projective":
            return x / np.linalg.norm(x, axis=-1, keepdims=True)
        u, v = x[..., :4], x[..., 4:]
        h = 0.5 * (np.sum(u * u, -1) - np.sum(v * v, -1))
        return np.concatenate([h[..., None], qmul(u, qconj(v))], axis=-1)

    def params(self):
        return {"n": self.n, "form": self.form}


class HopfOctonionic(MapDescriptor):
    family = "hopf_octonionic"

    def __init__(self):
        self.domain = Sphere(15)
        self.codomain = Sphere(8, 0.5)

    def _eval(self, x):
        u, v = x[..., :8], x[..., 8:]
        h = 0.5 * (np.sum(u * u, -1) - np.sum(v * v, -1))
        return np.concatenate([h[..., None], omul(u, oconj(v))], axis=-1)


class DiagonalInclusion(MapDescriptor):
    family = "diagonal_inclusion"

    def __init__(self, n: int = 2):
        self.n = int(n)
        self.domain = Diagonal(self.n)
        self.codomain = Product(Sphere(self.n), Sphere(self.n))

    def _eval(self, x):
        return np.array(x, dtype=float)

    def params(self):
        return {"n": self.n}


class HopfVectorField(MapDescriptor):
    """x -> (x, J x), a section of the unit tangent bundle of S^{2n+1}."""

    family = "hopf_vector_field"

    def __init__(self, J: OrthogonalComplexStructure | None = None):
        self.J = J if J is not None else standard_ocs(4)
        self.domain = Sphere(self.J.dim - 1)
        self.codomain = Stiefel(self.J.dim)

    def _eval(self, x):
        return np.concatenate([x, x @ self.J.matrix.T], axis=-1)

    def params(self):
        return {"J": self.J.to_dict()}


class StiefelPluecker(MapDescriptor):
    """(x, y) -> x ^ y / |x ^ y| in G2(R^4)."""

    family = "stiefel_pluecker"

    def __init__(self):
        self.domain = Stiefel(4)
        self.codomain = Grassmann24()

    def _eval(self, x):
        b = wedge(x[..., :4], x[..., 4:])
        return b / np.linalg.norm(b, axis=-1, keepdims=True)


class StiefelQuat(MapDescriptor):
    """(x, y) -> (y x^-1, x^-1 y), pure unit quaternions in S^2 x S^2."""

    family = "stiefel_quat"

    def __init__(self):
        self.domain = Stiefel(4)
        self.codomain = Product(Sphere(2), Sphere(2))

    def _eval(self, x):
        a, b = x[..., :4], x[..., 4:]
        inv = qconj(a) / np.sum(a * a, axis=-1, keepdims=True)
        left = qmul(b, inv)
        right = qmul(inv, b)
        return np.concatenate([left[..., 1:], right[..., 1:]], axis=-1)


class Identity(MapDescriptor):
    family = "identity"

    def __init__(self, space: Space | None = None):
        self.domain = self.codomain = space if space is not None else Sphere(2)

    def _eval(self, x):
        return np.array(x, dtype=float)

    def params(self):
        return {"space": self.domain.to_dict()}


class Constant(MapDescriptor):
    family = "constant"

    def __init__(self, domain: Space, codomain: Space, value):
        self.domain = domain
        self.codomain = codomain
        self.value = np.asarray(value, dtype=float)
        if self.value.shape != (codomain.ambient_dim,) or codomain.residual(self.value) > DOMAIN_TOL:
            raise ValueError("constant value is not a point of the codomain")

    def _eval(self, x):
        return np.broadcast_to(self.value, x.shape[:-1] + self.value.shape).copy()

    def params(self):
        return {"domain": self.domain.to_dict(), "codomain": self.codomain.to_dict(), "value": self.value.tolist()}


class PowerPrecompose(MapDescriptor):
    """inner o g_d with g_d(z1, z2) = (z1, z2^d) / norm on S^3.

    Negative d uses conj(z2)^|d|, which keeps g_d smooth and of degree d.
    """

    family = "power_precompose"

    def __init__(self, inner: MapDescriptor, d: int):
        if inner.domain != Sphere(3):
            raise ValueError("power precomposition needs a map out of S^3")
        self.inner = inner
        self.d = int(d)
        self.domain = inner.domain
        self.codomain = inner.codomain

    def g(self, x):
        z1 = x[..., 0] + 1j * x[..., 1]
        z2 = x[..., 2] + 1j * x[..., 3]
        if self.d >= 0:
            w = z2**self.d
        else:
            w = np.conj(z2) ** (-self.d)
        w = np.broadcast_to(w, z1.shape)
        nrm = np.sqrt(np.abs(z1) ** 2 + np.abs(w) ** 2)
        return np.stack([z1.real, z1.imag, w.real, w.imag], axis=-1) / nrm[..., None]

    def _eval(self, x):
        return self.inner._eval(self.g(x))

    def params(self):
        return {"inner": self.inner.to_dict(), "d": self.d}


class Suspension(MapDescriptor):
    """(x cos t, sin t) -> (phi(x) cos t, r sin t), componentwise for product codomains."""

    family = "suspension"

    def __init__(self, inner: MapDescriptor):
        dom, cod = inner.domain, inner.codomain
        if isinstance(dom, Sphere):
            if dom.radius != 1.0:
                raise ValueError("suspension needs a unit-sphere domain")
            self.domain = Sphere(dom.n + 1)
        elif isinstance(dom, Diagonal):
            self.domain = Diagonal(dom.n + 1)
        else:
            raise ValueError("suspension needs a sphere or diagonal domain")
        if isinstance(cod, Sphere):
            self._parts = [cod]
            self.codomain = Sphere(cod.n + 1, cod.radius)
        elif isinstance(cod, Product) and isinstance(cod.first, Sphere) and isinstance(cod.second, Sphere):
            self._parts = [cod.first, cod.second]
            self.codomain = Product(Sphere(cod.first.n + 1, cod.first.radius),
                                    Sphere(cod.second.n + 1, cod.second.radius))
        else:
            raise ValueError("codomain is not a sphere or a product of spheres")
        self.inner = inner

    def _eval(self, x):
        base = x[..., : self.domain.n + 1] if isinstance(self.domain, Diagonal) else x
        s = base[..., -1]
        head = base[..., :-1]
        c = np.linalg.norm(head, axis=-1)
        pole = c < 1e-15
        safe = np.where(pole[..., None], np.eye(head.shape[-1])[0], head / np.where(pole, 1.0, c)[..., None])
        if isinstance(self.inner.domain, Diagonal):
            safe = np.concatenate([safe, safe], axis=-1)
        phi = self.inner._eval(safe)
        pieces = []
        offset = 0
        for part in self._parts:
            k = part.ambient_dim
            pieces.append(phi[..., offset: offset + k] * c[..., None])
            pieces.append((part.radius * s)[..., None])
            offset += k
        return np.concatenate(pieces, axis=-1)

    def params(self):
        return {"inner": self.inner.to_dict()}


class IsometryConjugate(MapDescriptor):
    """x -> g_cod inner(g_dom^T x), i.e. g_cod o inner o g_dom^{-1}."""

    family = "isometry_conjugate"

    def __init__(self, inner: MapDescriptor, g_dom=None, g_cod=None):
        self.inner = inner
        self.domain = inner.domain
        self.codomain = inner.codomain
        self.g_dom = _orthogonal(g_dom, inner.domain.ambient_dim)
        self.g_cod = _orthogonal(g_cod, inner.codomain.ambient_dim)

    def _eval(self, x):
        return self.inner._eval(x @ self.g_dom) @ self.g_cod.T

    def params(self):
        return {"inner": self.inner.to_dict(), "g_dom": self.g_dom.tolist(), "g_cod": self.g_cod.tolist()}


def _orthogonal(g, n):
    g = np.eye(n) if g is None else np.array(g, dtype=float)
    if g.shape != (n, n):
        raise ValueError(f"isometry must be {n}x{n}, got {g.shape}")
    if np.abs(g.T @ g - np.eye(n)).max() > 1e-10:
        raise ValueError("isometry matrix is not orthogonal")
    g.setflags(write=False)
    return g


class BumpPerturb(MapDescriptor):
    """Rotate f(x) by a bump-weighted Killing field of the codomain sphere.

    f~(x) = r (f + a b(x) A f) / |f + a b(x) A f|, with A the rotation
    generator of the coordinate plane ``plane`` and b(x) = (1 + cos(pi rho /
    width)) / 2 for geodesic distance rho < width from ``center``, else 0.
    """

    family = "bump_perturb"

    def __init__(self, inner: MapDescriptor, center, amplitude: float, width: float, plane=(0, 1)):
        if not isinstance(inner.domain, Sphere) or not isinstance(inner.codomain, Sphere):
            raise ValueError("bump perturbation needs a map between spheres")
        if abs(amplitude) >= 1.0:
            raise ValueError("amplitude must be below 1 for the renormalisation to stay well conditioned")
        if width <= 0:
            raise ValueError("width must be positive")
        if inner.codomain.n < 1:
            raise ValueError("codomain must have dimension >= 1")
        self.inner = inner
        self.domain = inner.domain
        self.codomain = inner.codomain
        c = np.asarray(center, dtype=float)
        self.center = inner.domain.radius * c / np.linalg.norm(c)
        self.amplitude = float(amplitude)
        self.width = float(width)
        self.plane = (int(plane[0]), int(plane[1]))

    def bump(self, x):
        rho = arc(x, self.center, self.domain.radius) / self.domain.radius
        return np.where(rho < self.width, 0.5 * (1.0 + np.cos(np.pi * rho / self.width)), 0.0)

    def _eval(self, x):
        y = self.inner._eval(x)
        if self.amplitude == 0.0:
            return y
        p, q = self.plane
        ay = np.zeros_like(y)
        ay[..., p] = -y[..., q]
        ay[..., q] = y[..., p]
        return self.codomain.retract(y + (self.amplitude * self.bump(x))[..., None] * ay)

    def params(self):
        return {
            "inner": self.inner.to_dict(),
            "center": self.center.tolist(),
            "amplitude": self.amplitude,
            "width": self.width,
            "plane": list(self.plane),
        }


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def suspend(m: MapDescriptor) -> Suspension:
    return Suspension(m)


def power_precompose(m: MapDescriptor, d: int) -> PowerPrecompose:
    return PowerPrecompose(m, d)


DEFAULT_BUMP_CENTER = np.array([1.0, 0.0, 1.0, 0.0]) / np.sqrt(2.0)


def bump_perturb(m: MapDescriptor, center=None, amplitude: float = 0.1, width: float = 0.5) -> BumpPerturb:
    if center is None:
        if m.domain.ambient_dim != 4:
            raise ValueError("no default bump center outside S^3")
        center = DEFAULT_BUMP_CENTER
    return BumpPerturb(m, center, amplitude, width)


# ---------------------------------------------------------------------------
# differentials
# ---------------------------------------------------------------------------

def _central(m: MapDescriptor, x, fx, dom_frames, cod_frames, h):
    bsz, k, n = dom_frames.shape
    xs = x[:, None, :]
    plus = m.domain.retract(xs + h * dom_frames).reshape(-1, n)
    minus = m.domain.retract(xs - h * dom_frames).reshape(-1, n)
    mm = m.codomain.ambient_dim
    yp = m._eval(plus).reshape(bsz, k, mm)
    ym = m._eval(minus).reshape(bsz, k, mm)
    base = fx[:, None, :]
    diff = (m.codomain.chart(base, yp) - m.codomain.chart(base, ym)) / (2.0 * h)
    return np.einsum("blm,bkm->blk", cod_frames, diff)


def jacobians(m: MapDescriptor, x, h: float = 1e-5, richardson: bool = True):
    """Differentials at a batch of points.

    Returns (D, dom_frames, cod_frames, fx) with D of shape (B, l, k): the
    matrix of df in orthonormal tangent frames (columns are pushforwards of
    the domain frame vectors).
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    fx = m._eval(x)
    dom = tangent_frames(m.domain, x)
    cod = tangent_frames(m.codomain, fx)
    d_prev = _central(m, x, fx, dom, cod, h)
    if not richardson:
        return d_prev, dom, cod, fx
    step = h
    pending = np.ones(len(x), dtype=bool)
    out = d_prev.copy()
    for _ in range(4):
        step /= 2.0
        idx = np.flatnonzero(pending)
        d_next = _central(m, x[idx], fx[idx], dom[idx], cod[idx], step)
        scale = np.maximum(1.0, np.abs(d_next).max(axis=(1, 2)))
        agree = np.abs(d_next - d_prev[idx]).max(axis=(1, 2)) <= 1e-6 * scale
        out[idx] = d_next
        pending[idx[agree]] = False
        if not pending.any():
            break
        d_prev = out.copy()
    if pending.any():
        logger.warning("%s: finite differences did not settle at %d points", m.family, int(pending.sum()))
    return out, dom, cod, fx


def differential(m: MapDescriptor, x, h: float = 1e-5):
    """df at a single point, as (matrix, domain TangentFrame, codomain TangentFrame)."""
    if not 1e-7 <= h <= 1e-3:
        raise ValueError("step h must lie in [1e-7, 1e-3]")
    x = np.asarray(x, dtype=float)
    if m.domain.residual(x) > DOMAIN_TOL:
        raise DomainError("point off the domain")
    d, dom, cod, fx = jacobians(m, x[None], h)
    return d[0], TangentFrame(x, dom[0]), TangentFrame(fx[0], cod[0])


def singular_values(m: MapDescriptor, x, h: float = 1e-5) -> np.ndarray:
    d = jacobians(m, x, h)[0]
    return np.linalg.svd(d, compute_uv=False)


# ---------------------------------------------------------------------------
# serialisation
# ---------------------------------------------------------------------------

def map_from_dict(data: dict) -> MapDescriptor:
    fam = data["family"]
    if fam == "hopf_complex":
        return HopfComplex(data.get("n", 1), data.get("form"))
    if fam == "hopf_quaternionic":
        return HopfQuaternionic(data.get("n", 1), data.get("form"))
    if fam == "hopf_octonionic":
        return HopfOctonionic()
    if fam == "diagonal_inclusion":
        return DiagonalInclusion(data.get("n", 2))
    if fam == "hopf_vector_field":
        j = data.get("J")
        return HopfVectorField(OrthogonalComplexStructure.from_dict(j) if j else None)
    if fam == "stiefel_pluecker":
        return StiefelPluecker()
    if fam == "stiefel_quat":
        return StiefelQuat()
    if fam == "identity":
        return Identity(space_from_dict(data["space"]) if "space" in data else None)
    if fam == "constant":
        return Constant(space_from_dict(data["domain"]), space_from_dict(data["codomain"]), data["value"])
    if fam == "power_precompose":
        return PowerPrecompose(map_from_dict(data["inner"]), data["d"])
    if fam == "suspension":
        return Suspension(map_from_dict(data["inner"]))
    if fam == "isometry_conjugate":
        return IsometryConjugate(map_from_dict(data["inner"]), data.get("g_dom"), data.get("g_cod"))
    if fam == "bump_perturb":
        return BumpPerturb(
            map_from_dict(data["inner"]), data["center"], data["amplitude"], data["width"],
            tuple(data.get("plane", (0, 1))),
        )
    if fam == "profile":
        from .verify import ProfileSphereMap

        return ProfileSphereMap.from_dict(data)
    raise ValueError(f"unknown map family {fam!r}")


_CALL = re.compile(r"^([a-z\-]+)(?:\((.*)\))?$")


def _split_args(text: str) -> list[str]:
    args, depth, cur = [], 0, ""
    for ch in text:
        if ch == "," and depth == 0:
            args.append(cur.strip())
            cur = ""
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur += ch
    if cur.strip():
        args.append(cur.strip())
    return args


def builtin_map(name: str) -> MapDescriptor:
    """Parse builtin names such as ``hopf``, ``power(3)``, ``bump(0.1,0.5)``, ``suspend(hopf)``."""
    match = _CALL.match(name.strip().replace(" ", ""))
    if not match:
        raise ValueError(f"cannot parse builtin map {name!r}")
    head, body = match.group(1), match.group(2)
    args = _split_args(body) if body else []
    if head == "hopf":
        return HopfComplex(int(args[0]) if args else 1)
    if head == "hopf-quat":
        return HopfQuaternionic(int(args[0]) if args else 1)
    if head == "hopf-oct":
        return HopfOctonionic()
    if head == "diagonal":
        return DiagonalInclusion(int(args[0]) if args else 2)
    if head == "hopf-vf":
        return HopfVectorField(standard_ocs(int(args[0]) if args else 4))
    if head == "stiefel-quat":
        return StiefelQuat()
    if head == "stiefel-pluecker":
        return StiefelPluecker()
    if head == "power":
        if len(args) != 1:
            raise ValueError("power(d) takes one integer")
        return PowerPrecompose(HopfComplex(1), int(args[0]))
    if head == "bump":
        amp = float(args[0]) if args else 0.1
        width = float(args[1]) if len(args) > 1 else 0.5
        return bump_perturb(HopfComplex(1), amplitude=amp, width=width)
    if head == "suspend":
        if len(args) != 1:
            raise ValueError("suspend(inner) takes one builtin")
        return Suspension(builtin_map(args[0]))
    if head == "identity":
        return Identity(Sphere(int(args[0]) if args else 2))
    raise ValueError(f"unknown builtin map {head!r}")

