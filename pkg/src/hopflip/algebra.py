"""Quaternions, octonions, bivectors in 4-space and orthogonal complex structures.

Quaternions are stored as (w, x, y, z) = w + xi + yj + zk, and the same
ordering is used whenever a point of R^4 is read as a quaternion.  Octonions
are pairs of quaternions under the Cayley-Dickson product

    (a, b)(c, d) = (ac - conj(d) b, d a + b conj(c)),

so that e1, e2, e3 are i, j, k of the first quaternion slot and e4..e7 are
1, i, j, k of the second slot.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

__all__ = [
    "Quaternion",
    "Octonion",
    "OrthogonalComplexStructure",
    "Bivector4",
    "qmul",
    "qconj",
    "omul",
    "oconj",
    "quat_mul",
    "oct_mul",
    "octonion_table",
    "load_octonion_table",
    "write_octonion_table",
    "random_rotation",
    "standard_ocs",
    "random_ocs",
    "apply_ocs",
    "complex_basis",
    "ocs_conjugator",
    "wedge",
    "HODGE_STAR",
    "HODGE_BASIS",
]


# ---------------------------------------------------------------------------
# vectorised kernels (arrays with a trailing axis of length 4 or 8)
# ---------------------------------------------------------------------------

def qmul(a, b):
    """Hamilton product of quaternion arrays, broadcasting over leading axes."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    aw, ax, ay, az = np.moveaxis(a, -1, 0)
    bw, bx, by, bz = np.moveaxis(b, -1, 0)
    return np.stack(
        [
            aw * bw - ax * bx - ay * by - az * bz,
            aw * bx + ax * bw + ay * bz - az * by,
            aw * by - ax * bz + ay * bw + az * bx,
            aw * bz + ax * by - ay * bx + az * bw,
        ],
        axis=-1,
    )


def qconj(a):
    a = np.asarray(a, dtype=float)
    return a * np.array([1.0, -1.0, -1.0, -1.0])


def omul(a, b):
    """Cayley-Dickson product of octonion arrays (trailing axis of length 8)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    p, q = a[..., :4], a[..., 4:]
    r, s = b[..., :4], b[..., 4:]
    first = qmul(p, r) - qmul(qconj(s), q)
    second = qmul(s, p) + qmul(q, qconj(r))
    return np.concatenate([first, second], axis=-1)


def oconj(a):
    a = np.asarray(a, dtype=float)
    sign = -np.ones(8)
    sign[0] = 1.0
    return a * sign


# ---------------------------------------------------------------------------
# value types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Quaternion:
    w: float
    x: float
    y: float
    z: float

    @classmethod
    def from_array(cls, arr) -> Quaternion:
        w, x, y, z = (float(c) for c in np.asarray(arr, dtype=float).reshape(4))
        return cls(w, x, y, z)

    def to_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])

    def __mul__(self, other: Quaternion) -> Quaternion:
        return quat_mul(self, other)

    def __add__(self, other: Quaternion) -> Quaternion:
        return Quaternion.from_array(self.to_array() + other.to_array())

    def __sub__(self, other: Quaternion) -> Quaternion:
        return Quaternion.from_array(self.to_array() - other.to_array())

    def __neg__(self) -> Quaternion:
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def conj(self) -> Quaternion:
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm(self) -> float:
        return float(np.linalg.norm(self.to_array()))

    def inverse(self) -> Quaternion:
        n2 = self.norm() ** 2
        if n2 == 0.0:
            raise ZeroDivisionError("zero quaternion has no inverse")
        return Quaternion.from_array(self.conj().to_array() / n2)

    def is_pure(self, tol: float = 1e-12) -> bool:
        return abs(self.w) <= tol


@dataclass(frozen=True, eq=False)
class Octonion:
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float).reshape(-1)
        if c.shape != (8,):
            raise ValueError(f"an octonion has 8 components, got {c.shape[0]}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def basis(cls, index: int) -> Octonion:
        c = np.zeros(8)
        c[index] = 1.0
        return cls(c)

    def __mul__(self, other: Octonion) -> Octonion:
        return oct_mul(self, other)

    def __eq__(self, other) -> bool:
        return isinstance(other, Octonion) and bool(np.array_equal(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash(self.coeffs.tobytes())

    def conj(self) -> Octonion:
        return Octonion(oconj(self.coeffs))

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def __repr__(self) -> str:
        return f"Octonion({self.coeffs.tolist()})"


def quat_mul(a: Quaternion, b: Quaternion) -> Quaternion:
    return Quaternion.from_array(qmul(a.to_array(), b.to_array()))


def oct_mul(a: Octonion, b: Octonion) -> Octonion:
    return Octonion(omul(a.coeffs, b.coeffs))


# ---------------------------------------------------------------------------
# octonion multiplication table
# ---------------------------------------------------------------------------

def octonion_table() -> list[list[tuple[int, int]]]:
    """Signed-index table: entry [i][j] = (sign, k) with e_i e_j = sign * e_k."""
    table = []
    eye = np.eye(8)
    for i in range(8):
        row = []
        for j in range(8):
            prod = omul(eye[i], eye[j])
            k = int(np.argmax(np.abs(prod)))
            sign = int(np.sign(prod[k]))
            if not np.allclose(prod, sign * eye[k]):
                raise ArithmeticError(f"e{i} e{j} is not a signed basis element")
            row.append((sign, k))
        table.append(row)
    return table


def _format_entry(sign: int, k: int) -> str:
    return f"{'+' if sign > 0 else '-'}{k}"


def write_octonion_table(stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    for row in octonion_table():
        writer.writerow([_format_entry(s, k) for s, k in row])


def load_octonion_table(text: str | None = None) -> list[list[tuple[int, int]]]:
    """Parse the frozen 8x8 table shipped with the package (or ``text``)."""
    if text is None:
        text = resources.files("hopflip.data").joinpath("octonion_table.csv").read_text()
    table = []
    for row in csv.reader(io.StringIO(text)):
        if not row:
            continue
        table.append([(1 if cell[0] == "+" else -1, int(cell[1:])) for cell in row])
    if len(table) != 8 or any(len(r) != 8 for r in table):
        raise ValueError("octonion table must be 8x8")
    return table


# ---------------------------------------------------------------------------
# orthogonal complex structures
# ---------------------------------------------------------------------------

def _j0(dim: int) -> np.ndarray:
    j = np.zeros((dim, dim))
    for b in range(0, dim, 2):
        j[b + 1, b] = 1.0
        j[b, b + 1] = -1.0
    return j


@dataclass(frozen=True, eq=False)
class OrthogonalComplexStructure:
    """J in SO(dim) with J^2 = -I.

    ``rotation`` records R when the structure was built as R J0 R^T; it is
    None for structures supplied directly.
    """

    dim: int
    matrix: np.ndarray
    rotation: np.ndarray | None = field(default=None, repr=False)
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if self.dim < 2 or self.dim % 2:
            raise ValueError(f"orthogonal complex structures need even dim >= 2, got {self.dim}")
        if m.shape != (self.dim, self.dim):
            raise ValueError(f"matrix shape {m.shape} does not match dim {self.dim}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        if self.check:
            res = self.invariant_residual()
            if res > 1e-12:
                raise ValueError(f"not an orthogonal complex structure (residual {res:.3e})")

    def invariant_residual(self) -> float:
        m = self.matrix
        eye = np.eye(self.dim)
        return float(max(np.abs(m.T @ m - eye).max(), np.abs(m @ m + eye).max(), np.abs(m + m.T).max()))

    def __call__(self, x):
        return np.asarray(x, dtype=float) @ self.matrix.T

    def to_dict(self) -> dict:
        return {"dim": self.dim, "matrix": self.matrix.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> OrthogonalComplexStructure:
        if "matrix" in data:
            return cls(int(data["dim"]), np.array(data["matrix"], dtype=float))
        if "seed" in data:
            return random_ocs(int(data["dim"]), int(data["seed"]))
        return standard_ocs(int(data["dim"]))


def random_rotation(dim: int, rng) -> np.ndarray:
    """Haar-style rotation: QR of a Gaussian matrix, signs fixed, det forced to +1."""
    rng = np.random.default_rng(rng)
    q, r = np.linalg.qr(rng.standard_normal((dim, dim)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def standard_ocs(dim: int) -> OrthogonalComplexStructure:
    """Block-diagonal J0 sending e1 -> e2, e3 -> e4, ..."""
    return OrthogonalComplexStructure(dim, _j0(dim), rotation=np.eye(dim))


def random_ocs(dim: int, seed: int) -> OrthogonalComplexStructure:
    if dim < 2 or dim % 2:
        raise ValueError(f"dim must be even and >= 2, got {dim}")
    r = random_rotation(dim, seed)
    j = r @ _j0(dim) @ r.T
    # symmetrise away rounding so that the 1e-12 invariants hold exactly enough
    j = 0.5 * (j - j.T)
    return OrthogonalComplexStructure(dim, j, rotation=r)


def apply_ocs(J: OrthogonalComplexStructure, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != J.dim:
        raise ValueError(f"vector of length {x.shape[-1]} does not match structure dim {J.dim}")
    return J(x)


def complex_basis(J: OrthogonalComplexStructure) -> np.ndarray:
    """Orthogonal B with columns (b1, J b1, b3, J b3, ...), so that J = B J0 B^T."""
    dim = J.dim
    cols: list[np.ndarray] = []
    for axis in range(dim):
        if len(cols) == dim:
            break
        v = np.eye(dim)[axis]
        for _ in range(2):
            for c in cols:
                v = v - (c @ v) * c
        n = np.linalg.norm(v)
        if n < 1e-6:
            continue
        v = v / n
        w = J.matrix @ v
        for _ in range(2):
            for c in cols:
                w = w - (c @ w) * c
        w = w / np.linalg.norm(w)
        cols.extend([v, w])
    return np.column_stack(cols)


def ocs_conjugator(J: OrthogonalComplexStructure, J_other: OrthogonalComplexStructure) -> np.ndarray:
    """g in O(dim) with g J = J_other g, assembled from the two complex bases."""
    if J.dim != J_other.dim:
        raise ValueError("structures live in different dimensions")
    return complex_basis(J_other) @ complex_basis(J).T


# ---------------------------------------------------------------------------
# bivectors in R^4
# ---------------------------------------------------------------------------

# component order: e12, e13, e14, e23, e24, e34
_PAIRS = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]

HODGE_STAR = np.array(
    [
        [0, 0, 0, 0, 0, 1],
        [0, 0, 0, 0, -1, 0],
        [0, 0, 0, 1, 0, 0],
        [0, 0, 1, 0, 0, 0],
        [0, -1, 0, 0, 0, 0],
        [1, 0, 0, 0, 0, 0],
    ],
    dtype=float,
)

_S = 1.0 / np.sqrt(2.0)
# rows 0-2 span the +1 eigenspace of the Hodge star, rows 3-5 the -1 eigenspace
HODGE_BASIS = _S * np.array(
    [
        [1, 0, 0, 0, 0, 1],
        [0, 1, 0, 0, -1, 0],
        [0, 0, 1, 1, 0, 0],
        [1, 0, 0, 0, 0, -1],
        [0, 1, 0, 0, 1, 0],
        [0, 0, 1, -1, 0, 0],
    ]
)


def wedge(x, y):
    """x ^ y as a 6-vector in the (12, 13, 14, 23, 24, 34) basis; broadcasts."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return np.stack([x[..., i] * y[..., j] - x[..., j] * y[..., i] for i, j in _PAIRS], axis=-1)


def hodge_eigenbasis(star: np.ndarray) -> np.ndarray:
    """Orthonormal rows spanning the +1 then -1 eigenspaces of a symmetric star matrix."""
    vals, vecs = np.linalg.eigh(star)
    order = np.argsort(-vals, kind="stable")
    return vecs[:, order].T


@dataclass(frozen=True, eq=False)
class Bivector4:
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float).reshape(-1)
        if c.shape != (6,):
            raise ValueError("a bivector in R^4 has 6 components")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_vectors(cls, x, y) -> Bivector4:
        return cls(wedge(x, y))

    def hodge(self) -> Bivector4:
        return Bivector4(HODGE_STAR @ self.coeffs)

    def split(self, basis: np.ndarray | None = None) -> tuple[np.ndarray, np.ndarray]:
        """Coordinates of the projections onto E+ and E- (3 each)."""
        b = HODGE_BASIS if basis is None else basis
        coords = b @ self.coeffs
        return coords[:3], coords[3:]

    def pfaffian(self) -> float:
        c = self.coeffs
        return float(c[0] * c[5] - c[1] * c[4] + c[2] * c[3])

    def is_decomposable(self, tol: float = 1e-12) -> bool:
        return abs(self.pfaffian()) <= tol * max(1.0, float(self.coeffs @ self.coeffs))

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))
