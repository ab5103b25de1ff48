import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hopflip.manifolds import (
    Diagonal,
    Grassmann24,
    Product,
    ProductPoint,
    ProjectivePoint,
    ProjectiveSpace,
    Sphere,
    SpherePoint,
    Stiefel,
    arc,
    classify_ip,
    ip,
    product_distance,
    projective_distance,
    space_from_dict,
    sphere_distance,
    tangent_frame,
    tangent_frames,
    tangent_project,
    uniform_sample,
)
from hopflip.maps import HopfComplex


def test_sphere_distance_examples():
    x = SpherePoint(np.array([1.0, 0, 0, 0]))
    assert abs(sphere_distance(x, -x) - np.pi) < 1e-15
    assert sphere_distance(x, x) == 0.0
    assert abs(sphere_distance(x, SpherePoint(np.array([0, 1.0, 0, 0]))) - np.pi / 2) < 1e-15
    half = SpherePoint(np.array([0, 0, 0.5]), 0.5)
    assert abs(sphere_distance(half, -half) - np.pi / 2) < 1e-15


def test_sphere_distance_errors():
    with pytest.raises(ValueError):
        sphere_distance(SpherePoint(np.array([1.0, 0, 0])), SpherePoint(np.array([1.0, 0, 0, 0])))
    with pytest.raises(ValueError):
        sphere_distance(SpherePoint(np.array([1.0, 0, 0])), SpherePoint(np.array([0.5, 0, 0]), 0.5))
    with pytest.raises(ValueError):
        SpherePoint(np.array([1.0, 1.0, 0]))


@given(st.integers(0, 2**31))
@settings(max_examples=50)
def test_sphere_distance_metric_axioms(seed):
    a, b, c = uniform_sample(3, 3, seed)
    dab, dba = sphere_distance(a, b), sphere_distance(b, a)
    assert dab == dba
    assert sphere_distance(a, c) <= dab + sphere_distance(b, c) + 1e-12


def test_product_distance_examples():
    x, y = uniform_sample(2, 2, 5)
    p = ProductPoint(x, y)
    assert abs(product_distance(p, ProductPoint(-x, -y)) - np.pi * np.sqrt(2)) < 1e-12
    assert product_distance(p, p) == 0.0
    assert abs(product_distance(p, ProductPoint(x, -y)) - np.pi) < 1e-12


def test_projective_distance_examples():
    e1 = ProjectivePoint(np.array([1, 0], dtype=complex))
    e2 = ProjectivePoint(np.array([0, 1], dtype=complex))
    assert abs(projective_distance(e1, e2) - np.pi / 2) < 1e-15
    rng = np.random.default_rng(0)
    v = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    v /= np.linalg.norm(v)
    a, b = ProjectivePoint(v), ProjectivePoint(np.exp(0.7j) * v)
    assert projective_distance(a, b) < 1e-12
    with pytest.raises(ValueError):
        projective_distance(e1, ProjectivePoint(np.array([[1.0, 0, 0, 0], [0, 0, 0, 0]]), "quaternionic"))


def test_quaternionic_lines_use_right_scalars():
    rng = np.random.default_rng(1)
    v = rng.standard_normal((2, 4))
    v /= np.linalg.norm(v)
    q = rng.standard_normal(4)
    q /= np.linalg.norm(q)
    from hopflip.algebra import qmul

    right = ProjectivePoint(qmul(v, q[None]), "quaternionic")
    left = ProjectivePoint(qmul(q[None], v), "quaternionic")
    base = ProjectivePoint(v, "quaternionic")
    assert projective_distance(base, right) < 1e-12
    assert projective_distance(base, left) > 1e-3


def test_cp1_distance_equals_hopf_image_distance():
    h = HopfComplex(1)
    rng = np.random.default_rng(2)
    x, y = Sphere(3).sample(1000, rng), Sphere(3).sample(1000, rng)
    proj = ProjectiveSpace(1).distance(x, y)
    base = Sphere(2, 0.5).distance(h(x), h(y))
    assert np.abs(proj - base).max() < 1e-9


def test_projective_distance_bounded():
    rng = np.random.default_rng(4)
    for field in ("complex", "quaternionic"):
        sp = ProjectiveSpace(2, field)
        d = sp.distance(sp.sample(1000, rng), sp.sample(1000, rng))
        assert d.max() <= np.pi / 2 + 1e-12


def test_uniform_sample_properties():
    pts = np.array([p.coords for p in uniform_sample(2, 100_000, 9)])
    assert np.abs(pts.mean(axis=0)).max() < 0.02
    a = [p.coords for p in uniform_sample(3, 10, 4)]
    b = [p.coords for p in uniform_sample(3, 10, 4)]
    assert all(np.array_equal(u, v) for u, v in zip(a, b))
    with pytest.raises(ValueError):
        uniform_sample(2, 0, 0)


def test_ip_classifier():
    x, y = uniform_sample(3, 2, 8)
    assert classify_ip(ip(x, x)) == "D"
    assert classify_ip(ip(x, -x)) == "A"
    e1, e2 = SpherePoint(np.eye(4)[0]), SpherePoint(np.eye(4)[1])
    assert classify_ip(ip(e1, e2)) == "U"
    assert Stiefel(4).residual(np.concatenate([e1.coords, e2.coords])) < 1e-15
    assert classify_ip(ip(x, y)) == classify_ip(ip(y, x))


def test_tangent_project():
    x = uniform_sample(3, 1, 3)[0]
    assert np.abs(tangent_project(x, 2.5 * x.coords)).max() < 1e-15
    v = tangent_project(x, np.ones(4))
    assert abs(v @ x.coords) < 1e-15
    assert np.allclose(tangent_project(x, v), v)


def test_diagonal_is_round_sphere_of_radius_sqrt2():
    d = Diagonal(3)
    rng = np.random.default_rng(0)
    a, b = d.sample(1000, rng), d.sample(1000, rng)
    prod = Product(Sphere(3), Sphere(3)).distance(a, b)
    closed = np.sqrt(2) * np.arccos(np.clip(np.sum(a[:, :4] * b[:, :4], axis=1), -1, 1))
    assert np.abs(prod - closed).max() < 1e-9
    assert np.abs(d.distance(a, b) - closed).max() < 1e-9


SPACES = [Sphere(2), Sphere(3, 0.5), Product(Sphere(2), Sphere(3)), Diagonal(2), Stiefel(4),
          ProjectiveSpace(2), ProjectiveSpace(1, "quaternionic"), Grassmann24()]


@pytest.mark.parametrize("space", SPACES, ids=repr)
def test_tangent_frames_orthonormal(space):
    x = space.sample(50, np.random.default_rng(1))
    assert space.residual(x).max() < 1e-12
    f = tangent_frames(space, x)
    assert f.shape == (50, space.dim, space.ambient_dim)
    gram = np.einsum("bkn,bln->bkl", f, f)
    assert np.abs(gram - np.eye(space.dim)).max() < 1e-10
    proj = space.projector(x)
    assert np.abs(np.einsum("bmn,bkn->bkm", proj, f) - f).max() < 1e-10
    single = tangent_frame(space, x[0])
    assert single.orthonormality_residual() < 1e-10


@pytest.mark.parametrize("space", SPACES, ids=repr)
def test_space_serialisation(space):
    assert space_from_dict(space.to_dict()) == space


def test_stiefel_distance_bounds():
    st_ = Stiefel(4)
    rng = np.random.default_rng(6)
    a, b = st_.sample(20, rng), st_.sample(20, rng)
    assert (st_.distance_upper(a, b) >= st_.distance(a, b) - 1e-15).all()


def test_arc_is_accurate_near_zero():
    a = np.array([1.0, 0, 0])
    b = np.array([np.cos(1e-9), np.sin(1e-9), 0])
    assert abs(arc(a, b) - 1e-9) < 1e-20
