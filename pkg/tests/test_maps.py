import numpy as np
import pytest

from hopflip.algebra import qconj, qmul, random_ocs, random_rotation
from hopflip.manifolds import Sphere, tangent_frames
from hopflip.maps import (
    BumpPerturb,
    Constant,
    DiagonalInclusion,
    DomainError,
    HopfComplex,
    HopfOctonionic,
    HopfQuaternionic,
    HopfVectorField,
    Identity,
    IsometryConjugate,
    PowerPrecompose,
    StiefelPluecker,
    StiefelQuat,
    Suspension,
    builtin_map,
    bump_perturb,
    differential,
    jacobians,
    map_from_dict,
    power_precompose,
    singular_values,
    suspend,
)
from hopflip.verify import build_profile, profile_sphere_map

FAMILIES = [
    HopfComplex(1), HopfComplex(2), HopfComplex(1, "projective"), HopfQuaternionic(1), HopfQuaternionic(2),
    HopfOctonionic(), DiagonalInclusion(3), HopfVectorField(random_ocs(6, 2)), StiefelPluecker(), StiefelQuat(),
    PowerPrecompose(HopfComplex(1), 2), PowerPrecompose(HopfComplex(1), -3), PowerPrecompose(HopfComplex(1), 0),
    Suspension(HopfComplex(1)), Suspension(DiagonalInclusion(2)), Identity(Sphere(4)),
    IsometryConjugate(HopfComplex(1), random_rotation(4, 1), random_rotation(3, 2)),
    bump_perturb(HopfComplex(1), amplitude=0.2), profile_sphere_map(build_profile(), 3),
]


def test_hopf_at_first_axis():
    assert np.allclose(HopfComplex(1)(np.array([1.0, 0, 0, 0])), [0, 0, 0.5])


def test_hopf_constant_on_circles():
    h = HopfComplex(1)
    x = Sphere(3).sample(200, np.random.default_rng(0))
    z = (x[:, 0::2] + 1j * x[:, 1::2]) * np.exp(0.83j)
    rot = np.stack([z[:, 0].real, z[:, 0].imag, z[:, 1].real, z[:, 1].imag], axis=1)
    assert np.abs(h(x) - h(rot)).max() < 1e-15


def test_stiefel_quat_identity():
    rng = np.random.default_rng(1)
    x = rng.standard_normal((100, 4))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    u = rng.standard_normal((100, 4))
    u[:, 0] = 0
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    out = StiefelQuat()(np.concatenate([x, qmul(u, x)], axis=1))
    want = np.concatenate([u[:, 1:], qmul(qmul(qconj(x), u), x)[:, 1:]], axis=1)
    assert np.abs(out - want).max() < 1e-12


def test_domain_violations():
    with pytest.raises(DomainError):
        HopfComplex(1)(np.array([1.0, 1.0, 0, 0]))
    with pytest.raises(DomainError):
        HopfComplex(1)(np.array([1.0, 0, 0]))


@pytest.mark.parametrize("m", FAMILIES, ids=lambda m: m.family)
def test_codomain_invariant(m):
    x = m.domain.sample(10_000, np.random.default_rng(7))
    assert m.codomain.residual(m(x)).max() < 1e-12


@pytest.mark.parametrize("m", FAMILIES, ids=lambda m: m.family)
def test_serialisation_round_trip(m):
    x = m.domain.sample(20, np.random.default_rng(3))
    assert np.array_equal(map_from_dict(m.to_dict())(x), m(x))


def _hopf_jacobian(x):
    x0, x1, x2, x3 = x
    return np.array([[x2, x3, x0, x1], [-x3, x2, x1, -x0], [x0, x1, -x2, -x3]])


def test_hopf_differential_against_analytic_jacobian():
    h = HopfComplex(1)
    xs = Sphere(3).sample(10, np.random.default_rng(4))
    d, dom, cod, _ = jacobians(h, xs)
    for i, x in enumerate(xs):
        exact = cod[i] @ _hopf_jacobian(x) @ dom[i].T
        assert np.abs(exact - d[i]).max() < 1e-8
        assert np.allclose(np.linalg.svd(exact, compute_uv=False), [1, 1], atol=1e-12)


@pytest.mark.parametrize("m, want", [
    (HopfComplex(1), [1, 1]),
    (HopfComplex(2), [1, 1, 1, 1]),
    (HopfQuaternionic(1), [1, 1, 1, 1]),
    (HopfOctonionic(), [1] * 8),
    (DiagonalInclusion(3), [1, 1, 1]),
    (HopfVectorField(random_ocs(4, 5)), [np.sqrt(2)] * 3),
    (StiefelQuat(), [np.sqrt(2)] * 4),
    (StiefelPluecker(), [1] * 4),
    (Suspension(HopfComplex(1)), [1, 1, 0.5]),
], ids=lambda v: getattr(v, "family", ""))
def test_singular_values(m, want):
    s = singular_values(m, m.domain.sample(50, np.random.default_rng(2)))
    assert np.abs(s - np.array(want)).max() < 1e-6


def test_differential_frames_and_step_range():
    m = HopfComplex(1)
    x = np.array([0.5, 0.5, 0.5, 0.5])
    d, f_dom, f_cod = differential(m, x)
    assert d.shape == (2, 3)
    assert f_dom.orthonormality_residual() < 1e-10 and f_cod.orthonormality_residual() < 1e-10
    assert np.abs(f_dom.basis @ x).max() < 1e-12
    with pytest.raises(ValueError):
        differential(m, x, h=1e-2)


def test_isometry_conjugate_preserves_spectra():
    m = HopfQuaternionic(1)
    g, k = random_rotation(8, 1), random_rotation(5, 2)
    c = IsometryConjugate(m, g, k)
    x = m.domain.sample(30, np.random.default_rng(8))
    s1 = singular_values(m, x)
    s2 = singular_values(c, x @ g.T)
    assert np.abs(s1 - s2).max() < 1e-8


def test_suspension_examples():
    ident = Suspension(Identity(Sphere(2)))
    x = Sphere(3).sample(100, np.random.default_rng(0))
    assert np.abs(ident(x) - x).max() < 1e-15
    m = suspend(HopfComplex(1))
    assert np.allclose(m(np.array([0, 0, 0, 0, 1.0])), [0, 0, 0, 0.5])
    assert np.allclose(m(np.array([0, 0, 0, 0, -1.0])), [0, 0, 0, -0.5])
    eq = np.concatenate([x, np.zeros((100, 1))], axis=1)
    assert np.abs(m(eq)[:, :3] - HopfComplex(1)(x)).max() < 1e-12


def test_suspension_commutes_with_pole_fixing_rotations():
    m = HopfComplex(1)
    g, k = random_rotation(4, 3), random_rotation(3, 4)
    gg, kk = np.eye(5), np.eye(4)
    gg[:4, :4], kk[:3, :3] = g, k
    lhs = Suspension(IsometryConjugate(m, g, k))
    rhs = IsometryConjugate(Suspension(m), gg, kk)
    x = lhs.domain.sample(500, np.random.default_rng(5))
    assert np.abs(lhs(x) - rhs(x)).max() < 1e-10


def test_suspension_rejects_bad_codomain():
    with pytest.raises(ValueError):
        Suspension(StiefelQuat())


def test_power_examples():
    x = Sphere(3).sample(100, np.random.default_rng(1))
    assert np.abs(power_precompose(HopfComplex(1), 1)(x) - HopfComplex(1)(x)).max() < 1e-15
    image = power_precompose(HopfComplex(1), 0)(x)
    assert image[:, 2].max() <= 1e-15


def test_bump_examples():
    h = HopfComplex(1)
    x = Sphere(3).sample(100, np.random.default_rng(2))
    assert np.array_equal(bump_perturb(h, amplitude=0.0)(x), h(x))
    b = bump_perturb(h, amplitude=0.1, width=0.5)
    far = x[np.arccos(np.clip(x @ b.center, -1, 1)) > 0.5]
    assert len(far) > 50
    assert np.abs(b(far) - h(far)).max() < 1e-15
    with pytest.raises(ValueError):
        BumpPerturb(h, [1, 0, 0, 0], 1.5, 0.5)


def test_constant_map():
    c = Constant(Sphere(3), Sphere(2, 0.5), [0, 0, 0.5])
    assert np.allclose(c(Sphere(3).sample(3, 0)), [0, 0, 0.5])
    with pytest.raises(ValueError):
        Constant(Sphere(3), Sphere(2, 0.5), [0, 0, 1.0])


@pytest.mark.parametrize("name, family", [
    ("hopf", "hopf_complex"), ("hopf(2)", "hopf_complex"), ("hopf-quat", "hopf_quaternionic"),
    ("hopf-oct", "hopf_octonionic"), ("diagonal(3)", "diagonal_inclusion"), ("hopf-vf", "hopf_vector_field"),
    ("stiefel-quat", "stiefel_quat"), ("stiefel-pluecker", "stiefel_pluecker"), ("power(-2)", "power_precompose"),
    ("bump(0.1, 0.5)", "bump_perturb"), ("suspend(hopf)", "suspension"), ("suspend(suspend(hopf))", "suspension"),
])
def test_builtin_names(name, family):
    assert builtin_map(name).family == family


def test_builtin_rejects_unknown():
    with pytest.raises(ValueError):
        builtin_map("nope")
    with pytest.raises(ValueError):
        builtin_map("power()")


def test_frames_for_codomains():
    m = HopfComplex(2)
    y = m(m.domain.sample(5, 0))
    f = tangent_frames(m.codomain, y)
    assert f.shape == (5, 4, 6)
