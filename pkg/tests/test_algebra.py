import io
import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from hopflip.algebra import (
    HODGE_BASIS,
    HODGE_STAR,
    Bivector4,
    Octonion,
    OrthogonalComplexStructure,
    Quaternion,
    apply_ocs,
    complex_basis,
    load_octonion_table,
    oct_mul,
    octonion_table,
    ocs_conjugator,
    omul,
    qmul,
    quat_mul,
    random_ocs,
    standard_ocs,
    wedge,
    write_octonion_table,
)

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
quat = arrays(float, 4, elements=finite)
octo = arrays(float, 8, elements=finite)


def test_quaternion_units():
    i, j, k = Quaternion(0, 1, 0, 0), Quaternion(0, 0, 1, 0), Quaternion(0, 0, 0, 1)
    assert quat_mul(i, j) == k
    assert (i * j) * k == Quaternion(-1, 0, 0, 0)
    assert i * (j * k) == Quaternion(-1, 0, 0, 0)


def test_quaternion_identity_and_inverse():
    q = Quaternion(0.3, -1.2, 0.5, 2.0)
    assert Quaternion(1, 0, 0, 0) * q == q
    prod = (q * q.inverse()).to_array()
    assert np.allclose(prod, [1, 0, 0, 0], atol=1e-15)


@given(quat, quat)
def test_quaternion_norm_multiplicative(a, b):
    assert abs(np.linalg.norm(qmul(a, b)) - np.linalg.norm(a) * np.linalg.norm(b)) <= 1e-12 * max(
        1.0, np.linalg.norm(a) * np.linalg.norm(b))


@given(quat, quat, quat)
def test_quaternion_associative(a, b, c):
    lhs, rhs = qmul(qmul(a, b), c), qmul(a, qmul(b, c))
    scale = max(1.0, np.linalg.norm(a) * np.linalg.norm(b) * np.linalg.norm(c))
    assert np.abs(lhs - rhs).max() <= 1e-12 * scale


@given(octo, octo)
def test_octonion_norm_multiplicative(a, b):
    scale = max(1.0, np.linalg.norm(a) * np.linalg.norm(b))
    assert abs(np.linalg.norm(omul(a, b)) - np.linalg.norm(a) * np.linalg.norm(b)) <= 1e-12 * scale


@given(octo, octo)
def test_octonion_alternative_law(a, b):
    lhs, rhs = omul(omul(a, a), b), omul(a, omul(a, b))
    scale = max(1.0, np.linalg.norm(a) ** 2 * np.linalg.norm(b))
    assert np.abs(lhs - rhs).max() <= 1e-12 * scale


def test_octonion_basis_products():
    e = [Octonion.basis(i) for i in range(8)]
    assert oct_mul(e[1], e[2]) == e[3]
    o = Octonion(np.arange(8.0))
    assert e[0] * o == o


def test_octonions_not_associative():
    eye = np.eye(8)
    bad = [(i, j, k) for i, j, k in itertools.product(range(1, 8), repeat=3)
           if not np.allclose(omul(omul(eye[i], eye[j]), eye[k]), omul(eye[i], omul(eye[j], eye[k])))]
    assert bad
    assert (1, 2, 4) in bad


def test_octonion_table_matches_golden_file():
    assert load_octonion_table() == octonion_table()
    buf = io.StringIO()
    write_octonion_table(buf)
    assert load_octonion_table(buf.getvalue()) == octonion_table()


def test_golden_table_entries():
    table = load_octonion_table()
    assert table[1][2] == (1, 3)
    assert all(table[i][i] == (-1, 0) for i in range(1, 8))
    assert all(table[0][j] == (1, j) for j in range(8))
    # distinct imaginary units anticommute
    for i, j in itertools.permutations(range(1, 8), 2):
        s1, k1 = table[i][j]
        s2, k2 = table[j][i]
        assert k1 == k2 and s1 == -s2


@pytest.mark.parametrize("seed", range(5))
def test_random_ocs_dim2_is_quarter_turn(seed):
    J = random_ocs(2, seed).matrix
    quarter = np.array([[0.0, -1.0], [1.0, 0.0]])
    assert min(np.abs(J - quarter).max(), np.abs(J + quarter).max()) < 1e-12


def test_random_ocs_invariants_and_construction():
    J = random_ocs(4, 1)
    assert np.abs(J.matrix @ J.matrix + np.eye(4)).max() < 1e-12
    assert np.abs(J.matrix.T @ J.matrix - np.eye(4)).max() < 1e-12
    R = J.rotation
    assert np.abs(R.T @ J.matrix @ R - standard_ocs(4).matrix).max() < 1e-12


@given(st.integers(0, 10_000), st.sampled_from([2, 4, 6, 8]))
@settings(max_examples=30)
def test_ocs_invariants_any_seed(seed, dim):
    J = random_ocs(dim, seed)
    assert J.invariant_residual() < 1e-12
    x = np.random.default_rng(seed).standard_normal((20, dim))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    assert np.abs(np.sum(x * J(x), axis=1)).max() < 1e-12


def test_random_ocs_rejects_odd_dim():
    with pytest.raises(ValueError):
        random_ocs(3, 0)
    with pytest.raises(ValueError):
        OrthogonalComplexStructure(4, np.eye(4))


def test_apply_ocs_examples():
    J0 = standard_ocs(4)
    assert np.allclose(apply_ocs(J0, [1, 0, 0, 0]), [0, 1, 0, 0])
    J = random_ocs(4, 3)
    x = np.random.default_rng(0).standard_normal((100, 4))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    jx = apply_ocs(J, x)
    assert np.abs(np.sum(x * jx, axis=1)).max() < 1e-12
    assert np.abs(np.linalg.norm(jx, axis=1) - 1).max() < 1e-12
    assert np.abs(apply_ocs(J, jx) + x).max() < 1e-12
    with pytest.raises(ValueError):
        apply_ocs(J, np.ones(6))


@pytest.mark.parametrize("dim", [2, 4, 6, 8])
def test_structures_conjugate(dim):
    J, K = random_ocs(dim, 11), random_ocs(dim, 12)
    B = complex_basis(J)
    assert np.abs(B.T @ B - np.eye(dim)).max() < 1e-12
    assert np.abs(B @ standard_ocs(dim).matrix @ B.T - J.matrix).max() < 1e-12
    g = ocs_conjugator(J, K)
    assert np.abs(g.T @ g - np.eye(dim)).max() < 1e-12
    assert np.abs(g @ J.matrix @ g.T - K.matrix).max() < 1e-12


def test_ocs_serialisation_round_trip():
    J = random_ocs(6, 4)
    back = OrthogonalComplexStructure.from_dict(J.to_dict())
    assert np.array_equal(back.matrix, J.matrix)


def test_hodge_basis_diagonalises_star():
    assert np.abs(HODGE_BASIS @ HODGE_BASIS.T - np.eye(6)).max() < 1e-15
    d = HODGE_BASIS @ HODGE_STAR @ HODGE_BASIS.T
    assert np.abs(d - np.diag([1, 1, 1, -1, -1, -1])).max() < 1e-15


def test_e12_projections():
    b = Bivector4.from_vectors([1, 0, 0, 0], [0, 1, 0, 0])
    plus, minus = b.split()
    assert abs(np.linalg.norm(plus) - 1 / np.sqrt(2)) < 1e-15
    assert abs(np.linalg.norm(minus) - 1 / np.sqrt(2)) < 1e-15


@given(arrays(float, 4, elements=finite), arrays(float, 4, elements=finite))
def test_wedge_decomposable(x, y):
    b = Bivector4(wedge(x, y))
    assert b.is_decomposable()
    plus, minus = b.split()
    scale = max(1.0, b.norm())
    assert abs(np.linalg.norm(plus) - np.linalg.norm(minus)) <= 1e-12 * scale


def test_projection_gap_is_pfaffian():
    rng = np.random.default_rng(3)
    for _ in range(50):
        b = Bivector4(rng.standard_normal(6))
        plus, minus = b.split()
        assert abs(plus @ plus - minus @ minus - 2 * b.pfaffian()) < 1e-12
