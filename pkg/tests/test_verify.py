import json

import numpy as np
import pytest

from hopflip.algebra import HODGE_BASIS, random_ocs, random_rotation, standard_ocs
from hopflip.linking import base_point
from hopflip.manifolds import Sphere
from hopflip.maps import DiagonalInclusion, HopfComplex, Identity, IsometryConjugate, bump_perturb
from hopflip.verify import (
    CHECKS,
    Profile,
    build_profile,
    combine,
    fixed_points,
    key_lemma_search,
    profile_sphere_map,
    report,
    theorem_c_checks,
    theorem_d_checks,
    verify_diagonal,
    verify_great_circle_fibers,
    verify_key_lemma,
    verify_lemma_f,
    verify_parallel_fibers,
    verify_sasaki_lengths,
    verify_suspension,
    verify_torus,
)

HOPF = HopfComplex(1)


def sub_report(rep, name):
    (sub,) = [d for d in rep.details if d.check == name]
    return sub


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

def test_report_pass_iff_below_tolerance():
    assert report("x", 0.5, 1.0).passed
    assert not report("x", 1.0, 1.0).passed
    assert not report("x", np.nan, 1.0).passed
    assert report("x", 2.0, 1.0, inconclusive=True).status == "inconclusive"
    assert report("x", 0.0, 1.0, inconclusive=True).status == "pass"


def test_combine():
    good, bad = report("a", 1e-13, 1e-12), report("b", 3e-6, 1e-6)
    rep = combine("both", [good, bad])
    assert not rep.passed and rep.status == "fail"
    assert abs(rep.residual - 3.0) < 1e-12
    assert combine("one", [good]).passed
    assert combine("maybe", [good, report("c", 2, 1, inconclusive=True)]).status == "inconclusive"


def test_report_json_is_stable():
    rep = combine("c", [report("a", 0.1, 1.0, {"v": np.arange(3.0)}), report("b", np.inf, 1.0)])
    text = rep.to_json()
    assert text == rep.to_json()
    data = json.loads(text)
    assert set(data) == {"check", "status", "passed", "residual", "tolerance", "params", "provenance", "details"}
    assert data["residual"] == "inf"


# ---------------------------------------------------------------------------
# fibre geometry
# ---------------------------------------------------------------------------

def test_great_circles_on_hopf():
    rep = verify_great_circle_fibers(HOPF, count=4, seed=1)
    assert rep.passed and rep.residual < 1e-8


def test_great_circles_on_conjugate():
    m = IsometryConjugate(HOPF, random_rotation(4, 5), random_rotation(3, 6))
    assert verify_great_circle_fibers(m, count=3, seed=2).passed


def test_great_circles_fail_for_bump():
    m = bump_perturb(HOPF, amplitude=0.2)
    rep = verify_great_circle_fibers(m, [HOPF(m.center)], seed=0)
    assert not rep.passed and rep.residual > 1e-2


def test_parallel_on_hopf():
    rep = verify_parallel_fibers(HOPF, count=3, seed=4)
    assert rep.passed and rep.residual < 1e-6


def test_antipodal_fibres_are_orthogonal():
    y = base_point(0.7, 0.1)
    rep = verify_parallel_fibers(HOPF, [(y, -y)])
    assert rep.passed
    (row,) = rep.params["pairs"]
    assert abs(row["min"] - np.pi / 2) < 1e-9 and abs(row["max"] - np.pi / 2) < 1e-9


def test_parallel_fails_for_bump():
    m = bump_perturb(HOPF, amplitude=0.2)
    y = HOPF(m.center)
    rep = verify_parallel_fibers(m, [(y, base_point(2.5, 1.0))])
    assert not rep.passed


def test_torus_on_hopf():
    rep = verify_torus(HOPF, alpha=0.4, seed=3)
    assert rep.passed and rep.residual < 1e-6
    with pytest.raises(ValueError):
        verify_torus(HOPF, alpha=2.0)


# ---------------------------------------------------------------------------
# key lemma
# ---------------------------------------------------------------------------

def test_key_lemma_identity():
    ident = Identity(Sphere(2))
    r = key_lemma_search(ident, ident, starts=20, seed=0)
    assert r.residual < 1e-10
    assert np.abs(r.u + r.v).max() < 1e-5


def test_key_lemma_two_rotations():
    f1 = IsometryConjugate(Identity(Sphere(2)), None, random_rotation(3, 1))
    f2 = IsometryConjugate(Identity(Sphere(2)), None, random_rotation(3, 2))
    r = key_lemma_search(f1, f2, starts=50, seed=0)
    assert r.residual < 1e-8
    # rotations are odd, so any antipodal pair is a solution
    u = Sphere(2).sample(1, 0)[0]
    assert np.abs(f1(u) + f1(-u)).max() < 1e-15


def test_key_lemma_rotation_and_bump():
    f1 = IsometryConjugate(Identity(Sphere(2)), None, random_rotation(3, 3))
    f2 = bump_perturb(Identity(Sphere(2)), center=[0, 0, 1.0], amplitude=0.5, width=1.0)
    r = key_lemma_search(f1, f2, starts=200, seed=0)
    assert r.residual < 1e-6


def test_key_lemma_rejects_mismatched_spheres():
    with pytest.raises(ValueError):
        key_lemma_search(Identity(Sphere(2)), Identity(Sphere(3)))


def test_verify_key_lemma_small():
    rep = verify_key_lemma(seed=3, count=5)
    assert rep.passed, [d.residual for d in rep.details]
    assert len(rep.details) == 5


# ---------------------------------------------------------------------------
# profile map
# ---------------------------------------------------------------------------

def test_profile_examples():
    p = build_profile()
    assert p(1 / 3) == pytest.approx(2 / 3, abs=1e-15)
    assert np.allclose(p.slopes(), [2.0, 0.5])
    assert p.symmetry_residual(10_001) < 1e-12
    assert p(0.0) == 0.0 and p(1.0) == 1.0


def test_profile_rejects_bad_breakpoints():
    with pytest.raises(ValueError):
        Profile((0.0, 0.5, 1.0), (0.0, 0.7, 0.6))
    with pytest.raises(ValueError):
        Profile((0.0, 1.0), (0.1, 1.0))


def test_non_symmetric_profile_detected():
    assert Profile((0.0, 0.5, 1.0), (0.0, 0.7, 1.0)).symmetry_residual() > 1e-3


def test_profile_sphere_map():
    F = profile_sphere_map(build_profile(), 2)
    assert np.allclose(F(np.array([0, 0, 1.0])), [0, 0, 1.0])
    assert np.allclose(F(np.array([0, 0, -1.0])), [0, 0, -1.0])
    xs = Sphere(2).sample(1000, 0)
    assert np.abs(-F(-F(xs)) - xs).max() < 1e-10
    fps = fixed_points(F)
    assert len(fps) >= 1
    assert all(abs(abs(f[-1]) - 1) < 1e-9 for f in fps)


def test_verify_lemma_f():
    rep = verify_lemma_f()
    assert rep.passed
    assert sub_report(rep, "symmetry").residual < 1e-12
    assert sub_report(rep, "displacement-outside-caps").params["min_displacement"] > 0.05


# ---------------------------------------------------------------------------
# diagonal, suspension, Hopf vector fields, Stiefel quotient
# ---------------------------------------------------------------------------

def test_verify_diagonal():
    assert verify_diagonal(2).passed
    assert verify_diagonal(3, seed=4).passed


@pytest.mark.parametrize("m", [HOPF, DiagonalInclusion(2), Identity(Sphere(3))], ids=lambda m: m.family)
def test_verify_suspension(m):
    assert verify_suspension(m).passed


def test_theorem_c_standard_structure():
    rep = theorem_c_checks(standard_ocs(4))
    assert rep.passed
    assert all(d.residual < 1e-10 for d in rep.details)


def test_theorem_c_random_structures():
    assert theorem_c_checks(random_ocs(6, 1), random_ocs(6, 2)).passed


def test_theorem_c_negative_control():
    rng = np.random.default_rng(0)
    sym = rng.standard_normal((4, 4))
    bad = standard_ocs(4).matrix + 0.01 * (sym + sym.T)
    rep = theorem_c_checks(bad)
    assert not rep.passed
    assert not sub_report(rep, "a-unit-tangent").passed


def test_theorem_d():
    rep = theorem_d_checks(seed=7)
    assert rep.passed
    for d in rep.details:
        limit = 1e-5 if d.check == "d-spectral" else 1e-10
        assert d.residual < limit, d.check


def test_theorem_d_corrupted_hodge():
    bad = HODGE_BASIS.copy()
    bad[0] = -bad[3]
    rep = theorem_d_checks(seed=1, hodge=bad, spectral_samples=200)
    assert not sub_report(rep, "c-equal-projections").passed


def test_sasaki_lengths():
    rep = verify_sasaki_lengths()
    assert rep.passed and rep.residual < 1


def test_check_names():
    assert len(CHECKS) == 8 and "sasaki-lengths" in CHECKS
