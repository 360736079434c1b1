"""Acceptance criteria, one group of checks per criterion.

The terminal summary prints a PASS/FAIL line per criterion (see conftest.py).
A criterion that cannot be met as written is kept as a strict xfail so that
it shows up as FAIL in that summary instead of silently passing.
"""

import json
import time

import numpy as np
import pytest
import sympy as sp
from conftest import TRIG_SEEDS
from helpers import a2_points, batch_verdicts, integer_summary, random_sigma

from frontindex import domains
from frontindex.cli import main
from frontindex.indexcheck import (
    gauss_degree,
    poincare_hopf,
    random_torus_field,
    sphere_height_gradient,
    verify_front_formula,
    verify_morin_map_formula,
    verify_parallel_formula,
)
from frontindex.morin import (
    FrontHomomorphism,
    MapHomomorphism,
    ScaledDensity,
    classify_point,
    height_model,
    lambda_cascade,
    tolerances_for,
    torus_cover,
    torus_fold_map,
)
from frontindex.strata import stratify
from frontindex.surfaces import (
    BlaschkeFront,
    BumpyBody,
    LinearImage,
    ParallelFront,
    RotationalGamma,
    RoundSphere,
    SwallowtailPatch,
    Torus,
    blaschke_normal,
)

CRITERIA = {
    1: "unit sphere sanity",
    2: "swallowtail normal form",
    3: "rotational body at epsilon = 17/80, Blaschke normal map",
    4: "parallel fronts of a bumpy convex body",
    5: "Morin maps between tori",
    6: "property suites",
}

MIN_TRIALS = 20
PARALLEL_T = (-1.0383, -1.0202, -1.0022)

U, V = sp.symbols("u v")
SWALLOWTAIL_LAM = 2 * (6 * U**2 + V) * sp.sqrt(1 + U**2 + U**4)


def symbolic_cascade(u0, v0, k=2):
    # the null field of the normal form is d/du, so the cascade is d^j lam / du^j
    return [float(sp.diff(SWALLOWTAIL_LAM, U, j).subs({U: u0, V: v0})) for j in range(k + 1)]


# 1 -------------------------------------------------------------------------------


@pytest.mark.criterion(1)
def test_unit_sphere():
    t0 = time.perf_counter()
    fr = verify_front_formula(RoundSphere(1.0), 256)
    elapsed = time.perf_counter() - t0
    assert (fr.lhs, fr.rhs, fr.residual) == (2, 2, 0)
    assert fr.rhs == fr.chi_plus == 2
    assert abs(fr.degree.raw - 1.0) < 1e-6
    assert elapsed < 5.0


# 2 -------------------------------------------------------------------------------


@pytest.fixture(scope="module")
def swallowtail():
    hom = FrontHomomorphism(SwallowtailPatch())
    return hom, tolerances_for(hom, 256)


@pytest.mark.criterion(2)
def test_swallowtail_origin(swallowtail):
    hom, tol = swallowtail
    res = classify_point(hom, (0.0, 0.0), tol)
    assert res.verdict == "A3+" and res.sign == 1
    np.testing.assert_allclose(res.cascade.values, (0.0, 0.0, 24.0), rtol=0, atol=1e-8)
    np.testing.assert_allclose(res.cascade.values, symbolic_cascade(0.0, 0.0), rtol=0, atol=1e-8)


@pytest.mark.criterion(2)
def test_swallowtail_fold_point_against_closed_form(swallowtail):
    hom, tol = swallowtail
    res = classify_point(hom, (0.1, -0.06), tol)
    assert res.verdict == "A2"
    oracle = symbolic_cascade(0.1, -0.06, 1)
    assert abs(res.cascade.values[1] - oracle[1]) < 1e-6
    np.testing.assert_allclose(lambda_cascade(hom, (0.1, -0.06), 2, tol).values, symbolic_cascade(0.1, -0.06), atol=1e-8)


@pytest.mark.criterion(2)
@pytest.mark.xfail(
    strict=True,
    reason="2.4012 is not 24 u sqrt(1 + u^2 + u^4) at u = 0.1, which is 2.4120896; the gap 1.1e-2 is far above 1e-6",
)
def test_swallowtail_fold_point_literal_value(swallowtail):
    hom, tol = swallowtail
    res = classify_point(hom, (0.1, -0.06), tol)
    assert abs(res.cascade.values[1] - 2.4012) < 1e-6


# 3 -------------------------------------------------------------------------------


@pytest.mark.criterion(3)
@pytest.mark.slow
def test_blaschke_rotational_example(tmp_path, monkeypatch):
    for var in ("FRONTINDEX_GRID", "FRONTINDEX_EPS_SING", "FRONTINDEX_ORACLE"):
        monkeypatch.delenv(var, raising=False)
    cfg = tmp_path / "blaschke.cfg"
    cfg.write_text("scenario=blaschke family=rotational_gamma epsilon=0.2125 grid=512\n")
    out = tmp_path / "out"
    t0 = time.perf_counter()
    code = main(["run", str(cfg), "--out", str(out), "--plots"])
    elapsed = time.perf_counter() - t0
    report = json.loads((out / "report.json").read_text())
    (fr,) = report["formulas"]
    assert code == 0
    assert (fr["a3_plus"], fr["a3_minus"]) == (0, 0)
    assert fr["chi_m_minus"] == 0 and fr["residual"] == 0
    regions = fr["strata"]["regions"]
    minus = [c for c in regions["components"] if c["sign"] < 0]
    assert len(minus) == 1
    # a strip: an annulus bounded by the two latitude fold circles
    assert (minus[0]["euler_char"], minus[0]["boundary_loops"]) == (0, 2)
    assert regions["resolution"] == 512
    assert (out / "xi_profile.svg").stat().st_size > 0
    assert (out / "gamma_profile.svg").stat().st_size > 0
    assert len(report["profile"]["cusps"]) == 4
    assert elapsed < 60.0


# 4 -------------------------------------------------------------------------------


@pytest.mark.criterion(4)
@pytest.mark.parametrize("t", PARALLEL_T)
def test_parallel_bumpy_body(t):
    base = BumpyBody(seed=2)
    t0 = time.perf_counter()
    fr = verify_parallel_formula(base, t, 256, oracle=True, seed=0)
    deg = gauss_degree(ParallelFront(base, t), 256, oracle=True, oracle_values=10, seed=1)
    elapsed = time.perf_counter() - t0
    assert fr.strata.curves, "t should lie in the singular regime"
    assert fr.residual == 0
    assert fr.details["lambda_k_max_error"] < 1e-8
    assert fr.details["regular_samples"] > 10_000
    assert fr.degree.degree == 1 and fr.degree.preimage_count == 1
    assert deg.degree == 1 and deg.preimage_values == [1] * 10
    assert elapsed < 90.0


# 5 -------------------------------------------------------------------------------


@pytest.mark.criterion(5)
def test_torus_fold_map():
    fr = verify_morin_map_formula(torus_fold_map(1.5), 256, oracle=True)
    assert fr.residual == 0
    assert len(fr.strata.curves) == 2
    assert fr.a3_plus == fr.a3_minus == 0


@pytest.mark.criterion(5)
def test_torus_covering():
    fr = verify_morin_map_formula(torus_cover(2), 256, oracle=True)
    assert fr.residual == 0
    assert fr.strata.curves == [] and fr.strata.a3_points == []
    assert fr.degree.degree == fr.degree.preimage_count == 2


# 6 -------------------------------------------------------------------------------


@pytest.mark.criterion(6)
def test_suite_eta_flip(trig_strata):
    trials = 0
    for seed in TRIG_SEEDS:
        field, st = trig_strata[seed]
        for a in st.a3_points:
            signs = {
                classify_point(field, a.point, st.tolerances, column=col, flip=flip).sign
                for col in (0, 1)
                for flip in (False, True)
            }
            assert signs == {a.sign}
            trials += 1
    assert trials >= MIN_TRIALS


@pytest.mark.criterion(6)
def test_suite_phi_scaling(trig_strata):
    trials = 0
    for seed in TRIG_SEEDS:
        field, st = trig_strata[seed]
        rng = np.random.default_rng(7000 + seed)
        pts = [a.point for a in st.a3_points] + a2_points(st.curves, 4)
        pts += list(zip(rng.uniform(0, 2 * np.pi, 6), rng.uniform(0, 2 * np.pi, 6)))
        codes, signs = batch_verdicts(field, pts, st.tolerances)
        scaled = ScaledDensity(field, random_sigma(rng))
        c2, s2 = batch_verdicts(scaled, pts, tolerances_for(scaled, 96))
        np.testing.assert_array_equal(c2, codes)
        np.testing.assert_array_equal(s2, signs)
        trials += 1
    assert trials >= MIN_TRIALS


@pytest.mark.criterion(6)
def test_suite_chi_split(trig_strata):
    cases = [(st, 0) for _, st in trig_strata.values()]
    cases.append((stratify(height_model(), 64), 2))
    cases.append((stratify(FrontHomomorphism(ParallelFront(BumpyBody(seed=2), -1.0202)), 256), 2))
    cases.append((stratify(FrontHomomorphism(Torus()), 128), 0))
    assert len(cases) >= MIN_TRIALS
    for st, chi in cases:
        assert st.complex.chi_plus + st.complex.chi_minus == chi


@pytest.mark.criterion(6)
@pytest.mark.xfail(
    strict=True,
    reason="closed singular curves whose null line is non-orientable carry an odd number of A3 points",
)
def test_suite_even_a3_per_closed_component(trig_strata):
    for seed in TRIG_SEEDS:
        _, st = trig_strata[seed]
        for c, n in zip(st.curves, st.a3_per_curve()):
            if c.closed:
                assert n % 2 == 0, f"seed {seed}: {n} A3 points on a closed curve"


@pytest.mark.criterion(6)
def test_suite_a3_parity_matches_null_line_orientation(trig_strata):
    curves = 0
    for seed in TRIG_SEEDS:
        _, st = trig_strata[seed]
        for c, n in zip(st.curves, st.a3_per_curve()):
            assert n % 2 == int(c.gauge_flip)
            curves += 1
    assert curves >= MIN_TRIALS


@pytest.mark.criterion(6)
def test_suite_poincare_hopf():
    for k in range(MIN_TRIALS):
        r = poincare_hopf(random_torus_field(np.random.default_rng(k)), domains.TORUS)
        assert r.sum == 0
        assert r.indices == r.winding
    r = poincare_hopf(sphere_height_gradient("x"), domains.sphere("x"))
    assert r.sum == 2 and r.indices == r.winding


def unimodular(rng):
    while True:
        A = rng.normal(size=(3, 3)) + 2 * np.eye(3)
        d = np.linalg.det(A)
        if d > 0.2:
            return A / np.cbrt(d)


@pytest.mark.criterion(6)
def test_suite_blaschke_equivariance():
    for k in range(MIN_TRIALS):
        rng = np.random.default_rng(500 + k)
        A = unimodular(rng)
        base = BumpyBody(seed=k, amplitude=0.05)
        u, v = rng.uniform(0, 2 * np.pi, 200), rng.uniform(-1.4, 1.4, 200)
        xi = blaschke_normal(base, (u, v)).affine_normal.value
        xi_A = blaschke_normal(LinearImage(base, A), (u, v)).affine_normal.value
        np.testing.assert_allclose(xi_A, A @ xi, rtol=1e-8, atol=1e-8)


@pytest.mark.criterion(6)
def test_suite_twice_degree_is_euler_characteristic():
    cases = [(BumpyBody(seed=k), 2) for k in range(MIN_TRIALS)]
    cases += [(RoundSphere(1.3), 2), (Torus(2.0, 1.0), 0), (Torus(3.0, 0.5), 0), (RotationalGamma(17 / 80), 2)]
    for front, chi in cases:
        assert 2 * gauss_degree(front, 256).degree == chi


@pytest.mark.criterion(6)
def test_suite_grid_doubling(trig_strata, trig_strata_fine):
    for seed in TRIG_SEEDS:
        assert integer_summary(trig_strata_fine[seed]) == integer_summary(trig_strata[seed][1])
    assert len(TRIG_SEEDS) >= MIN_TRIALS
    catalog = [
        FrontHomomorphism(SwallowtailPatch()),
        FrontHomomorphism(ParallelFront(BumpyBody(seed=2), -1.0202)),
        FrontHomomorphism(BlaschkeFront(RotationalGamma(17 / 80))),
        MapHomomorphism(torus_fold_map(1.5)),
    ]
    for field in catalog:
        assert integer_summary(stratify(field, 256)) == integer_summary(stratify(field, 512))
    for front in (RoundSphere(), BumpyBody(seed=2), Torus()):
        assert gauss_degree(front, 256).degree == gauss_degree(front, 512).degree
