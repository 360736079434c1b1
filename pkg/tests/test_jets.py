import math
import os
import subprocess
import sys

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from frontindex import _kernels
from frontindex.errors import DivisionByZeroJet, NegativeSqrtJet, OrderExhausted
from frontindex.jets import Jet2, JetVec3, cos, det3, directional_jet_derivative, exp, jet_arith, log, ncoef, power, sin, sqrt, table

U, V = sp.symbols("u v")


def sympy_coeffs(expr, u0, v0, order):
    """Taylor coefficients d^(i+j)f/du^i dv^j / (i! j!) in graded-lex order."""
    out = []
    for n in range(order + 1):
        for j in range(n + 1):
            i = n - j
            d = sp.diff(expr, U, i, V, j) if (i or j) else expr
            out.append(float(d.subs({U: u0, V: v0})) / (math.factorial(i) * math.factorial(j)))
    return np.array(out)


def test_coefficient_count():
    for n in range(7):
        assert Jet2.constant(0.0, n).c.shape[0] == (n + 1) * (n + 2) // 2 == ncoef(n)


def test_square_of_u():
    u, v = Jet2.variables(0.0, 0.0, 2)
    sq = jet_arith(u, u, "mul")
    assert sq.coeff(2, 0) == 1.0
    others = [sq.coeff(i, j) for i, j in [(0, 0), (1, 0), (0, 1), (1, 1), (0, 2)]]
    assert others == [0.0] * 5


def test_sin_times_cos():
    u, v = Jet2.variables(0.0, 0.0, 2)
    p = sin(u) * cos(v)
    assert p.coeff(1, 0) == pytest.approx(1.0, abs=1e-15)
    for ij in [(1, 1), (0, 2), (2, 0)]:
        assert p.coeff(*ij) == pytest.approx(0.0, abs=1e-15)


def test_geometric_series():
    u, _ = Jet2.variables(0.0, 0.0, 3)
    g = 1.0 / (1.0 + u)
    assert [g.coeff(k, 0) for k in range(4)] == pytest.approx([1, -1, 1, -1], abs=1e-15)


@pytest.mark.parametrize(
    "expr, build",
    [
        (sp.sin(U) * sp.exp(V) / (2 + sp.cos(U * V)), lambda u, v: sin(u) * exp(v) / (2.0 + cos(u * v))),
        (sp.sqrt(3 + U**2 + V**3), lambda u, v: sqrt(3.0 + u * u + v * v * v)),
        ((1 + U**2 + V**2) ** sp.Rational(-1, 4), lambda u, v: power(1.0 + u * u + v * v, -0.25)),
        (sp.log(2 + U - V) * U**3, lambda u, v: log(2.0 + u - v) * u**3),
    ],
)
def test_composites_against_sympy(expr, build):
    u0, v0 = 0.3, -0.7
    order = 5
    u, v = Jet2.variables(u0, v0, order)
    got = build(u, v).c
    want = sympy_coeffs(expr, u0, v0, order)
    np.testing.assert_allclose(got, want, rtol=1e-11, atol=1e-12)


def test_swallowtail_density_directional_derivative():
    u, v = Jet2.variables(0.0, 0.0, 3)
    lam = 2.0 * (6.0 * u * u + v) * sqrt(1.0 + u * u + u**4)
    one = Jet2.constant(1.0, 3)
    zero = Jet2.constant(0.0, 3)
    assert directional_jet_derivative(lam, (one, zero)).value == pytest.approx(0.0, abs=1e-15)


def test_directional_trivial_cases():
    u, v = Jet2.variables(0.0, 0.0, 2)
    one, zero = Jet2.constant(1.0, 2), Jet2.constant(0.0, 2)
    assert directional_jet_derivative(u, (one, zero)).value == 1.0
    assert directional_jet_derivative(u * u + v, (zero, one)).value == 1.0
    assert directional_jet_derivative(u, (one, zero)).order == 1


def test_errors():
    u, v = Jet2.variables(0.0, 0.0, 2)
    with pytest.raises(DivisionByZeroJet):
        _ = v / u
    with pytest.raises(NegativeSqrtJet):
        sqrt(u - 1.0)
    with pytest.raises(OrderExhausted):
        directional_jet_derivative(Jet2.constant(1.0, 0), (1.0, 0.0))
    with pytest.raises(OrderExhausted):
        u.coeff(3, 0)
    with pytest.raises(ValueError):
        jet_arith(u, v, "tan")


def test_mixed_orders_truncate():
    u4, _ = Jet2.variables(0.1, 0.2, 4)
    _, v2 = Jet2.variables(0.1, 0.2, 2)
    assert (u4 * v2).order == 2
    assert (u4 + v2).order == 2


def test_partial_values():
    u, v = Jet2.variables(0.5, 0.25, 4)
    f = sin(u) * v**3
    assert f.partial(1, 2) == pytest.approx(math.cos(0.5) * 6 * 0.25, rel=1e-14)
    np.testing.assert_allclose(f.gradient(), [math.cos(0.5) * 0.25**3, math.sin(0.5) * 3 * 0.0625], rtol=1e-14)


def test_jetvec_cross_and_det():
    u, v = Jet2.variables(0.2, -0.4, 2)
    a = JetVec3(u, v, u * v)
    b = JetVec3(v, 1.0 + u, Jet2.constant(1.0, 2))
    c = JetVec3(sin(u), cos(v), u + v)
    M = np.array([a.value, b.value, c.value]).T
    assert det3(a, b, c).value == pytest.approx(np.linalg.det(M), rel=1e-13)
    assert a.cross(b).dot(a).value == pytest.approx(0.0, abs=1e-15)
    assert JetVec3(u, v, u).normalized().norm().value == pytest.approx(1.0)


def test_batched_jets_match_scalar():
    us = np.array([0.1, 0.5, -0.3])
    vs = np.array([0.2, -0.1, 0.9])
    u, v = Jet2.variables(us, vs, 4)
    f = exp(u * v) / (1.0 + u * u)
    for k in range(3):
        uk, vk = Jet2.variables(us[k], vs[k], 4)
        fk = exp(uk * vk) / (1.0 + uk * uk)
        np.testing.assert_allclose(f.c[:, k], fk.c, rtol=1e-14)


# property tests ---------------------------------------------------------------

def random_jet(rng, order, shape=()):
    return Jet2(rng.normal(size=(ncoef(order),) + shape), order)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**31 - 1))
def test_product_rule(order, seed):
    rng = np.random.default_rng(seed)
    a, b = random_jet(rng, order), random_jet(rng, order)
    for axis in (0, 1):
        lhs = (a * b).d(axis)
        rhs = a.truncate(order - 1) * b.d(axis) + b.truncate(order - 1) * a.d(axis)
        scale = np.max(np.abs(lhs.c)) + 1.0
        assert np.max(np.abs(lhs.c - rhs.c)) <= 1e-12 * scale


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**31 - 1))
def test_sin_chain_rule(order, seed):
    rng = np.random.default_rng(seed)
    a = random_jet(rng, order)
    s = sin(a)
    assert s.coeff(1, 0) == pytest.approx(math.cos(a.value) * a.coeff(1, 0), rel=1e-12, abs=1e-14)
    assert s.coeff(0, 1) == pytest.approx(math.cos(a.value) * a.coeff(0, 1), rel=1e-12, abs=1e-14)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 6), st.integers(0, 2**31 - 1), st.data())
def test_truncation_stability(order, seed, data):
    m = data.draw(st.integers(0, order - 1))
    rng = np.random.default_rng(seed)
    a, b = random_jet(rng, order), random_jet(rng, order)
    b.c[0] = 2.0 + abs(b.c[0])
    full = (sin(a) * b / (1.5 + cos(b)) + sqrt(b)).truncate(m)
    am, bm = a.truncate(m), b.truncate(m)
    direct = sin(am) * bm / (1.5 + cos(bm)) + sqrt(bm)
    np.testing.assert_allclose(full.c, direct.c, rtol=1e-12, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**31 - 1))
def test_division_inverts_multiplication(order, seed):
    rng = np.random.default_rng(seed)
    a, b = random_jet(rng, order, (5,)), random_jet(rng, order, (5,))
    b.c[0] = np.sign(b.c[0]) * (1.0 + np.abs(b.c[0]))
    np.testing.assert_allclose(((a * b) / b).c, a.c, rtol=1e-9, atol=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**31 - 1))
def test_numba_and_numpy_kernels_agree(order, seed):
    rng = np.random.default_rng(seed)
    t = table(order)
    a = rng.normal(size=(ncoef(order), 7))
    b = rng.normal(size=(ncoef(order), 7))
    b[0] = 1.0 + np.abs(b[0])
    p = np.abs(a)
    p[0] += 1.0
    for fn, args in ((_kernels.mul, (a, b)), (_kernels.div, (a, b)), (_kernels.sqrt, (p,))):
        x = fn(*args, t, use_numba=False)
        if _kernels.HAS_NUMBA:
            y = fn(*args, t, use_numba=True)
            np.testing.assert_allclose(x, y, rtol=1e-13, atol=1e-14)


def test_numpy_fallback_selected_by_environment():
    code = (
        "from frontindex import _kernels; from frontindex.jets import Jet2, sin;"
        "u, v = Jet2.variables(0.3, -0.7, 4); print(_kernels.BACKEND, repr(float((sin(u) / (2.0 + v * v)).coeff(2, 2))))"
    )
    out = {}
    for flag in ("0", "1"):
        env = dict(os.environ, FRONTINDEX_NUMBA=flag)
        out[flag] = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True).stdout.split()
    assert out["0"][0] == "numpy"
    if _kernels.HAS_NUMBA:
        assert out["1"][0] == "numba"
    assert float(out["0"][1]) == pytest.approx(float(out["1"][1]), rel=1e-14)
