"""Random fixtures shared by the property tests."""

import numpy as np

from frontindex import domains
from frontindex.jets import Jet2, cos, sin
from frontindex.morin import HomJets, HomomorphismField, cascade_batch, verdicts


class TrigMatrixField(HomomorphismField):
    """``Phi`` with random low-degree trigonometric entries on the torus."""

    kind = "trig_matrix"
    domain = domains.TORUS

    def __init__(self, seed, degree=2, terms=5):
        rng = np.random.default_rng(seed)
        self.seed = seed
        self.terms = []
        for _ in range(4):
            ks = rng.integers(-degree, degree + 1, size=(terms, 2))
            amp = rng.normal(size=(terms, 2)) / np.sqrt(terms)
            self.terms.append((ks, amp))
        # a dominant identity-like part keeps the map mostly regular
        self.bias = np.array([1.0, 0.0, 0.0, rng.uniform(-0.4, 0.4)])

    def jets(self, u, v, order):
        u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
        U, V = Jet2.variables(u, v, order)
        entries = []
        for (ks, amp), b in zip(self.terms, self.bias):
            acc = Jet2.constant(np.full(u.shape, b), order)
            for (k, l), (p, q) in zip(ks, amp):
                arg = U * float(k) + V * float(l)
                acc = acc + cos(arg) * p + sin(arg) * q
            entries.append(acc)
        a, b, c, d = entries
        return HomJets(a * d - b * c, (a, b, c, d))

    def __repr__(self):
        return f"TrigMatrixField(seed={self.seed})"


def integer_summary(st):
    """Every integer a stratification reports, in a grid-independent order."""
    cx = st.complex
    comps = sorted((c.sign, c.euler_char, c.genus, c.boundary_loops) for c in cx.components)
    curves = sorted((c.closed, c.gauge_flip, tuple(abs(w) for w in c.winding), n) for c, n in zip(st.curves, st.a3_per_curve()))
    return (len(st.curves), st.a3_plus, st.a3_minus, cx.chi_plus, cx.chi_minus, tuple(comps), tuple(curves))


def a2_points(curves, count=8):
    pts = []
    for c in curves:
        step = max(1, len(c) // count)
        pts.extend(map(tuple, c.points[::step]))
    return pts


def random_sigma(rng):
    """Random smooth exponent for a rescaled density ``e^sigma lam``."""
    k = rng.integers(-2, 3, size=(3, 2))
    a = rng.normal(size=(3, 2)) * 0.5

    def sigma(U, V):
        out = Jet2.constant(np.zeros(U.shape), U.order)
        for (p, q), (x, y) in zip(k, a):
            arg = U * float(p) + V * float(q)
            out = out + cos(arg) * x + sin(arg) * y
        return out

    return sigma


def batch_verdicts(field, pts, tol):
    pts = np.asarray(pts, dtype=float)
    bc = cascade_batch(field, pts[:, 0], pts[:, 1], 2, tol=tol)
    codes = verdicts(bc, tol)
    signs = np.where(codes == 3, np.sign(bc.dots[1]), 0)
    return codes, signs
