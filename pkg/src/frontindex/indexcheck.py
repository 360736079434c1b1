"""Mapping degrees, Poincare-Hopf sums and the signed-stratification identities.

Left-hand sides come from quadrature of pulled-back area forms (with a
Newton preimage count as an independent oracle); right-hand sides come
from :mod:`frontindex.strata`.  The two never share data.
"""

from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import NonGenericZero, NonIntegerDegree, NotConvex
from .jets import Jet2, det3
from .morin import FrontHomomorphism, MapHomomorphism
from .strata import stratify
from .surfaces import BlaschkeFront, ParallelFront, blaschke_normal, gauss_kronecker, parallel_curvature, parallel_density

TWO_PI = 2.0 * np.pi
DEGREE_TOL = 1e-3
CHUNK = 65536


@dataclass
class DegreeResult:
    raw: float
    degree: int
    residual: float
    raw_midpoint: float
    preimage_count: int = None
    preimage_values: list = None

    @property
    def oracle_agrees(self):
        return self.preimage_count is None or self.preimage_count == self.degree


@dataclass
class FormulaReport:
    theorem: str
    lhs: int
    rhs: int
    chi_plus: int
    chi_minus: int
    a3_plus: int
    a3_minus: int
    residual: int
    degree: DegreeResult = None
    strata: object = None
    details: dict = dc_field(default_factory=dict)


@dataclass
class VectorFieldZeroReport:
    zeros: np.ndarray  # (k, 2)
    indices: list
    winding: list
    sum: int

    @property
    def oracle_agrees(self):
        return all(a == b for a, b in zip(self.indices, self.winding))


# ---------------------------------------------------------------------------
# quadrature


def _full_rect(domain):
    """Integration rectangle: the whole chart, pole caps included."""
    if domain.kind == "sphere":
        return (0.0, TWO_PI), (-np.pi / 2, np.pi / 2)
    return domain.u_range, domain.v_range


def _midpoint(domain, n, integrand):
    (u0, u1), (v0, v1) = _full_rect(domain)
    hu, hv = (u1 - u0) / n, (v1 - v0) / n
    us = u0 + hu * (np.arange(n) + 0.5)
    vs = v0 + hv * (np.arange(n) + 0.5)
    uu, vv = np.meshgrid(us, vs, indexing="ij")
    fu, fv = uu.ravel(), vv.ravel()
    total = 0.0
    for s in range(0, fu.size, CHUNK):
        total += float(np.sum(integrand(fu[s : s + CHUNK], fv[s : s + CHUNK])))
    return total * hu * hv


def _degree_from(integrand, domain, n, norm):
    if n % 2:
        raise ValueError("grid must be even for Richardson extrapolation")
    fine = _midpoint(domain, n, integrand) / norm
    coarse = _midpoint(domain, n // 2, integrand) / norm
    raw = (4.0 * fine - coarse) / 3.0
    deg = int(round(raw))
    res = abs(raw - deg)
    if res >= DEGREE_TOL:
        raise NonIntegerDegree(f"degree quadrature {raw:.6f} is not within {DEGREE_TOL} of an integer")
    return DegreeResult(raw=raw, degree=deg, residual=res, raw_midpoint=fine)


def _gauss_integrand(front):
    def fn(u, v):
        _, nu = front.evaluate(u, v, 1)
        return det3(nu.d(0), nu.d(1), nu.truncate(0)).value

    return fn


def _sphere_canonical(u, v):
    """Fold latitudes beyond the poles back into the chart."""
    v = (v + np.pi) % TWO_PI - np.pi
    over = np.abs(v) > np.pi / 2
    u = np.where(over, u + np.pi, u)
    v = np.where(over, np.sign(v) * np.pi - v, v)
    return np.mod(u, TWO_PI), v


def _canonical(domain, u, v):
    if domain.kind == "sphere":
        return _sphere_canonical(u, v)
    return domain.wrap(u, v)


def _dedupe(domain, pts, radius):
    kept = []
    for p in pts:
        ok = True
        for q in kept:
            d = p - q
            if domain.periodic[0]:
                d[0] = (d[0] + np.pi) % TWO_PI - np.pi
            if domain.periodic[1]:
                d[1] = (d[1] + np.pi) % TWO_PI - np.pi
            if domain.kind == "sphere" and abs(abs(p[1]) - np.pi / 2) < radius and abs(abs(q[1]) - np.pi / 2) < radius:
                d[0] = 0.0
            if np.hypot(*d) < radius:
                ok = False
                break
        if ok:
            kept.append(p)
    return np.array(kept).reshape(-1, 2)


def _seeds(domain, m=64):
    (u0, u1), (v0, v1) = _full_rect(domain)
    hu, hv = (u1 - u0) / m, (v1 - v0) / m
    us = u0 + hu * (np.arange(m) + 0.5)
    vs = v0 + hv * (np.arange(m) + 0.5)
    uu, vv = np.meshgrid(us, vs, indexing="ij")
    return uu.ravel(), vv.ravel()


def _newton(domain, residual_jets, u, v, iters=40, tol=1e-12):
    """Vectorised Newton for ``G(u, v) = 0`` where ``G`` returns two jets."""
    for _ in range(iters):
        G1, G2 = residual_jets(u, v)
        a, b = G1.partial(1, 0), G1.partial(0, 1)
        c, d = G2.partial(1, 0), G2.partial(0, 1)
        det = a * d - b * c
        with np.errstate(divide="ignore", invalid="ignore"):
            du = (d * G1.value - b * G2.value) / det
            dv = (-c * G1.value + a * G2.value) / det
        step = np.hypot(du, dv)
        scale = np.where(step > 0.5, 0.5 / np.maximum(step, 1e-300), 1.0)
        u, v = u - scale * du, v - scale * dv
        u, v = _canonical(domain, u, v)
        ok = np.isfinite(u) & np.isfinite(v)
        u, v = u[ok], v[ok]
    G1, G2 = residual_jets(u, v)
    conv = np.hypot(G1.value, G2.value) < tol
    return u[conv], v[conv]


def _tangent_basis(q):
    a = np.eye(3)[np.argmin(np.abs(q))]
    e1 = a - q * np.dot(a, q)
    e1 /= np.linalg.norm(e1)
    return e1, np.cross(q, e1)


def _sphere_preimages(F, domain, q, seeds=64):
    """Signed preimage count of ``q`` under a unit-vector map ``F(u, v)``."""
    e1, e2 = _tangent_basis(q)

    def G(u, v):
        nu = F(u, v, 1)
        return (nu.x * e1[0] + nu.y * e1[1] + nu.z * e1[2], nu.x * e2[0] + nu.y * e2[1] + nu.z * e2[2])

    su, sv = _seeds(domain, seeds)
    n0 = F(su, sv, 0).value
    near = np.einsum("i,ij->j", q, n0) > 0.3
    u, v = _newton(domain, G, su[near], sv[near])
    nu = F(u, v, 1)
    front = np.einsum("i,ij->j", q, nu.value) > 0
    u, v = u[front], v[front]
    pts = _dedupe(domain, np.stack([u, v], axis=1), 1e-6 * domain.diameter)
    if len(pts) == 0:
        return 0, pts, np.array([])
    nu = F(pts[:, 0], pts[:, 1], 1)
    J = det3(nu.d(0), nu.d(1), nu.truncate(0)).value
    return int(np.sum(np.sign(J))), pts, J


def _random_directions(rng, k):
    x = rng.standard_normal((k, 3))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def _oracle_count(F, domain, rng, values, jac_floor=1e-6):
    counts = []
    for _ in range(values):
        for _attempt in range(20):
            q = _random_directions(rng, 1)[0]
            c, pts, J = _sphere_preimages(F, domain, q)
            if np.all(np.abs(J) > jac_floor):
                break
        counts.append(c)
    return counts


def gauss_degree(front, grid=256, oracle=False, oracle_values=1, seed=0):
    """Degree of the unit normal (Gauss map) of a front."""
    res = _degree_from(_gauss_integrand(front), front.domain, grid, 4.0 * np.pi)
    if oracle:
        rng = np.random.default_rng(seed)

        def F(u, v, order):
            return front.evaluate(u, v, order)[1]

        counts = _oracle_count(F, front.domain, rng, oracle_values)
        res.preimage_values = counts
        res.preimage_count = counts[0] if len(set(counts)) == 1 else None
    return res


def map_degree(mapping, grid=256, oracle=False, oracle_values=1, seed=0):
    """Degree of a map between closed surfaces."""
    if mapping.target == "torus":

        def integrand(u, v):
            X, Y = mapping.evaluate(u, v, 1)
            return X.partial(1, 0) * Y.partial(0, 1) - X.partial(0, 1) * Y.partial(1, 0)

        res = _degree_from(integrand, mapping.domain, grid, TWO_PI**2)
    else:

        def integrand(u, v):
            F = mapping.evaluate(u, v, 1)
            return det3(F.d(0), F.d(1), F.truncate(0)).value

        res = _degree_from(integrand, mapping.domain, grid, 4.0 * np.pi)
    if oracle:
        rng = np.random.default_rng(seed)
        counts = []
        for _ in range(oracle_values):
            if mapping.target == "torus":
                counts.append(_torus_preimages(mapping, rng.uniform(0, TWO_PI, 2)))
            else:
                counts.extend(_oracle_count(mapping.evaluate, mapping.domain, rng, 1))
        res.preimage_values = counts
        res.preimage_count = counts[0] if len(set(counts)) == 1 else None
    return res


def _torus_preimages(mapping, q):
    def G(u, v):
        X, Y = mapping.evaluate(u, v, 1)
        dx = (X.value - q[0] + np.pi) % TWO_PI - np.pi
        dy = (Y.value - q[1] + np.pi) % TWO_PI - np.pi
        X.c[0], Y.c[0] = dx, dy
        return X, Y

    su, sv = _seeds(mapping.domain)
    u, v = _newton(mapping.domain, G, su, sv)
    pts = _dedupe(mapping.domain, np.stack([u, v], axis=1), 1e-6 * mapping.domain.diameter)
    if len(pts) == 0:
        return 0
    X, Y = mapping.evaluate(pts[:, 0], pts[:, 1], 1)
    J = X.partial(1, 0) * Y.partial(0, 1) - X.partial(0, 1) * Y.partial(1, 0)
    return int(np.sum(np.sign(J)))


# ---------------------------------------------------------------------------
# Poincare-Hopf


def _winding(field, domain, p, radius, samples=128):
    th = np.linspace(0.0, TWO_PI, samples, endpoint=False)
    u = p[0] + radius * np.cos(th)
    v = p[1] + radius * np.sin(th)
    U, V = Jet2.variables(u, v, 0)
    X, Y = field(U, V)
    ang = np.unwrap(np.arctan2(Y.value, X.value))
    total = ang[-1] - ang[0] + ((np.arctan2(Y.value[0], X.value[0]) - ang[-1] + np.pi) % TWO_PI - np.pi)
    return int(round(total / TWO_PI))


def poincare_hopf(field, domain, seeds=64, winding_radius=None):
    """Zeros of a tangent field given by chart components ``field(U, V)``.

    Zeros are located by Newton from a ``seeds x seeds`` grid; the index of
    each is the sign of the Jacobian determinant, checked against the
    winding number of the field on a small circle.
    """

    def G(u, v):
        U, V = Jet2.variables(u, v, 1)
        return field(U, V)

    su, sv = _seeds(domain, seeds)
    if domain.kind == "sphere":
        keep = np.abs(sv) < np.pi / 2 - domain.pole_cap
        su, sv = su[keep], sv[keep]
    u, v = _newton(domain, G, su, sv)
    if domain.kind == "sphere":
        keep = np.abs(v) < np.pi / 2 - domain.pole_cap
        u, v = u[keep], v[keep]
    pts = _dedupe(domain, np.stack([u, v], axis=1), 1e-6 * domain.diameter)
    indices, windings = [], []
    if len(pts):
        X, Y = G(pts[:, 0], pts[:, 1])
        J = X.partial(1, 0) * Y.partial(0, 1) - X.partial(0, 1) * Y.partial(1, 0)
        scale = np.sqrt(X.partial(1, 0) ** 2 + X.partial(0, 1) ** 2 + Y.partial(1, 0) ** 2 + Y.partial(0, 1) ** 2)
        for k in range(len(pts)):
            if abs(J[k]) <= 1e-10 * max(scale[k] ** 2, 1e-300):
                raise NonGenericZero(f"degenerate zero at {tuple(pts[k])}")
            indices.append(int(np.sign(J[k])))
        if len(pts) > 1:
            sep = min(
                np.hypot(*_wrapped_diff(domain, pts[a] - pts[b]))
                for a in range(len(pts))
                for b in range(a + 1, len(pts))
            )
        else:
            sep = 1.0
        r = winding_radius or min(1e-3 * domain.diameter, 0.25 * sep)
        windings = [_winding(field, domain, p, r) for p in pts]
    return VectorFieldZeroReport(zeros=pts, indices=indices, winding=windings, sum=int(sum(indices)))


def _wrapped_diff(domain, d):
    d = np.array(d, dtype=float)
    for k in (0, 1):
        if domain.periodic[k]:
            d[k] = (d[k] + np.pi) % TWO_PI - np.pi
    return d


def sphere_height_gradient(pole_axis="x"):
    """Chart components of the gradient of the height ``z`` on the unit sphere.

    With pole axis ``x`` the chart is ``(sin v, cos v cos u, cos v sin u)``,
    ``z = cos v sin u`` and the zeros ``(pi/2, 0), (3pi/2, 0)`` avoid the caps.
    """
    from .jets import cos, sin

    if pole_axis != "x":
        raise ValueError("only the x pole axis keeps the zeros off the caps")

    def field(U, V):
        return cos(U) / cos(V), -(sin(V) * sin(U))

    return field


def random_torus_field(rng, degree=2, terms=6):
    """Random trigonometric polynomial tangent field on the flat torus."""
    from .jets import cos, sin

    modes = []
    for _ in range(terms):
        k, l = rng.integers(-degree, degree + 1, size=2)
        modes.append((int(k), int(l), rng.standard_normal(4)))

    def field(U, V):
        X = U * 0.0
        Y = U * 0.0
        for k, l, c in modes:
            arg = U * k + V * l
            s, co = sin(arg), cos(arg)
            X = X + s * c[0] + co * c[1]
            Y = Y + s * c[2] + co * c[3]
        return X, Y

    return field


# ---------------------------------------------------------------------------
# identities


def _report(theorem, lhs, rhs, strata, degree=None, **details):
    cx = strata.complex
    return FormulaReport(
        theorem=theorem,
        lhs=int(lhs),
        rhs=int(rhs),
        chi_plus=int(cx.chi_plus),
        chi_minus=int(cx.chi_minus),
        a3_plus=int(strata.a3_plus),
        a3_minus=int(strata.a3_minus),
        residual=int(lhs - rhs),
        degree=degree,
        strata=strata,
        details=details,
    )


def verify_front_formula(front, grid=256, oracle=False, seed=0, degree_grid=None, overrides=None):
    """``2 deg(nu) = chi(M+) - chi(M-) + #A3+ - #A3-`` for a closed front."""
    deg = gauss_degree(front, degree_grid or grid, oracle=oracle, seed=seed)
    st = stratify(FrontHomomorphism(front), grid, overrides=overrides)
    rhs = st.complex.chi_plus - st.complex.chi_minus + st.a3_plus - st.a3_minus
    return _report("FrontIndex", 2 * deg.degree, rhs, st, deg)


def verify_morin_map_formula(mapping, grid=256, oracle=False, seed=0, overrides=None):
    """``deg(f) chi(N) = chi(M+) - chi(M-) + #A3+ - #A3-`` for a map of surfaces."""
    deg = map_degree(mapping, grid, oracle=oracle, seed=seed)
    st = stratify(MapHomomorphism(mapping), grid, overrides=overrides)
    rhs = st.complex.chi_plus - st.complex.chi_minus + st.a3_plus - st.a3_minus
    return _report("QuineMorin", deg.degree * mapping.target_euler_char, rhs, st, deg)


def _require_convex(base, n=64):
    us, vs = base.domain.grid_axes(n)
    uu, vv = np.meshgrid(us, vs, indexing="ij")
    K = gauss_kronecker(base, (uu.ravel(), vv.ravel())).gauss_kronecker
    floor = 1e-6 / base.bounding_radius() ** 2
    if np.min(K) <= floor:
        raise NotConvex(f"min K = {np.min(K):.3e} below {floor:.3e}")


def parallel_identity_error(base, t, n=128, sv_floor=1e-4):
    """Max ``|lam_t K_t - 1|`` over regular samples of the parallel front."""
    us, vs = base.domain.grid_axes(n)
    uu, vv = np.meshgrid(us, vs, indexing="ij")
    u, v = uu.ravel(), vv.ravel()
    f, nu = ParallelFront(base, t).evaluate(u, v, 1)
    fu, fv = f.d(0).value, f.d(1).value
    M = np.stack([fu, fv], axis=-1)  # (3, N, 2)
    sv = np.linalg.svd(np.moveaxis(M, 0, 1), compute_uv=False)[:, -1]
    mask = sv > sv_floor
    lam = parallel_density(base, t, (u[mask], v[mask]))
    K = parallel_curvature(base, t, (u[mask], v[mask]))
    err = np.abs(lam * K - 1.0)
    return float(err.max()) if err.size else 0.0, int(mask.sum())


def verify_parallel_formula(base, t, grid=256, oracle=False, seed=0, identity_grid=128, overrides=None):
    """``2 chi(M-) = #A3+ - #A3-`` for the parallel front ``f + t nu``."""
    _require_convex(base)
    front = ParallelFront(base, t)
    st = stratify(FrontHomomorphism(front), grid, overrides=overrides)
    deg = gauss_degree(front, grid, oracle=oracle, seed=seed)
    err, nreg = parallel_identity_error(base, t, identity_grid)
    lhs = 2 * st.complex.chi_minus
    rhs = st.a3_plus - st.a3_minus
    front_rhs = st.complex.chi_plus - st.complex.chi_minus + st.a3_plus - st.a3_minus
    return _report(
        "Parallel",
        lhs,
        rhs,
        st,
        deg,
        t=float(t),
        lambda_k_max_error=err,
        regular_samples=nreg,
        front_formula_residual=int(2 * deg.degree - front_rhs),
    )


def verify_blaschke_formula(base, grid=256, oracle=False, seed=0, sign_grid=32, overrides=None):
    """``2 chi(M-) = #A3+ - #A3-`` for the Blaschke normal map of a convex body."""
    _require_convex(base)
    xi = BlaschkeFront(base)
    st = stratify(FrontHomomorphism(xi), grid, overrides=overrides)
    lhs = 2 * st.complex.chi_minus
    rhs = st.a3_plus - st.a3_minus
    # the density of d(xi) and the determinant of the affine shape operator
    us, vs = base.domain.grid_axes(sign_grid)
    uu, vv = np.meshgrid(us, vs, indexing="ij")
    u, v = uu.ravel(), vv.ravel()
    lam = FrontHomomorphism(xi).jets(u, v, 0).lam.value
    S = blaschke_normal(base, (u, v)).affine_shape
    detS = S[..., 0, 0] * S[..., 1, 1] - S[..., 0, 1] * S[..., 1, 0]
    big = np.abs(lam) > 1e-6 * np.abs(lam).max()
    disagree = int(np.sum(np.sign(lam[big]) != np.sign(detS[big])))
    deg = gauss_degree(base, grid, oracle=oracle, seed=seed)
    front_rhs = st.complex.chi_plus - st.complex.chi_minus + st.a3_plus - st.a3_minus
    return _report(
        "Blaschke",
        lhs,
        rhs,
        st,
        deg,
        shape_sign_disagreements=disagree,
        front_formula_residual=int(2 * deg.degree - front_rhs),
    )
