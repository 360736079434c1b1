"""Bundle homomorphisms between rank-2 bundles and their A_k classification.

Every source (front, map, model) is wrapped as a :class:`HomomorphismField`
that returns, as jets, the density ``lam`` and the 2x2 frame matrix ``Phi``
of the homomorphism.  ``lam`` is ``det Phi`` divided by a positive chart
factor, so both vanish together.

The extended null field is a normalised adjugate column of ``Phi``: on the
singular set the columns of ``adj Phi`` span ``ker Phi``.
"""

from dataclasses import dataclass, field as dc_field

import numpy as np

from . import domains
from .errors import NotSingular, ZeroAdjugate
from .jets import Jet2, JetVec3, cos, det3, directional_jet_derivative, exp, sin, sqrt

EPS_SING = 1e-9
EPS_DOT = 1e-6
EPS_DDOT = 1e-6
EPS_RANK = 1e-8
EPS_ADJ = 1e-8
DEGENERATE_FLOOR = 1e-8


@dataclass
class HomJets:
    lam: Jet2
    phi: tuple  # (a, b, c, d) with Phi = [[a, b], [c, d]]

    @property
    def order(self):
        return self.lam.order


class HomomorphismField:
    """A bundle map ``phi: TM -> E`` in a chart, evaluated as jets."""

    kind = "abstract"
    domain = domains.TORUS

    def jets(self, u, v, order):
        raise NotImplementedError

    def reference_scale(self, u, v):
        """Size of the data ``lam`` is built from, for degeneracy detection."""
        a, b, c, d = (x.value for x in self.jets(u, v, 0).phi)
        return 0.5 * (a * a + b * b + c * c + d * d)

    def describe(self):
        return {"kind": self.kind}


def _variables(u, v, order):
    u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
    return Jet2.variables(u, v, order)


def orthonormal_frame(nu):
    """Frame ``(e1, e2)`` of the plane orthogonal to the unit jet ``nu``.

    ``e1`` is Gram-Schmidt of the coordinate axis least aligned with the
    value of ``nu`` (chosen per point) and ``e2 = nu x e1``, so ``(e1, e2, nu)``
    is positively oriented and ``det Phi = det(f_u, f_v, nu)``.
    """
    k = np.argmin(np.abs(nu.value), axis=0)
    axis = np.zeros((3,) + k.shape)
    np.put_along_axis(axis, k[None], 1.0, axis=0)
    a = JetVec3.constant(axis, nu.order)
    e1 = (a - nu * a.dot(nu)).normalized()
    return e1, nu.cross(e1)


class FrontHomomorphism(HomomorphismField):
    """``df`` as a map into the bundle orthogonal to the unit normal."""

    kind = "front"

    def __init__(self, front):
        self.front = front
        self.domain = front.domain

    def describe(self):
        return {"kind": self.kind, "family": self.front.family, "params": self.front.params()}

    def jets(self, u, v, order):
        f, nu = self.front.evaluate(u, v, order + 1)
        fu, fv, n = f.d(0), f.d(1), nu.truncate(order)
        e1, e2 = orthonormal_frame(n)
        phi = (e1.dot(fu), e1.dot(fv), e2.dot(fu), e2.dot(fv))
        _, V = _variables(u, v, order)
        lam = det3(fu, fv, n) / self.domain.area_factor(V)
        return HomJets(lam, phi)

    def reference_scale(self, u, v):
        f, nu = self.front.evaluate(u, v, 1)
        parts = [f.d(0).value, f.d(1).value, nu.d(0).value, nu.d(1).value]
        return 0.5 * sum((p * p).sum(axis=0) for p in parts)


class MapPair:
    """A smooth map between two surface domains.

    ``target`` is ``"torus"`` (the map returns angle jets ``(X, Y)``) or
    ``"sphere"`` (the map returns a unit :class:`JetVec3`).
    """

    def __init__(self, name, source, target, fn, params=None):
        if target not in ("torus", "sphere"):
            raise ValueError("target must be torus or sphere")
        self.name, self.domain, self.target, self.fn = name, source, target, fn
        self.params = dict(params or {})

    @property
    def target_euler_char(self):
        return 0 if self.target == "torus" else 2

    def evaluate(self, u, v, order):
        U, V = _variables(u, v, order)
        return self.fn(U, V)

    def __repr__(self):
        return f"MapPair({self.name!r}, {self.params})"


def torus_fold_map(a=1.5):
    """``(u, v) -> (u, v + a sin v)``; folds along ``cos v = -1/a`` when ``a > 1``."""
    return MapPair("torus_fold", domains.TORUS, "torus", lambda U, V: (U, V + sin(V) * a), {"a": a})


def torus_cover(k=2):
    """``(u, v) -> (k u, v)``, a ``k``-fold covering."""
    return MapPair("torus_cover", domains.TORUS, "torus", lambda U, V: (U * k, V), {"k": k})


def torus_height_map():
    """``(u, v) -> (u, -cos v)``: Jacobian ``sin v``, folds on ``v = 0, pi``."""
    return MapPair("sin_v", domains.TORUS, "torus", lambda U, V: (U, -cos(V)), {})


def sphere_identity(pole_axis="z"):
    dom = domains.sphere(pole_axis)
    return MapPair("sphere_identity", dom, "sphere", lambda U, V: dom.direction(U, V), {})


class MapHomomorphism(HomomorphismField):
    """``df`` of a :class:`MapPair` in the coordinate frame of the target."""

    kind = "map"

    def __init__(self, mapping):
        self.map = mapping
        self.domain = mapping.domain

    def describe(self):
        return {"kind": self.kind, "map": self.map.name, "params": self.map.params}

    def jets(self, u, v, order):
        _, V = _variables(u, v, order)
        area = self.domain.area_factor(V)
        if self.map.target == "torus":
            X, Y = self.map.evaluate(u, v, order + 1)
            phi = (X.d(0), X.d(1), Y.d(0), Y.d(1))
            lam = (phi[0] * phi[3] - phi[1] * phi[2]) / area
            return HomJets(lam, phi)
        F = self.map.evaluate(u, v, order + 1)
        Fu, Fv, n = F.d(0), F.d(1), F.truncate(order)
        e1, e2 = orthonormal_frame(n)
        phi = (e1.dot(Fu), e1.dot(Fv), e2.dot(Fu), e2.dot(Fv))
        return HomJets(det3(Fu, Fv, n) / area, phi)


class ModelHomomorphism(HomomorphismField):
    """``Phi = diag(1, lam)`` for a prescribed density (test fixture)."""

    kind = "model"

    def __init__(self, domain, lam_fn, name="model"):
        self.domain, self.lam_fn, self.name = domain, lam_fn, name

    def describe(self):
        return {"kind": self.kind, "name": self.name}

    def jets(self, u, v, order):
        U, V = _variables(u, v, order)
        lam = self.lam_fn(U, V)
        one = Jet2.constant(np.ones(U.shape), order)
        zero = Jet2.constant(np.zeros(U.shape), order)
        return HomJets(lam, (one, zero, zero, lam))

    def reference_scale(self, u, v):
        return np.ones(np.broadcast(np.asarray(u), np.asarray(v)).shape)


def sin_v_model():
    return ModelHomomorphism(domains.TORUS, lambda U, V: sin(V), "sin_v")


def height_model(pole_axis="z"):
    """Density ``z`` on the round sphere (hemispheres as regions)."""
    return ModelHomomorphism(domains.sphere(pole_axis), lambda U, V: sin(V), "height_z")


class ScaledDensity(HomomorphismField):
    """Multiplies the density by ``exp(sigma)``: ``Phi -> diag(1, e^sigma) Phi``."""

    kind = "scaled"

    def __init__(self, base, sigma_fn):
        self.base, self.sigma_fn = base, sigma_fn
        self.domain = base.domain

    def jets(self, u, v, order):
        H = self.base.jets(u, v, order)
        U, V = _variables(u, v, order)
        s = exp(self.sigma_fn(U, V))
        a, b, c, d = H.phi
        return HomJets(H.lam * s, (a, b, c * s, d * s))

    def reference_scale(self, u, v):
        return self.base.reference_scale(u, v)


class RotatedFrame(HomomorphismField):
    """Rotates the target frame by a smooth angle ``theta(u, v)``."""

    kind = "rotated"

    def __init__(self, base, theta_fn):
        self.base, self.theta_fn = base, theta_fn
        self.domain = base.domain

    def jets(self, u, v, order):
        H = self.base.jets(u, v, order)
        U, V = _variables(u, v, order)
        th = self.theta_fn(U, V)
        c, s = cos(th), sin(th)
        a, b, cc, d = H.phi
        return HomJets(H.lam, (c * a - s * cc, c * b - s * d, s * a + c * cc, s * b + c * d))

    def reference_scale(self, u, v):
        return self.base.reference_scale(u, v)


# ---------------------------------------------------------------------------
# tolerances


@dataclass
class Tolerances:
    """Thresholds ``c * lambda_scale / ell^k`` with overridable factors ``c``."""

    lambda_scale: float
    ell: float
    reference: float = 1.0
    eps_rank: float = EPS_RANK
    c_sing: float = EPS_SING
    c_dot: float = EPS_DOT
    c_ddot: float = EPS_DDOT

    @property
    def eps_sing(self):
        return self.c_sing * self.lambda_scale

    @property
    def eps_dot(self):
        return self.c_dot * self.lambda_scale / self.ell

    @property
    def eps_ddot(self):
        return self.c_ddot * self.lambda_scale / self.ell**2

    @property
    def eps_adj(self):
        return EPS_ADJ * np.sqrt(self.lambda_scale)

    @property
    def degenerate(self):
        """The density is numerically zero compared with the input data."""
        return self.lambda_scale < DEGENERATE_FLOOR * self.reference

    def as_dict(self):
        return {
            "lambda_scale": self.lambda_scale,
            "ell": self.ell,
            "eps_sing": self.eps_sing,
            "eps_dot": self.eps_dot,
            "eps_ddot": self.eps_ddot,
            "eps_rank": self.eps_rank,
        }


TOLERANCE_KEYS = {"eps_sing": "c_sing", "eps_dot": "c_dot", "eps_ddot": "c_ddot", "eps_rank": "eps_rank"}


def grid_lambda(field, n, chunk=65536):
    """Density values on the ``n x n`` vertex grid of the field's domain."""
    us, vs = field.domain.grid_axes(n)
    uu, vv = np.meshgrid(us, vs, indexing="ij")
    flat_u, flat_v = uu.ravel(), vv.ravel()
    out = np.empty(flat_u.size)
    for s in range(0, flat_u.size, chunk):
        out[s : s + chunk] = field.jets(flat_u[s : s + chunk], flat_v[s : s + chunk], 0).lam.value
    return us, vs, out.reshape(n, n)


def tolerances_for(field, n=64, lam_grid=None, overrides=None):
    """Scale-aware thresholds from a grid sample of ``lam``.

    ``overrides`` maps ``eps_sing``, ``eps_dot``, ``eps_ddot`` to replacement
    relative factors and ``eps_rank`` to an absolute value.
    """
    us, vs = field.domain.grid_axes(min(n, 64))
    uu, vv = np.meshgrid(us, vs, indexing="ij")
    if lam_grid is None:
        _, _, lam_grid = grid_lambda(field, n)
    ref = float(np.max(field.reference_scale(uu.ravel(), vv.ravel())))
    scale = float(np.max(np.abs(lam_grid)))
    extra = {TOLERANCE_KEYS[k]: float(v) for k, v in (overrides or {}).items()}
    return Tolerances(lambda_scale=scale, ell=field.domain.diameter, reference=ref, **extra)


# ---------------------------------------------------------------------------
# null field and cascade


@dataclass
class HomomorphismSample:
    point: tuple
    phi: np.ndarray
    lam: float
    sigma_min: float
    eta: np.ndarray = None


@dataclass
class CascadeValues:
    values: tuple
    column: int
    sign: int
    eta: np.ndarray
    rank_value: float = float("nan")
    rank_raw: float = float("nan")

    def __getitem__(self, k):
        return self.values[k]


@dataclass
class ClassificationResult:
    verdict: str
    sign: int
    cascade: CascadeValues
    rank_value: float
    thresholds: dict = dc_field(default_factory=dict)

    @property
    def is_a3(self):
        return self.verdict.startswith("A3")


def adjugate_columns(phi):
    a, b, c, d = phi
    return (d, -c), (-b, a)


def _col_norm2(col):
    return col[0].value ** 2 + col[1].value ** 2


def null_field(H, order, column=None, gauge=None, flip=None, eps_adj=0.0):
    """Normalised extended null field as jets of ``order``.

    ``column`` forces the adjugate column (0 or 1) instead of the larger one.
    ``gauge`` (shape ``(2, ...)``) orients ``eta`` to have positive dot with
    it; otherwise the dominant chart component is made positive.  ``flip``
    multiplies the result by -1 where true.  Returns ``(eta_u, eta_v,
    column, zero_mask)``.
    """
    phi = tuple(x.truncate(order) for x in H.phi)
    c0, c1 = adjugate_columns(phi)
    n0, n1 = _col_norm2(c0), _col_norm2(c1)
    shape = n0.shape
    if column is None:
        col = np.where(n1 > n0, 1, 0)
    else:
        col = np.broadcast_to(np.asarray(column), shape)
    zero = np.maximum(n0, n1) <= eps_adj**2
    pick = col.astype(bool)
    eu = _select(pick, c1[0], c0[0])
    ev = _select(pick, c1[1], c0[1])
    # avoid division by zero where the column vanishes
    safe = (eu.value**2 + ev.value**2) > 0
    if not np.all(safe):
        eu.c[0] = np.where(safe, eu.c[0], 1.0)
    norm = sqrt(eu * eu + ev * ev)
    eu, ev = eu / norm, ev / norm
    if gauge is not None:
        g = np.asarray(gauge, dtype=float)
        s = np.where(g[0] * eu.value + g[1] * ev.value < 0, -1.0, 1.0)
    else:
        dom = np.where(np.abs(eu.value) >= np.abs(ev.value), eu.value, ev.value)
        s = np.where(dom < 0, -1.0, 1.0)
    if flip is not None:
        s = s * np.where(np.asarray(flip), -1.0, 1.0)
    return eu * s, ev * s, col, zero


def _select(mask, a, b):
    return Jet2(np.where(mask, a.c, b.c), a.order)


@dataclass
class BatchCascade:
    lam: np.ndarray
    dots: list  # [lam_dot, lam_ddot, ...]
    eta: np.ndarray  # (2, ...)
    column: np.ndarray
    zero_adjugate: np.ndarray
    rank_raw: np.ndarray
    rank_value: np.ndarray
    grad_lam: np.ndarray


def cascade_batch(field, u, v, depth=2, column=None, gauge=None, flip=None, tol=None):
    """Vectorised cascade ``lam, lam', ..., lam^(depth)`` at many points."""
    N = max(depth, 2)
    H = field.jets(u, v, N)
    eps_adj = tol.eps_adj if tol is not None else 0.0
    eu, ev, col, zero = null_field(H, N - 1, column, gauge, flip, eps_adj)
    levels = [H.lam]
    for _ in range(depth):
        levels.append(directional_jet_derivative(levels[-1], (eu, ev)))
    l0, l1 = levels[0], levels[1]
    g0 = l0.gradient()
    g1 = l1.gradient()
    raw = g0[0] * g1[1] - g0[1] * g1[0]
    denom = np.hypot(*g0) * np.hypot(*g1)
    with np.errstate(invalid="ignore", divide="ignore"):
        rank = np.where(denom > 0, np.abs(raw) / denom, 0.0)
    return BatchCascade(
        lam=l0.value,
        dots=[lv.value for lv in levels[1:]],
        eta=np.stack([eu.value, ev.value]),
        column=col,
        zero_adjugate=zero,
        rank_raw=raw,
        rank_value=rank,
        grad_lam=g0,
    )


def density(field, p, order=2):
    """Jet of the density at chart point(s) ``p``."""
    field.domain.check_pole(p[1])
    return field.jets(p[0], p[1], order).lam


def sample(field, p, tol=None):
    """:class:`HomomorphismSample` at a single point."""
    u, v = float(p[0]), float(p[1])
    field.domain.check_pole(v)
    H = field.jets(u, v, 0)
    phi = np.array([[H.phi[0].value, H.phi[1].value], [H.phi[2].value, H.phi[3].value]], dtype=float)
    lam = float(H.lam.value)
    smin = float(np.linalg.svd(phi, compute_uv=False)[-1])
    tol = tol or tolerances_for(field)
    eta = None
    if abs(lam) <= tol.eps_sing:
        eta = null_direction(field, p, tol=tol)[0]
    return HomomorphismSample((u, v), phi, lam, smin, eta)


def null_direction(field, p, tol=None, column=None, order=1):
    """Unit null direction at a singular point and its jet extension.

    Returns ``(eta, (eta_u_jet, eta_v_jet), column)``.
    """
    u, v = float(p[0]), float(p[1])
    field.domain.check_pole(v)
    tol = tol or tolerances_for(field)
    H = field.jets(u, v, order + 1)
    if abs(float(H.lam.value)) > tol.eps_sing:
        raise NotSingular(f"|lam| = {abs(float(H.lam.value)):.3e} exceeds {tol.eps_sing:.3e}")
    eu, ev, col, zero = null_field(H, order, column, eps_adj=tol.eps_adj)
    if zero:
        raise ZeroAdjugate("both adjugate columns vanish (corank 2)")
    return np.array([float(eu.value), float(ev.value)]), (eu, ev), int(col)


def lambda_cascade(field, p, depth=2, tol=None, column=None, flip=False, require_singular=True):
    """``(lam, lam', ..., lam^(depth))`` along the extended null field."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    u, v = float(p[0]), float(p[1])
    field.domain.check_pole(v)
    tol = tol or tolerances_for(field)
    bc = cascade_batch(field, np.array([u]), np.array([v]), depth, column=column, flip=flip, tol=tol)
    lam = float(bc.lam[0])
    if require_singular and abs(lam) > tol.eps_sing:
        raise NotSingular(f"|lam| = {abs(lam):.3e} exceeds {tol.eps_sing:.3e}")
    if bc.zero_adjugate[0]:
        raise ZeroAdjugate("both adjugate columns vanish (corank 2)")
    values = (lam,) + tuple(float(d[0]) for d in bc.dots)
    return CascadeValues(
        values=values,
        column=int(bc.column[0]),
        sign=-1 if flip else 1,
        eta=bc.eta[:, 0].copy(),
        rank_value=float(bc.rank_value[0]),
        rank_raw=float(bc.rank_raw[0]),
    )


def verdicts(bc, tol):
    """Vectorised verdict codes: 0 Regular, 2 A2, 3 A3, -1 Degenerate."""
    lam = np.abs(bc.lam)
    d1 = np.abs(bc.dots[0])
    d2 = np.abs(bc.dots[1])
    out = np.full(lam.shape, -1, dtype=int)
    singular = lam <= tol.eps_sing
    out[~singular] = 0
    a2 = singular & (d1 > tol.eps_dot) & ~bc.zero_adjugate
    out[a2] = 2
    a3 = singular & ~a2 & (d2 > tol.eps_ddot) & (bc.rank_value > tol.eps_rank) & ~bc.zero_adjugate
    out[a3] = 3
    return out


def classify_point(field, p, tolerances=None, column=None, flip=False):
    """Regular / A2 / A3(+/-) / Degenerate verdict at one chart point."""
    u, v = float(p[0]), float(p[1])
    field.domain.check_pole(v)
    tol = tolerances or tolerances_for(field)
    bc = cascade_batch(field, np.array([u]), np.array([v]), 2, column=column, flip=flip, tol=tol)
    code = int(verdicts(bc, tol)[0])
    cv = CascadeValues(
        values=(float(bc.lam[0]), float(bc.dots[0][0]), float(bc.dots[1][0])),
        column=int(bc.column[0]),
        sign=-1 if flip else 1,
        eta=bc.eta[:, 0].copy(),
        rank_value=float(bc.rank_value[0]),
        rank_raw=float(bc.rank_raw[0]),
    )
    sign = 0
    if code == 0:
        verdict = "Regular"
    elif code == 2:
        verdict = "A2"
    elif code == 3:
        sign = 1 if cv.values[2] > 0 else -1
        verdict = "A3+" if sign > 0 else "A3-"
    else:
        verdict = "Degenerate"
    return ClassificationResult(verdict, sign, cv, cv.rank_value, tol.as_dict())


__all__ = [
    "FrontHomomorphism",
    "MapHomomorphism",
    "MapPair",
    "ModelHomomorphism",
    "ScaledDensity",
    "RotatedFrame",
    "HomomorphismSample",
    "CascadeValues",
    "ClassificationResult",
    "Tolerances",
    "classify_point",
    "density",
    "lambda_cascade",
    "null_direction",
    "sample",
    "tolerances_for",
    "torus_fold_map",
    "torus_cover",
    "torus_height_map",
    "sphere_identity",
    "sin_v_model",
    "height_model",
]
