"""Catalog of fronts in R^3 and the geometry derived from them.

A front is evaluated as a pair of jets ``(f, nu)`` at a batch of chart
points.  The unit normal ``nu`` is carried analytically by every family so
it stays smooth across the singular set of ``f``.
"""

from dataclasses import dataclass
import numpy as np

from . import domains
from .errors import NotConvex, SingularBasePoint, TangentialAffineNormal
from .jets import Jet2, JetVec3, cos, det3, power, sin, sqrt

ROTATIONAL_EPS_MAX = 0.25


class FrontField:
    """Base class.  Subclasses implement :meth:`_evaluate`."""

    family = "front"
    domain = domains.TORUS

    def params(self):
        return {}

    def evaluate(self, u, v, order):
        """Jets ``(f, nu)`` of the requested order at chart points ``(u, v)``."""
        u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
        U, V = Jet2.variables(u, v, order)
        return self._evaluate(U, V, order)

    def _evaluate(self, U, V, order):
        raise NotImplementedError

    def bounding_radius(self, n=32):
        us, vs = self.domain.grid_axes(n)
        uu, vv = np.meshgrid(us, vs, indexing="ij")
        f, _ = self.evaluate(uu, vv, 0)
        return float(np.sqrt((f.value**2).sum(axis=0)).max())

    def __repr__(self):
        args = ", ".join(f"{k}={v!r}" for k, v in self.params().items())
        return f"{type(self).__name__}({args})"


def eval_front(front, p, order, strict=False):
    """Evaluate ``front`` at ``p = (u, v)``.

    With ``strict`` the sphere pole caps are refused (strata evaluations).
    """
    u, v = p
    if strict:
        front.domain.check_pole(v)
    return front.evaluate(u, v, order)


# ---------------------------------------------------------------------------
# closed families


class RadialBody(FrontField):
    """Star-shaped sphere ``f = rho(d) d`` over unit directions ``d``."""

    family = "radial"

    def __init__(self, pole_axis="z", pole_cap=0.05):
        self.domain = domains.sphere(pole_axis, pole_cap)

    def radius(self, d):
        raise NotImplementedError

    def _evaluate(self, U, V, order):
        # the normal needs one more order of f than it returns
        d = self.domain.direction(U, V)
        f = d * self.radius(d)
        n = f.d(0).cross(f.d(1)) / self.domain.area_factor(V.truncate(order))
        return f.truncate(order), n.normalized()

    def evaluate(self, u, v, order):
        u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
        U, V = Jet2.variables(u, v, order + 1)
        return self._evaluate(U, V, order)


class RoundSphere(RadialBody):
    family = "sphere"

    def __init__(self, radius=1.0, pole_axis="z", pole_cap=0.05):
        super().__init__(pole_axis, pole_cap)
        if radius <= 0:
            raise ValueError("radius must be positive")
        self.R = float(radius)

    def params(self):
        return {"radius": self.R}

    def evaluate(self, u, v, order):
        u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
        U, V = Jet2.variables(u, v, order)
        d = self.domain.direction(U, V)
        return d * self.R, d

    def radius(self, d):
        return Jet2.constant(np.full(d.x.shape, self.R), d.order)


def _monomials(degree):
    return [(i, j, k) for t in range(1, degree + 1) for i in range(t + 1) for j in range(t + 1 - i)
            for k in [t - i - j]]


class BumpyBody(RadialBody):
    """Unit sphere with a random polynomial radial perturbation.

    ``rho(d) = 1 + amplitude * sum_m a_m d^m`` over monomials of degree
    1..``degree`` with coefficients drawn from ``seed`` and scaled so the
    perturbation has sup-norm at most ``amplitude`` on the sphere.
    """

    family = "bumpy"

    def __init__(self, seed=0, amplitude=0.08, degree=3, pole_axis="z", pole_cap=0.05):
        super().__init__(pole_axis, pole_cap)
        self.seed = int(seed)
        self.amplitude = float(amplitude)
        self.degree = int(degree)
        rng = np.random.default_rng(self.seed)
        self.monomials = _monomials(self.degree)
        a = rng.standard_normal(len(self.monomials))
        a /= np.abs(a).sum()
        self.coeffs = a

    def params(self):
        return {"seed": self.seed, "amplitude": self.amplitude, "degree": self.degree,
                "pole_axis": self.domain.pole_axis}

    def radius(self, d):
        powers = {}

        def pw(comp, k, idx):
            key = (idx, k)
            if key not in powers:
                powers[key] = comp**k
            return powers[key]

        total = None
        for a, (i, j, k) in zip(self.coeffs, self.monomials):
            term = pw(d.x, i, 0) * pw(d.y, j, 1) * pw(d.z, k, 2) * (self.amplitude * a)
            total = term if total is None else total + term
        return total + 1.0


class RotationalGamma(RadialBody):
    """Profile ``(1 - 2 eps sin t)(sin t, cos t)`` rotated about the x axis.

    In the x-axis sphere chart the latitude is ``t`` and the body is the
    radial graph ``rho(d) = 1 - 2 eps d_x``.
    """

    family = "rotational_gamma"

    def __init__(self, epsilon=17 / 80, pole_cap=0.05):
        if not 0.0 <= epsilon < ROTATIONAL_EPS_MAX:
            raise ValueError("epsilon must satisfy 0 <= epsilon < 1/4")
        super().__init__("x", pole_cap)
        self.epsilon = float(epsilon)

    def params(self):
        return {"epsilon": self.epsilon}

    def radius(self, d):
        return 1.0 - d.x * (2.0 * self.epsilon)

    def profile(self, t):
        r = 1.0 - 2.0 * self.epsilon * np.sin(t)
        return r * np.sin(t), r * np.cos(t)


class Torus(FrontField):
    family = "torus"

    def __init__(self, R=2.0, r=1.0):
        if not R > r > 0:
            raise ValueError("torus needs R > r > 0")
        self.R, self.r = float(R), float(r)
        self.domain = domains.TORUS

    def params(self):
        return {"R": self.R, "r": self.r}

    def _evaluate(self, U, V, order):
        cu, su, cv, sv = cos(U), sin(U), cos(V), sin(V)
        ring = cv * self.r + self.R
        f = JetVec3(ring * cu, ring * su, sv * self.r)
        nu = JetVec3(cv * cu, cv * su, sv)
        return f, nu


class SwallowtailPatch(FrontField):
    """``f = (3u^4 + u^2 v, 4u^3 + 2uv, v)``, a swallowtail at the origin."""

    family = "swallowtail"

    def __init__(self, half_width=1.0):
        h = float(half_width)
        self.domain = domains.patch(-h, h, -h, h)

    def params(self):
        return {"half_width": self.domain.bounds[0][1]}

    def _evaluate(self, U, V, order):
        u2 = U * U
        f = JetVec3(u2 * u2 * 3.0 + u2 * V, u2 * U * 4.0 + U * V * 2.0, V)
        w = u2 * u2 + u2 + 1.0
        nu = JetVec3(Jet2.constant(np.ones(U.shape), order), -U, u2) / sqrt(w)
        return f, nu


# ---------------------------------------------------------------------------
# derived fronts


class ParallelFront(FrontField):
    """``f_t = f + t nu``; shares the unit normal (Gauss map) of the base."""

    family = "parallel"

    def __init__(self, base, t):
        self.base = base
        self.t = float(t)
        self.domain = base.domain

    def params(self):
        return {"base": repr(self.base), "t": self.t}

    def evaluate(self, u, v, order):
        f, nu = self.base.evaluate(u, v, order)
        return f + nu * self.t, nu


def parallel_front(base, t):
    return ParallelFront(base, t)


class LinearImage(FrontField):
    """``A f`` with normal ``A^-T nu`` renormalised (``det A > 0``)."""

    family = "linear_image"

    def __init__(self, base, A):
        A = np.asarray(A, dtype=float)
        if np.linalg.det(A) <= 0:
            raise ValueError("linear map must preserve orientation")
        self.base, self.A = base, A
        self.Ainv_T = np.linalg.inv(A).T
        self.domain = base.domain

    def params(self):
        return {"base": repr(self.base), "A": self.A.tolist()}

    def evaluate(self, u, v, order):
        f, nu = self.base.evaluate(u, v, order)
        return f.linear(self.A), nu.linear(self.Ainv_T).normalized()


# ---------------------------------------------------------------------------
# curvature


@dataclass
class CurvatureData:
    mu1: np.ndarray
    mu2: np.ndarray
    gauss_kronecker: np.ndarray
    shape_operator: np.ndarray


def _fundamental(front, u, v):
    f, nu = front.evaluate(u, v, 1)
    fu, fv = f.d(0).value, f.d(1).value
    nuu, nuv = nu.d(0).value, nu.d(1).value
    return fu, fv, nuu, nuv, nu.value


def shape_operator(front, u, v):
    """Matrix ``S`` with ``d nu = df . S`` in the chart frame, shape (..., 2, 2)."""
    fu, fv, nuu, nuv, _ = _fundamental(front, u, v)
    E, F, G = (fu * fu).sum(0), (fu * fv).sum(0), (fv * fv).sum(0)
    det_I = E * G - F * F
    scale = np.maximum(E + G, np.finfo(float).tiny)
    if np.any(det_I <= 1e-12 * scale**2):
        raise SingularBasePoint("df has rank < 2")
    B = np.array([[(fu * nuu).sum(0), (fu * nuv).sum(0)], [(fv * nuu).sum(0), (fv * nuv).sum(0)]])
    inv = np.array([[G, -F], [-F, E]]) / det_I
    S = np.einsum("ij...,jk...->...ik", inv, B)
    return S


def gauss_kronecker(front, p):
    """Principal curvatures and Gauss-Kronecker curvature at regular points.

    Convention: ``d nu(e) = -mu df(e)`` on principal directions ``e``, so
    the outward unit sphere has ``mu = -1`` and ``K = mu1 mu2 = 1``.
    """
    u, v = np.asarray(p[0], dtype=float), np.asarray(p[1], dtype=float)
    S = shape_operator(front, u, v)
    tr = S[..., 0, 0] + S[..., 1, 1]
    det = S[..., 0, 0] * S[..., 1, 1] - S[..., 0, 1] * S[..., 1, 0]
    disc = np.sqrt(np.maximum(tr * tr / 4 - det, 0.0))
    s_hi, s_lo = tr / 2 + disc, tr / 2 - disc
    mu1, mu2 = -s_hi, -s_lo
    return CurvatureData(mu1=mu1, mu2=mu2, gauss_kronecker=mu1 * mu2, shape_operator=S)


def parallel_curvature(base, t, p):
    """``K_t = (prod_j (1/mu_j - t))^-1`` from the base principal curvatures."""
    cd = gauss_kronecker(base, p)
    return 1.0 / ((1.0 / cd.mu1 - t) * (1.0 / cd.mu2 - t))


def parallel_density(base, t, p):
    """``lambda_t = det(df_t, nu) / det(d nu, nu)`` by direct jet evaluation."""
    u, v = p
    f, nu = base.evaluate(u, v, 1)
    ft = f + nu * t
    num = det3(ft.d(0), ft.d(1), nu.truncate(0)).value
    den = det3(nu.d(0), nu.d(1), nu.truncate(0)).value
    return num / den


# ---------------------------------------------------------------------------
# affine normal


@dataclass
class AffineData:
    blaschke_metric: np.ndarray  # (..., 2, 2)
    affine_normal: JetVec3
    conormal: np.ndarray  # (3, ...)
    affine_shape: np.ndarray  # (..., 2, 2)
    volume_form: np.ndarray  # det(f_u, f_v, xi)
    metric_volume: np.ndarray  # sqrt(det h)
    tangential_residual: np.ndarray
    conormal_pairing: np.ndarray  # nu_{x_i}(f_{x_j}), (..., 2, 2)


def affine_normal_jets(f, gauss_curvature_floor=None):
    """Blaschke metric and affine normal from a position jet.

    ``f`` of order ``m + 3`` gives the affine normal ``xi = (1/2) Laplacian_h f``
    to order ``m``, where ``h = -G / |det G|^(1/4)`` for outward charts and
    ``G_ij = det(f_u, f_v, f_ij)``.  Returns ``(xi, (h11, h12, h22), detG)``.
    """
    fu, fv = f.d(0), f.d(1)
    n = fu.cross(fv)
    G11, G12, G22 = n.dot(fu.d(0)), n.dot(fu.d(1)), n.dot(fv.d(1))
    detG = G11 * G22 - G12 * G12
    n2 = n.dot(n).value
    K = detG.value / np.maximum(n2 * n2, np.finfo(float).tiny)
    floor = 0.0 if gauss_curvature_floor is None else gauss_curvature_floor
    if np.any(K <= floor):
        raise NotConvex("Gauss curvature below the convexity threshold")
    # h positive definite: flip G where it is negative definite
    sigma = np.where(G11.value < 0, -1.0, 1.0)
    w = power(detG, 0.25)
    sq = w * w
    a11, a12, a22 = G22 * sigma / sq, -G12 * sigma / sq, G11 * sigma / sq
    fu1, fv1 = fu.truncate(a11.order), fv.truncate(a11.order)
    Au = fu1 * a11 + fv1 * a12
    Av = fu1 * a12 + fv1 * a22
    div = Au.d(0) + Av.d(1)
    xi = div / w.truncate(div.order) * 0.5
    h = (G11 * sigma / w, G12 * sigma / w, G22 * sigma / w)
    return xi, h, detG


class BlaschkeFront(FrontField):
    """The Blaschke normal map of a strictly convex front, as a front.

    Its unit normal is the Euclidean unit normal of the base: the
    derivatives of the affine normal are tangent to the base surface.
    """

    family = "blaschke"

    def __init__(self, base):
        self.base = base
        self.domain = base.domain
        self._floor = None

    def params(self):
        return {"base": repr(self.base)}

    @property
    def convexity_floor(self):
        if self._floor is None:
            self._floor = 1e-6 / self.base.bounding_radius() ** 2
        return self._floor

    def evaluate(self, u, v, order):
        f, nu = self.base.evaluate(u, v, order + 3)
        xi, _, _ = affine_normal_jets(f, self.convexity_floor)
        return xi.truncate(order), nu.truncate(order)


def blaschke_normal(front, p):
    """Affine data of a strictly convex front at chart points ``p``."""
    u, v = p
    u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
    floor = 1e-6 / front.bounding_radius() ** 2
    f, _ = front.evaluate(u, v, 4)
    xi, (h11, h12, h22), _ = affine_normal_jets(f, floor)
    fu, fv = f.d(0).truncate(1), f.d(1).truncate(1)
    xi0 = xi.truncate(0)
    vol = det3(fu.truncate(0), fv.truncate(0), xi0).value
    h = np.stack([np.stack([h11.value, h12.value]), np.stack([h12.value, h22.value])])
    h = np.moveaxis(h, (0, 1), (-2, -1))
    metric_volume = np.sqrt(h[..., 0, 0] * h[..., 1, 1] - h[..., 0, 1] ** 2)
    # affine shape operator: xi_j = f_k S_kj, solved against the first fundamental form
    Fu, Fv = fu.value, fv.value
    xu, xv = xi.d(0).value, xi.d(1).value
    E, F, G = (Fu * Fu).sum(0), (Fu * Fv).sum(0), (Fv * Fv).sum(0)
    det_I = E * G - F * F
    B = np.array([[(Fu * xu).sum(0), (Fu * xv).sum(0)], [(Fv * xu).sum(0), (Fv * xv).sum(0)]])
    inv = np.array([[G, -F], [-F, E]]) / det_I
    S = np.einsum("ij...,jk...->...ik", inv, B)
    recon_u = Fu * S[..., 0, 0] + Fv * S[..., 1, 0]
    recon_v = Fu * S[..., 0, 1] + Fv * S[..., 1, 1]
    scale = np.sqrt((xu**2).sum(0) + (xv**2).sum(0)) + np.sqrt((xi0.value**2).sum(0))
    resid = np.sqrt(((xu - recon_u) ** 2).sum(0) + ((xv - recon_v) ** 2).sum(0)) / scale
    nu_j = conormal_jet(fu, fv, xi)
    pairing = np.stack([
        np.stack([(nu_j.d(0).value * Fu).sum(0), (nu_j.d(0).value * Fv).sum(0)]),
        np.stack([(nu_j.d(1).value * Fu).sum(0), (nu_j.d(1).value * Fv).sum(0)]),
    ])
    pairing = np.moveaxis(pairing, (0, 1), (-2, -1))
    return AffineData(
        blaschke_metric=h,
        affine_normal=xi,
        conormal=nu_j.value,
        affine_shape=S,
        volume_form=vol,
        metric_volume=metric_volume,
        tangential_residual=resid,
        conormal_pairing=pairing,
    )


def conormal_jet(fu, fv, xi):
    """Covector ``nu`` with ``nu(xi) = 1`` and ``nu(f_u) = nu(f_v) = 0``.

    The 3x3 system is solved in closed form: ``nu = (f_u x f_v) / det(f_u, f_v, xi)``.
    """
    n = fu.cross(fv)
    vol = det3(fu, fv, xi.truncate(n.order))
    scale = np.sqrt(n.dot(n).value * xi.dot(xi).value)
    if np.any(np.abs(vol.value) <= 1e-12 * scale):
        raise TangentialAffineNormal("affine normal is tangent to the surface")
    return n / vol


def conormal(affine, f_derivs=None):
    """Conormal covector from :class:`AffineData` (already solved there)."""
    return affine.conormal
