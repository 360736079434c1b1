"""Parameter domains: the flat torus, the sphere chart, and open patches."""

from dataclasses import dataclass
from math import pi, sqrt

import numpy as np

from . import jets
from .errors import PoleProximity

TWO_PI = 2.0 * pi
_AXES = {"x": 0, "y": 1, "z": 2}


@dataclass(frozen=True)
class SurfaceDomain:
    """Chart rectangle of a closed surface (or an open test patch).

    ``torus``: ``(u, v)`` in ``[0, 2pi)^2``, both periodic.
    ``sphere``: longitude ``u`` in ``[0, 2pi)``, latitude ``v`` in
    ``(-pi/2, pi/2)``; the caps ``|v| > pi/2 - pole_cap`` are handled as
    disks of constant sign.  ``pole_axis`` picks the ambient axis through
    the poles.
    ``patch``: the rectangle ``bounds``, nothing periodic.
    """

    kind: str
    pole_cap: float = 0.05
    pole_axis: str = "z"
    bounds: tuple = ((-1.0, 1.0), (-1.0, 1.0))

    def __post_init__(self):
        if self.kind not in ("torus", "sphere", "patch"):
            raise ValueError(f"unknown domain kind {self.kind!r}")
        if self.pole_axis not in _AXES:
            raise ValueError(f"pole_axis must be one of x, y, z, got {self.pole_axis!r}")
        if self.kind == "sphere" and not 0.0 < self.pole_cap < 0.5:
            raise ValueError("pole_cap must lie in (0, 0.5)")

    @property
    def euler_char(self):
        return {"torus": 0, "sphere": 2}.get(self.kind)

    @property
    def closed(self):
        return self.kind != "patch"

    @property
    def periodic(self):
        return {"torus": (True, True), "sphere": (True, False), "patch": (False, False)}[self.kind]

    @property
    def u_range(self):
        return (0.0, TWO_PI) if self.kind != "patch" else tuple(self.bounds[0])

    @property
    def v_range(self):
        if self.kind == "torus":
            return (0.0, TWO_PI)
        if self.kind == "sphere":
            return (-pi / 2 + self.pole_cap, pi / 2 - self.pole_cap)
        return tuple(self.bounds[1])

    @property
    def diameter(self):
        (u0, u1), (v0, v1) = self.u_range, self.v_range
        return sqrt((u1 - u0) ** 2 + (v1 - v0) ** 2)

    def grid_axes(self, n):
        """Vertex coordinates of an ``n x n`` sampling grid."""
        pu, pv = self.periodic
        (u0, u1), (v0, v1) = self.u_range, self.v_range
        us = u0 + (u1 - u0) * np.arange(n) / n if pu else np.linspace(u0, u1, n)
        vs = v0 + (v1 - v0) * np.arange(n) / n if pv else np.linspace(v0, v1, n)
        return us, vs

    def area_factor(self, v):
        """Chart density of the reference area form (``cos v`` on the sphere)."""
        if self.kind == "sphere":
            if isinstance(v, jets.Jet2):
                return jets.cos(v)
            return np.cos(v)
        if isinstance(v, jets.Jet2):
            return jets.Jet2.constant(np.ones(v.shape), v.order)
        return np.ones_like(np.asarray(v, dtype=float))

    def check_pole(self, v):
        if self.kind == "sphere":
            vmax = pi / 2 - self.pole_cap
            if np.any(np.abs(np.asarray(v)) > vmax + 1e-12):
                raise PoleProximity(f"latitude within {self.pole_cap} of a pole")

    def direction(self, u, v):
        """Unit-sphere point of the chart as a :class:`JetVec3` (sphere only)."""
        cu, su = jets.cos(u), jets.sin(u)
        cv, sv = jets.cos(v), jets.sin(v)
        comps = [None, None, None]
        a = _AXES[self.pole_axis]
        comps[a] = sv
        comps[(a + 1) % 3] = cv * cu
        comps[(a + 2) % 3] = cv * su
        return jets.JetVec3(*comps)

    def wrap(self, u, v):
        """Reduce periodic coordinates into the chart rectangle."""
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        if self.periodic[0]:
            u = np.mod(u, TWO_PI)
        if self.periodic[1]:
            v = np.mod(v, TWO_PI)
        return u, v


TORUS = SurfaceDomain("torus")


def sphere(pole_axis="z", pole_cap=0.05):
    return SurfaceDomain("sphere", pole_cap=pole_cap, pole_axis=pole_axis)


def patch(u0=-1.0, u1=1.0, v0=-1.0, v1=1.0):
    return SurfaceDomain("patch", bounds=((u0, u1), (v0, v1)))
