"""Truncated bivariate Taylor arithmetic.

A :class:`Jet2` of order ``N`` stores the Taylor coefficients
``c[i, j] = d^(i+j) g / du^i dv^j / (i! j!)`` for ``i + j <= N`` in graded
lexicographic order ``(0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...``.  The
leading axis holds coefficients, the trailing axes a batch of base points,
so a whole grid of points is differentiated at once.
"""

from functools import lru_cache
from math import factorial

import numpy as np

from . import _kernels
from .errors import DivisionByZeroJet, NegativeSqrtJet, OrderExhausted

_EPS = np.finfo(float).eps


def ncoef(order):
    return (order + 1) * (order + 2) // 2


def index(i, j):
    d = i + j
    return d * (d + 1) // 2 + j


class _Table:
    def __init__(self, order):
        self.order = order
        self.ncoef = ncoef(order)
        self.exps = [(d - j, j) for d in range(order + 1) for j in range(d + 1)]
        triples = []
        for k, (i, j) in enumerate(self.exps):
            for a, (ai, aj) in enumerate(self.exps):
                bi, bj = i - ai, j - aj
                if bi >= 0 and bj >= 0:
                    triples.append((k, a, index(bi, bj)))
        t = np.array(triples, dtype=np.int64)
        self.tk = np.ascontiguousarray(t[:, 0])
        self.ta = np.ascontiguousarray(t[:, 1])
        self.tb = np.ascontiguousarray(t[:, 2])
        self.starts = np.searchsorted(self.tk, np.arange(self.ncoef + 1)).astype(np.int64)
        self.groups = [
            (self.ta[self.starts[k]:self.starts[k + 1]], self.tb[self.starts[k]:self.starts[k + 1]])
            for k in range(self.ncoef)
        ]
        # d/du and d/dv: result coefficient (i, j) of order N-1
        if order > 0:
            low = [(d - j, j) for d in range(order) for j in range(d + 1)]
            self.du_src = np.array([index(i + 1, j) for i, j in low])
            self.du_fac = np.array([i + 1.0 for i, j in low])
            self.dv_src = np.array([index(i, j + 1) for i, j in low])
            self.dv_fac = np.array([j + 1.0 for i, j in low])


@lru_cache(maxsize=None)
def table(order):
    if order < 0:
        raise ValueError("jet order must be >= 0")
    return _Table(order)


class Jet2:
    """Truncated Taylor expansion of a scalar field at a batch of points."""

    __slots__ = ("c", "order")
    __array_priority__ = 1000

    def __init__(self, coeffs, order):
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.shape[0] != ncoef(order):
            raise ValueError(f"order {order} needs {ncoef(order)} coefficients, got {coeffs.shape[0]}")
        self.c = coeffs
        self.order = order

    # construction -----------------------------------------------------------
    @classmethod
    def constant(cls, value, order):
        value = np.asarray(value, dtype=float)
        c = np.zeros((ncoef(order),) + value.shape)
        c[0] = value
        return cls(c, order)

    @classmethod
    def variables(cls, u0, v0, order):
        """Coordinate jets ``(u, v)`` based at ``(u0, v0)``."""
        u0, v0 = np.broadcast_arrays(np.asarray(u0, dtype=float), np.asarray(v0, dtype=float))
        u = cls.constant(u0, order)
        v = cls.constant(v0, order)
        if order >= 1:
            u.c[1] = 1.0
            v.c[2] = 1.0
        return u, v

    # inspection -------------------------------------------------------------
    @property
    def value(self):
        return self.c[0]

    @property
    def shape(self):
        return self.c.shape[1:]

    def coeff(self, i, j):
        if i + j > self.order:
            raise OrderExhausted(f"coefficient ({i},{j}) exceeds order {self.order}")
        return self.c[index(i, j)]

    def partial(self, i, j):
        """Value of d^(i+j)/du^i dv^j at the base points."""
        return self.coeff(i, j) * (factorial(i) * factorial(j))

    def gradient(self):
        return np.stack([self.partial(1, 0), self.partial(0, 1)])

    def truncate(self, order):
        if order > self.order:
            raise OrderExhausted(f"cannot raise order {self.order} to {order}")
        if order == self.order:
            return self
        return Jet2(self.c[: ncoef(order)], order)

    def __getitem__(self, item):
        if not isinstance(item, tuple):
            item = (item,)
        return Jet2(self.c[(slice(None),) + item], self.order)

    def __repr__(self):
        return f"Jet2(order={self.order}, shape={self.shape})"

    # calculus ---------------------------------------------------------------
    def d(self, axis):
        """Partial derivative along ``u`` (axis 0) or ``v`` (axis 1)."""
        if self.order == 0:
            raise OrderExhausted("cannot differentiate an order-0 jet")
        t = table(self.order)
        src, fac = (t.du_src, t.du_fac) if axis == 0 else (t.dv_src, t.dv_fac)
        fac = fac.reshape((-1,) + (1,) * (self.c.ndim - 1))
        return Jet2(self.c[src] * fac, self.order - 1)

    # arithmetic -------------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Jet2):
            return other
        return Jet2.constant(other, self.order)

    def _pair(self, other):
        other = self._coerce(other)
        n = min(self.order, other.order)
        shape = np.broadcast_shapes(self.shape, other.shape)
        return self.truncate(n).broadcast_to(shape), other.truncate(n).broadcast_to(shape), n

    def broadcast_to(self, shape):
        shape = tuple(shape)
        if shape == self.shape:
            return self
        return Jet2(np.broadcast_to(self.c, self.c.shape[:1] + shape), self.order)

    def __add__(self, other):
        if not isinstance(other, Jet2):
            other = np.asarray(other, dtype=float)
            shape = np.broadcast_shapes(self.shape, other.shape)
            c = np.array(self.broadcast_to(shape).c)
            c[0] += other
            return Jet2(c, self.order)
        a, b, n = self._pair(other)
        return Jet2(a.c + b.c, n)

    __radd__ = __add__

    def __neg__(self):
        return Jet2(-self.c, self.order)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet2):
            other = np.asarray(other, dtype=float)
            shape = np.broadcast_shapes(self.shape, other.shape)
            return Jet2(self.broadcast_to(shape).c * other, self.order)
        a, b, n = self._pair(other)
        if n == 0:
            return Jet2(a.c * b.c, 0)
        ac, bc, shape = _flat(a.c, b.c)
        out = _kernels.mul(ac, bc, table(n))
        return Jet2(out.reshape((out.shape[0],) + shape), n)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet2):
            other = np.asarray(other, dtype=float)
            shape = np.broadcast_shapes(self.shape, other.shape)
            return Jet2(self.broadcast_to(shape).c / other, self.order)
        a, b, n = self._pair(other)
        _check_divisor(b)
        if n == 0:
            return Jet2(a.c / b.c, 0)
        ac, bc, shape = _flat(a.c, b.c)
        out = _kernels.div(ac, bc, table(n))
        return Jet2(out.reshape((out.shape[0],) + shape), n)

    def __rtruediv__(self, other):
        return Jet2.constant(np.broadcast_to(np.asarray(other, dtype=float), self.shape), self.order) / self

    def __pow__(self, p):
        if isinstance(p, (int, np.integer)) and p >= 0:
            out = Jet2.constant(np.ones(self.shape), self.order)
            base = self
            while p:
                if p & 1:
                    out = out * base
                p >>= 1
                if p:
                    base = base * base
            return out
        return power(self, float(p))


def _flat(a, b):
    shape = np.broadcast_shapes(a.shape[1:], b.shape[1:])
    a = np.ascontiguousarray(np.broadcast_to(a, a.shape[:1] + shape)).reshape(a.shape[0], -1)
    b = np.ascontiguousarray(np.broadcast_to(b, b.shape[:1] + shape)).reshape(b.shape[0], -1)
    return a, b, shape


def _check_divisor(b):
    b0 = np.abs(b.c[0])
    scale = np.max(np.abs(b.c), axis=0) if b.order else b0
    if np.any((b0 == 0) | (b0 <= 64 * _EPS * scale)):
        raise DivisionByZeroJet("jet divisor has a vanishing constant term")


def _compose(a, derivs):
    """Jet of ``g(a)`` given ``derivs[n] = g^(n)(a_0)`` for ``n <= order``."""
    h = Jet2(a.c.copy(), a.order)
    h.c[0] = 0.0
    out = Jet2.constant(derivs[0], a.order)
    hp = h
    for n in range(1, a.order + 1):
        out = out + hp * (derivs[n] / factorial(n))
        if n < a.order:
            hp = hp * h
    return out


def sin(a):
    a = _as_jet(a)
    s, c = np.sin(a.value), np.cos(a.value)
    return _compose(a, [(s, c, -s, -c)[n % 4] for n in range(a.order + 1)])


def cos(a):
    a = _as_jet(a)
    s, c = np.sin(a.value), np.cos(a.value)
    return _compose(a, [(c, -s, -c, s)[n % 4] for n in range(a.order + 1)])


def exp(a):
    a = _as_jet(a)
    e = np.exp(a.value)
    return _compose(a, [e] * (a.order + 1))


def log(a):
    a = _as_jet(a)
    x = a.value
    if np.any(x <= 0):
        raise ValueError("log of a jet with non-positive constant term")
    derivs = [np.log(x)] + [(-1) ** (n - 1) * factorial(n - 1) / x**n for n in range(1, a.order + 1)]
    return _compose(a, derivs)


def sqrt(a):
    a = _as_jet(a)
    if np.any(a.value < 0):
        raise NegativeSqrtJet("square root of a jet with negative constant term")
    if np.any(a.value == 0) and a.order > 0:
        raise NegativeSqrtJet("square root of a jet with zero constant term is not analytic")
    if a.order == 0:
        return Jet2(np.sqrt(a.c), 0)
    ac = np.ascontiguousarray(a.c).reshape(a.c.shape[0], -1)
    out = _kernels.sqrt(ac, table(a.order))
    return Jet2(out.reshape(a.c.shape), a.order)


def power(a, p):
    """``a ** p`` for real ``p``; the constant term must be positive."""
    a = _as_jet(a)
    x = a.value
    if np.any(x <= 0):
        raise NegativeSqrtJet("real power of a jet with non-positive constant term")
    derivs = []
    coef = 1.0
    for n in range(a.order + 1):
        derivs.append(coef * x ** (p - n))
        coef *= p - n
    return _compose(a, derivs)


def _as_jet(a):
    if not isinstance(a, Jet2):
        raise TypeError("expected a Jet2")
    return a


_OPS = {
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
    "div": lambda a, b: a / b,
    "pow": lambda a, b: a**b,
    "sqrt": lambda a, b: sqrt(a),
    "sin": lambda a, b: sin(a),
    "cos": lambda a, b: cos(a),
}


def jet_arith(a, b, op):
    """Apply a named operation; unary operations ignore ``b``."""
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown jet operation {op!r}") from None
    return fn(a, b)


def directional_jet_derivative(field, direction):
    """``d(field)(direction)``: one order is consumed."""
    if field.order == 0:
        raise OrderExhausted("directional derivative of an order-0 jet")
    du, dv = direction
    return field.d(0) * du + field.d(1) * dv


class JetVec3:
    """Three jets sharing base points and order."""

    __slots__ = ("x", "y", "z")
    __array_priority__ = 1000

    def __init__(self, x, y, z):
        n = min(x.order, y.order, z.order)
        self.x, self.y, self.z = x.truncate(n), y.truncate(n), z.truncate(n)

    @classmethod
    def constant(cls, vec, order):
        vec = np.asarray(vec, dtype=float)
        return cls(*(Jet2.constant(vec[k], order) for k in range(3)))

    @property
    def order(self):
        return self.x.order

    @property
    def comps(self):
        return (self.x, self.y, self.z)

    @property
    def value(self):
        return np.stack([self.x.value, self.y.value, self.z.value])

    def truncate(self, order):
        return JetVec3(*(c.truncate(order) for c in self.comps))

    def d(self, axis):
        return JetVec3(*(c.d(axis) for c in self.comps))

    def __getitem__(self, item):
        return JetVec3(*(c[item] for c in self.comps))

    def __add__(self, other):
        return JetVec3(*(a + b for a, b in zip(self.comps, other.comps)))

    def __sub__(self, other):
        return JetVec3(*(a - b for a, b in zip(self.comps, other.comps)))

    def __neg__(self):
        return JetVec3(-self.x, -self.y, -self.z)

    def __mul__(self, s):
        return JetVec3(*(c * s for c in self.comps))

    __rmul__ = __mul__

    def __truediv__(self, s):
        if isinstance(s, Jet2):
            inv = 1.0 / s
            return self * inv
        return JetVec3(*(c / s for c in self.comps))

    def dot(self, other):
        return self.x * other.x + self.y * other.y + self.z * other.z

    def cross(self, other):
        return JetVec3(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )

    def norm(self):
        return sqrt(self.dot(self))

    def normalized(self):
        return self / self.norm()

    def linear(self, A):
        """Apply a constant 3x3 matrix."""
        A = np.asarray(A, dtype=float)
        rows = []
        for i in range(3):
            rows.append(self.x * A[i, 0] + self.y * A[i, 1] + self.z * A[i, 2])
        return JetVec3(*rows)


def det3(a, b, c):
    """Determinant of the 3x3 matrix with columns ``a, b, c``."""
    return a.cross(b).dot(c)
