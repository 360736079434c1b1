"""Hot inner loops of the jet engine.

Every kernel has a numba version and a pure-numpy version with the same
signature.  The numba path is used when numba imports and the environment
variable ``FRONTINDEX_NUMBA`` is not set to ``0``.  Coefficient arrays are
laid out as ``(ncoef, npts)`` C-contiguous float64.
"""

import os

import numpy as np

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAS_NUMBA = False


def _numba_requested():
    return os.environ.get("FRONTINDEX_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")


USE_NUMBA = HAS_NUMBA and _numba_requested()
BACKEND = "numba" if USE_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# numpy reference kernels


def mul_numpy(a, b, groups):
    """Truncated Cauchy product.

    ``groups[k]`` is a pair of index arrays ``(ia, ib)`` listing every
    coefficient pair of ``a`` and ``b`` whose monomials multiply into
    monomial ``k``.
    """
    out = np.empty_like(a)
    for k, (ia, ib) in enumerate(groups):
        if ia.size == 1:
            np.multiply(a[ia[0]], b[ib[0]], out=out[k])
        else:
            out[k] = np.einsum("ij,ij->j", a[ia], b[ib])
    return out


def div_numpy(a, b, groups):
    """Solve ``b * c = a`` coefficient by coefficient in graded order."""
    c = np.empty_like(a)
    b0 = b[0]
    for k, (ia, ib) in enumerate(groups):
        # pairs (p, q) with q != 0 only involve already-solved c_p
        mask = ib != 0
        acc = a[k].copy()
        if mask.any():
            acc -= np.einsum("ij,ij->j", c[ia[mask]], b[ib[mask]])
        c[k] = acc / b0
    return c


def sqrt_numpy(a, groups):
    """Solve ``c * c = a`` with ``c_0 = sqrt(a_0)``."""
    c = np.empty_like(a)
    c[0] = np.sqrt(a[0])
    two_c0 = 2.0 * c[0]
    for k in range(1, len(groups)):
        ia, ib = groups[k]
        mask = (ia != 0) & (ib != 0)
        acc = a[k].copy()
        if mask.any():
            acc -= np.einsum("ij,ij->j", c[ia[mask]], c[ib[mask]])
        c[k] = acc / two_c0
    return c


# ---------------------------------------------------------------------------
# numba kernels (flat triple lists sorted by output index)

if HAS_NUMBA:

    @njit(cache=True)
    def _mul_nb(a, b, tk, ta, tb):
        ncoef, n = a.shape
        out = np.zeros((ncoef, n))
        for t in range(tk.size):
            k = tk[t]
            i = ta[t]
            j = tb[t]
            for p in range(n):
                out[k, p] += a[i, p] * b[j, p]
        return out

    @njit(cache=True)
    def _div_nb(a, b, tk, ta, tb, starts):
        ncoef, n = a.shape
        c = np.empty((ncoef, n))
        for k in range(ncoef):
            for p in range(n):
                c[k, p] = a[k, p]
            for t in range(starts[k], starts[k + 1]):
                j = tb[t]
                if j == 0:
                    continue
                i = ta[t]
                for p in range(n):
                    c[k, p] -= c[i, p] * b[j, p]
            for p in range(n):
                c[k, p] /= b[0, p]
        return c

    @njit(cache=True)
    def _sqrt_nb(a, tk, ta, tb, starts):
        ncoef, n = a.shape
        c = np.empty((ncoef, n))
        for p in range(n):
            c[0, p] = np.sqrt(a[0, p])
        for k in range(1, ncoef):
            for p in range(n):
                c[k, p] = a[k, p]
            for t in range(starts[k], starts[k + 1]):
                i = ta[t]
                j = tb[t]
                if i == 0 or j == 0:
                    continue
                for p in range(n):
                    c[k, p] -= c[i, p] * c[j, p]
            for p in range(n):
                c[k, p] /= 2.0 * c[0, p]
        return c


def mul_numba(a, b, table):
    return _mul_nb(a, b, table.tk, table.ta, table.tb)


def div_numba(a, b, table):
    return _div_nb(a, b, table.tk, table.ta, table.tb, table.starts)


def sqrt_numba(a, table):
    return _sqrt_nb(a, table.tk, table.ta, table.tb, table.starts)


def mul(a, b, table, use_numba=None):
    if USE_NUMBA if use_numba is None else use_numba:
        return mul_numba(a, b, table)
    return mul_numpy(a, b, table.groups)


def div(a, b, table, use_numba=None):
    if USE_NUMBA if use_numba is None else use_numba:
        return div_numba(a, b, table)
    return div_numpy(a, b, table.groups)


def sqrt(a, table, use_numba=None):
    if USE_NUMBA if use_numba is None else use_numba:
        return sqrt_numba(a, table)
    return sqrt_numpy(a, table.groups)
