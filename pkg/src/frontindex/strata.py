"""Singular curves, signed A3 points and the signed-region complex.

The density is sampled on the vertex grid of the chart rectangle.  The
zero set is extracted by marching squares (saddle cells resolved by a
center sample), crossing points are refined on their grid edges, and the
regions ``lam >= 0`` / ``lam < 0`` are represented by the cubical complex
of same-sign vertices, edges and cells.
"""

from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy import ndimage

from .errors import DegenerateA3, NotMorin, PoleProximity, ResolutionTooCoarse, TopologyMismatch
from .morin import cascade_batch, grid_lambda, tolerances_for, verdicts

TWO_PI = 2.0 * np.pi
MAX_SUBDIVISION = 3


@dataclass
class SingularCurve:
    points: np.ndarray  # (k, 2), wrapped chart coordinates
    lam_dot: np.ndarray  # (k,), in the propagated null-field gauge
    eta: np.ndarray  # (k, 2), gauged unit null directions
    column: np.ndarray  # (k,), adjugate column used per vertex
    closed: bool
    component: int
    edges: np.ndarray
    winding: tuple = (0, 0)
    gauge_flip: bool = False  # null line bundle non-orientable along the loop
    regions: tuple = (None, None)  # (+ component, - component)

    def __len__(self):
        return len(self.points)


@dataclass
class SignedA3Point:
    point: tuple
    sign: int
    lam_ddot: float
    rank_value: float
    component: int


@dataclass
class RegionComponent:
    sign: int
    vertices: int
    edges: int
    faces: int
    boundary_loops: int
    genus: int
    period_rank: int

    @property
    def euler_char(self):
        return self.vertices - self.edges + self.faces


@dataclass
class RegionComplex:
    resolution: int
    labels: np.ndarray  # vertex labels: component index, sign via components[k].sign
    components: list
    euler_char_manifold: object

    def chi(self, sign):
        return sum(c.euler_char for c in self.components if c.sign == sign)

    @property
    def chi_plus(self):
        return self.chi(1)

    @property
    def chi_minus(self):
        return self.chi(-1)

    def count(self, sign):
        return sum(1 for c in self.components if c.sign == sign)


@dataclass
class StrataReport:
    curves: list
    a3_points: list
    complex: RegionComplex
    tolerances: object
    warnings: list = dc_field(default_factory=list)

    @property
    def a3_plus(self):
        return sum(1 for a in self.a3_points if a.sign > 0)

    @property
    def a3_minus(self):
        return sum(1 for a in self.a3_points if a.sign < 0)

    def a3_per_curve(self):
        counts = [0] * len(self.curves)
        for a in self.a3_points:
            counts[a.component] += 1
        return counts


# ---------------------------------------------------------------------------
# grid


class GridData:
    """Density samples and edge/cell bookkeeping for one resolution."""

    def __init__(self, field, n, tol=None, overrides=None):
        if n < 4:
            raise ValueError("grid must have at least 4 vertices per side")
        self.field, self.n = field, n
        dom = field.domain
        self.domain = dom
        self.us, self.vs, self.lam = grid_lambda(field, n)
        self.tol = tol or tolerances_for(field, n, self.lam, overrides)
        if self.tol.degenerate:
            raise NotMorin(
                f"density vanishes identically (max |lam| = {self.tol.lambda_scale:.3e})"
            )
        self.pos = self.lam >= 0
        self.pu, self.pv = dom.periodic
        self.hu = self.us[1] - self.us[0]
        self.hv = self.vs[1] - self.vs[0]
        self.cu = n if self.pu else n - 1  # number of cells along u
        self.cv = n if self.pv else n - 1
        if dom.kind == "sphere":
            self._check_caps()

    # edge ids: horizontal (i,j)-(i+1,j) -> i*n + j ; vertical (i,j)-(i,j+1) -> n*n + i*n + j
    def h_id(self, i, j):
        return i * self.n + j

    def v_id(self, i, j):
        return self.n * self.n + i * self.n + j

    def edge_endpoints(self, eid):
        n = self.n
        eid = np.asarray(eid)
        vert = eid >= n * n
        r = np.where(vert, eid - n * n, eid)
        i, j = r // n, r % n
        i2 = np.where(vert, i, (i + 1) % n)
        j2 = np.where(vert, (j + 1) % n, j)
        return i, j, i2, j2, vert

    def edge_coords(self, eid):
        """Unwrapped endpoint coordinates of edges."""
        i, j, _, _, vert = self.edge_endpoints(eid)
        ua, va = self.us[i], self.vs[j]
        ub = np.where(vert, ua, ua + self.hu)
        vb = np.where(vert, va + self.hv, va)
        return ua, va, ub, vb

    def _check_caps(self):
        for row, vb in ((0, -np.pi / 2), (self.n - 1, np.pi / 2)):
            s = self.pos[:, row]
            if s.min() != s.max():
                raise PoleProximity("singular set reaches the pole cap boundary")
            v0 = self.vs[row]
            rings = np.linspace(v0, vb - np.sign(vb) * 1e-3, 12)[1:]
            uu, vv = np.meshgrid(self.us[:: max(1, self.n // 64)], rings, indexing="ij")
            lam = self.field.jets(uu.ravel(), vv.ravel(), 0).lam.value
            if np.any((lam >= 0) != s[0]):
                raise PoleProximity("density changes sign inside a pole cap")

    def lam_at(self, u, v):
        u, v = self.domain.wrap(u, v)
        return self.field.jets(u, v, 0).lam.value


# ---------------------------------------------------------------------------
# marching squares


def _crossing_edges(g):
    n, pos = g.n, g.pos
    ids = []
    iu = np.arange(n if g.pu else n - 1)
    jj = np.arange(n)
    I, J = np.meshgrid(iu, jj, indexing="ij")
    h_cross = pos[I, J] != pos[(I + 1) % n, J]
    ids.append(g.h_id(I[h_cross], J[h_cross]))
    ii = np.arange(n)
    jv = np.arange(n if g.pv else n - 1)
    I, J = np.meshgrid(ii, jv, indexing="ij")
    v_cross = pos[I, J] != pos[I, (J + 1) % n]
    ids.append(g.v_id(I[v_cross], J[v_cross]))
    return np.concatenate(ids).astype(np.int64)


def _refine_edges(g, eids, max_iter=200):
    """Illinois regula falsi for the zero of lam on each crossing edge."""
    ua, va, ub, vb = g.edge_coords(eids)
    i, j, i2, j2, _ = g.edge_endpoints(eids)
    fa, fb = g.lam[i, j].copy(), g.lam[i2, j2].copy()
    a = np.zeros(eids.size)
    b = np.ones(eids.size)
    t = np.where(fa == 0, 0.0, 0.5)
    ft = np.where(fa == 0, 0.0, np.nan)
    side = np.zeros(eids.size, dtype=int)
    active = fa != 0
    # well inside the singular threshold so vertex verdicts are not borderline
    eps = 1e-4 * g.tol.eps_sing
    for _ in range(max_iter):
        if not active.any():
            break
        k = np.nonzero(active)[0]
        tk = (a[k] * fb[k] - b[k] * fa[k]) / (fb[k] - fa[k])
        bad = ~np.isfinite(tk) | (tk <= a[k]) | (tk >= b[k])
        tk = np.where(bad, 0.5 * (a[k] + b[k]), tk)
        fk = g.lam_at(ua[k] + tk * (ub[k] - ua[k]), va[k] + tk * (vb[k] - va[k]))
        t[k], ft[k] = tk, fk
        same_a = np.sign(fk) == np.sign(fa[k])
        # replace a when f(t) has the sign of f(a)
        ka, kb = k[same_a], k[~same_a]
        a[ka], fa[ka] = t[ka], ft[ka]
        fb[ka] = np.where(side[ka] == 1, fb[ka] * 0.5, fb[ka])
        side[ka] = 1
        b[kb], fb[kb] = t[kb], ft[kb]
        fa[kb] = np.where(side[kb] == -1, fa[kb] * 0.5, fa[kb])
        side[kb] = -1
        done = (np.abs(ft[k]) < eps) | (b[k] - a[k] < 1e-15)
        active[k[done]] = False
    pu = ua + t * (ub - ua)
    pv = va + t * (vb - va)
    pu, pv = g.domain.wrap(pu, pv)
    return np.stack([pu, pv], axis=1), ft


def _saddle_center_positive(g, i, j):
    """Decide which diagonal of a saddle cell is connected inside the cell.

    Returns True when the positive corners join through the cell.
    """
    u0, v0 = g.us[i], g.vs[j]
    lam_c = g.lam_at(u0 + 0.5 * g.hu, v0 + 0.5 * g.hv)
    if abs(float(lam_c)) > g.tol.eps_sing:
        return bool(lam_c >= 0)
    for level in range(1, MAX_SUBDIVISION + 1):
        m = 2**level + 1
        s = np.linspace(0.0, 1.0, m)
        S, T = np.meshgrid(s, s, indexing="ij")
        lam = g.lam_at(u0 + S * g.hu, v0 + T * g.hv).reshape(m, m)
        pos = lam >= 0
        for want, mask in ((True, pos), (False, ~pos)):
            lab, _ = ndimage.label(mask)
            c00, c11 = lab[0, 0], lab[-1, -1]
            c10, c01 = lab[-1, 0], lab[0, -1]
            corners_same = (g.pos[i, j] == want)
            a, b = (c00, c11) if corners_same else (c10, c01)
            if a and a == b:
                return want
    raise ResolutionTooCoarse(f"ambiguous saddle cell ({i}, {j}) after {MAX_SUBDIVISION} subdivisions")


def _cell_segments(g, cross_set):
    """Pairs of crossing edges joined inside each cell, plus saddle info."""
    n = g.n
    I, J = np.meshgrid(np.arange(g.cu), np.arange(g.cv), indexing="ij")
    I, J = I.ravel(), J.ravel()
    I1, J1 = (I + 1) % n, (J + 1) % n
    eb, er = g.h_id(I, J), g.v_id(I1, J)
    et, el = g.h_id(I, J1), g.v_id(I, J)
    cb = np.isin(eb, cross_set)
    cr = np.isin(er, cross_set)
    ct = np.isin(et, cross_set)
    cl = np.isin(el, cross_set)
    count = cb.astype(int) + cr + ct + cl
    pairs = []
    saddles = []
    two = np.nonzero(count == 2)[0]
    E = np.stack([eb, er, et, el], axis=1)
    C = np.stack([cb, cr, ct, cl], axis=1)
    for k in two:
        e = E[k][C[k]]
        pairs.append((int(e[0]), int(e[1])))
    for k in np.nonzero(count == 4)[0]:
        i, j = int(I[k]), int(J[k])
        center_pos = _saddle_center_positive(g, i, j)
        c00 = bool(g.pos[i, j])
        # corners c00, c11 share a sign; they are joined iff the center has it
        if center_pos == c00:
            # cut off c10 (bottom, right) and c01 (left, top)
            pairs.append((int(eb[k]), int(er[k])))
            pairs.append((int(el[k]), int(et[k])))
            diag = ((i, j), (i + 1, j + 1))
        else:
            pairs.append((int(eb[k]), int(el[k])))
            pairs.append((int(er[k]), int(et[k])))
            diag = ((i + 1, j), (i, j + 1))
        saddles.append((i, j, center_pos, diag))
    return pairs, saddles


def _chain(cross, pairs):
    """Chain edge pairs into ordered polylines (closed loops or open arcs)."""
    nbr = {int(e): [] for e in cross}
    for a, b in pairs:
        nbr[a].append(b)
        nbr[b].append(a)
    seen = set()
    chains = []
    ends = [e for e, v in nbr.items() if len(v) == 1]
    for start in ends + [e for e in nbr if len(nbr[e]) == 2]:
        if start in seen:
            continue
        path = [start]
        seen.add(start)
        prev, cur = None, start
        while True:
            nxt = [x for x in nbr[cur] if x != prev and x not in seen]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            path.append(cur)
            seen.add(cur)
        closed = len(nbr[start]) == 2 and start in nbr[cur] and len(path) > 2
        chains.append((np.array(path, dtype=np.int64), closed))
    return chains


def _unwrap_steps(g, pts):
    d = np.diff(pts, axis=0)
    if g.pu:
        d[:, 0] = (d[:, 0] + np.pi) % TWO_PI - np.pi
    if g.pv:
        d[:, 1] = (d[:, 1] + np.pi) % TWO_PI - np.pi
    return d


def _gauge(g, pts, closed):
    """Cascade along a polyline with a continuously propagated null field."""
    bc = cascade_batch(g.field, pts[:, 0], pts[:, 1], 2, tol=g.tol)
    eta = bc.eta.T.copy()
    dots = np.einsum("ij,ij->i", eta[1:], eta[:-1])
    steps = np.where(dots < 0, -1.0, 1.0)
    s = np.concatenate([[1.0], np.cumprod(steps)])
    eta *= s[:, None]
    lam_dot = bc.dots[0] * s
    flip = False
    if closed:
        flip = bool(np.dot(eta[-1], eta[0]) < 0)
    return bc, eta, lam_dot, s, flip


def trace(g):
    """Trace the zero set on a prepared grid."""
    cross = _crossing_edges(g)
    if cross.size == 0:
        return [], []
    pts_all, _ = _refine_edges(g, cross)
    where = {int(e): k for k, e in enumerate(cross)}
    pairs, saddles = _cell_segments(g, cross)
    curves = []
    for cid, (path, closed) in enumerate(_chain(cross, pairs)):
        idx = np.array([where[int(e)] for e in path])
        pts = pts_all[idx]
        bc, eta, lam_dot, _, flip = _gauge(g, pts, closed)
        grad = np.hypot(*bc.grad_lam)
        if np.any(grad <= g.tol.eps_dot):
            k = int(np.argmin(grad))
            raise NotMorin(f"d lam vanishes on the singular set near {tuple(pts[k])}")
        if np.any(bc.zero_adjugate):
            k = int(np.argmax(bc.zero_adjugate))
            raise NotMorin(f"corank-2 point near {tuple(pts[k])}")
        steps = _unwrap_steps(g, np.vstack([pts, pts[:1]]) if closed else pts)
        total = steps.sum(axis=0)
        winding = (0, 0)
        if closed:
            winding = (
                int(round(total[0] / TWO_PI)) if g.pu else 0,
                int(round(total[1] / TWO_PI)) if g.pv else 0,
            )
        curves.append(
            SingularCurve(
                points=pts,
                lam_dot=lam_dot,
                eta=eta,
                column=bc.column.copy(),
                closed=closed,
                component=cid,
                edges=path,
                winding=winding,
                gauge_flip=flip,
            )
        )
    return curves, saddles


def trace_singular_set(field, grid=256):
    """Closed singular curves (open arcs on patches) of ``field``."""
    g = GridData(field, grid)
    return trace(g)[0]


# ---------------------------------------------------------------------------
# A3 points


def _project(g, u, v, iters=16):
    """Damped Newton projection onto ``lam = 0`` along the gradient.

    Steps are capped at one grid spacing; a point that does not reach the
    zero set means the polyline is too sparse to bracket A3 points on.
    """
    cap = max(g.hu, g.hv)
    target = 1e-4 * g.tol.eps_sing
    for _ in range(iters):
        H = g.field.jets(*g.domain.wrap(u, v), 1).lam
        lam = H.value
        if np.all(np.abs(lam) < target):
            return u, v
        gu, gv = H.partial(1, 0), H.partial(0, 1)
        n2 = np.maximum(gu * gu + gv * gv, np.finfo(float).tiny)
        su, sv = lam * gu / n2, lam * gv / n2
        step = np.hypot(su, sv)
        damp = np.minimum(1.0, cap / np.maximum(step, np.finfo(float).tiny))
        u = u - damp * su
        v = v - damp * sv
    lam = g.lam_at(u, v)
    if np.any(np.abs(lam) > g.tol.eps_sing):
        raise ResolutionTooCoarse(
            f"cannot project onto the singular set near {(float(np.ravel(u)[0]), float(np.ravel(v)[0]))}; "
            "refine the grid"
        )
    return u, v


def _lam_dot_at(g, u, v, gauge):
    u, v = _project(g, u, v)
    wu, wv = g.domain.wrap(u, v)
    bc = cascade_batch(g.field, wu, wv, 2, gauge=gauge, tol=g.tol)
    return bc, wu, wv


def locate_a3(curve, field=None, grid=None, tol=None, _g=None):
    """Signed A3 points on one traced curve.

    A3 points sit where the gauged ``lam_dot`` changes sign.  Each bracket is
    refined by bisection along the polyline segment (projected to the zero
    set) until it is shorter than ``1e-10`` times the domain diameter.
    """
    g = _g
    if g is None:
        g = GridData(field, grid or 256, tol)
    k = len(curve)
    if k < 2:
        return []
    ld = curve.lam_dot
    idx_a = np.arange(k - 1)
    idx_b = idx_a + 1
    sb = np.ones(k - 1)
    if curve.closed:
        idx_a = np.append(idx_a, k - 1)
        idx_b = np.append(idx_b, 0)
        sb = np.append(sb, -1.0 if curve.gauge_flip else 1.0)
    sa_val, sb_val = ld[idx_a], ld[idx_b] * sb
    brackets = np.nonzero(np.sign(sa_val) * np.sign(sb_val) < 0)[0]
    if brackets.size == 0:
        return []
    A = curve.points[idx_a[brackets]]
    B = curve.points[idx_b[brackets]]
    d = B - A
    if g.pu:
        d[:, 0] = (d[:, 0] + np.pi) % TWO_PI - np.pi
    if g.pv:
        d[:, 1] = (d[:, 1] + np.pi) % TWO_PI - np.pi
    gauge = curve.eta[idx_a[brackets]].T
    fa = sa_val[brackets]
    lo = np.zeros(brackets.size)
    hi = np.ones(brackets.size)
    seg = np.hypot(d[:, 0], d[:, 1])
    target = 1e-10 * g.domain.diameter
    while np.any((hi - lo) * seg > target):
        mid = 0.5 * (lo + hi)
        bc, _, _ = _lam_dot_at(g, A[:, 0] + mid * d[:, 0], A[:, 1] + mid * d[:, 1], gauge)
        same = np.sign(bc.dots[0]) == np.sign(fa)
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    mid = 0.5 * (lo + hi)
    bc, wu, wv = _lam_dot_at(g, A[:, 0] + mid * d[:, 0], A[:, 1] + mid * d[:, 1], gauge)
    codes = verdicts(bc, g.tol)
    out = []
    for m in range(brackets.size):
        if codes[m] != 3:
            raise DegenerateA3(
                f"lam_dot changes sign at {(float(wu[m]), float(wv[m]))} but the A3 test fails "
                f"(lam_ddot = {bc.dots[1][m]:.3e}, rank = {bc.rank_value[m]:.3e})"
            )
        dd = float(bc.dots[1][m])
        out.append(SignedA3Point((float(wu[m]), float(wv[m])), 1 if dd > 0 else -1, dd, float(bc.rank_value[m]), curve.component))
    return out


# ---------------------------------------------------------------------------
# region complex


class _UnionFind:
    """Union-find over piece labels carrying a lattice offset per node."""

    def __init__(self, size):
        self.parent = list(range(size))
        self.off = [np.zeros(2, dtype=np.int64) for _ in range(size)]
        self.periods = [[] for _ in range(size)]

    def find(self, x):
        path = []
        while self.parent[x] != x:
            path.append(x)
            x = self.parent[x]
        # compress, accumulating offsets towards the root
        for node in reversed(path):
            p = self.parent[node]
            if p != x:
                self.off[node] = self.off[node] + self.off[p]
                self.parent[node] = x
        return x

    def union(self, a, b, delta):
        """Join ``a`` and ``b`` where ``pos(b) = pos(a) + delta`` in the cover."""
        ra, rb = self.find(a), self.find(b)
        oa, ob = self.off[a], self.off[b]  # roots keep a zero offset
        if ra == rb:
            per = oa + delta - ob
            if np.any(per):
                self.periods[ra].append(per)
            return
        self.parent[rb] = ra
        self.off[rb] = oa + delta - ob
        self.periods[ra].extend(self.periods[rb])


def region_complex(field=None, grid=256, curves=None, _g=None):
    """Cubical complex of the signed regions with per-component counts."""
    g = _g if _g is not None else GridData(field, grid)
    if curves is None:
        curves, saddles = trace(g)
    else:
        cross = _crossing_edges(g)
        saddles = _cell_segments(g, cross)[1] if cross.size else []
    n, pos = g.n, g.pos
    labels = np.full((n, n), -1, dtype=np.int64)
    offset = 0
    signs = []
    for sgn, mask in ((1, pos), (-1, ~pos)):
        lab, k = ndimage.label(mask)
        labels[mask] = lab[mask] - 1 + offset
        signs.extend([sgn] * k)
        offset += k
    npieces = offset
    uf = _UnionFind(npieces)
    # periodic gluing
    if g.pu:
        same = pos[-1, :] == pos[0, :]
        for j in np.nonzero(same)[0]:
            uf.union(int(labels[-1, j]), int(labels[0, j]), np.array([1, 0]))
    if g.pv:
        same = pos[:, -1] == pos[:, 0]
        for i in np.nonzero(same)[0]:
            uf.union(int(labels[i, -1]), int(labels[i, 0]), np.array([0, 1]))
    for _, _, _, (ca, cb) in saddles:
        # diagonal corners in cover coordinates; wrapping shifts the lattice offset
        delta = np.array([cb[0] // n - ca[0] // n, cb[1] // n - ca[1] // n])
        uf.union(int(labels[ca[0] % n, ca[1] % n]), int(labels[cb[0] % n, cb[1] % n]), delta)
    roots = np.array([uf.find(p) for p in range(npieces)], dtype=np.int64)
    uniq, comp_of_piece = np.unique(roots, return_inverse=True)
    vlabel = np.where(labels >= 0, comp_of_piece[np.maximum(labels, 0)], -1)
    ncomp = uniq.size
    comp_sign = np.array([signs[r] for r in uniq])

    # vertex counts
    V = np.bincount(vlabel.ravel(), minlength=ncomp)
    # edges with both endpoints of one sign
    E = np.zeros(ncomp, dtype=np.int64)
    I, J = np.meshgrid(np.arange(n if g.pu else n - 1), np.arange(n), indexing="ij")
    m = pos[I, J] == pos[(I + 1) % n, J]
    E += np.bincount(vlabel[I[m], J[m]], minlength=ncomp)
    I, J = np.meshgrid(np.arange(n), np.arange(n if g.pv else n - 1), indexing="ij")
    m = pos[I, J] == pos[I, (J + 1) % n]
    E += np.bincount(vlabel[I[m], J[m]], minlength=ncomp)
    # faces with four same-sign corners
    I, J = np.meshgrid(np.arange(g.cu), np.arange(g.cv), indexing="ij")
    I1, J1 = (I + 1) % n, (J + 1) % n
    m = (pos[I, J] == pos[I1, J]) & (pos[I, J] == pos[I1, J1]) & (pos[I, J] == pos[I, J1])
    F = np.bincount(vlabel[I[m], J[m]], minlength=ncomp)
    # saddle centers: one vertex and two edges joining the diagonal
    for _, _, _, (ca, _) in saddles:
        c = vlabel[ca[0] % n, ca[1] % n]
        V[c] += 1
        E[c] += 2
    # pole caps are disks glued along the boundary rows
    if g.domain.kind == "sphere":
        F[vlabel[0, 0]] += 1
        F[vlabel[0, n - 1]] += 1

    # boundary loops: curves adjacent to each component
    bcount = np.zeros(ncomp, dtype=np.int64)
    for c in curves:
        i, j, i2, j2, _ = g.edge_endpoints(c.edges)
        a, b = vlabel[i, j], vlabel[i2, j2]
        plus = np.where(pos[i, j], a, b)
        minus = np.where(pos[i, j], b, a)
        if plus.min() != plus.max() or minus.min() != minus.max():
            raise TopologyMismatch(f"curve {c.component} borders several regions of one sign")
        c.regions = (int(plus[0]), int(minus[0]))
        bcount[plus[0]] += 1
        bcount[minus[0]] += 1

    comps = []
    for k, r in enumerate(uniq):
        per = uf.periods[r]
        rank = int(np.linalg.matrix_rank(np.array(per, dtype=float))) if per else 0
        genus = 1 if rank == 2 else 0
        comp = RegionComponent(
            sign=int(comp_sign[k]),
            vertices=int(V[k]),
            edges=int(E[k]),
            faces=int(F[k]),
            boundary_loops=int(bcount[k]),
            genus=genus,
            period_rank=rank,
        )
        if g.domain.closed and comp.euler_char != 2 - 2 * genus - comp.boundary_loops:
            raise TopologyMismatch(
                f"component {k} ({'+' if comp.sign > 0 else '-'}): V-E+F = {comp.euler_char} "
                f"but 2-2g-b = {2 - 2 * genus - comp.boundary_loops}"
            )
        comps.append(comp)
    return RegionComplex(resolution=n, labels=vlabel, components=comps, euler_char_manifold=g.domain.euler_char)


# ---------------------------------------------------------------------------
# driver


def stratify(field, grid=256, tol=None, overrides=None):
    """Curves, signed A3 points and the region complex in one pass."""
    g = GridData(field, grid, tol, overrides)
    curves, _ = trace(g)
    a3 = []
    for c in curves:
        a3.extend(locate_a3(c, _g=g))
    cx = region_complex(curves=curves, _g=g)
    warnings = []
    if cx.euler_char_manifold is not None and cx.chi_plus + cx.chi_minus != cx.euler_char_manifold:
        raise TopologyMismatch(
            f"chi(M+) + chi(M-) = {cx.chi_plus + cx.chi_minus} != chi(M) = {cx.euler_char_manifold}"
        )
    for c in curves:
        if c.gauge_flip:
            warnings.append(f"null line field is non-orientable along curve {c.component}")
    return StrataReport(curves=curves, a3_points=a3, complex=cx, tolerances=g.tol, warnings=warnings)
