"""Brute-force ground truth for small systems: sweep completion lengths and
reflection branches of a k-tree construction, record the distance on f, and
cluster the values into intervals."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import networkx as nx
import numpy as np
from scipy.optimize import least_squares

from .edcs import Edcs
from .errors import InputError, NotANonEdge, OracleInapplicable
from .graph import Graph, pair, sorted_vertices, vkey
from .minors import complete_to_k_tree, is_partial_k_tree
from .realize import construction_plan

TOL = 1e-9
MAX_VERTICES = 12


@dataclass(frozen=True)
class IntervalSet:
    """Sorted disjoint closed intervals; points are intervals with lo == hi."""

    intervals: tuple = ()

    def __len__(self) -> int:
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    @property
    def count(self) -> int:
        return len(self.intervals)

    def is_single_interval(self) -> bool:
        return len(self.intervals) == 1

    def hull(self):
        if not self.intervals:
            return None
        return self.intervals[0][0], self.intervals[-1][1]

    def contains(self, x: float, tol: float = 1e-9) -> bool:
        return any(lo - tol <= x <= hi + tol for lo, hi in self.intervals)

    def as_list(self) -> list:
        return [[lo, hi] for lo, hi in self.intervals]


def cluster(values, gap: float) -> IntervalSet:
    """Sort ``values`` and merge neighbours at most ``gap`` apart into closed intervals."""
    if not gap > 0:
        raise InputError("cluster gap must be positive")
    vals = np.sort(np.asarray(list(values), dtype=float).ravel())
    vals = vals[np.isfinite(vals)]
    if vals.size == 0:
        return IntervalSet(())
    breaks = np.nonzero(np.diff(vals) > gap)[0]
    starts = np.concatenate([[0], breaks + 1])
    ends = np.concatenate([breaks, [vals.size - 1]])
    return IntervalSet(tuple((float(vals[s]), float(vals[t])) for s, t in zip(starts, ends)))


# ---------------------------------------------------------------- zero-length contraction


def _contract_zeros(g: Graph, lengths: dict):
    """Identify endpoints of zero-length edges.

    Returns ``(graph, lengths, rep)`` or None when the identification forces a
    positive-length edge onto a point or two different lengths onto one pair.
    """
    parent = {v: v for v in g.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (u, v), d in lengths.items():
        if d <= 1e-15:
            a, b = find(u), find(v)
            if a != b:
                if vkey(b) < vkey(a):
                    a, b = b, a
                parent[b] = a
    rep = {v: find(v) for v in g.vertices}
    out = {}
    for (u, v), d in lengths.items():
        a, b = rep[u], rep[v]
        if a == b:
            if d > 1e-12:
                return None
            continue
        p = pair(a, b)
        if p in out and abs(out[p] - d) > 1e-9 * max(1.0, d):
            return None
        out[p] = d
    verts = sorted_vertices(set(rep.values()))
    return Graph(verts, out.keys()), out, rep


def _bound(g: Graph, lengths: dict, u, v) -> float:
    """Shortest-path length between u and v (an upper bound on their distance)."""
    h = nx.Graph()
    h.add_nodes_from(g.vertices)
    for (a, b), d in lengths.items():
        h.add_edge(a, b, weight=d)
    try:
        return float(nx.shortest_path_length(h, u, v, weight="weight"))
    except nx.NetworkXNoPath:
        return math.inf


# ---------------------------------------------------------------- vectorized sweep


@dataclass
class _Sweep:
    dim: int
    index: dict
    plan: list
    fixed: dict  # pair -> length
    params: dict  # pair -> (lo, hi) absolute range (upper bound for conditional ranges)
    grids: dict  # pair -> number of grid points (>= 2)
    checks: list  # (pair, length, tolerance)
    max_rows: int = 400_000
    angle_grid: int = 64
    stats: dict = field(default_factory=dict)

    @property
    def vertices(self) -> list:
        return sorted(self.index, key=self.index.get)


def _circle_rows(A, B, ra, rb, tol=TOL):
    """Vectorized circle intersection: returns (plus, minus, ok, degenerate)."""
    diff = B - A
    d = np.hypot(diff[:, 0], diff[:, 1])
    deg = d <= tol
    ok = (d <= ra + rb + tol) & (d >= np.abs(ra - rb) - tol)
    dd = np.where(deg, 1.0, d)
    u = diff / dd[:, None]
    a = (ra ** 2 - rb ** 2 + dd ** 2) / (2 * dd)
    h2 = ra ** 2 - a ** 2
    scale = np.maximum(np.maximum(ra, dd), 1.0)
    tangent = (np.minimum(np.abs(dd - (ra + rb)), np.abs(dd - np.abs(ra - rb))) <= tol) | (h2 <= 1e-12 * scale ** 2)
    h = np.where(tangent, 0.0, np.sqrt(np.maximum(h2, 0.0)))
    mid = A + a[:, None] * u
    perp = np.stack([-u[:, 1], u[:, 0]], axis=1)
    plus = mid + h[:, None] * perp
    minus = mid - h[:, None] * perp
    deg_ok = deg & (np.abs(ra - rb) <= tol)
    ok = np.where(deg, deg_ok, ok)
    return plus, minus, ok, deg


def _sphere_rows(A, B, C, ra, rb, rc, tol=TOL):
    ex = B - A
    d = np.linalg.norm(ex, axis=1)
    n = np.cross(B - A, C - A)
    nn = np.linalg.norm(n, axis=1)
    deg = (d <= tol) | (nn <= tol * np.maximum(d, 1.0))
    dd = np.where(deg, 1.0, d)
    nns = np.where(deg, 1.0, nn)
    ex = ex / dd[:, None]
    ez = n / nns[:, None]
    ey = np.cross(ez, ex)
    i = np.einsum("ij,ij->i", ex, C - A)
    j = np.einsum("ij,ij->i", ey, C - A)
    js = np.where(np.abs(j) < 1e-300, 1.0, j)
    x = (ra ** 2 - rb ** 2 + dd ** 2) / (2 * dd)
    y = (ra ** 2 - rc ** 2 + i ** 2 + j ** 2 - 2 * i * x) / (2 * js)
    z2 = ra ** 2 - x ** 2 - y ** 2
    scale = np.maximum(np.maximum(ra, dd), 1.0)
    flat = z2 <= 1e-12 * scale ** 2
    z = np.where(flat, 0.0, np.sqrt(np.maximum(z2, 0.0)))
    base = A + x[:, None] * ex + y[:, None] * ey
    ok = z2 >= -2 * tol * scale
    plus = base + z[:, None] * ez
    minus = base - z[:, None] * ez
    return plus, minus, ok & ~deg, deg


def _run_sweep(sw: _Sweep, target=None, points=False):
    """Target distances over feasible leaves (leaf count without a target).

    With ``points`` the leaf coordinates are returned too, columns ordered
    as ``sw.vertices``.
    """
    dim = sw.dim
    n = len(sw.index)
    P = np.zeros((1, n, dim))
    lengths_cache: dict = {}
    R = 1

    def col(v):
        return sw.index[v]

    for step, (v, parents, extra) in enumerate(sw.plan):
        iv = col(v)
        # fix parent-edge lengths, expanding parameters over their grids
        L = []
        for k, p in enumerate(parents):
            e = pair(v, p)
            if e in sw.fixed:
                L.append(np.full(P.shape[0], sw.fixed[e]))
                continue
            if e in lengths_cache:
                L.append(lengths_cache[e])
                continue
            lo_abs, hi_abs = sw.params[e]
            lo = np.full(P.shape[0], lo_abs)
            hi = np.full(P.shape[0], hi_abs)
            # conditional range from triangles with the other known parent sides
            known = list(zip(parents[:k], L))
            for q in parents[k + 1:]:
                eq = pair(v, q)
                if eq in sw.fixed:
                    known.append((q, np.full(P.shape[0], sw.fixed[eq])))
                elif eq in lengths_cache:
                    known.append((q, lengths_cache[eq]))
            for q, Lq in known:
                dpq = np.linalg.norm(P[:, col(p)] - P[:, col(q)], axis=1)
                lo = np.maximum(lo, np.abs(dpq - Lq))
                hi = np.minimum(hi, dpq + Lq)
            m = sw.grids[e]
            m = max(2, min(m, sw.max_rows // max(P.shape[0], 1)))
            t = np.linspace(0.0, 1.0, m)
            keep = hi >= lo - TOL
            vals = lo[:, None] + (np.maximum(hi, lo) - lo)[:, None] * t[None, :]
            P = np.repeat(P, m, axis=0)
            L = [np.repeat(x, m) for x in L]
            for key in list(lengths_cache):
                lengths_cache[key] = np.repeat(lengths_cache[key], m)
            mask = np.repeat(keep, m)
            newL = vals.ravel()
            P, newL = P[mask], newL[mask]
            L = [x[mask] for x in L]
            for key in list(lengths_cache):
                lengths_cache[key] = lengths_cache[key][mask]
            lengths_cache[e] = newL
            L.append(newL)
        R = P.shape[0]
        if R == 0:
            break
        if step == 0:
            continue
        if step == 1:
            P[:, iv, 0] = L[0]
            continue
        pts = [P[:, col(p)] for p in parents]
        if dim == 2 and step == 2:
            plus, _, ok, deg = _circle_rows(pts[0][:, :2], pts[1][:, :2], L[0], L[1])
            plus = _fix_degenerate_base(plus, pts[0][:, :2], L[0], deg)
            P[:, iv] = plus
            P = P[ok]
            _mask_cache(lengths_cache, ok)
        elif dim == 3 and step == 2:
            plus, _, ok, deg = _circle_rows(pts[0][:, :2], pts[1][:, :2], L[0], L[1])
            plus = _fix_degenerate_base(plus, pts[0][:, :2], L[0], deg)
            P[:, iv, :2] = plus
            P[:, iv, 2] = 0.0
            P = P[ok]
            _mask_cache(lengths_cache, ok)
        else:
            P = _place_rows(sw, P, iv, parents, pts, L, lengths_cache, base=(dim == 3 and step == 3),
                            extra=extra)
        # constraint checks on extra neighbours
        if extra and P.shape[0]:
            good = np.ones(P.shape[0], dtype=bool)
            for w in extra:
                e = pair(v, w)
                length, tol = next((ln, tl) for pp, ln, tl in sw.checks if pp == e)
                dist = np.linalg.norm(P[:, iv] - P[:, col(w)], axis=1)
                good &= np.abs(dist - length) <= tol
            P = P[good]
            _mask_cache(lengths_cache, good)
        if P.shape[0] == 0:
            break
    sw.stats["leaves"] = P.shape[0]
    if target is None:
        return P.shape[0]
    a, b = target
    vals = np.linalg.norm(P[:, col(a)] - P[:, col(b)], axis=1)
    return (vals, P) if points else vals


def _system(verts, lengths):
    idx = {v: i for i, v in enumerate(verts)}
    edges = list(lengths.items())
    I = np.array([idx[u] for (u, _), _ in edges], dtype=int)
    J = np.array([idx[v] for (_, v), _ in edges], dtype=int)
    D = np.array([d for _, d in edges], dtype=float)
    return idx, I, J, D


def _ls_solve(n, dim, I, J, D, z0, max_nfev=2000):
    """Least squares on scaled squared-distance residuals; returns (X, max error)."""
    scale = max(float(D.max()), 1.0)
    rows = np.arange(I.size)

    def res(z):
        X = z.reshape(n, dim)
        diff = X[I] - X[J]
        return (np.einsum("ij,ij->i", diff, diff) - D ** 2) / scale

    def jac(z):
        X = z.reshape(n, dim)
        diff = 2 * (X[I] - X[J]) / scale
        out = np.zeros((I.size, n * dim))
        for c in range(dim):
            out[rows, I * dim + c] = diff[:, c]
            out[rows, J * dim + c] = -diff[:, c]
        return out

    method = "lm" if I.size >= n * dim else "trf"
    sol = least_squares(res, z0, jac=jac, method=method, xtol=1e-15, ftol=1e-15, gtol=1e-15,
                        max_nfev=max_nfev)
    X = sol.x.reshape(n, dim)
    return X, float(np.abs(np.linalg.norm(X[I] - X[J], axis=1) - D).max())


def _polish(g: Graph, lengths: dict, dim: int, verts: list, X0: np.ndarray, f):
    """Local least-squares solve of g from X0; returns the distance on f or None."""
    idx, I, J, D = _system(verts, lengths)
    X, err = _ls_solve(len(verts), dim, I, J, D, X0.ravel())
    if err > 1e-7:
        return None
    return float(np.linalg.norm(X[idx[f[0]]] - X[idx[f[1]]]))


def _mask_cache(cache, mask):
    for key in list(cache):
        cache[key] = cache[key][mask]


def _fix_degenerate_base(plus, A, r, deg):
    if np.any(deg):
        plus = plus.copy()
        plus[deg] = A[deg] + np.stack([r[deg], np.zeros(int(deg.sum()))], axis=1)
    plus[:, 1] = np.abs(plus[:, 1])
    return plus


def _place_rows(sw, P, iv, parents, pts, L, cache, base=False, extra=()):
    dim = sw.dim
    if dim == 2:
        plus, minus, ok, deg = _circle_rows(pts[0], pts[1], L[0], L[1])
    else:
        plus, minus, ok, deg = _sphere_rows(pts[0], pts[1], pts[2], L[0], L[1], L[2])
    R = P.shape[0]
    normal = ok & ~deg
    blocks = []
    caches = []
    idx_normal = np.nonzero(normal)[0]
    if idx_normal.size:
        choices = [plus] if base else [plus, minus]
        for sol in choices:
            Q = P[idx_normal].copy()
            Q[:, iv] = sol[idx_normal]
            blocks.append(Q)
            caches.append(idx_normal)
    idx_deg = np.nonzero(deg & ok)[0] if dim == 2 else np.nonzero(deg)[0]
    if idx_deg.size:
        Qd, src = _degenerate_rows(sw, P[idx_deg], iv, parents, L, idx_deg, extra)
        if Qd.shape[0]:
            blocks.append(Qd)
            caches.append(src)
    if not blocks:
        _mask_cache(cache, np.zeros(R, dtype=bool))
        return P[:0]
    src = np.concatenate(caches)
    for key in list(cache):
        cache[key] = cache[key][src]
    return np.concatenate(blocks, axis=0)


def _degenerate_rows(sw, P, iv, parents, L, idx, extra=()):
    """Rows whose parent centres coincide (2D) or are collinear (3D).

    In 2D the vertex lies on a circle; a checked neighbour not at the centre
    pins it to at most two points, otherwise the circle is swept by angle.
    """
    dim = sw.dim
    ia = sw.index[parents[0]]
    r = L[0][idx]
    spread = np.max(np.linalg.norm(P - P[:, ia:ia + 1], axis=2), axis=1)
    collapsed = spread <= TOL
    out, src = [], []
    if dim == 2:
        zero = r <= TOL
        single = collapsed | zero
        if np.any(single):
            Q = P[single].copy()
            Q[:, iv] = P[single, ia] + np.stack([r[single], np.zeros(int(single.sum()))], axis=1)
            out.append(Q)
            src.append(idx[single])
        rest = ~single
        if extra and np.any(rest):
            w = extra[0]
            iw = sw.index[w]
            length = next(ln for pp, ln, _ in sw.checks if pp == pair(sw.vertices[iv], w))
            A, B = P[:, ia], P[:, iw]
            plus, minus, ok, deg = _circle_rows(A, B, r, np.full(r.shape, length))
            pinned = rest & ~deg
            good = pinned & ok
            for sol in (plus, minus):
                Q = P[good].copy()
                Q[:, iv] = sol[good]
                out.append(Q)
                src.append(idx[good])
            rest = rest & deg
        if np.any(rest):
            ang = np.linspace(0.0, 2 * np.pi, sw.angle_grid, endpoint=False)
            k = sw.angle_grid
            Q = np.repeat(P[rest], k, axis=0)
            rr = np.repeat(r[rest], k)
            aa = np.tile(ang, int(rest.sum()))
            Q[:, iv] = Q[:, ia] + np.stack([rr * np.cos(aa), rr * np.sin(aa)], axis=1)
            out.append(Q)
            src.append(np.repeat(idx[rest], k))
    else:
        # collinear trilateration: one canonical point per row, checked below
        for row in range(P.shape[0]):
            from .realize import _degenerate_sphere

            sols = _degenerate_sphere([P[row, sw.index[p]] for p in parents],
                                      [L[k][idx[row]] for k in range(3)], TOL)
            for s in sols:
                Q = P[row:row + 1].copy()
                Q[0, iv] = s
                out.append(Q)
                src.append(idx[row:row + 1])
    if not out:
        return P[:0], idx[:0]
    return np.concatenate(out, axis=0), np.concatenate(src)


# ---------------------------------------------------------------- plans


def _base_for(tree: Graph, f, k: int):
    a, b = f
    start = [a, b]
    while len(start) < k + 1:
        common = None
        for v in start:
            common = set(tree.neighbors(v)) if common is None else common & tree.neighbors(v)
        common -= set(start)
        if not common:
            return None
        start.append(sorted_vertices(common)[0])
    return start


def _static_bounds(tree: Graph, fixed: dict, params: dict) -> dict:
    """Narrow each swept length by the triangles whose other two sides are fixed."""
    out = {}
    for (u, v), (lo, hi) in params.items():
        for w in tree.neighbors(u) & tree.neighbors(v):
            a, b = fixed.get(pair(u, w)), fixed.get(pair(v, w))
            if a is not None and b is not None:
                lo, hi = max(lo, abs(a - b)), min(hi, a + b)
        out[(u, v)] = (lo, hi)
    return out


ROW_BUDGET = 100_000


def _aux_points(want: int, count: int, lead: int) -> int:
    """Points per swept completion length so that the product stays near ROW_BUDGET."""
    if count == 0:
        return want
    return max(5, min(want, int((ROW_BUDGET / lead) ** (1.0 / count))))


def _make_sweep(g: Graph, lengths: dict, f, k: int, grid: int, fmax: float, fixed_f=None):
    """Choose a construction for ``g`` plus the pair f; returns (sweep, mode)."""
    h = g.add_edges([f])
    total = sum(lengths.values()) + 1.0
    if is_partial_k_tree(h, k):
        aux = complete_to_k_tree(h, k)
        tree = h.add_edges(aux)
        start = _base_for(tree, f, k) if tree.n >= k + 1 else [f[0], f[1]]
        plan = construction_plan(tree, k, start=start)
        params = {p: (0.0, total) for p in aux}
        fixed = dict(lengths)
        if fixed_f is None:
            params[f] = (0.0, fmax)
        else:
            fixed[f] = fixed_f
        params = _static_bounds(tree, fixed, params)
        per = _aux_points(max(9, grid // 4), len(aux), grid + 1 if fixed_f is None else 1)
        grids = {p: per for p in aux}
        grids[f] = grid + 1
        return _Sweep(k, {v: i for i, v in enumerate(tree.vertices)}, plan, fixed, params, grids, []), "A"
    if fixed_f is None and is_partial_k_tree(g, k):
        aux = complete_to_k_tree(g, k)
        tree = g.add_edges(aux)
        plan = construction_plan(tree, k)
        params = _static_bounds(tree, lengths, {p: (0.0, total) for p in aux})
        grids = {p: _aux_points(grid + 1, len(aux), 1) for p in aux}
        return _Sweep(k, {v: i for i, v in enumerate(tree.vertices)}, plan, dict(lengths), params, grids, []), "B"
    # constructible with f: k-tree steps over g + f, remaining edges checked
    if h.n < k + 1:
        raise OracleInapplicable("graph too small for a construction")
    start = _base_for(h, f, k)
    try:
        if start is None:
            raise InputError("f lies in no base clique of g + f")
        plan = construction_plan(h, k, start=start)
    except InputError as exc:
        if fixed_f is not None:
            # grid-tolerance checks cannot certify a single configuration
            raise OracleInapplicable(f"graph is outside the oracle's constructible class: {exc}") from exc
        return _spanning_sweep(g, lengths, f, k, grid, fmax), "D"
    step = fmax / max(grid, 1) if math.isfinite(fmax) else 1e-3
    ctol = 1e-6 if fixed_f is not None else max(1e-6, 4.0 * step)
    checks = [(pair(v, w), lengths[pair(v, w)], ctol) for v, _, extra in plan for w in extra]
    fixed = dict(lengths)
    params = {}
    if fixed_f is None:
        params[f] = (0.0, fmax)
    else:
        fixed[f] = fixed_f
    grids = {f: grid + 1}
    return _Sweep(k, {v: i for i, v in enumerate(h.vertices)}, plan, fixed, params, grids, checks), "C"


def _spanning_sweep(g: Graph, lengths: dict, f, k: int, grid: int, fmax: float) -> _Sweep:
    """Sweep over a k-tree completion of a spanning partial k-tree S of g + f
    (f in S); edges of g outside S are checked with a grid-sized tolerance."""
    kept = [f]
    for e in g.sorted_edges():
        if is_partial_k_tree(Graph(g.vertices, kept + [e]), k):
            kept.append(e)
    s = Graph(g.vertices, kept)
    aux = complete_to_k_tree(s, k)
    tree = s.add_edges(aux)
    start = _base_for(tree, f, k) if tree.n >= k + 1 else [f[0], f[1]]
    if start is None:
        raise OracleInapplicable("no construction order starts at f")
    try:
        plan = construction_plan(tree, k, start=start)
    except InputError as exc:
        raise OracleInapplicable(f"graph is outside the oracle's constructible class: {exc}") from exc
    total = sum(lengths.values()) + 1.0
    fixed = {e: lengths[e] for e in kept if e != f}
    params = _static_bounds(tree, fixed, {p: (0.0, total) for p in aux})
    params[f] = (0.0, fmax)
    grids = {p: _aux_points(max(9, grid // 4), len(aux), grid + 1) for p in aux}
    grids[f] = grid + 1
    step = max([(hi - lo) / (grids[p] - 1) for p, (lo, hi) in params.items()] + [1e-9])
    ctol = max(1e-6, 4.0 * step)
    # checked edges are attached to the step that places their later endpoint
    pos = {v: i for i, (v, _, _) in enumerate(plan)}
    extras = {v: list(ex) for v, _, ex in plan}
    for u, v in g.sorted_edges():
        if (u, v) in fixed or (u, v) == f:
            continue
        late, early = (u, v) if pos[u] > pos[v] else (v, u)
        extras[late].append(early)
    plan = [(v, parents, extras[v]) for v, parents, _ in plan]
    checks = [(pair(v, w), lengths[pair(v, w)], ctol) for v, _, ex in plan for w in ex]
    return _Sweep(k, {v: i for i, v in enumerate(tree.vertices)}, plan, fixed, params, grids, checks)


# ---------------------------------------------------------------- public API


def _prepare(e: Edcs, f):
    if not e.is_point:
        raise InputError("oracle needs point-valued distances (subdivide intervals first)")
    f = pair(*f)
    for v in f:
        if v not in e.graph:
            raise InputError(f"{v!r} is not a vertex")
    if e.graph.has_edge(f):
        raise NotANonEdge(f"{f!r} is an edge")
    if e.graph.n > 4 * MAX_VERTICES:
        raise OracleInapplicable("graph too large for the oracle")
    return f


def _least_squares_probe(g: Graph, lengths: dict, dim: int, attempts: int, seed: int = 0,
                         tol: float = 1e-8) -> bool:
    if not lengths:
        return True
    verts = list(g.vertices)
    _, I, J, D = _system(verts, lengths)
    scale = max(float(D.max()), 1.0)
    rng = np.random.default_rng(seed)
    for _ in range(attempts):
        z0 = rng.normal(scale=scale, size=len(verts) * dim)
        _, err = _ls_solve(len(verts), dim, I, J, D, z0, max_nfev=4000)
        if err <= tol:
            return True
    return False


def realizability_probe(e: Edcs, assignment: dict, attempts: int = 8, grid: int = 64) -> bool:
    """Can ``e`` together with ``assignment`` ({pair: length}) be realized in e.dim?

    Tries a branch/grid sweep of a k-tree construction first, then
    least-squares solves from ``attempts`` random starts (fixed seed).
    """
    if not e.is_point:
        raise InputError("probe needs point-valued distances")
    lengths = dict(e.lengths())
    for p, val in assignment.items():
        p = pair(*p)
        if p in lengths and abs(lengths[p] - float(val)) > 1e-12:
            return False
        lengths[p] = float(val)
    g = Graph(e.graph.vertices, lengths.keys())
    red = _contract_zeros(g, lengths)
    if red is None:
        return False
    g2, l2, _ = red
    k = e.dim
    if g2.m == 0:
        return True
    anchor = g2.sorted_edges()[0]
    rest = {p: d for p, d in l2.items() if p != anchor}
    try:
        sw, _ = _make_sweep(g2.remove_edges([anchor]), rest, anchor, k, grid, math.inf,
                            fixed_f=l2[anchor])
        if _run_sweep(sw) > 0:
            return True
    except OracleInapplicable:
        pass
    return _least_squares_probe(g2, l2, k, attempts)


def _drop_pendants(g: Graph, lengths: dict, keep: set):
    """Remove vertices of degree at most 1 outside ``keep``; they never constrain the rest."""
    adj = {v: set(ws) for v, ws in g.adj.items()}
    queue = [v for v in adj if len(adj[v]) <= 1 and v not in keep]
    gone = set()
    while queue:
        v = queue.pop()
        if v in gone or len(adj[v]) > 1:
            continue
        gone.add(v)
        for w in adj.pop(v):
            adj[w].discard(v)
            if len(adj[w]) <= 1 and w not in keep:
                queue.append(w)
    if not gone:
        return g, lengths
    h = g.induced([v for v in g.vertices if v not in gone])
    return h, {p: lengths[p] for p in h.edges}


def cayley_space_oracle(e: Edcs, f, grid: int = 400, refine: bool = True,
                        probe_attempts: int = 4, end_tol: float = 1e-6,
                        refine_ends: bool = True) -> IntervalSet:
    """Brute-force Cayley configuration space of the non-edge ``f``.

    Zero-length edges are contracted first (exact). The remaining system is
    built along a k-tree construction (k = e.dim): through g + f when that is
    a partial k-tree (f swept on a grid of ``grid`` steps), else through a
    completion of g (f measured), else with f in the base and surplus edges
    checked. Values are clustered with gap 2 x resolution. With ``refine``,
    gaps are bisected with realizability probes to remove sweep artefacts,
    and (with ``refine_ends``) every interval end is bisected with probes
    down to ``end_tol``.
    """
    f = _prepare(e, f)
    k = e.dim
    red = _contract_zeros(e.graph, e.lengths())
    if red is None:
        return IntervalSet(())
    g, lengths, rep = red
    a, b = rep[f[0]], rep[f[1]]
    g, lengths = _drop_pendants(g, lengths, {a, b})
    if g.n > MAX_VERTICES:
        raise OracleInapplicable(f"oracle supports at most {MAX_VERTICES} vertices after contraction")
    if a == b:
        ok = realizability_probe(Edcs(g, lengths, frozenset(), k), {}, attempts=probe_attempts)
        return IntervalSet(((0.0, 0.0),)) if ok else IntervalSet(())
    f2 = pair(a, b)
    fmax = _bound(g, lengths, a, b)
    if not math.isfinite(fmax):
        ok = realizability_probe(Edcs(g, lengths, frozenset(), k), {}, attempts=probe_attempts)
        return IntervalSet(((0.0, math.inf),)) if ok else IntervalSet(())
    sw, mode = _make_sweep(g, lengths, f2, k, grid, fmax)
    vals, P = _run_sweep(sw, target=f2, points=True)
    vals = np.where(vals < 1e-12, 0.0, vals)
    res = fmax / grid if fmax > 0 else 1e-9
    gap = 2.0 * res
    if mode == "C":
        vals = _polish_clusters(g, lengths, k, sw, vals, P, f2, gap)
    elif mode == "D":
        vals = np.concatenate([vals, _polish_clusters(g, lengths, k, sw, vals, P, f2, gap)])
    if vals.size == 0 and refine:
        # the sweep can miss thin feasible slices; sample solutions directly
        vals = _ls_values(g, lengths, k, f2, attempts=4 * probe_attempts)
    iset = cluster(vals, gap)
    if not refine or not len(iset):
        return iset
    sys_g = Edcs(g, lengths, frozenset(), k)

    def probe(x):
        return realizability_probe(sys_g, {f2: x}, attempts=probe_attempts)

    extra = []
    budget = [64]

    def bisect(lo, hi, depth):
        if hi - lo <= gap or depth > 10 or budget[0] <= 0:
            return
        mid = (lo + hi) / 2
        budget[0] -= 1
        if probe(mid):
            extra.append(mid)
            bisect(lo, mid, depth + 1)
            bisect(mid, hi, depth + 1)

    for (_, hi0), (lo1, _) in zip(iset.intervals, iset.intervals[1:]):
        bisect(hi0, lo1, 0)
    if extra:
        iset = cluster(np.concatenate([vals, extra]), gap)
    if not refine_ends:
        return iset
    out = []
    for lo, hi in iset.intervals:
        near = [x for x in (lo - res / 2, hi + res / 2) if 0.0 <= x <= fmax]
        if hi - lo <= 1e-9 and not any(probe(x) for x in near):
            out.append((lo, hi))
            continue
        out.append((_refine_end(probe, lo, res, 0.0, end_tol),
                    _refine_end(probe, hi, res, fmax, end_tol)))
    return cluster_merge(out)


def cluster_merge(intervals) -> IntervalSet:
    merged = []
    for lo, hi in sorted(intervals):
        if merged and lo <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
        else:
            merged.append((lo, hi))
    return IntervalSet(tuple(merged))


def _refine_end(probe, inside: float, step: float, limit: float, tol: float) -> float:
    """Move an interval end from a feasible value towards ``limit``: walk out
    with doubling steps while feasible, then bisect the last bracket."""
    sign = 1.0 if limit >= inside else -1.0
    for _ in range(16):
        if abs(limit - inside) <= tol:
            return limit if probe(limit) else inside
        outside = inside + sign * min(step, abs(limit - inside))
        if not probe(outside):
            break
        inside = outside
        step *= 2
    else:
        return inside
    while abs(outside - inside) > tol:
        mid = (inside + outside) / 2
        if probe(mid):
            inside = mid
        else:
            outside = mid
    return inside


def _ls_values(g: Graph, lengths: dict, dim: int, f, attempts: int, seed: int = 0) -> np.ndarray:
    """Values of f at least-squares realizations of g from random starts."""
    verts = list(g.vertices)
    idx, I, J, D = _system(verts, lengths)
    scale = max(float(D.max()), 1.0)
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(attempts):
        X, err = _ls_solve(len(verts), dim, I, J, D, rng.normal(scale=scale, size=len(verts) * dim))
        if err <= 1e-8:
            out.append(float(np.linalg.norm(X[idx[f[0]]] - X[idx[f[1]]])))
    return np.asarray(out)


def _polish_clusters(g, lengths, k, sw, vals, P, f, gap):
    """Checked edges hold only to the sweep tolerance. Rows that close them
    exactly are kept; a cluster without such rows is replaced by exact values
    solved locally from its best rows."""
    if vals.size == 0:
        return vals
    verts = sw.vertices
    idx = sw.index
    checks = [(pp, ln) for pp, ln, _ in sw.checks]
    err = np.zeros(vals.size)
    for (u, v), ln in checks:
        err += np.abs(np.linalg.norm(P[:, idx[u]] - P[:, idx[v]], axis=1) - ln)
    exact = [vals[err <= 1e-7]]
    for lo, hi in cluster(vals, gap).intervals:
        rows = np.nonzero((vals >= lo) & (vals <= hi))[0]
        if np.any(err[rows] <= 1e-7):
            continue
        polished = []
        for r in rows[np.argsort(err[rows])][:3]:
            x = _polish(g, lengths, k, verts, P[r], f)
            if x is not None:
                polished.append(x)
        exact.append(np.asarray(polished))
    return np.concatenate(exact)
