"""Cartesian realizations: ruler-and-compass 2-tree construction, 3-tree
trilateration, Cayley-Menger feasibility, branch enumeration and hinging."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import (BaseRealizationRequired, ConfigOutsideSpace, Degenerate, IncompleteRealization,
                     InputError, NotPolytopeRepresentable, NotRealizable)
from .graph import Graph, pair, sorted_vertices, vkey

TOL = 1e-9


# ---------------------------------------------------------------- primitives


def circle_intersection(c1, r1, c2, r2, tol: float = TOL) -> list:
    """Intersection points of two circles in the plane.

    Returns ``[]``, one tangent point, or two points ordered (left, right) of
    the directed line c1 -> c2. Coincident centres with equal radii raise
    Degenerate (a zero radius there is just the centre).
    """
    c1 = np.asarray(c1, dtype=float)
    c2 = np.asarray(c2, dtype=float)
    if r1 < 0 or r2 < 0:
        raise InputError("radii must be nonnegative")
    d = float(np.hypot(*(c2 - c1)))
    if d <= tol:
        if abs(r1 - r2) > tol:
            return []
        if max(r1, r2) <= tol:
            return [c1.copy()]
        raise Degenerate("coincident centres with equal radii")
    if d > r1 + r2 + tol or d < abs(r1 - r2) - tol:
        return []
    u = (c2 - c1) / d
    a = (r1 * r1 - r2 * r2 + d * d) / (2 * d)
    h2 = r1 * r1 - a * a
    tangent = min(abs(d - (r1 + r2)), abs(d - abs(r1 - r2))) <= tol
    mid = c1 + a * u
    scale = max(r1, d, 1.0)
    if tangent or h2 <= 1e-12 * scale * scale:
        return [mid]
    h = math.sqrt(h2)
    left = np.array([-u[1], u[0]])
    return [mid + h * left, mid - h * left]


def sphere_intersection(c1, r1, c2, r2, c3, r3, tol: float = TOL) -> list:
    """Trilateration: points at the given distances from three centres in R^3.

    Two solutions are ordered (+n, -n) with n = (c2 - c1) x (c3 - c1).
    Collinear centres raise Degenerate.
    """
    c1, c2, c3 = (np.asarray(c, dtype=float) for c in (c1, c2, c3))
    ex = c2 - c1
    d = float(np.linalg.norm(ex))
    n = np.cross(c2 - c1, c3 - c1)
    nn = float(np.linalg.norm(n))
    if d <= tol or nn <= tol * max(d, 1.0):
        raise Degenerate("collinear trilateration centres")
    ex = ex / d
    ez = n / nn
    ey = np.cross(ez, ex)
    i = float(np.dot(ex, c3 - c1))
    j = float(np.dot(ey, c3 - c1))
    x = (r1 * r1 - r2 * r2 + d * d) / (2 * d)
    y = (r1 * r1 - r3 * r3 + i * i + j * j - 2 * i * x) / (2 * j)
    z2 = r1 * r1 - x * x - y * y
    base = c1 + x * ex + y * ey
    # slack of the in-plane foot against each sphere, in length units
    if z2 < 0:
        rho = math.sqrt(x * x + y * y)
        if rho - r1 > tol:
            return []
        foot = base
        if max(abs(np.linalg.norm(foot - c) - r) for c, r in ((c1, r1), (c2, r2), (c3, r3))) > math.sqrt(tol):
            return []
        return [foot]
    scale = max(r1, d, 1.0)
    if z2 <= 1e-12 * scale * scale:
        # rounding-level height: a tangent configuration
        return [base]
    z = math.sqrt(z2)
    return [base + z * ez, base - z * ez]


def cayley_menger_det(sq) -> float:
    """Bordered Cayley-Menger determinant of a squared-distance matrix."""
    sq = np.asarray(sq, dtype=float)
    k = sq.shape[0]
    m = np.ones((k + 1, k + 1))
    m[0, 0] = 0.0
    m[1:, 1:] = sq
    return float(np.linalg.det(m))


def _squared_matrix(sq, d: int) -> np.ndarray:
    arr = np.asarray(sq, dtype=float)
    npts = d + 1
    if arr.ndim == 2:
        if arr.shape != (npts, npts):
            raise InputError(f"expected a {npts}x{npts} matrix")
        return arr
    if arr.size != npts * (npts - 1) // 2:
        raise InputError(f"expected {npts * (npts - 1) // 2} squared distances")
    out = np.zeros((npts, npts))
    for val, (i, j) in zip(arr, combinations(range(npts), 2)):
        out[i, j] = out[j, i] = val
    return out


def _simplex_sq_measure(sq: np.ndarray) -> float:
    k = sq.shape[0] - 1
    det = cayley_menger_det(sq)
    return (-1) ** (k + 1) * det / (2 ** k * math.factorial(k) ** 2)


@dataclass(frozen=True)
class CMResult:
    feasible: bool
    squared_measure: float

    @property
    def measure(self) -> float:
        return math.sqrt(max(self.squared_measure, 0.0))


def cm_feasible(sq, d: int, rtol: float = 1e-12) -> CMResult:
    """Is there a d-simplex with these squared edge lengths?

    ``sq`` is either the (d+1)x(d+1) matrix or the pairwise list in
    lexicographic order (01, 02, 12 for triangles; 01, 02, 03, 12, 13, 23 for
    tetrahedra). Every face must be feasible as well; the measure is squared
    area (d = 2) or squared volume (d = 3).
    """
    if d not in (2, 3):
        raise InputError("cm_feasible supports d = 2 or 3")
    m = _squared_matrix(sq, d)
    if np.any(m < 0):
        raise InputError("squared distances must be nonnegative")
    scale = max(float(m.max()), 1e-300)
    ok = True
    for size in range(3, d + 2):
        for idx in combinations(range(d + 1), size):
            sub = m[np.ix_(idx, idx)]
            k = size - 1
            if _simplex_sq_measure(sub) < -rtol * scale ** k:
                ok = False
    return CMResult(ok, _simplex_sq_measure(m))


# ---------------------------------------------------------------- realization types


@dataclass
class Realization:
    dim: int
    points: dict
    branches: list = field(default_factory=list)
    order: list = field(default_factory=list)

    def distance(self, u, v) -> float:
        return float(np.linalg.norm(np.asarray(self.points[u]) - np.asarray(self.points[v])))

    def coords(self) -> dict:
        return {v: [float(c) for c in p] for v, p in self.points.items()}


@dataclass(frozen=True)
class VerificationReport:
    max_error: float
    mean_error: float
    errors: dict
    passed: bool


@dataclass
class BranchTree:
    order: list
    multiplicities: list  # per construction step, maximum number of solutions met


@dataclass
class BranchEnumeration:
    realizations: list
    truncated: bool
    tree: BranchTree

    @property
    def count(self) -> int:
        return len(self.realizations)


def verify_realization(r: Realization, e, tol: float = TOL, extra: dict | None = None) -> VerificationReport:
    """Per-edge length errors of ``r`` against the EDCS ``e`` (intervals allowed)."""
    if r.dim != e.dim:
        raise InputError(f"realization is {r.dim}D but the system is {e.dim}D")
    missing = [v for v in e.graph.vertices if v not in r.points]
    if missing:
        raise IncompleteRealization(f"no coordinates for {missing!r}")
    errors = {}
    checks = [(p, lo, hi) for p, (lo, hi) in e.weights.items()]
    if extra:
        checks += [(pair(*p), float(val), float(val)) for p, val in extra.items()]
    for p, lo, hi in checks:
        d = r.distance(*p)
        errors[p] = max(0.0, lo - d, d - hi)
    vals = list(errors.values())
    mx = max(vals) if vals else 0.0
    mean = float(np.mean(vals)) if vals else 0.0
    return VerificationReport(mx, mean, errors, mx < tol)


# ---------------------------------------------------------------- construction plans


def _find_clique(g: Graph, placed_nbrs: list, k: int):
    for combo in combinations(placed_nbrs, k):
        if all(g.has_edge(a, b) for a, b in combinations(combo, 2)):
            return list(combo)
    return None


def construction_plan(g: Graph, k: int, start=None) -> list:
    """Construction order ``[(vertex, parents, extra_neighbours), ...]``.

    The first entries form the base (each base vertex lists all earlier base
    vertices as parents). Later vertices attach to k placed, pairwise adjacent
    neighbours; further placed neighbours are listed as ``extra`` (none for a
    k-tree). Raises InputError when the graph cannot be built this way.
    """
    if g.n == 0:
        return []
    if start is None:
        start = [sorted_vertices(g.vertices)[0]]
        while len(start) < min(k + 1, g.n):
            common = None
            for v in start:
                nb = g.neighbors(v)
                common = set(nb) if common is None else common & nb
            common -= set(start)
            if not common:
                break
            start.append(sorted_vertices(common)[0])
    start = list(start)
    plan = []
    placed = set()
    for v in start:
        plan.append((v, list(start[:len(plan)]), []))
        placed.add(v)
    if len(start) < min(k + 1, g.n) and len(placed) < g.n:
        raise InputError("graph has no base clique for a k-tree construction")
    count = {v: 0 for v in g.vertices}
    for v in placed:
        for w in g.neighbors(v):
            count[w] += 1
    import heapq

    heap = [(vkey(v), v) for v in g.vertices if v not in placed and count[v] >= k]
    heapq.heapify(heap)
    while heap:
        _, v = heapq.heappop(heap)
        if v in placed:
            continue
        nbrs = sorted_vertices(w for w in g.neighbors(v) if w in placed)
        parents = _find_clique(g, nbrs, k) if k > 1 else nbrs[:1]
        if parents is None:
            continue
        plan.append((v, parents, [w for w in nbrs if w not in parents]))
        placed.add(v)
        for w in g.neighbors(v):
            count[w] += 1
            if w not in placed and count[w] >= k:
                heapq.heappush(heap, (vkey(w), w))
        # vertices already waiting may gain a clique now
        for w in g.neighbors(v):
            for x in g.neighbors(w):
                if x not in placed and count[x] >= k:
                    heapq.heappush(heap, (vkey(x), x))
    if len(placed) != g.n:
        raise InputError("graph is not constructible by k-tree steps")
    return plan


def _length(lengths: dict, a, b) -> float:
    return lengths[pair(a, b)]


def _solutions(dim, pts, radii, tol):
    """Candidate positions and whether the choice was degenerate."""
    if dim == 2:
        try:
            return circle_intersection(pts[0], radii[0], pts[1], radii[1], tol), False
        except Degenerate:
            return [pts[0] + np.array([radii[0], 0.0])], True
    try:
        return sphere_intersection(pts[0], radii[0], pts[1], radii[1], pts[2], radii[2], tol), False
    except Degenerate:
        return _degenerate_sphere(pts, radii, tol), True


def _degenerate_sphere(pts, radii, tol):
    """Canonical point on the solution set of three spheres with collinear centres."""
    c = pts[0]
    far = max(range(3), key=lambda i: np.linalg.norm(pts[i] - c))
    axis = pts[far] - c
    d = float(np.linalg.norm(axis))
    if d <= tol:
        if max(abs(r - radii[0]) for r in radii) > tol:
            return []
        return [c + np.array([radii[0], 0.0, 0.0])]
    u = axis / d
    x = (radii[0] ** 2 - radii[far] ** 2 + d * d) / (2 * d)
    rho2 = radii[0] ** 2 - x * x
    if rho2 < -tol:
        return []
    helper = np.array([0.0, 0.0, 1.0]) if abs(u[2]) < 0.9 else np.array([0.0, 1.0, 0.0])
    perp = np.cross(u, helper)
    perp /= np.linalg.norm(perp)
    p = c + x * u + math.sqrt(max(rho2, 0.0)) * perp
    for q, r in zip(pts, radii):
        if abs(np.linalg.norm(p - q) - r) > math.sqrt(tol):
            return []
    return [p]


def _base_solutions(dim, idx, placed_pts, radii, tol):
    """Canonical-frame placement of the idx-th base vertex."""
    if idx == 0:
        return [np.zeros(dim)]
    if idx == 1:
        p = np.zeros(dim)
        p[0] = radii[0]
        return [p]
    if idx == 2:
        a, b = placed_pts[0][:2], placed_pts[1][:2]
        try:
            sols = circle_intersection(a, radii[0], b, radii[1], tol)
        except Degenerate:
            sols = [a + np.array([radii[0], 0.0])]
        out = []
        for s in sols[:1]:
            s = np.array([s[0], abs(s[1])])
            out.append(np.concatenate([s, np.zeros(dim - 2)]))
        return out
    sols, _ = _solutions(3, placed_pts, radii, tol)
    if not sols:
        return []
    s = sols[0].copy()
    s[2] = abs(s[2])
    return [s]


def construct(plan, lengths: dict, dim: int, branches=None, tol: float = TOL) -> Realization:
    """Place vertices along ``plan``; ``branches`` picks +1 / -1 per non-base step."""
    pts = {}
    chosen = []
    bi = 0
    order = []
    for i, (v, parents, _extra) in enumerate(plan):
        ppts = [pts[p] for p in parents]
        radii = [_length(lengths, v, p) for p in parents]
        if i <= dim:
            sols = _base_solutions(dim, len(parents), ppts, radii, tol)
            br = None
        else:
            sols, _ = _solutions(dim, ppts, radii, tol)
            br = 1
            if branches is not None:
                br = branches.get(v, 1) if isinstance(branches, dict) else branches[bi]
            bi += 1
        if not sols:
            raise NotRealizable(f"no position for vertex {v!r}", vertex=v)
        if br is not None:
            chosen.append(br)
            p = sols[0] if (br >= 0 or len(sols) == 1) else sols[1]
        else:
            p = sols[0]
        pts[v] = p
        order.append(v)
    return Realization(dim, pts, chosen, order)


def _edcs_k_tree_plan(e):
    from .minors import is_k_tree

    g = e.graph
    if not e.is_point:
        raise InputError("k-tree realization needs point-valued distances")
    if not is_k_tree(g, e.dim) and not (g.n <= e.dim + 1 and g.m == g.n * (g.n - 1) // 2):
        raise InputError(f"graph is not a {e.dim}-tree")
    return construction_plan(g, e.dim)


def realize_k_tree(e, branches=None) -> Realization:
    """Ruler-and-compass (2D) or trilateration (3D) realization of a k-tree EDCS."""
    plan = _edcs_k_tree_plan(e)
    return construct(plan, e.lengths(), e.dim, branches)


def _enumerate(plan, lengths, dim, cap, tol=TOL):
    results = []
    mult = [0] * len(plan)
    truncated = False

    def rec(i, pts, chosen):
        nonlocal truncated
        if len(results) >= cap:
            truncated = True
            return
        if i == len(plan):
            results.append(Realization(dim, dict(pts), list(chosen), [v for v, _, _ in plan]))
            return
        v, parents, _ = plan[i]
        ppts = [pts[p] for p in parents]
        radii = [_length(lengths, v, p) for p in parents]
        if i <= dim:
            sols = _base_solutions(dim, len(parents), ppts, radii, tol)
            signs = [None] * len(sols)
        else:
            sols, _ = _solutions(dim, ppts, radii, tol)
            signs = [1, -1][:len(sols)]
        mult[i] = max(mult[i], len(sols))
        for s, sign in zip(sols, signs):
            pts[v] = s
            rec(i + 1, pts, chosen + ([sign] if sign is not None else []))
            del pts[v]

    rec(0, {}, [])
    # dedupe realizations that coincide in the canonical frame
    unique = []
    seen = set()
    for r in results:
        key = tuple(np.round(np.concatenate([r.points[v] for v, _, _ in plan]) / 1e-9).astype(np.int64))
        if key not in seen:
            seen.add(key)
            unique.append(r)
    return unique, truncated, mult


def enumerate_branches(e, cap: int = 4096) -> BranchEnumeration:
    """All reflection-branch realizations of a k-tree EDCS, up to ``cap`` leaves."""
    plan = _edcs_k_tree_plan(e)
    reals, truncated, mult = _enumerate(plan, e.lengths(), e.dim, cap)
    return BranchEnumeration(reals, truncated, BranchTree([v for v, _, _ in plan], mult))


# ---------------------------------------------------------------- rigid motions


def _rotation_2d(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def _rotation_onto(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Rotation matrix taking unit vector u to unit vector v (3D)."""
    w = np.cross(u, v)
    c = float(np.dot(u, v))
    s = float(np.linalg.norm(w))
    if s < 1e-15:
        if c > 0:
            return np.eye(3)
        helper = np.array([1.0, 0.0, 0.0]) if abs(u[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
        axis = np.cross(u, helper)
        axis /= np.linalg.norm(axis)
        return 2 * np.outer(axis, axis) - np.eye(3)
    k = w / s
    kx = np.array([[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]])
    return np.eye(3) + s * kx + (1 - c) * kx @ kx


def align_on(points: dict, src_anchor: list, dst_anchor: list, dim: int) -> dict:
    """Rigidly move ``points`` so the anchor vertices land on ``dst_anchor`` positions.

    Anchors are one or two points (a shared cut vertex or a shared edge).
    """
    pa = np.asarray(src_anchor[0], dtype=float)
    qa = np.asarray(dst_anchor[0], dtype=float)
    rot = np.eye(dim)
    if len(src_anchor) > 1:
        u = np.asarray(src_anchor[1], dtype=float) - pa
        v = np.asarray(dst_anchor[1], dtype=float) - qa
        nu, nv = np.linalg.norm(u), np.linalg.norm(v)
        if nu > 1e-12 and nv > 1e-12:
            if dim == 2:
                rot = _rotation_2d(math.atan2(v[1], v[0]) - math.atan2(u[1], u[0]))
            else:
                rot = _rotation_onto(u / nu, v / nv)
    return {x: rot @ (np.asarray(p, dtype=float) - pa) + qa for x, p in points.items()}


def _snap(pts: dict) -> dict:
    """Zero out rounding residue so frame coordinates are exactly 0."""
    return {v: np.where(np.abs(p) < 1e-13, 0.0, p) for v, p in pts.items()}


def canonicalize(points: dict, order: list, dim: int) -> dict:
    """Move ``points`` into the canonical frame defined by the vertices in ``order``."""
    order = [v for v in order if v in points]
    if not order:
        return dict(points)
    o = np.asarray(points[order[0]], dtype=float)
    pts = {v: np.asarray(p, dtype=float) - o for v, p in points.items()}
    rest = [pts[v] for v in order[1:]]
    axis = next((p for p in rest if np.linalg.norm(p) > 1e-12), None)
    if axis is None:
        return pts
    ex = np.zeros(dim)
    ex[0] = 1.0
    if dim == 2:
        rot = _rotation_2d(-math.atan2(axis[1], axis[0]))
    else:
        rot = _rotation_onto(axis / np.linalg.norm(axis), ex)
    pts = {v: rot @ p for v, p in pts.items()}
    rest = [pts[v] for v in order[1:]]
    # second axis: first point off the x axis
    off = next((p for p in rest if np.linalg.norm(p[1:]) > 1e-12), None)
    if off is None:
        return pts
    if dim == 2:
        if off[1] < 0:
            pts = {v: p * np.array([1.0, -1.0]) for v, p in pts.items()}
        return _snap(pts)
    ang = math.atan2(off[2], off[1])
    c, s = math.cos(-ang), math.sin(-ang)
    rx = np.array([[1, 0, 0], [0, c, -s], [0, s, c]])
    pts = {v: rx @ p for v, p in pts.items()}
    rest = [pts[v] for v in order[1:]]
    third = next((p for p in rest if abs(p[2]) > 1e-12), None)
    if third is not None and third[2] < 0:
        pts = {v: p * np.array([1.0, 1.0, -1.0]) for v, p in pts.items()}
    return _snap(pts)


# ---------------------------------------------------------------- from Cayley configurations


def _local_realization(comp_graph: Graph, lengths: dict, dim: int) -> dict:
    """Coordinates of a k-tree component in its own canonical frame."""
    if comp_graph.n == 1:
        return {comp_graph.vertices[0]: np.zeros(dim)}
    plan = construction_plan(comp_graph, dim)
    return construct(plan, lengths, dim).points


def _hinge(pieces: list, h: Graph, dim: int) -> dict:
    """Assemble per-component coordinates along the 2-sum decomposition of ``h``.

    ``pieces`` are ``(vertex set, coords)`` in decomposition order. Pieces are
    glued to already placed vertices (a shared edge or cut vertex) by a rigid
    motion; separate connected components are laid side by side.
    """
    placed: dict = {}
    remaining = list(pieces)
    shift = 0.0
    while remaining:
        # glue along shared edges before shared cut vertices, so a piece hung
        # on a cut vertex never fixes the orientation of a 2-sum neighbour
        best, best_shared = None, []
        for item in remaining:
            shared = sorted_vertices(v for v in item[0] if v in placed)
            if len(shared) > len(best_shared):
                best, best_shared = item, shared
                if len(shared) >= 2:
                    break
        if best is not None:
            verts, coords = best
            anchors = best_shared[:2]
            moved = align_on(coords, [coords[a] for a in anchors], [placed[a] for a in anchors], dim)
            for v, p in moved.items():
                placed.setdefault(v, p)
            remaining.remove(best)
            continue
        verts, coords = remaining.pop(0)
        if placed:
            shift = max(float(p[0]) for p in placed.values()) + 1.0
        offset = np.zeros(dim)
        offset[0] = shift
        for v, p in coords.items():
            placed[v] = np.asarray(p, dtype=float) + offset
    return placed


def _match_rigid(e, values: dict, tol: float):
    """Configurations of a rigid k-tree system: enumerate branches and match F."""
    reals, _, _ = _enumerate(construction_plan(e.graph, e.dim), e.lengths(), e.dim, 1 << 16)
    for r in reals:
        if all(abs(r.distance(*p) - v) <= max(tol, 1e-7) for p, v in values.items()):
            return r
    raise ConfigOutsideSpace("configuration is not attained by any realization")


def realize_from_config(e, x, base: Realization | None = None, tol: float = 1e-7) -> Realization:
    """Cartesian realization of ``e`` whose parameter pairs take the lengths in ``x``.

    Auxiliary completion lengths missing from ``x`` are set to the midpoint of
    their feasible range given the values fixed so far. Components holding no
    parameter and not buildable from triangles are read off ``base``.
    """
    from .minors import complete_to_k_tree, is_k_tree, is_partial_k_tree
    from .polytope import Status, as_point, polytope_description

    vals = as_point(x)
    F = e.sorted_params()
    missing = [f for f in F if f not in vals]
    if missing:
        raise InputError(f"configuration lacks values for {missing!r}")
    if e.dim == 3:
        return _realize_3d(e, vals, base, tol)
    try:
        poly = polytope_description(e)
    except NotPolytopeRepresentable:
        from .minors import is_k_tree as _ikt

        if _ikt(e.graph, e.dim):
            return _match_rigid(e, {f: vals[f] for f in F}, tol)
        raise
    fixed = {f: vals[f] for f in F}
    if poly.nonemptiness_status == Status.EMPTY or not poly.feasible(fixed):
        raise ConfigOutsideSpace("configuration violates the Cayley polytope")
    for d in poly.D:
        if d in vals:
            fixed[d] = vals[d]
            continue
        iv = poly.interval(d, fixed)
        if iv is None:
            raise ConfigOutsideSpace("auxiliary parameters admit no consistent value")
        fixed[d] = (iv[0] + iv[1]) / 2
    if not poly.contains(fixed):
        raise ConfigOutsideSpace("configuration violates the Cayley polytope")
    lengths = dict(e.lengths())
    lengths.update(fixed)
    pieces = []
    for rec in poly.components:
        cg = Graph(rec.vertices, rec.edges)
        pieces.append((set(rec.vertices), _local_realization(cg, lengths, 2)))
    for rec in poly.free_components:
        cg = Graph(rec.vertices, rec.edges)
        if rec.status == Status.EMPTY:
            raise ConfigOutsideSpace("a parameter-free component has no realization")
        if len(rec.vertices) <= 2 or rec.aux or is_k_tree(cg, 2):
            free_poly_lengths = dict(lengths)
            if rec.aux:
                free_poly_lengths.update(_free_midpoints(cg, rec.aux, lengths))
            tree = cg.add_edges(rec.aux)
            pieces.append((set(rec.vertices), _local_realization(tree, free_poly_lengths, 2)))
        elif base is not None:
            pieces.append((set(rec.vertices), {v: np.asarray(base.points[v], dtype=float) for v in rec.vertices}))
        else:
            raise BaseRealizationRequired(
                f"component on {rec.vertices!r} is not triangle-constructible; pass a base realization")
    h = e.graph.add_edges(F)
    pts = _hinge(pieces, h, 2)
    order = list(e.graph.vertices)
    pts = canonicalize(pts, order, 2)
    r = Realization(2, pts, [], order)
    rep = verify_realization(r, e, tol=tol, extra={f: vals[f] for f in F})
    if not rep.passed:
        raise ConfigOutsideSpace(f"assembled realization misses constraints by {rep.max_error:.3g}")
    return r


def _free_midpoints(cg: Graph, aux: list, lengths: dict) -> dict:
    from .polytope import CayleyPolytope, Status, _component_inequalities, _make_ineq

    auxset = set(aux)
    side = lambda a, b: pair(a, b) if pair(a, b) in auxset else lengths[pair(a, b)]
    ineqs, _, _ = _component_inequalities(cg, aux, side, "free")
    ineqs += [_make_ineq({p: -1.0}, 0.0, "nonnegativity") for p in aux]
    poly = CayleyPolytope(list(aux), [], list(aux), ineqs, list(aux), Status.VERIFIED)
    fixed = {}
    for d in aux:
        lo, hi = poly.interval(d, fixed)
        fixed[d] = (lo + hi) / 2
    return fixed


def _realize_3d(e, vals: dict, base, tol):
    from .minors import complete_to_k_tree, is_k_tree, is_partial_k_tree

    if not e.is_point:
        raise InputError("3D realization needs point-valued distances")
    F = e.sorted_params()
    h = e.graph.add_edges(F)
    lengths = dict(e.lengths())
    lengths.update({p: v for p, v in vals.items()})
    if is_partial_k_tree(h, 3):
        aux = [p for p in complete_to_k_tree(h, 3)] if not is_k_tree(h, 3) else []
        if all(p in lengths for p in aux) and h.is_connected():
            tree = h.add_edges(aux)
            try:
                pts = construct(construction_plan(tree, 3), lengths, 3).points
            except NotRealizable as exc:
                raise ConfigOutsideSpace(str(exc)) from exc
            r = Realization(3, pts, [], list(e.graph.vertices))
            rep = verify_realization(r, e, tol=tol, extra={f: vals[f] for f in F})
            if rep.passed:
                return r
            raise ConfigOutsideSpace(f"realization misses constraints by {rep.max_error:.3g}")
    if base is not None:
        rep = verify_realization(base, e, tol=tol, extra={f: vals[f] for f in F})
        if rep.passed:
            return base
        raise ConfigOutsideSpace("base realization does not match the configuration")
    raise BaseRealizationRequired("3D realization needs a 3-tree with all completion lengths, or a base")
