"""Decision procedures: which non-edge parameter sets give single-interval,
convex, linear-polytope Cayley configuration spaces."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from .decompose import (components_containing_any, decompose_all, minimal_components,
                        minimal_components_containing)
from .edcs import Edcs
from .errors import BadParameterSet, GraphNotConnected, NotANonEdge, UnsupportedDimension, VertexNotFound
from .graph import Graph, pair, sorted_pairs, sorted_vertices, vkey
from .laman import LamanTag, laman_classify
from .minors import complete_to_k_tree, is_k_tree, is_partial_two_tree, is_three_realizable


class SingleIntervalVerdict(NamedTuple):
    single_interval: bool
    offenders: list

    def __bool__(self) -> bool:
        return self.single_interval


@dataclass(frozen=True)
class CharacterizationReport:
    """Outcome of a parameter-set query.

    The single-interval, convex and linear-polytope properties coincide for
    2D distance constraint systems, so one flag backs all three.
    """

    linear_polytope: bool
    generically_complete: bool
    witnesses: list = field(default_factory=list)
    suggested_F: list | None = None

    @property
    def always_single_interval(self) -> bool:
        return self.linear_polytope

    @property
    def always_convex(self) -> bool:
        return self.linear_polytope

    @property
    def always_linear_polytope(self) -> bool:
        return self.linear_polytope


def _check_nonedge(g: Graph, f):
    p = pair(*f)
    for v in p:
        if v not in g:
            raise VertexNotFound(f"{v!r} is not a vertex")
    if g.has_edge(p):
        raise NotANonEdge(f"{p!r} is an edge")
    return p


def single_interval_nonedge(g: Graph, f) -> SingleIntervalVerdict:
    """Is the 2D Cayley configuration space on ``f`` a single interval for every δ?"""
    f = _check_nonedge(g, f)
    comps = minimal_components_containing(g.add_edges([f]), f)
    offenders = [c for c in comps if not is_partial_two_tree(c)]
    return SingleIntervalVerdict(not offenders, offenders)


def _normalize_params(g: Graph, F) -> list:
    F = list(F)
    if not F:
        raise BadParameterSet("parameter set is empty")
    out = set()
    for f in F:
        p = pair(*f)
        for v in p:
            if v not in g:
                raise BadParameterSet(f"parameter {p!r} uses unknown vertex {v!r}")
        if g.has_edge(p):
            raise BadParameterSet(f"parameter {p!r} is an edge")
        out.add(p)
    return sorted_pairs(out)


def check_parameter_set(g: Graph, F) -> CharacterizationReport:
    """Linear-polytope test and generic completeness for the non-edge set ``F``."""
    F = _normalize_params(g, F)
    h = g.add_edges(F)
    comps = components_containing_any(h, F)
    offenders = [c for c in comps if not is_partial_two_tree(c)]
    linear = not offenders
    complete = False
    if linear:
        under_ok = all(is_partial_two_tree(c) for c in minimal_components(g)
                       if c.n >= 2 and laman_classify(c).tag == LamanTag.UNDERCONSTRAINED)
        complete = under_ok and all(is_k_tree(c, 2) for c in comps)
    return CharacterizationReport(linear, complete, offenders)


def _partial_two_tree_groups(g: Graph) -> list:
    """Unions of adjacent partial-2-tree minimal components (maximal groups).

    Each group is itself a 2-sum component of ``g``: the rest of the graph is
    attached to it along shared edges or cut vertices.
    """
    groups = []
    for dec in decompose_all(g):
        good = [is_partial_two_tree(c.graph) for c in dec.components]
        seen = set()
        for i in range(len(dec.components)):
            if not good[i] or i in seen:
                continue
            stack, members = [i], []
            seen.add(i)
            while stack:
                j = stack.pop()
                members.append(j)
                for k, _ in dec.neighbors(j):
                    if good[k] and k not in seen:
                        seen.add(k)
                        stack.append(k)
            verts = set()
            edges = set()
            for j in members:
                verts |= dec.components[j].vertices
                edges |= dec.components[j].edges
            groups.append(Graph(sorted_vertices(verts), edges))
    return groups


def admits_efficient_space(g: Graph):
    """``(F, report)`` for a parameter set with a linear-polytope space, or ``(None, report)``.

    F is the 2-tree completion of an underconstrained partial-2-tree 2-sum
    component; among several, the one with the lowest vertex is used.
    """
    cands = [c for c in _partial_two_tree_groups(g)
             if c.n >= 3 and c.m < 2 * c.n - 3]
    if not cands:
        return None, CharacterizationReport(False, False, [])
    cands.sort(key=lambda c: vkey(sorted_vertices(c.vertices)[0]))
    F = complete_to_k_tree(cands[0], 2)
    rep = check_parameter_set(g, F)
    return F, CharacterizationReport(rep.linear_polytope, rep.generically_complete,
                                     rep.witnesses, F)


def _fresh(base: str, taken: set) -> str:
    name = base
    i = 1
    while name in taken:
        i += 1
        name = f"{base}#{i}"
    taken.add(name)
    return name


def subdivide_for_intervals(e: Edcs, strict: bool = False):
    """Replace each interval edge by a two-bar path with the same distance range.

    Edge (u1, u2) with interval [l, r] becomes u1 - s - u2 with lengths
    (r - l) / 2 and (r + l) / 2. Point-valued edges are left alone unless
    ``strict``. Returns ``(edcs, provenance)`` where provenance maps each new
    vertex to the edge it subdivides.
    """
    taken = set(e.graph.vertices)
    weights = {}
    new_vertices = []
    provenance = {}
    for (u, v) in e.graph.sorted_edges():
        lo, hi = e.weights[(u, v)]
        if lo == hi and not strict:
            weights[(u, v)] = (lo, lo)
            continue
        s = _fresh(f"s({u},{v})", taken)
        new_vertices.append(s)
        provenance[s] = (u, v)
        a, b = (hi - lo) / 2, (hi + lo) / 2
        weights[pair(u, s)] = a
        weights[pair(s, v)] = b
    g = Graph(list(e.graph.vertices) + new_vertices, weights.keys())
    return Edcs(g, weights, e.params, e.dim), provenance


def check_parameter_set_interval(e: Edcs, F=None, strict: bool = False) -> CharacterizationReport:
    """Parameter-set test for interval constraints via the subdivision gadget."""
    F = e.params if F is None else F
    if not e.graph.is_connected():
        raise GraphNotConnected("interval characterization needs a connected graph")
    _normalize_params(e.graph, F)
    sub, _ = subdivide_for_intervals(e.with_params(()), strict=strict)
    return check_parameter_set(sub.graph, F)


def universal_inherence(h: Graph, d: int) -> bool:
    """Connected Cayley spaces for every edge/parameter split of ``h`` in dimension ``d``."""
    if d == 2:
        return is_partial_two_tree(h)
    if d == 3:
        return is_three_realizable(h)
    raise UnsupportedDimension(f"dimension must be 2 or 3, got {d!r}")
