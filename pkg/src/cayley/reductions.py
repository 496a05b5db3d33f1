"""Contraction-only reductions to the 2D base cases and to K5 / K2,2,2."""

from __future__ import annotations

from collections import deque

import networkx as nx

from .decompose import minimal_components_containing
from .errors import NotANonEdge, VertexNotFound
from .graph import ContractionSequence, Graph, contract_edge, pair, sorted_vertices, vkey
from .minors import _reduce_for_target, has_minor, is_partial_two_tree, is_three_realizable
from .graph import K5, K222


def has_bad_component(g: Graph, f) -> bool:
    """Some minimal 2-sum component of g + f containing f is not a partial 2-tree."""
    u, v = f
    if g.has_edge(u, v):
        return False
    comps = minimal_components_containing(g.add_edges([f]), f)
    return any(not is_partial_two_tree(c) for c in comps)


def base_case_parts(g: Graph, v1, v2):
    """``(w1, w2, [u...])`` when ``g`` is Base Case 1 or 2 for f = (v1, v2), else None.

    Base Case 1 is K4 minus f on {v1, v2, w1, w2}; Base Case 2 adds vertices
    of degree two adjacent to exactly v1 and v2.
    """
    if v1 not in g or v2 not in g or g.has_edge(v1, v2):
        return None
    ws, us = [], []
    for x in g.vertices:
        if x in (v1, v2):
            continue
        nb = g.neighbors(x)
        if len(nb) == 2 and nb == {v1, v2}:
            us.append(x)
        elif len(nb) == 3 and v1 in nb and v2 in nb:
            ws.append(x)
        else:
            return None
    if len(ws) != 2 or not g.has_edge(ws[0], ws[1]):
        return None
    if g.m != 5 + 2 * len(us):
        return None
    w1, w2 = sorted_vertices(ws)
    return w1, w2, sorted_vertices(us)


def _contract_into(g: Graph, group, survivor) -> list:
    """Steps merging the connected vertex set ``group`` into ``survivor`` (BFS order)."""
    group = set(group)
    steps = []
    seen = {survivor}
    queue = deque([survivor])
    while queue:
        x = queue.popleft()
        for y in sorted_vertices(g.neighbors(x)):
            if y in group and y not in seen:
                seen.add(y)
                steps.append((pair(survivor, y), survivor))
                queue.append(y)
    return steps


def _apply(g: Graph, steps) -> Graph:
    for e, keep in steps:
        g = contract_edge(g, e, keep)[0]
    return g


def _lowest(vs):
    return sorted_vertices(vs)[0]


def _reduce(g: Graph, v1, v2):
    """Recursive contraction reduction; returns ``(steps, removed)``."""
    if base_case_parts(g, v1, v2) is not None:
        return [], []
    rest = g.remove_vertices([v1, v2])
    comps = rest.components()
    bad = [c for c in comps if has_bad_component(g.induced(set(c) | {v1, v2}), (v1, v2))]
    if not bad:
        raise RuntimeError("reduction invoked without a non-partial-2-tree component on f")

    if len(comps) > 1:
        chosen = set(bad[0])
        steps, removed = [], []
        for c in comps:
            if set(c) == chosen:
                continue
            q = _lowest(c)
            steps += _contract_into(g, c, q)
            near1 = any(g.has_edge(x, v1) for x in c)
            near2 = any(g.has_edge(x, v2) for x in c)
            if near1 and not near2:
                steps.append((pair(q, v1), v1))
            elif near2 and not near1:
                steps.append((pair(q, v2), v2))
            elif not near1 and not near2:
                removed.append(q)
        sub = g.induced(chosen | {v1, v2})
        s2, r2 = _reduce(sub, v1, v2)
        return steps + s2, removed + r2

    # a single component once f's endpoints are removed
    gf = g.add_edges([(v1, v2)])
    cm = [c for c in minimal_components_containing(gf, (v1, v2)) if not is_partial_two_tree(c)][0]
    keep = set(cm.vertices)
    if keep != set(g.vertices):
        steps = []
        outside = g.induced(set(g.vertices) - keep)
        for c in outside.components():
            q = _lowest(c)
            steps += _contract_into(g, c, q)
            attach = sorted_vertices({y for x in c for y in g.neighbors(x) if y in keep})
            steps.append((pair(q, attach[0]), attach[0]))
        s2, r2 = _reduce(g.induced(keep), v1, v2)
        return steps + s2, r2

    nxg = g.to_networkx()
    paths = list(nx.node_disjoint_paths(nxg, v1, v2))
    if len(paths) >= 2:
        paths.sort(key=lambda p: (len(p), [vkey(x) for x in p]))
        tpath, zpath = paths[0][1:-1], paths[1][1:-1]
        t1, z1 = tpath[0], zpath[0]
        steps = [(pair(t1, t), t1) for t in tpath[1:]]
        steps += [(pair(z1, z), z1) for z in zpath[1:]]
        tset, zset = set(tpath), set(zpath)
        others = g.remove_vertices([v1, v2] + tpath + zpath)
        merges = []
        for c in others.components():
            q = _lowest(c)
            steps += _contract_into(g, c, q)
            nb = {y for x in c for y in g.neighbors(x)} - set(c)
            if nb & tset:
                merges.append((pair(q, t1), t1))
            elif nb & zset:
                merges.append((pair(q, z1), z1))
            elif v1 in nb and v2 not in nb:
                merges.append((pair(q, v1), v1))
            elif v2 in nb and v1 not in nb:
                merges.append((pair(q, v2), v2))
        return steps + merges, []

    # one vertex separates v1 from v2
    cut = nx.minimum_node_cut(nxg, v1, v2)
    v3 = _lowest(cut)
    parts = g.remove_vertices([v3]).components()
    side1 = next(set(p) for p in parts if v1 in p)
    side2 = next(set(p) for p in parts if v2 in p)
    g1 = g.induced(side1 | {v3})
    if has_bad_component(g1, (v1, v3)):
        steps = _contract_into(g, side2 | {v3}, v2)
    else:
        steps = _contract_into(g, side1 | {v3}, v1)
    s2, r2 = _reduce(_apply(g, steps), v1, v2)
    return steps + s2, r2


def restricted_contraction_reduction(g: Graph, f) -> ContractionSequence | None:
    """Contract ``g`` onto Base Case 1 or 2 while keeping ``f`` a non-adjacent pair.

    Returns None exactly when every minimal 2-sum component of g + f
    containing f is a partial 2-tree.
    """
    v1, v2 = pair(*f)
    for w in (v1, v2):
        if w not in g:
            raise VertexNotFound(f"{w!r} is not a vertex")
    if g.has_edge(v1, v2):
        raise NotANonEdge(f"{(v1, v2)!r} is an edge")
    if not has_bad_component(g, (v1, v2)):
        return None
    steps, removed = _reduce(g, v1, v2)
    seq = ContractionSequence(g, steps, removed)
    if base_case_parts(seq.target, v1, v2) is None:
        raise RuntimeError(f"reduction did not reach a base case: {seq.target!r}")
    return seq


# ------------------------------------------------------------------ 3D


def _target_tag(g: Graph):
    if g.n == 5 and g.m == 10:
        return "K5"
    if g.n == 6 and g.m == 12 and all(g.degree(v) == 4 for v in g.vertices):
        return "K222"
    return None


def _search_k5_k222(g: Graph):
    """Depth-first contraction search for an exact K5 or K2,2,2 quotient."""
    seen = set()
    stack = [(g, [])]
    while stack:
        cur, steps = stack.pop()
        tag = _target_tag(cur)
        if tag is not None:
            return steps, tag
        if cur.n <= 5 or cur.m < 10:
            continue
        v = min(cur.vertices, key=lambda x: (cur.degree(x), vkey(x)))
        if cur.degree(v) < 4:
            # a low-degree vertex must share its branch set with a neighbour
            moves = [(pair(v, w), w) for w in sorted_vertices(cur.neighbors(v))]
        else:
            moves = [(e, e[0]) for e in cur.sorted_edges()]
        for e, keep in reversed(moves):
            nxt = contract_edge(cur, e, keep)[0]
            key = (nxt.vertex_set, nxt.edges)
            if key in seen:
                continue
            seen.add(key)
            stack.append((nxt, steps + [(e, keep)]))
    return None


def contraction_reduction_to_k5_or_k222(g: Graph):
    """``(ContractionSequence, "K5" | "K222")`` or None when ``g`` is 3-realizable."""
    if is_three_realizable(g):
        return None
    comps = g.components()
    chosen = None
    for c in comps:
        sub = g.induced(c)
        red = _reduce_for_target(sub, 4)
        if red.n >= 5 and (has_minor(red, K5) or has_minor(red, K222)):
            chosen = set(c)
            break
    steps, removed = [], []
    for c in comps:
        if set(c) == chosen:
            continue
        q = _lowest(c)
        steps += _contract_into(g, c, q)
        removed.append(q)
    found = _search_k5_k222(g.induced(chosen))
    if found is None:
        raise RuntimeError("contraction search failed on a non-3-realizable graph")
    s2, tag = found
    seq = ContractionSequence(g, steps + s2, removed)
    return seq, tag
