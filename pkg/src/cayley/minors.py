"""Minor testing, partial k-tree recognition and k-tree completion."""

from __future__ import annotations

from collections import deque

from .errors import InputError, MinorTargetTooLarge, NotPartialKTree
from .graph import K4, K5, K222, Graph, contract_edge, pair, sorted_pairs, sorted_vertices

MINOR_TARGET_LIMIT = 8
GREEDY_COMPLETION_LIMIT = 64


def series_parallel_order(g: Graph):
    """Elimination order of the series-parallel reduction, or None if it gets stuck.

    Each entry is ``(vertex, neighbours_at_elimination)``. Degree-2 vertices are
    suppressed by joining their neighbours (parallel edges merge).
    """
    adj = {v: set(nb) for v, nb in g.adj.items()}
    queue = deque(sorted_vertices(v for v in adj if len(adj[v]) <= 2))
    order = []
    while queue:
        v = queue.popleft()
        if v not in adj:
            continue
        nb = adj.pop(v)
        order.append((v, tuple(sorted_vertices(nb))))
        for w in nb:
            adj[w].discard(v)
        if len(nb) == 2:
            a, b = nb
            adj[a].add(b)
            adj[b].add(a)
        for w in nb:
            if len(adj[w]) <= 2:
                queue.append(w)
    if adj:
        return None
    return order


def is_partial_two_tree(g: Graph) -> bool:
    """True iff ``g`` has no K4 minor."""
    return series_parallel_order(g) is not None


def _elimination_search(g: Graph, k: int):
    """Elimination order of width <= k with fill, by backtracking; None if none exists."""
    adj0 = {v: frozenset(nb) for v, nb in g.adj.items()}
    failed = set()

    def elim(adj, v):
        nb = adj[v]
        new = {}
        for w, s in adj.items():
            if w == v:
                continue
            if w in nb:
                s = (s | nb) - {v, w}
            new[w] = s
        return new

    def rec(adj, order):
        if len(adj) <= k + 1:
            return order + [(v, tuple(sorted_vertices(adj[v] & set(adj)))) for v in sorted_vertices(adj)]
        key = frozenset(adj)
        if key in failed:
            return None
        cands = [v for v in sorted_vertices(adj) if len(adj[v]) <= k]
        # simplicial candidates are always safe to eliminate first
        for v in cands:
            nb = adj[v]
            if all(b in adj[a] for a in nb for b in nb if a != b):
                return rec(elim(adj, v), order + [(v, tuple(sorted_vertices(nb)))])
        for v in cands:
            res = rec(elim(adj, v), order + [(v, tuple(sorted_vertices(adj[v])))])
            if res is not None:
                return res
        failed.add(key)
        return None

    return rec(adj0, [])


def is_partial_k_tree(g: Graph, k: int) -> bool:
    if k == 2:
        return is_partial_two_tree(g)
    if k == 1:
        return all(len(c) - 1 == g.induced(c).m for c in g.components())
    return _elimination_search(g, k) is not None


def is_k_tree(g: Graph, k: int) -> bool:
    """k-tree test; requires at least k+1 vertices (a single K_{k+1} is a k-tree)."""
    if g.n < k + 1:
        return False
    return g.m == k * g.n - k * (k + 1) // 2 and g.is_connected() and is_partial_k_tree(g, k)


def _k_tree_edge_count(n: int, k: int) -> int:
    if n <= k + 1:
        return n * (n - 1) // 2
    return k * n - k * (k + 1) // 2


def complete_to_k_tree(g: Graph, k: int) -> list:
    """Non-edges whose addition turns the partial k-tree ``g`` into a k-tree.

    Small graphs take non-edges greedily in canonical order (an edge-maximal
    partial k-tree is a k-tree); large 2-dimensional inputs use the fill-in of
    the series-parallel elimination order instead.
    """
    if k not in (2, 3):
        raise InputError("k must be 2 or 3")
    if not is_partial_k_tree(g, k):
        raise NotPartialKTree(f"graph is not a partial {k}-tree")
    target = _k_tree_edge_count(g.n, k)
    if g.m == target:
        return []
    if g.n > GREEDY_COMPLETION_LIMIT and k == 2:
        return _fill_completion(g, k, series_parallel_order(g))
    if g.n > GREEDY_COMPLETION_LIMIT:
        return _fill_completion(g, k, _elimination_search(g, k))
    added = []
    cur = g
    for e in g.non_edges():
        trial = cur.add_edges([e])
        if is_partial_k_tree(trial, k):
            cur = trial
            added.append(e)
            if cur.m == target:
                break
    return added


def _fill_completion(g: Graph, k: int, order) -> list:
    """Rebuild a k-tree in reverse elimination order, adding the fill edges."""
    present = set(g.edges)
    added = []

    def add(u, v):
        p = pair(u, v)
        if p not in present:
            present.add(p)
            added.append(p)

    built = []
    built_adj: dict = {}
    for v, nbrs in reversed(order):
        later = [w for w in nbrs if w in built_adj]
        clique = list(later)
        need = min(len(built), k)
        # later neighbours are pairwise joined by fill
        for i, a in enumerate(clique):
            for b in clique[i + 1:]:
                add(a, b)
                built_adj[a].add(b)
                built_adj[b].add(a)
        while len(clique) < need:
            common = None
            for w in clique:
                common = set(built_adj[w]) if common is None else common & built_adj[w]
            if common is None:
                common = set(built)
            common -= set(clique)
            nxt = sorted_vertices(common)[0]
            clique.append(nxt)
        built_adj[v] = set()
        for w in clique:
            add(v, w)
            built_adj[v].add(w)
            built_adj[w].add(v)
        built.append(v)
    return sorted_pairs(added)


# ---------------------------------------------------------------- minors


def _reduce_for_target(g: Graph, min_deg: int) -> Graph:
    """Drop or suppress low-degree vertices that cannot matter for a target of minimum degree ``min_deg``."""
    adj = {v: set(nb) for v, nb in g.adj.items()}
    changed = True
    while changed:
        changed = False
        for v in sorted_vertices(adj):
            if v not in adj:
                continue
            d = len(adj[v])
            if d == 0 and min_deg >= 1 or d == 1 and min_deg >= 2:
                for w in adj.pop(v):
                    adj[w].discard(v)
                changed = True
            elif d == 2 and min_deg >= 3:
                a, b = adj.pop(v)
                adj[a].discard(v)
                adj[b].discard(v)
                adj[a].add(b)
                adj[b].add(a)
                changed = True
    return Graph(list(adj), {pair(u, v) for u in adj for v in adj[u]})


def _monomorphic(big: Graph, small: Graph) -> bool:
    if big.n < small.n or big.m < small.m:
        return False
    db = sorted((big.degree(v) for v in big.vertices), reverse=True)
    ds = sorted((small.degree(v) for v in small.vertices), reverse=True)
    if any(a < b for a, b in zip(db, ds)):
        return False
    from networkx.algorithms.isomorphism import GraphMatcher

    return GraphMatcher(big.to_networkx(), small.to_networkx()).subgraph_is_monomorphic()


def has_minor(g: Graph, h: Graph) -> bool:
    """Exhaustive minor test by contraction search with memoisation."""
    if h.n > MINOR_TARGET_LIMIT:
        raise MinorTargetTooLarge(f"minor target has {h.n} vertices (limit {MINOR_TARGET_LIMIT})")
    if h.n == 0:
        return True
    if g.n < h.n or g.m < h.m:
        return False
    min_deg = min(h.degree(v) for v in h.vertices)
    if h.is_connected() and h.n > 1:
        return any(_minor_search(_reduce_for_target(g.induced(c), min_deg), h, min_deg)
                   for c in g.components() if len(c) >= h.n)
    return _minor_search(g, h, min_deg)


def _minor_search(g: Graph, h: Graph, min_deg: int) -> bool:
    seen = set()
    stack = [g]
    while stack:
        cur = stack.pop()
        if cur.n < h.n or cur.m < h.m:
            continue
        if _monomorphic(cur, h):
            return True
        if cur.n == h.n:
            continue
        for e in cur.sorted_edges():
            nxt = _reduce_for_target(contract_edge(cur, e)[0], min_deg)
            key = (nxt.vertex_set, nxt.edges)
            if key not in seen:
                seen.add(key)
                stack.append(nxt)
    return False


def is_three_realizable(g: Graph) -> bool:
    """True iff ``g`` has neither K5 nor K2,2,2 as a minor."""
    if g.n < 5:
        return True
    red = _reduce_for_target(g, 4)
    if red.n < 5 or is_partial_k_tree(red, 3):
        return True
    return not has_minor(red, K5) and not has_minor(red, K222)


def has_k4_minor(g: Graph) -> bool:
    return has_minor(g, K4)
