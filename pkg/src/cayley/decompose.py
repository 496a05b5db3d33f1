"""2-sum decomposition along edge separation pairs (plus articulation vertices)."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .errors import GraphNotConnected, VertexNotFound
from .graph import Graph, pair, sorted_pairs, sorted_vertices, vkey


@dataclass(frozen=True)
class Component:
    vertices: frozenset
    edges: frozenset
    virtual: frozenset = frozenset()

    @property
    def graph(self) -> Graph:
        return Graph(sorted_vertices(self.vertices), self.edges)

    @property
    def real_edges(self) -> frozenset:
        return self.edges - self.virtual

    def contains_pair(self, p) -> bool:
        return p[0] in self.vertices and p[1] in self.vertices


@dataclass
class TwoSumDecomposition:
    components: list
    # (i, j, label): label is a vertex pair for 2-sums, a single vertex for 1-sums
    tree: list = field(default_factory=list)
    minimal_flags: list = field(default_factory=list)

    def neighbors(self, i) -> list:
        out = []
        for a, b, lab in self.tree:
            if a == i:
                out.append((b, lab))
            elif b == i:
                out.append((a, lab))
        return out

    def containing(self, v) -> list:
        return [i for i, c in enumerate(self.components) if v in c.vertices]


def biconnected_blocks(g: Graph) -> list:
    """Edge sets of the blocks of ``g`` (iterative Hopcroft-Tarjan)."""
    adj = g.adj
    disc: dict = {}
    low: dict = {}
    blocks = []
    counter = 0
    for root in sorted_vertices(g.vertices):
        if root in disc:
            continue
        disc[root] = low[root] = counter
        counter += 1
        stack = [(root, None, iter(adj[root]))]
        estack = []
        while stack:
            v, parent, it = stack[-1]
            advanced = False
            for w in it:
                if w == parent:
                    continue
                if w not in disc:
                    disc[w] = low[w] = counter
                    counter += 1
                    estack.append((v, w))
                    stack.append((w, v, iter(adj[w])))
                    advanced = True
                    break
                if disc[w] < disc[v]:
                    estack.append((v, w))
                    if disc[w] < low[v]:
                        low[v] = disc[w]
            if advanced:
                continue
            stack.pop()
            if parent is not None:
                if low[v] < low[parent]:
                    low[parent] = low[v]
                if low[v] >= disc[parent]:
                    block = set()
                    while True:
                        e = estack.pop()
                        block.add(pair(*e))
                        if e == (parent, v):
                            break
                    blocks.append(block)
    return blocks


def _split_block(vertices: set, edges: set):
    """Split one biconnected block at every edge separation pair.

    Returns ``(pieces, links)``: pieces are (vertex set, edge set) and links are
    ``(i, j, edge)`` between pieces sharing that edge.
    """
    adj = {v: set() for v in vertices}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)

    # Peel degree-2 vertices whose neighbours are adjacent: each is a triangle
    # hanging on the edge between its neighbours.
    peeled = []
    alive = len(adj)
    queue = deque(sorted_vertices(v for v in adj if len(adj[v]) == 2))
    while queue and alive > 3:
        v = queue.popleft()
        if v not in adj or len(adj[v]) != 2:
            continue
        a, b = adj[v]
        if b not in adj[a]:
            continue
        peeled.append((v, pair(a, b)))
        adj[a].discard(v)
        adj[b].discard(v)
        del adj[v]
        alive -= 1
        for w in (a, b):
            if len(adj[w]) == 2:
                queue.append(w)
        if alive <= 3:
            break

    pieces, links = _split_core(adj)

    owner = {}
    for idx, (_, pedges) in enumerate(pieces):
        for e in pedges:
            owner.setdefault(e, idx)
    for v, shared in reversed(peeled):
        a, b = shared
        idx = len(pieces)
        tri_edges = {shared, pair(v, a), pair(v, b)}
        pieces.append(({v, a, b}, tri_edges))
        links.append((owner[shared], idx, shared))
        for e in tri_edges:
            owner.setdefault(e, idx)
    return pieces, links


def _split_core(adj: dict):
    """Brute-force separation-pair search on a block without peelable triangles."""
    vertices = set(adj)
    edges = {pair(u, v) for u in adj for v in adj[u]}
    if len(vertices) <= 3:
        return [(vertices, edges)], []
    for a, b in sorted_pairs(edges):
        parts = _components_without(adj, {a, b})
        if len(parts) < 2:
            continue
        pieces, links = [], []
        anchors = []
        for part in parts:
            pv = set(part) | {a, b}
            sub = {v: adj[v] & pv for v in pv}
            sp, sl = _split_block_adj(sub)
            off = len(pieces)
            pieces.extend(sp)
            links.extend((i + off, j + off, lab) for i, j, lab in sl)
            anchor = next(i for i, (_, pe) in enumerate(sp) if (a, b) in pe)
            anchors.append(anchor + off)
        for other in anchors[1:]:
            links.append((anchors[0], other, (a, b)))
        return pieces, links
    return [(vertices, edges)], []


def _split_block_adj(adj: dict):
    edges = {pair(u, v) for u in adj for v in adj[u]}
    return _split_block(set(adj), edges)


def _components_without(adj: dict, removed: set) -> list:
    seen = set(removed)
    parts = []
    for s in sorted_vertices(adj):
        if s in seen:
            continue
        seen.add(s)
        part = [s]
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    part.append(y)
                    queue.append(y)
        parts.append(part)
    return parts


def two_sum_decompose(g: Graph) -> TwoSumDecomposition:
    """Split a connected graph into minimal 2-sum components.

    Splits happen at articulation vertices and at vertex pairs {a, b} that are
    edges and whose removal disconnects the graph; the shared edge is copied
    into every part.
    """
    if not g.is_connected():
        raise GraphNotConnected("two_sum_decompose needs a connected graph")
    if g.n == 1:
        comp = Component(frozenset(g.vertices), frozenset())
        return TwoSumDecomposition([comp], [], [True])

    raw = []  # (vertices, edges)
    tree = []
    first_with: dict = {}  # cut-vertex bookkeeping: vertex -> list of block anchors
    blocks = biconnected_blocks(g)
    if len(blocks) > 1:
        blocks.sort(key=lambda b: min(vkey(x) for e in b for x in e))
    for bedges in blocks:
        bverts = {x for e in bedges for x in e}
        if len(bverts) <= 3:
            pieces, links = [(bverts, set(bedges))], []
        else:
            pieces, links = _split_block(bverts, set(bedges))
        off = len(raw)
        raw.extend(pieces)
        tree.extend((i + off, j + off, lab) for i, j, lab in links)
        # one representative piece per vertex of the block, for 1-sum links
        rep: dict = {}
        for i, (pv, _) in enumerate(pieces):
            for v in pv:
                rep.setdefault(v, i + off)
        for v in bverts:
            first_with.setdefault(v, []).append(rep[v])
    for v in sorted_vertices(first_with):
        reps = first_with[v]
        for other in reps[1:]:
            tree.append((reps[0], other, v))

    real_owner: dict = {}
    for idx, (_, pedges) in enumerate(raw):
        for e in pedges:
            real_owner.setdefault(e, idx)
    comps = []
    for idx, (pv, pedges) in enumerate(raw):
        virtual = frozenset(e for e in pedges if real_owner[e] != idx)
        comps.append(Component(frozenset(pv), frozenset(pedges), virtual))
    return TwoSumDecomposition(comps, tree, [True] * len(comps))


def decompose_all(g: Graph) -> list:
    """Decompose every connected component; returns a list of decompositions."""
    return [two_sum_decompose(g.induced(c)) for c in g.components()]


def minimal_components(g: Graph) -> list:
    """All minimal 2-sum components of ``g`` as graphs (isolated vertices included)."""
    out = []
    for d in decompose_all(g):
        out.extend(c.graph for c in d.components)
    return out


def minimal_components_containing(g: Graph, f) -> list:
    """Minimal 2-sum components of ``g`` that contain both endpoints of ``f``.

    When no single component holds both endpoints, the components along the
    decomposition-tree path between them are merged into one subgraph.
    """
    u, v = f
    for w in (u, v):
        if w not in g:
            raise VertexNotFound(f"{w!r} is not a vertex")
    comp_of = None
    for c in g.components():
        if u in c:
            comp_of = c
            break
    if v not in comp_of:
        return []
    sub = g.induced(comp_of)
    dec = two_sum_decompose(sub)
    su = set(dec.containing(u))
    sv = set(dec.containing(v))
    both = sorted(su & sv)
    if both:
        return [dec.components[i].graph for i in both]
    # BFS in the decomposition tree from all u-components to any v-component
    prev = {i: None for i in su}
    queue = deque(sorted(su))
    hit = None
    while queue:
        i = queue.popleft()
        if i in sv:
            hit = i
            break
        for j, _ in sorted(dec.neighbors(i), key=lambda t: t[0]):
            if j not in prev:
                prev[j] = i
                queue.append(j)
    path = []
    while hit is not None:
        path.append(hit)
        hit = prev[hit]
    verts = set()
    for i in path:
        verts |= dec.components[i].vertices
    return [sub.induced(verts)]


def components_containing_any(g: Graph, pairs) -> list:
    """Minimal components of ``g`` holding both endpoints of at least one pair."""
    out = []
    for d in decompose_all(g):
        for c in d.components:
            if any(c.contains_pair(p) for p in pairs):
                out.append(c.graph)
    return out
