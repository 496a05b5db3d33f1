"""Simple undirected graphs, vertex pairs and edge contraction."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable

from .errors import EdgeNotFound, InputError

Vertex = Hashable
Pair = tuple  # canonically ordered (u, v) with u != v


def vkey(x):
    """Total order over mixed vertex identifiers: ints, then strings, then the rest."""
    if isinstance(x, bool):
        return (2, 0, repr(x))
    if isinstance(x, int):
        return (0, x, "")
    if isinstance(x, str):
        return (1, 0, x)
    return (2, 0, repr(x))


def pair(u, v) -> Pair:
    if u == v:
        raise InputError(f"vertex pair needs two distinct vertices, got {u!r} twice")
    if type(u) is int and type(v) is int:
        return (u, v) if u < v else (v, u)
    return (u, v) if vkey(u) <= vkey(v) else (v, u)


def pair_key(p: Pair):
    return (vkey(p[0]), vkey(p[1]))


def sorted_vertices(vs: Iterable) -> list:
    vs = list(vs)
    if all(type(x) is int for x in vs):
        return sorted(vs)
    return sorted(vs, key=vkey)


def sorted_pairs(ps: Iterable[Pair]) -> list:
    return sorted(ps, key=pair_key)


class Graph:
    """Immutable simple graph.

    Vertices keep their insertion order; edges are canonical pairs.
    """

    __slots__ = ("vertices", "edges", "_adj", "_vset")

    def __init__(self, vertices: Iterable = (), edges: Iterable = ()):
        verts = list(dict.fromkeys(vertices))
        es = set()
        for e in edges:
            u, v = e
            es.add(pair(u, v))
        vset = set(verts)
        for u, v in sorted_pairs(es):
            for w in (u, v):
                if w not in vset:
                    verts.append(w)
                    vset.add(w)
        self.vertices = tuple(verts)
        self.edges = frozenset(es)
        self._vset = frozenset(vset)
        self._adj = None

    @classmethod
    def from_edges(cls, edges: Iterable, vertices: Iterable = ()) -> "Graph":
        return cls(vertices, edges)

    @property
    def adj(self) -> dict:
        if self._adj is None:
            adj = {v: set() for v in self.vertices}
            for u, v in self.edges:
                adj[u].add(v)
                adj[v].add(u)
            self._adj = adj
        return self._adj

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def vertex_set(self) -> frozenset:
        return self._vset

    def __contains__(self, v) -> bool:
        return v in self._vset

    def has_edge(self, u, v=None) -> bool:
        if v is None:
            u, v = u
        if u == v:
            return False
        return pair(u, v) in self.edges

    def neighbors(self, v) -> set:
        return self.adj[v]

    def degree(self, v) -> int:
        return len(self.adj[v])

    def sorted_edges(self) -> list:
        return sorted_pairs(self.edges)

    def non_edges(self) -> list:
        vs = sorted_vertices(self.vertices)
        out = []
        for i, u in enumerate(vs):
            nb = self.adj[u]
            for v in vs[i + 1:]:
                if v not in nb:
                    out.append((u, v))
        return out

    def add_edges(self, edges: Iterable) -> "Graph":
        return Graph(self.vertices, list(self.edges) + list(edges))

    def remove_edges(self, edges: Iterable) -> "Graph":
        drop = {pair(*e) for e in edges}
        return Graph(self.vertices, self.edges - drop)

    def add_vertices(self, vs: Iterable) -> "Graph":
        return Graph(list(self.vertices) + list(vs), self.edges)

    def remove_vertices(self, vs: Iterable) -> "Graph":
        drop = set(vs)
        return Graph([v for v in self.vertices if v not in drop],
                     [e for e in self.edges if e[0] not in drop and e[1] not in drop])

    def induced(self, vs: Iterable) -> "Graph":
        keep = set(vs)
        return Graph([v for v in self.vertices if v in keep],
                     [e for e in self.edges if e[0] in keep and e[1] in keep])

    def relabel(self, mapping: dict) -> "Graph":
        return Graph([mapping.get(v, v) for v in self.vertices],
                     [(mapping.get(u, u), mapping.get(v, v)) for u, v in self.edges])

    def components(self) -> list:
        """Connected components as vertex lists, ordered by lowest vertex."""
        seen = set()
        comps = []
        adj = self.adj
        for s in sorted_vertices(self.vertices):
            if s in seen:
                continue
            seen.add(s)
            comp = [s]
            queue = deque([s])
            while queue:
                x = queue.popleft()
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        comp.append(y)
                        queue.append(y)
            comps.append(comp)
        return comps

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._vset == other._vset and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self._vset, self.edges))

    def __repr__(self) -> str:
        es = ", ".join(f"{u}-{v}" for u, v in self.sorted_edges())
        return f"Graph(n={self.n}, edges=[{es}])"

    def to_networkx(self):
        import networkx as nx

        h = nx.Graph()
        h.add_nodes_from(self.vertices)
        h.add_edges_from(self.edges)
        return h


def complete_graph(n: int, start: int = 1) -> Graph:
    vs = list(range(start, start + n))
    return Graph(vs, [(u, v) for i, u in enumerate(vs) for v in vs[i + 1:]])


def path_graph(n: int, start: int = 1) -> Graph:
    vs = list(range(start, start + n))
    return Graph(vs, list(zip(vs, vs[1:])))


def cycle_graph(n: int, start: int = 1) -> Graph:
    vs = list(range(start, start + n))
    return Graph(vs, list(zip(vs, vs[1:])) + [(vs[-1], vs[0])])


K3 = complete_graph(3)
K4 = complete_graph(4)
K5 = complete_graph(5)
# Octahedron labelled with antipodal classes {1,5}, {2,4}, {3,6}.
K222 = Graph(range(1, 7), [(u, v) for u in range(1, 7) for v in range(u + 1, 7)
                           if {u, v} not in ({1, 5}, {2, 4}, {3, 6})])


def contract_edge(g: Graph, e, keep=None) -> tuple[Graph, tuple]:
    """Identify the endpoints of edge ``e``; returns the minor and ``(survivor, absorbed)``."""
    u, v = e
    if u == v or not g.has_edge(u, v):
        raise EdgeNotFound(f"{e!r} is not an edge")
    if keep is None:
        keep = pair(u, v)[0]
    if keep not in (u, v):
        raise InputError(f"survivor {keep!r} is not an endpoint of {e!r}")
    gone = v if keep == u else u
    new_edges = []
    for a, b in g.edges:
        a2 = keep if a == gone else a
        b2 = keep if b == gone else b
        if a2 != b2:
            new_edges.append((a2, b2))
    return Graph([x for x in g.vertices if x != gone], new_edges), (keep, gone)


@dataclass
class ContractionSequence:
    """Contraction-only reduction of ``source`` to ``target``.

    ``steps`` holds ``(edge, survivor)`` in the labels current at each step.
    ``removed`` lists isolated vertices deleted after all contractions.
    """

    source: Graph
    steps: list = field(default_factory=list)
    removed: list = field(default_factory=list)
    target: Graph | None = None
    vertex_map: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.target is None:
            self.target, self.vertex_map = replay(self.source, self.steps, self.removed)

    def replay(self, g: Graph | None = None) -> Graph:
        return replay(self.source if g is None else g, self.steps, self.removed)[0]

    def __len__(self) -> int:
        return len(self.steps)

    def contracted_edges(self) -> list:
        """Source edges whose endpoints end up identified."""
        vm = self.vertex_map
        return [e for e in self.source.sorted_edges()
                if vm.get(e[0]) is not None and vm.get(e[0]) == vm.get(e[1])]

    def image(self, e):
        """Target edge that source edge ``e`` maps to, or None when contracted/removed."""
        a, b = self.vertex_map.get(e[0]), self.vertex_map.get(e[1])
        if a is None or b is None or a == b:
            return None
        return pair(a, b)


def replay(g: Graph, steps, removed=()) -> tuple[Graph, dict]:
    cur = g
    rep = {v: v for v in g.vertices}
    for edge, keep in steps:
        cur, (kept, gone) = contract_edge(cur, edge, keep)
        for v, r in rep.items():
            if r == gone:
                rep[v] = kept
    for v in removed:
        if v not in cur or cur.degree(v) != 0:
            raise InputError(f"cannot remove {v!r}: not an isolated vertex")
        cur = cur.remove_vertices([v])
        for w, r in rep.items():
            if r == v:
                rep[w] = None
    return cur, rep
