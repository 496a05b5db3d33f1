"""Euclidean distance constraint systems: a graph, edge lengths and Cayley parameters."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import BadInterval, BadParameter, BadParameterSet, InputError, UnsupportedDimension
from .graph import Graph, pair, sorted_pairs


def _as_interval(w) -> tuple[float, float]:
    if isinstance(w, (tuple, list)):
        if len(w) != 2:
            raise BadInterval(f"interval needs two bounds, got {w!r}")
        lo, hi = float(w[0]), float(w[1])
    else:
        lo = hi = float(w)
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise BadParameter(f"edge weight {w!r} is not finite")
    if lo < 0:
        raise BadParameter(f"edge weight {w!r} is negative")
    if lo > hi:
        raise BadInterval(f"interval lower bound {lo} exceeds upper bound {hi}")
    return lo, hi


@dataclass(frozen=True)
class Edcs:
    """Graph with a distance or distance interval on each edge.

    ``weights`` maps canonical pairs to ``(lo, hi)``; a point value is stored
    as ``(d, d)``. ``params`` is the Cayley parameter set F (non-edges).
    """

    graph: Graph
    weights: dict
    params: frozenset = field(default_factory=frozenset)
    dim: int = 2

    def __post_init__(self):
        if self.dim not in (2, 3):
            raise UnsupportedDimension(f"dimension must be 2 or 3, got {self.dim!r}")
        ws = {}
        for e, w in self.weights.items():
            p = pair(*e)
            if not self.graph.has_edge(p):
                raise InputError(f"weight given for non-edge {p!r}")
            ws[p] = _as_interval(w)
        missing = [e for e in self.graph.sorted_edges() if e not in ws]
        if missing:
            raise InputError(f"edges without weights: {missing!r}")
        ps = set()
        for f in self.params:
            p = pair(*f)
            for v in p:
                if v not in self.graph:
                    raise BadParameterSet(f"parameter {p!r} uses unknown vertex {v!r}")
            if self.graph.has_edge(p):
                raise BadParameterSet(f"parameter {p!r} is an edge")
            ps.add(p)
        object.__setattr__(self, "weights", ws)
        object.__setattr__(self, "params", frozenset(ps))

    @classmethod
    def from_lengths(cls, edges, params=(), dim=2, vertices=()) -> "Edcs":
        """Build from ``{(u, v): length_or_interval}``."""
        g = Graph(vertices, edges.keys())
        return cls(g, dict(edges), frozenset(params), dim)

    @property
    def is_point(self) -> bool:
        return all(lo == hi for lo, hi in self.weights.values())

    def delta(self, e) -> float:
        lo, hi = self.weights[pair(*e)]
        if lo != hi:
            raise InputError(f"edge {e!r} carries a genuine interval [{lo}, {hi}]")
        return lo

    def lengths(self) -> dict:
        """Point lengths for every edge (raises on genuine intervals)."""
        return {e: self.delta(e) for e in self.weights}

    def sorted_params(self) -> list:
        return sorted_pairs(self.params)

    def with_params(self, params) -> "Edcs":
        return Edcs(self.graph, self.weights, frozenset(params), self.dim)

    def with_dim(self, dim: int) -> "Edcs":
        return Edcs(self.graph, self.weights, self.params, dim)
