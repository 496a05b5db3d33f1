"""Generic 2D rigidity classification with the (2,3)-pebble game."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import InputError
from .graph import Graph
from .minors import is_partial_two_tree


class LamanTag(str, enum.Enum):
    UNDERCONSTRAINED = "underconstrained"
    WELLCONSTRAINED = "wellconstrained"
    # dependent and rigid: contains a minimally rigid spanning subgraph
    OVERCONSTRAINED = "overconstrained"
    # dependent and not rigid
    FLEXIBLE_OVERCONSTRAINED = "flexible-with-overconstraint"


@dataclass(frozen=True)
class LamanClass:
    tag: LamanTag
    dof: int
    rank: int
    independent: bool
    rigid: bool

    @property
    def welloverconstrained(self) -> bool:
        return self.rigid


class PebbleGame:
    """(2,3)-pebble game; ``insert`` returns False for dependent edges."""

    def __init__(self, vertices):
        self.pebbles = {v: 2 for v in vertices}
        self.out = {v: [] for v in vertices}

    def _find_pebble(self, start, blocked) -> bool:
        # depth-first search along directed edges for a free pebble
        parent = {start: None}
        for b in blocked:
            parent.setdefault(b, None)
        stack = [start]
        while stack:
            x = stack.pop()
            for y in self.out[x]:
                if y in parent:
                    continue
                parent[y] = x
                if self.pebbles[y] > 0:
                    # reverse the path y <- ... <- start
                    self.pebbles[y] -= 1
                    self.pebbles[start] += 1
                    child = y
                    while child != start:
                        p = parent[child]
                        self.out[p].remove(child)
                        self.out[child].append(p)
                        child = p
                    return True
                stack.append(y)
        return False

    def insert(self, u, v) -> bool:
        while self.pebbles[u] < 2:
            if not self._find_pebble(u, (v,)):
                return False
        while self.pebbles[v] < 2:
            if not self._find_pebble(v, (u,)):
                return False
        self.pebbles[u] -= 1
        self.out[u].append(v)
        return True


def pebble_rank(g: Graph) -> int:
    game = PebbleGame(g.vertices)
    return sum(game.insert(u, v) for u, v in g.sorted_edges())


def laman_classify(g: Graph, method: str = "auto") -> LamanClass:
    """Generic 2D rigidity class of ``g``.

    ``method="auto"`` skips the pebble game for partial 2-trees, which are
    always independent (rank = |E|).
    """
    if g.n < 2:
        raise InputError("Laman classification needs at least two vertices")
    if method == "auto" and is_partial_two_tree(g):
        rank = g.m
    elif method in ("auto", "pebble"):
        rank = pebble_rank(g)
    else:
        raise InputError(f"unknown method {method!r}")
    full = 2 * g.n - 3
    independent = rank == g.m
    rigid = rank == full
    if independent:
        tag = LamanTag.WELLCONSTRAINED if rigid else LamanTag.UNDERCONSTRAINED
    else:
        tag = LamanTag.OVERCONSTRAINED if rigid else LamanTag.FLEXIBLE_OVERCONSTRAINED
    return LamanClass(tag, full - rank, rank, independent, rigid)
