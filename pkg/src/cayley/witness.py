"""Explicit distance assignments with disconnected Cayley configuration spaces."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .characterize import single_interval_nonedge
from .edcs import Edcs
from .errors import BadParameter, NoWitness
from .graph import K5, K222, ContractionSequence, Graph, pair, sorted_pairs, sorted_vertices
from .reductions import base_case_parts, contraction_reduction_to_k5_or_k222, restricted_contraction_reduction

SQRT3 = math.sqrt(3.0)


@dataclass
class WitnessAssignment:
    """Point-valued EDCS whose Cayley space on ``params`` is disconnected.

    ``expected_values`` lists the isolated values every parameter can take.
    """

    edcs: Edcs
    expected_values: list
    contraction: ContractionSequence
    target: str = ""
    base_edcs: Edcs | None = None
    notes: dict = field(default_factory=dict)

    @property
    def params(self) -> list:
        return self.edcs.sorted_params()


def base_case_witness_2d(g: Graph, f) -> WitnessAssignment:
    """Pull the base-case assignment back through a restricted contraction sequence."""
    v1, v2 = pair(*f)
    verdict = single_interval_nonedge(g, (v1, v2))
    if verdict.single_interval:
        raise NoWitness(f"every minimal component containing {(v1, v2)!r} is a partial 2-tree")
    seq = restricted_contraction_reduction(g, (v1, v2))
    w1, w2, us = base_case_parts(seq.target, v1, v2)
    base_w = {}
    for e in seq.target.sorted_edges():
        base_w[e] = 2.0 if (e[0] in us or e[1] in us) else 1.0
    weights = {}
    for e in g.sorted_edges():
        img = seq.image(e)
        weights[e] = 0.0 if img is None else base_w[img]
    edcs = Edcs(g, weights, frozenset([(v1, v2)]), 2)
    base = Edcs(seq.target, base_w, frozenset([(v1, v2)]), 2)
    return WitnessAssignment(edcs, [0.0, SQRT3], seq,
                             "base case 2" if us else "base case 1", base)


def k5_witness_3d() -> WitnessAssignment:
    """K5 minus f = (1, 2) with unit lengths: two unit tetrahedra on face (3, 4, 5)."""
    f = (1, 2)
    g = K5.remove_edges([f])
    edcs = Edcs(g, {e: 1.0 for e in g.edges}, frozenset([f]), 3)
    return WitnessAssignment(edcs, [0.0, 2 * math.sqrt(2.0 / 3.0)], ContractionSequence(g), "K5", edcs)


def k222_points(t: float = 1.0) -> dict:
    """Coordinates of the construction; ``5`` is the apex coincident with 1, ``5'`` its mirror."""
    v = {
        1: np.zeros(3),
        4: np.array([1.0, 0.0, 0.0]),
        6: np.array([1.0 + t, 0.0, 0.0]),
        2: np.array([0.5, math.sqrt(3) / 2, 0.0]),
        3: np.array([0.5, math.sqrt(3) / 6, math.sqrt(2.0 / 3.0)]),
    }
    a, b, c = v[2], v[3], v[4]
    n = np.cross(b - a, c - a)
    n /= np.linalg.norm(n)
    v[5] = v[1].copy()
    v["5'"] = v[1] - 2 * np.dot(v[1] - a, n) * n
    return v


def k222_reflected_distance(t: float = 1.0) -> float:
    """D'(t): distance from the mirrored apex to v6."""
    v = k222_points(t)
    return float(np.linalg.norm(v["5'"] - v[6]))


def k222_witness_3d(t: float = 1.0) -> WitnessAssignment:
    """K2,2,2 minus f = (5, 6) with antipodal classes {1,5}, {2,4}, {3,6}.

    Eight unit edges, delta(4,6) = t, delta(1,6) = 1 + t and delta(2,6) from
    the 60-degree angle at v1 pin v1, v4, v6 on a line and make
    {1, 2, 3, 4} a unit tetrahedron; v5 is v1 or its mirror in plane (2,3,4).
    """
    t = float(t)
    if not t > 0 or not math.isfinite(t):
        raise BadParameter("t must be a positive length")
    f = (5, 6)
    g = K222.remove_edges([f])
    w = {e: 1.0 for e in [(1, 2), (2, 3), (1, 3), (1, 4), (3, 4), (2, 5), (3, 5), (4, 5)]}
    w[(4, 6)] = t
    w[(1, 6)] = 1.0 + t
    w[(2, 6)] = math.sqrt(1.0 + (1.0 + t) ** 2 - (1.0 + t))
    edcs = Edcs(g, w, frozenset([f]), 3)
    vals = sorted([1.0 + t, k222_reflected_distance(t)])
    return WitnessAssignment(edcs, vals, ContractionSequence(g), "K222", edcs, {"t": t})


def _template_map(tag: str, target: Graph, tf) -> dict:
    """Isomorphism template -> target sending the template's f onto ``tf``."""
    from networkx.algorithms.isomorphism import GraphMatcher

    tmpl = K5 if tag == "K5" else K222
    tmpl_f = (1, 2) if tag == "K5" else (5, 6)
    gm = GraphMatcher(tmpl.to_networkx(), target.to_networkx())
    for iso in gm.isomorphisms_iter():
        if pair(iso[tmpl_f[0]], iso[tmpl_f[1]]) == tf:
            return iso
    raise RuntimeError("no isomorphism onto the reduction target")


def three_d_witness(h: Graph, t: float = 1.0):
    """``((E, F), witness)`` for a graph with a K5 or K2,2,2 minor.

    Contracted edges get length 0, the edges identified with the target's f
    form F, and every other edge inherits the template length of its image.
    """
    res = contraction_reduction_to_k5_or_k222(h)
    if res is None:
        raise NoWitness("graph is 3-realizable: every 3D Cayley space is connected")
    seq, tag = res
    target = seq.target
    tf = target.sorted_edges()[0]
    iso = _template_map(tag, target, tf)
    tmpl = k5_witness_3d() if tag == "K5" else k222_witness_3d(t)
    tw = {pair(iso[a], iso[b]): val for (a, b), val in tmpl.edcs.weights.items()}
    F, weights = [], {}
    for e in h.sorted_edges():
        img = seq.image(e)
        if img is None:
            weights[e] = 0.0
        elif img == tf:
            F.append(e)
        else:
            weights[e] = tw[img][0]
    g = h.remove_edges(F)
    edcs = Edcs(g, weights, frozenset(F), 3)
    base = Edcs(target.remove_edges([tf]), {e: v[0] for e, v in tw.items()}, frozenset([tf]), 3)
    wa = WitnessAssignment(edcs, list(tmpl.expected_values), seq, tag, base, dict(tmpl.notes))
    E = sorted_pairs(g.edges)
    return (E, sorted_pairs(F)), wa
