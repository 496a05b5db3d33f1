import itertools

import numpy as np
import pytest

from cayley.characterize import (admits_efficient_space, check_parameter_set, check_parameter_set_interval,
                                 single_interval_nonedge, subdivide_for_intervals, universal_inherence)
from cayley.edcs import Edcs
from cayley.errors import BadParameterSet, GraphNotConnected, NotANonEdge, UnsupportedDimension
from cayley.graph import K4, K222, Graph, cycle_graph, path_graph

from _util import atlas, k4_minus_f, random_k_tree

K4_MINUS_E = K4.remove_edges([(1, 2)])


def test_single_interval_examples():
    g, f = k4_minus_f()
    v = single_interval_nonedge(g, f)
    assert not v.single_interval
    assert v.offenders == [K4]
    assert single_interval_nonedge(path_graph(3), (1, 3))
    assert single_interval_nonedge(cycle_graph(4), (1, 3))


def test_single_interval_rejects_edges():
    with pytest.raises(NotANonEdge):
        single_interval_nonedge(path_graph(3), (1, 2))


def test_check_parameter_set_examples():
    rep = check_parameter_set(cycle_graph(4), [(1, 3)])
    assert rep.linear_polytope and rep.generically_complete
    rep = check_parameter_set(K4_MINUS_E, [(1, 2)])
    assert not rep.linear_polytope and rep.witnesses
    rep = check_parameter_set(path_graph(3), [(1, 3)])
    assert rep.linear_polytope and rep.generically_complete


def test_flags_coincide():
    rep = check_parameter_set(cycle_graph(4), [(1, 3)])
    assert rep.always_single_interval == rep.always_convex == rep.always_linear_polytope


def test_parameter_set_errors():
    with pytest.raises(BadParameterSet):
        check_parameter_set(path_graph(3), [])
    with pytest.raises(BadParameterSet):
        check_parameter_set(path_graph(3), [(1, 2)])


def test_admits_examples():
    F, rep = admits_efficient_space(path_graph(3))
    assert F == [(1, 3)] and rep.linear_polytope
    F, _ = admits_efficient_space(K4_MINUS_E)
    assert F is None
    F, rep = admits_efficient_space(cycle_graph(4))
    assert len(F) == 1 and rep.linear_polytope


@pytest.mark.parametrize("deleted", [(1, 2), (1, 3)])
def test_admits_two_triangles_with_deleted_edge(deleted):
    two = Graph([1, 2, 3, 4], [(1, 2), (1, 3), (2, 3), (1, 4), (2, 4)])
    F, rep = admits_efficient_space(two.remove_edges([deleted]))
    assert F == [deleted]
    assert rep.linear_polytope


def test_parameter_set_monotone_in_members():
    rng = np.random.default_rng(2)
    for g in atlas(6, min_n=3):
        nes = g.non_edges()
        if not nes:
            continue
        for _ in range(3):
            size = int(rng.integers(1, min(3, len(nes)) + 1))
            F = [nes[i] for i in rng.choice(len(nes), size=size, replace=False)]
            if check_parameter_set(g, F).linear_polytope:
                assert all(single_interval_nonedge(g, f) for f in F)


def test_subdivision_examples():
    e = Edcs.from_lengths({(1, 2): (3, 5)})
    sub, prov = subdivide_for_intervals(e)
    (s,) = prov
    assert prov[s] == (1, 2)
    assert sorted(w[0] for w in sub.weights.values()) == [1.0, 4.0]
    sub, _ = subdivide_for_intervals(Edcs.from_lengths({(1, 2): 2.0}), strict=True)
    assert sorted(w[0] for w in sub.weights.values()) == [0.0, 2.0]
    sub, _ = subdivide_for_intervals(Edcs.from_lengths({(1, 2): (0, 2)}))
    assert sorted(w[0] for w in sub.weights.values()) == [1.0, 1.0]


def test_subdivision_gadget_range():
    rng = np.random.default_rng(0)
    theta = np.linspace(0.0, np.pi, 2001)
    for _ in range(500):
        l, r = np.sort(rng.uniform(0, 10, size=2))
        sub, prov = subdivide_for_intervals(Edcs.from_lengths({(1, 2): (l, r)}))
        (s,) = prov
        a, b = sub.delta((1, s)), sub.delta((s, 2))
        # bars from s at angle theta apart
        d = np.sqrt(a * a + b * b - 2 * a * b * np.cos(theta))
        assert abs(d.min() - l) <= 1e-9 and abs(d.max() - r) <= 1e-9


def test_interval_parameter_set_examples():
    e = Edcs.from_lengths({(1, 2): 1.0, (2, 3): 2.0})
    assert check_parameter_set_interval(e, [(1, 3)]).linear_polytope
    g, f = k4_minus_f()
    w = {e: 1.0 for e in g.edges}
    w[(1, 3)] = (1.0, 2.0)
    assert not check_parameter_set_interval(Edcs(g, w), [f]).linear_polytope
    c4 = Edcs.from_lengths({e: (1.0, 2.0) for e in cycle_graph(4).edges})
    assert check_parameter_set_interval(c4, [(1, 3)]).linear_polytope


def test_interval_parameter_set_needs_connected_graph():
    e = Edcs.from_lengths({(1, 2): 1.0, (3, 4): 1.0})
    with pytest.raises(GraphNotConnected):
        check_parameter_set_interval(e, [(1, 3)])


def test_universal_inherence_examples():
    assert not universal_inherence(K222, 3)
    assert not universal_inherence(K4, 2)
    rng = np.random.default_rng(4)
    assert universal_inherence(random_k_tree(8, 3, rng), 3)
    with pytest.raises(UnsupportedDimension):
        universal_inherence(K4, 4)
