import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cayley.characterize import single_interval_nonedge
from cayley.edcs import Edcs
from cayley.errors import InputError, NotANonEdge, OracleInapplicable
from cayley.graph import Graph, cycle_graph, path_graph
from cayley.minors import complete_to_k_tree
from cayley.oracle import IntervalSet, cayley_space_oracle, cluster, realizability_probe
from cayley.polytope import polytope_description
from cayley.witness import base_case_witness_2d

from _util import atlas, k4_minus_f, lengths_from, random_partial_k_tree, random_points

SQRT3 = math.sqrt(3)


def same(iset, expected, tol=1e-6):
    got = iset.intervals
    return len(got) == len(expected) and all(
        abs(a - c) <= tol and abs(b - d) <= tol for (a, b), (c, d) in zip(got, expected))


def k4f_edcs():
    g, f = k4_minus_f()
    return Edcs(g, {p: 1.0 for p in g.edges}), f


def test_oracle_examples():
    e, f = k4f_edcs()
    iset = cayley_space_oracle(e, f)
    assert len(iset) == 2
    assert iset.intervals[0] == pytest.approx((0.0, 0.0), abs=1e-9)
    assert iset.intervals[1] == pytest.approx((SQRT3, SQRT3), abs=1e-9)
    p3 = Edcs.from_lengths({(1, 2): 1.0, (2, 3): 2.0})
    assert same(cayley_space_oracle(p3, (1, 3)), ((1.0, 3.0),))
    c4 = Edcs.from_lengths({p: 1.0 for p in cycle_graph(4).edges})
    assert same(cayley_space_oracle(c4, (1, 3)), ((0.0, 2.0),))


def test_probe_examples():
    e, f = k4f_edcs()
    assert not realizability_probe(e, {f: 1.0})
    assert realizability_probe(e, {f: SQRT3})
    p3 = Edcs.from_lengths({(1, 2): 1.0, (2, 3): 2.0})
    assert realizability_probe(p3, {(1, 3): 3.0})


def test_cluster_examples():
    two = cluster([0.0, 1.7320508], 0.01)
    assert two.intervals == ((0.0, 0.0), (1.7320508, 1.7320508))
    one = cluster(np.arange(1000, 3001) / 1000.0, 0.01)
    assert same(one, ((1.0, 3.0),), 1e-12)
    assert cluster([], 0.1) == IntervalSet(())
    with pytest.raises(InputError):
        cluster([1.0], 0.0)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(0, 100, allow_nan=False), max_size=40), st.floats(1e-3, 5))
def test_cluster_properties(values, gap):
    iset = cluster(values, gap)
    for v in values:
        assert iset.contains(v, tol=0.0)
    for (_, hi), (lo, _) in zip(iset.intervals, iset.intervals[1:]):
        assert lo - hi > gap


def test_oracle_input_errors():
    e, f = k4f_edcs()
    with pytest.raises(NotANonEdge):
        cayley_space_oracle(e, (1, 3))
    with pytest.raises(InputError):
        cayley_space_oracle(Edcs.from_lengths({(1, 2): (1, 2), (2, 3): 1}), (1, 3))
    big = path_graph(14)
    with pytest.raises(OracleInapplicable):
        cayley_space_oracle(Edcs.from_lengths({p: 1.0 for p in big.edges}), (1, 14))


def test_oracle_contracts_zero_edges():
    e = Edcs.from_lengths({(1, 2): 0.0, (2, 3): 2.0})
    assert same(cayley_space_oracle(e, (1, 3)), ((2.0, 2.0),))
    bad = Edcs.from_lengths({(1, 2): 0.0, (2, 3): 0.0, (1, 3): 1.0, (3, 4): 1.0})
    assert len(cayley_space_oracle(bad, (1, 4))) == 0


def test_oracle_disconnected_pair():
    e = Edcs.from_lengths({(1, 2): 1.0, (3, 4): 1.0})
    assert cayley_space_oracle(e, (1, 3)).intervals == ((0.0, math.inf),)


def test_oracle_matches_polytope_hull():
    rng = np.random.default_rng(40)
    done = 0
    while done < 12:
        g = random_partial_k_tree(int(rng.integers(3, 7)), 2, rng, drop=0.3)
        aux = complete_to_k_tree(g, 2)
        if len(aux) != 1:
            continue
        f = aux[0]
        e = Edcs.from_lengths(lengths_from(g, random_points(g, 2, rng)), vertices=g.vertices)
        lo, hi = polytope_description(e.with_params([f])).interval(f)
        grid = 400
        iset = cayley_space_oracle(e, f, grid=grid, refine_ends=False)
        step = (hi + lo) / grid + 1e-12
        h_lo, h_hi = iset.hull()
        assert abs(h_lo - lo) <= 2 * step and abs(h_hi - hi) <= 2 * step
        done += 1


def test_oracle_single_interval_on_true_verdicts():
    rng = np.random.default_rng(41)
    pairs = [(g, f) for g in atlas(6, min_n=4) for f in g.non_edges() if single_interval_nonedge(g, f)]
    for i in rng.choice(len(pairs), size=15, replace=False):
        g, f = pairs[i]
        for _ in range(10):
            e = Edcs.from_lengths(lengths_from(g, random_points(g, 2, rng)), vertices=g.vertices)
            assert len(cayley_space_oracle(e, f, grid=200, refine_ends=False)) == 1, (g, f)


def test_resolution_monotonicity():
    rng = np.random.default_rng(42)
    fixtures = []
    e, f = k4f_edcs()
    fixtures.append((e, f))
    for g in (path_graph(4), cycle_graph(5)):
        fixtures.append((Edcs.from_lengths(lengths_from(g, random_points(g, 2, rng))), (1, 3)))
    for g, f in [(g, f) for g in atlas(5, min_n=4) for f in g.non_edges()
                 if not single_interval_nonedge(g, f)][:5]:
        fixtures.append((base_case_witness_2d(g, f).edcs.with_params([]), f))
    for e, f in fixtures:
        coarse = len(cayley_space_oracle(e, f, grid=100, refine_ends=False))
        fine = len(cayley_space_oracle(e, f, grid=200, refine_ends=False))
        assert fine <= coarse
