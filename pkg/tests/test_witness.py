import math

import numpy as np
import pytest

from cayley.characterize import single_interval_nonedge
from cayley.edcs import Edcs
from cayley.errors import BadParameter, NoWitness
from cayley.graph import K5, K222, Graph, pair, path_graph
from cayley.minors import is_three_realizable
from cayley.oracle import cayley_space_oracle
from cayley.realize import enumerate_branches
from cayley.witness import (base_case_witness_2d, k5_witness_3d, k222_points, k222_reflected_distance,
                            k222_witness_3d, three_d_witness)

from _util import atlas, k4_minus_f

SQRT3 = math.sqrt(3)


def assert_oracle_matches(w, f):
    iset = cayley_space_oracle(w.edcs.with_params([]), f, grid=400)
    assert len(iset) == len(w.expected_values) >= 2
    for (lo, hi), v in zip(iset.intervals, sorted(w.expected_values)):
        assert abs(lo - v) <= 1e-9 and abs(hi - v) <= 1e-9


def assert_pullback(w):
    seq = w.contraction
    base = {}
    for e, (lo, _) in w.edcs.weights.items():
        img = seq.image(e)
        if img is None:
            assert lo == 0.0
        else:
            base.setdefault(img, set()).add(lo)
    assert {k: v.pop() for k, v in base.items() if len(v) == 1} == \
        {k: lo for k, (lo, _) in w.base_edcs.weights.items()}


def test_base_case_one_witness():
    g, f = k4_minus_f()
    w = base_case_witness_2d(g, f)
    assert all(v == (1.0, 1.0) for v in w.edcs.weights.values())
    assert w.expected_values == pytest.approx([0.0, SQRT3])
    assert_oracle_matches(w, f)


def test_subdivided_base_case_witness():
    g, f = k4_minus_f()
    g = g.remove_edges([(1, 3)]).add_edges([(1, 9), (9, 3)])
    w = base_case_witness_2d(g, f)
    pieces = sorted([w.edcs.weights[(1, 9)][0], w.edcs.weights[(3, 9)][0]])
    assert pieces == [0.0, 1.0]
    assert_pullback(w)
    assert_oracle_matches(w, f)


def test_p3_has_no_witness():
    with pytest.raises(NoWitness):
        base_case_witness_2d(path_graph(3), (1, 3))


def test_witnesses_validated_by_oracle():
    rng = np.random.default_rng(30)
    cases = [(g, f) for g in atlas(6, min_n=4) for f in g.non_edges()
             if not single_interval_nonedge(g, f)]
    assert cases
    for i in rng.choice(len(cases), size=min(25, len(cases)), replace=False):
        g, f = cases[i]
        w = base_case_witness_2d(g, f)
        assert_pullback(w)
        assert_oracle_matches(w, f)


def test_k5_witness():
    w = k5_witness_3d()
    assert w.edcs.graph.n == 5 and w.edcs.graph.m == 9
    assert all(v == (1.0, 1.0) for v in w.edcs.weights.values())
    assert w.expected_values == pytest.approx([0.0, 2 * math.sqrt(2 / 3)])
    vals = sorted({round(r.distance(1, 2), 9) for r in enumerate_branches(w.edcs).realizations})
    assert vals == pytest.approx(w.expected_values, abs=1e-9)


def test_k222_witness_values():
    w = k222_witness_3d(1.0)
    assert w.edcs.delta((1, 6)) == pytest.approx(2.0)
    assert w.edcs.delta((2, 6)) == pytest.approx(SQRT3)
    d = k222_reflected_distance(1.0)
    assert d < 2.0
    assert w.expected_values == pytest.approx(sorted([2.0, d]))
    pts = k222_points(1.0)
    for (u, v), (lo, _) in w.edcs.weights.items():
        assert np.linalg.norm(pts[u] - pts[v]) == pytest.approx(lo)


@pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
def test_k222_values_by_branch_enumeration(t):
    w = k222_witness_3d(t)
    # the unit tetrahedron {1,2,3,4} makes g + (2,4) a 3-tree
    lengths = {p: lo for p, (lo, _) in w.edcs.weights.items()}
    lengths[(2, 4)] = 1.0
    tree = Edcs.from_lengths(lengths, dim=3)
    vals = sorted({round(r.distance(5, 6), 9) for r in enumerate_branches(tree).realizations})
    assert vals == pytest.approx(w.expected_values, abs=1e-9)
    assert vals[0] < vals[1]


def test_k222_rejects_bad_t():
    with pytest.raises(BadParameter):
        k222_witness_3d(0.0)


def test_three_d_witness_examples():
    (E, F), w = three_d_witness(K5)
    assert len(F) == 1 and len(E) == 9
    assert all(v == (1.0, 1.0) for v in w.edcs.weights.values())
    (E, F), w = three_d_witness(K222)
    assert F == [(1, 2)] and w.target == "K222"
    assert w.expected_values == pytest.approx(k222_witness_3d(1.0).expected_values)
    sub = K222.remove_edges([(1, 2)]).add_edges([(1, 7), (7, 2)])
    (E, F), w = three_d_witness(sub)
    zero = [e for e, (lo, _) in w.edcs.weights.items() if lo == 0.0]
    assert len(zero) == 1
    assert_pullback(w)


def test_three_d_witness_requires_forbidden_minor():
    g = K5.remove_edges([(1, 2)])
    assert is_three_realizable(g)
    with pytest.raises(NoWitness):
        three_d_witness(g)


def test_three_d_witness_values_by_oracle():
    # the K2,2,2 values are singular configurations: residuals grow quadratically
    # away from them, so the least-squares probe resolves them only to ~1e-4
    for h, tol in ((K5, 1e-9), (K222, 1e-3)):
        (_, F), w = three_d_witness(h)
        iset = cayley_space_oracle(w.edcs.with_params([]), F[0], grid=200)
        assert len(iset) == 2
        for (lo, hi), v in zip(iset.intervals, w.expected_values):
            assert abs(lo - v) <= tol and abs(hi - v) <= tol
