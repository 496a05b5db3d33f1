"""Acceptance suite; each test prints one PASS/FAIL line."""

import gc
import math
import time

import numpy as np
import pytest

from cayley.characterize import admits_efficient_space, single_interval_nonedge, subdivide_for_intervals
from cayley.decompose import minimal_components_containing, two_sum_decompose
from cayley.edcs import Edcs
from cayley.errors import InfeasibleError
from cayley.graph import Graph, cycle_graph, pair, path_graph
from cayley.laman import laman_classify
from cayley.minors import complete_to_k_tree, is_partial_k_tree, is_partial_two_tree
from cayley.oracle import cayley_space_oracle
from cayley.polytope import polytope_description
from cayley.realize import construct, construction_plan, enumerate_branches, realize_from_config, verify_realization
from cayley.reductions import restricted_contraction_reduction
from cayley.witness import base_case_witness_2d, k5_witness_3d, k222_witness_3d

from _util import (atlas, k4_minus_f, lengths_from, random_graph, random_k_tree, random_partial_k_tree,
                   random_points)


@pytest.fixture
def report(capsys):
    def emit(number: int, title: str, ok: bool, detail: str = ""):
        with capsys.disabled():
            print(f"\n[acceptance {number}] {'PASS' if ok else 'FAIL'}: {title}" + (f" ({detail})" if detail else ""))
        assert ok, f"criterion {number} failed: {detail}"
    return emit


def _points(iset):
    return [(lo, hi) for lo, hi in iset.intervals]


def test_1_base_case_values(report):
    g, f = k4_minus_f()
    e = Edcs.from_lengths({p: 1.0 for p in g.edges})
    start = time.perf_counter()
    got = _points(cayley_space_oracle(e, f))
    elapsed = time.perf_counter() - start
    want = [0.0, math.sqrt(3)]
    ok = len(got) == 2 and all(abs(lo - v) <= 1e-6 and abs(hi - v) <= 1e-6 for (lo, hi), v in zip(got, want))
    ok = ok and elapsed < 1.0
    # subdivide up to three edges and pull the witness back with zeros
    edges = sorted(g.edges)
    for count in range(1, 4):
        h = g
        for i, (u, v) in enumerate(edges[:count]):
            s = 100 + i
            h = h.remove_edges([(u, v)]).add_edges([(u, s), (s, v)])
        w = base_case_witness_2d(h, f)
        zeros = sum(1 for lo, _ in w.edcs.weights.values() if lo == 0.0)
        vals = _points(cayley_space_oracle(w.edcs.with_params([]), f))
        ok = ok and zeros == count and len(vals) == len(w.expected_values) == 2
        ok = ok and all(abs(lo - v) <= 1e-6 and abs(hi - v) <= 1e-6
                        for (lo, hi), v in zip(vals, sorted(w.expected_values)))
        ok = ok and w.expected_values == pytest.approx(want, abs=1e-9)
    report(1, "K4 minus f gives {0, sqrt 3}, also after subdivision", ok, f"{elapsed:.3f} s")


def _bad_component(g, f):
    return any(not is_partial_two_tree(c) for c in minimal_components_containing(g.add_edges([f]), f))


def test_2_reduction_equivalence(report):
    start = time.perf_counter()
    graphs = atlas(6, min_n=3)
    rng = np.random.default_rng(2)
    graphs += [random_graph(7, rng.uniform(0.25, 0.75), rng) for _ in range(500)]
    checked = disagreements = 0
    for g in graphs:
        for f in g.non_edges():
            checked += 1
            if (restricted_contraction_reduction(g, f) is not None) != _bad_component(g, f):
                disagreements += 1
    elapsed = time.perf_counter() - start
    report(2, "contraction reduction exists iff a minimal component is not a partial 2-tree",
           disagreements == 0 and elapsed < 300, f"{checked} pairs, {disagreements} disagreements, {elapsed:.1f} s")


def test_3_one_interval_oracle(report):
    rng = np.random.default_rng(3)
    fixtures, true_count = [], 0
    while len(fixtures) < 50:
        n = int(rng.integers(4, 8))
        g = random_partial_k_tree(n, 2, rng, drop=rng.uniform(0.0, 0.4))
        non = g.non_edges()
        if not non:
            continue
        f = non[rng.integers(len(non))]
        verdict = single_interval_nonedge(g, f).single_interval
        # balance the two verdicts
        if verdict and true_count >= 25 or not verdict and len(fixtures) - true_count >= 25:
            continue
        true_count += bool(verdict)
        fixtures.append((g, f, bool(verdict)))
    failures = 0
    for g, f, verdict in fixtures:
        if verdict:
            for _ in range(200):
                e = Edcs.from_lengths(lengths_from(g, random_points(g, 2, rng)), vertices=g.vertices)
                if len(cayley_space_oracle(e, f, grid=150, refine_ends=False)) != 1:
                    failures += 1
        else:
            w = base_case_witness_2d(g, f)
            if len(cayley_space_oracle(w.edcs.with_params([]), f, grid=200)) < 2:
                failures += 1
    report(3, "single-interval verdicts agree with the oracle", failures == 0,
           f"{true_count} true and {50 - true_count} false fixtures, {failures} failures")


def _polytope_check(e, f, want):
    p = polytope_description(e)
    lo, hi = p.intervals()[f]
    ok = abs(lo - want[0]) <= 1e-9 and abs(hi - want[1]) <= 1e-9
    for x in np.linspace(want[0], want[1], 41):
        r = realize_from_config(e, {f: float(x)})
        ok = ok and verify_realization(r, e).max_error < 1e-9 and abs(r.distance(*f) - x) < 1e-9
    span = want[1] - want[0]
    for x in list(np.linspace(want[1] + 0.01 * span, want[1] + span, 20)) + \
            list(np.linspace(max(0.0, want[0] - span), want[0] - 0.01 * span, 20 if want[0] > 0 else 0)):
        try:
            realize_from_config(e, {f: float(x)})
            ok = False
        except InfeasibleError:
            pass
    return ok


def test_4_polytope_exactness(report):
    p3 = Edcs.from_lengths({(1, 2): 3.0, (2, 3): 4.0}, params=[(1, 3)])
    c4 = Edcs.from_lengths({p: 1.0 for p in cycle_graph(4).edges}, params=[(1, 3)])
    ok = _polytope_check(p3, (1, 3), (1.0, 7.0)) and _polytope_check(c4, (1, 3), (0.0, 2.0))
    report(4, "P3 gives [1, 7] and C4 gives [0, 2], grid points realize exactly", ok)


def test_5_interval_gadget(report):
    rng = np.random.default_rng(5)
    theta = np.linspace(0.0, np.pi, 2001)
    worst = 0.0
    for _ in range(500):
        l, r = np.sort(rng.uniform(0, 10, size=2))
        sub, prov = subdivide_for_intervals(Edcs.from_lengths({(1, 2): (l, r)}))
        (s,) = prov
        a, b = sub.delta((1, s)), sub.delta((s, 2))
        d = np.sqrt(a * a + b * b - 2 * a * b * np.cos(theta))
        worst = max(worst, abs(d.min() - l), abs(d.max() - r))
    report(5, "path gadget spans exactly [l, r]", worst <= 1e-9, f"max deviation {worst:.2e}")


def _branch_values(e, f):
    return sorted({round(r.distance(*f), 9) for r in enumerate_branches(e).realizations})


def test_6_three_d_witnesses(report):
    w = k5_witness_3d()
    k5 = _branch_values(w.edcs, (1, 2))
    ok = k5 == pytest.approx([0.0, 2 * math.sqrt(2 / 3)], abs=1e-9)
    w = k222_witness_3d(1.0)
    lengths = {p: lo for p, (lo, _) in w.edcs.weights.items()}
    lengths[(2, 4)] = 1.0
    k222 = _branch_values(Edcs.from_lengths(lengths, dim=3), (5, 6))
    ok = ok and len(k222) == 2 and k222[0] < k222[1] and k222 == pytest.approx(w.expected_values, abs=1e-9)
    ok = ok and min(k222) < 2.0
    report(6, "K5 and K222 witnesses by branch enumeration", ok, f"K5 {k5}, K222 {k222}")


def _second_point(plan, lengths, aux, dim, rng):
    for scale in (0.5, 0.25, 0.1, 0.05):
        for _ in range(20):
            trial = dict(lengths)
            for p in aux:
                trial[p] = lengths[p] * float(np.exp(rng.normal(0, scale)))
            try:
                construct(plan, trial, dim)
            except InfeasibleError:
                continue
            return {p: trial[p] for p in aux}
    return None


def test_7_squared_convexity(report):
    rng = np.random.default_rng(7)
    failures = systems = pairs = 0
    for dim in (2, 3):
        made = 0
        while made < 200:
            g = random_partial_k_tree(int(rng.integers(dim + 2, dim + 7)), dim, rng, drop=0.3)
            aux = complete_to_k_tree(g, dim)
            if not aux:
                continue
            made += 1
            systems += 1
            tree = g.add_edges(aux)
            plan = construction_plan(tree, dim)
            base = lengths_from(tree, random_points(tree, dim, rng))
            for _ in range(20):
                a = _second_point(plan, base, aux, dim, rng)
                b = _second_point(plan, base, aux, dim, rng)
                if a is None or b is None:
                    continue
                pairs += 1
                mid = dict(base)
                for p in aux:
                    mid[p] = math.sqrt((a[p] ** 2 + b[p] ** 2) / 2)
                try:
                    r = construct(plan, mid, dim)
                except InfeasibleError:
                    failures += 1
                    continue
                err = max(abs(r.distance(u, v) - mid[pair(u, v)]) for u, v in tree.edges)
                if err > 1e-6:
                    failures += 1
    report(7, "squared midpoints of realizable configurations realize", failures == 0 and pairs > 0,
           f"{systems} systems, {pairs} pairs, {failures} failures")


def _analyze_time(n, rng):
    g = random_k_tree(n, 2, rng)
    best = math.inf
    for _ in range(2):
        # timed like timeit: collector paused for the measured region
        gc.collect()
        gc.disable()
        try:
            start = time.perf_counter()
            assert is_partial_k_tree(g, 2)
            two_sum_decompose(g)
            laman_classify(g)
            best = min(best, time.perf_counter() - start)
        finally:
            gc.enable()
    return best


def test_8_recognition_scale(report):
    rng = np.random.default_rng(8)
    half = _analyze_time(50_000, rng)
    full = _analyze_time(100_000, rng)
    ratio = full / half
    report(8, "2-tree with 100000 vertices analyzed in near-linear time", full < 10.0 and ratio < 2.5,
           f"{full:.2f} s, doubling ratio {ratio:.2f}")


def test_9_example_sweep(report):
    two = Graph([1, 2, 3, 4], [(1, 2), (1, 3), (2, 3), (1, 4), (2, 4)])
    k4e = Graph([1, 2, 3, 4], [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4)])
    cases = {
        "P3": (path_graph(3), True),
        "K4-e": (k4e, False),
        "C4": (cycle_graph(4), True),
        "two triangles minus an edge": (two.remove_edges([(1, 3)]), True),
    }
    got = {name: admits_efficient_space(g)[0] is not None for name, (g, _) in cases.items()}
    ok = all(got[name] == want for name, (_, want) in cases.items())
    report(9, "admits verdicts on the example fixtures", ok, ", ".join(f"{k}: {v}" for k, v in got.items()))
