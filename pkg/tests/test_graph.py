import itertools

import networkx as nx
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from putwinners.core import Profile, generate_impartial_culture
from putwinners.graph import (
    NO_PATH,
    DiGraph,
    build_wmg,
    creates_cycle,
    induced_weight,
    scc_decompose,
    sources,
    tier_partition,
)

from conftest import A, B, C, D, random_profiles


@st.composite
def digraphs(draw, max_m=7, acyclic=False):
    m = draw(st.integers(1, max_m))
    pairs = [(a, b) for a in range(m) for b in range(m) if a != b]
    if acyclic:
        order = draw(st.permutations(range(m)))
        pos = {v: i for i, v in enumerate(order)}
        pairs = [(a, b) for a, b in pairs if pos[a] < pos[b]]
    edges = draw(st.sets(st.sampled_from(pairs))) if pairs else set()
    return DiGraph(m, frozenset(edges))


def to_nx(g):
    h = nx.DiGraph()
    h.add_nodes_from(range(g.m))
    h.add_edges_from(g.edges)
    return h


class TestWmg:
    def test_tie(self, tie_ab):
        w = build_wmg(tie_ab)
        assert (w.weight(A, B), w.weight(A, C), w.weight(B, C)) == (0, 2, 2)
        edges = w.nonnegative_edges()
        assert (A, B) in edges and (B, A) in edges

    def test_cycle(self, cycle3):
        w = build_wmg(cycle3)
        assert w.weight(A, B) == w.weight(B, C) == w.weight(C, A) == 1

    def test_single_vote(self):
        w = build_wmg(Profile.from_rankings([(A, B)]))
        assert w.weight(A, B) == 1 and w.weight(B, A) == -1

    def test_text(self):
        w = build_wmg(Profile.from_rankings([(A, B)]))
        assert w.to_text() == "0 1 1\n1 0 -1\n"

    def test_antisymmetric_and_bounded(self):
        for p in random_profiles(40, (1, 6), (0, 12), seed=3, complete=False):
            w = build_wmg(p).weights
            assert np.array_equal(w, -w.T)
            assert np.abs(w).max(initial=0) <= p.n
            assert w.sum() == 0

    def test_no_zero_edges_for_odd_n(self):
        for p in random_profiles(40, (2, 6), (1, 6), seed=4):
            if p.n % 2:
                w = build_wmg(p)
                assert all(w.weight(a, b) != 0 for a, b in w.nonnegative_edges())


class TestTiers:
    def test_grouping(self, tie_ab):
        tiers = tier_partition(build_wmg(tie_ab))
        assert tiers.weights == [2, 0]
        assert tiers[0].edges == ((A, C), (B, C))
        assert tiers[1].edges == ((A, B), (B, A))
        assert tiers.to_text() == "# tier 1 weight 2\n0 2 2\n1 2 2\n# tier 2 weight 0\n0 1 0\n1 0 0\n"

    def test_distinct_weights(self, transitive):
        tiers = tier_partition(build_wmg(transitive))
        assert len(tiers) == 6
        assert all(len(t.edges) == 1 for t in tiers)

    def test_empty_profile(self):
        tiers = tier_partition(build_wmg(Profile(3, ())))
        assert len(tiers) == 1 and tiers[0].weight == 0
        assert len(tiers[0].edges) == 6

    def test_partition_properties(self):
        for p in random_profiles(40, (1, 6), (0, 10), seed=5, complete=False):
            w = build_wmg(p)
            tiers = tier_partition(w)
            seen = [e for t in tiers for e in t.edges]
            assert sorted(seen) == sorted(w.nonnegative_edges())
            assert len(seen) == len(set(seen))
            assert all(w.weight(*e) == t.weight for t in tiers for e in t.edges)
            assert all(x > y for x, y in zip(tiers.weights, tiers.weights[1:]))
            assert all(list(t.edges) == sorted(t.edges) for t in tiers)


class TestCycle:
    def test_examples(self):
        g = DiGraph(3, {(A, B), (B, C)})
        assert creates_cycle(g, (C, A))
        assert not creates_cycle(g, (A, C))
        assert not creates_cycle(DiGraph(2), (A, B))

    def test_self_loop_rejected(self):
        with pytest.raises(ValueError):
            DiGraph(2, {(0, 0)})

    @given(digraphs(acyclic=True), st.data())
    def test_against_networkx(self, g, data):
        if g.m < 2:
            return
        u = data.draw(st.integers(0, g.m - 1))
        v = data.draw(st.integers(0, g.m - 1).filter(lambda x: x != u))
        h = to_nx(g)
        h.add_edge(u, v)
        assert creates_cycle(g, (u, v)) == (not nx.is_directed_acyclic_graph(h))


class TestScc:
    def test_two_components(self):
        a, b, c, d = range(4)
        g = DiGraph(4, {(a, b), (b, a), (c, d), (d, c), (b, c)})
        sccs, bridges = scc_decompose(g)
        assert sccs == [frozenset({a, b}), frozenset({c, d})]
        assert bridges == {(b, c)}

    def test_acyclic(self):
        g = DiGraph(3, {(A, B), (B, C), (A, C)})
        sccs, bridges = scc_decompose(g)
        assert sccs == [{A}, {B}, {C}]
        assert bridges == g.edges

    def test_full_cycle(self):
        sccs, bridges = scc_decompose(DiGraph(3, {(A, B), (B, C), (C, A)}))
        assert sccs == [{A, B, C}] and bridges == frozenset()

    @given(digraphs())
    def test_against_networkx(self, g):
        sccs, bridges = scc_decompose(g)
        assert sorted(map(sorted, sccs)) == sorted(map(sorted, nx.strongly_connected_components(to_nx(g))))
        comp = {v: i for i, c in enumerate(sccs) for v in c}
        assert bridges == {e for e in g.edges if comp[e[0]] != comp[e[1]]}
        # condensation is acyclic
        cond = nx.DiGraph([(comp[a], comp[b]) for a, b in bridges])
        assert nx.is_directed_acyclic_graph(cond)


class TestSources:
    def test_examples(self):
        assert sources(DiGraph(3, {(A, B), (B, C)})) == {A}
        assert sources(DiGraph(3)) == {A, B, C}
        assert sources(DiGraph(3, {(A, B), (C, B)})) == {A, C}

    @given(digraphs())
    def test_indegree_zero(self, g):
        h = to_nx(g)
        assert sources(g) == {v for v in h if h.in_degree(v) == 0}


def brute_iw(wmg, g, a, b):
    best = NO_PATH
    for path in nx.all_simple_paths(to_nx(g), a, b):
        val = min(wmg.weight(u, v) for u, v in zip(path, path[1:]))
        best = max(best, val) if best is not NO_PATH else val
    return best


class TestInducedWeight:
    def test_worked_example(self, example_two):
        # locked graph with D->C->A (3, 3), D->A (1), D->C->B->A (3, 1, 3)
        wmg = build_wmg(example_two)
        g = DiGraph(4, {(D, C), (C, A), (B, A), (C, B), (D, A)})
        assert induced_weight(wmg, g, D, A) == 3
        assert wmg.weight(A, D) == -1

    def test_no_path(self, cycle3):
        assert induced_weight(build_wmg(cycle3), DiGraph(3, {(A, B)}), B, A) is NO_PATH

    def test_single_edge(self):
        p = Profile.from_rankings([(A, B)] * 5)
        assert induced_weight(build_wmg(p), DiGraph(2, {(A, B)}), A, B) == 5

    def test_same_vertex(self, cycle3):
        with pytest.raises(ValueError):
            induced_weight(build_wmg(cycle3), DiGraph(3), A, A)

    def test_sentinel_order(self):
        assert NO_PATH < -10**9 and not NO_PATH >= -10**9
        assert NO_PATH == NO_PATH

    def test_against_path_enumeration(self):
        rnd = np.random.default_rng(11)
        for seed in range(30):
            p = generate_impartial_culture(5, 7, seed)
            wmg = build_wmg(p)
            edges = [e for e in wmg.nonnegative_edges() if rnd.random() < 0.6]
            g = DiGraph(5, edges)
            for a, b in itertools.permutations(range(5), 2):
                iw = induced_weight(wmg, g, a, b)
                assert iw == brute_iw(wmg, g, a, b)
                if (a, b) in g.edges:
                    assert iw >= wmg.weight(a, b)
