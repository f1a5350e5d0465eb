from __future__ import annotations

import math
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from bergekit.berge import berge_girth, contains_berge
from bergekit.constructions import (
    PreconditionError,
    _closes_short_cycle,
    _closes_short_cycle_linear,
    bipartite_half,
    blowup_kr,
    blowup_kst,
    blowup_structure_ok,
    c4_free_incidence_graph,
    freeness_certificate,
    girth5_greedy,
    star_free_construction,
    triple_blowup,
    turan_graph,
)
from bergekit.core import Graph, Hypergraph, PatternFamily, count_report, find_subgraph

K3, K22, C4 = PatternFamily.complete(3), PatternFamily.biclique(2, 2), PatternFamily.cycle(4)


def part_sizes(G):
    comp = []
    seen = set()
    for v in range(G.n):
        if v in seen:
            continue
        part = {v} | {u for u in range(G.n) if u != v and not G.has_edge(u, v)}
        seen |= part
        comp.append(len(part))
    return sorted(comp, reverse=True)


def test_turan_examples():
    assert turan_graph(6, 2).num_edges == 9 and part_sizes(turan_graph(6, 2)) == [3, 3]
    assert turan_graph(7, 3).num_edges == 16 and part_sizes(turan_graph(7, 3)) == [3, 2, 2]
    assert turan_graph(4, 4).num_edges == 6
    with pytest.raises(ValueError):
        turan_graph(3, 4)


@pytest.mark.parametrize("n,p", [(5, 2), (7, 3), (9, 4)])
def test_turan_is_clique_free(n, p):
    assert find_subgraph(turan_graph(n, p), PatternFamily.complete(p + 1).realize()) is None


def test_bipartite_half_examples():
    C6 = PatternFamily.cycle(6).realize()
    assert bipartite_half(C6)[2].num_edges == 6
    assert bipartite_half(PatternFamily.complete(3).realize())[2].num_edges == 2
    assert bipartite_half(PatternFamily.cycle(5).realize())[2].num_edges == 4


@given(st.integers(2, 9).flatmap(lambda n: st.tuples(st.just(n), st.sets(st.sampled_from(list(combinations(range(n), 2)))))))
def test_bipartite_half_keeps_half(data):
    n, edges = data
    G = Graph(n, frozenset(edges))
    A, B, cross = bipartite_half(G)
    assert sorted(A + B) == list(range(n))
    assert cross.num_edges >= math.ceil(G.num_edges / 2)
    assert all((u in A) != (v in A) for u, v in cross.edges)


def test_blowup_kr_examples():
    H = blowup_kr(6, 3)
    assert (H.n, len(H)) == (9, 9) and H.is_uniform(3)
    assert contains_berge(H, K3) is None
    H4 = blowup_kr(4, 3)
    assert (H4.n, len(H4)) == (6, 4)
    assert count_report(H).degree_sum == 3 * len(H)


@pytest.mark.parametrize("n,r", [(6, 3), (7, 3), (8, 3), (6, 4), (8, 4), (10, 5)])
def test_blowup_kr_structure_and_freeness(n, r):
    A, B, cross = bipartite_half(turan_graph(n, r - 1))
    H = blowup_kr(n, r)
    assert H.n == (r - 1) * len(A) + len(B) and len(H) == cross.num_edges
    assert blowup_structure_ok(H, r - 1, len(A))
    assert contains_berge(H, PatternFamily.complete(r)) is None


def test_blowup_kst_examples():
    H = blowup_kst(PatternFamily.cycle(5).realize(), 2, 2)
    assert len(H) == 4 and H.is_uniform(4)
    assert contains_berge(H, K22) is None
    F = blowup_kst(c4_free_incidence_graph(2), 2, 2)
    assert len(F) == 21 and F.is_uniform(4) and F.n <= 35
    assert contains_berge(F, C4) is None
    assert len(blowup_kst(Graph(4, frozenset()), 2, 2)) == 0


def test_blowup_kst_precondition():
    with pytest.raises(PreconditionError, match="contains K_"):
        blowup_kst(PatternFamily.cycle(4).realize(), 2, 2)
    with pytest.raises(ValueError):
        blowup_kst(PatternFamily.cycle(5).realize(), 1, 2)


def test_blowup_kst_k23_free():
    G = c4_free_incidence_graph(2)
    H = blowup_kst(G, 2, 3)
    assert H.is_uniform(5) and contains_berge(H, PatternFamily.biclique(2, 3)) is None


def test_star_free_examples():
    H = star_free_construction(8, 3)
    assert len(H) == 4 and max(H.degree(v) for v in range(8)) == 2
    assert contains_berge(H, PatternFamily.biclique(1, 3)) is None
    assert len(star_free_construction(4, 3)) == 2
    H7 = star_free_construction(7, 3)
    assert len(H7) == 2 and [H7.degree(v) for v in range(4, 7)] == [0, 0, 0]
    with pytest.raises(ValueError):
        star_free_construction(3, 3)


@pytest.mark.parametrize("n,t", [(4, 3), (9, 2), (12, 4), (20, 5)])
def test_star_free_max_degree(n, t):
    H = star_free_construction(n, t)
    assert max(H.degree(v) for v in range(n)) == t - 1
    assert len(H) == (t - 1) * (n // (1 + t))


@pytest.mark.parametrize("q", [2, 3, 5])
def test_incidence_graph(q):
    G = c4_free_incidence_graph(q)
    N = q * q + q + 1
    assert G.n == 2 * N and G.num_edges == (q + 1) * N
    assert all((G.adj[u] & G.adj[v]).bit_count() <= 1 for u, v in combinations(range(G.n), 2))
    assert find_subgraph(G, C4.realize()) is None


def test_incidence_rejects_composite():
    with pytest.raises(ValueError):
        c4_free_incidence_graph(4)


def test_girth5_examples():
    assert len(girth5_greedy(3)) == 1
    for n in (5, 7, 9, 13):
        H = girth5_greedy(n, seed=4, trials=3)
        assert H.is_uniform(3) and berge_girth(H, 4).at_least(5)
    assert girth5_greedy(13, seed=2, trials=2) == girth5_greedy(13, seed=2, trials=2)


def test_girth5_two_edge_family_reachable():
    found = {girth5_greedy(5, seed=s).hyperedges for s in range(30)}
    assert any(len(hs) == 2 for hs in found)


def test_girth5_workers_deterministic():
    assert girth5_greedy(15, seed=9, trials=4, workers=1) == girth5_greedy(15, seed=9, trials=4, workers=3)


@given(st.integers(4, 12), st.integers(0, 10 ** 6))
def test_linear_short_cycle_check_matches_generic(n, seed):
    import numpy as np

    rng = np.random.default_rng(seed)
    triples = list(combinations(range(n), 3))
    inc = [set() for _ in range(n)]
    adj = [0] * n
    hyper = []
    for k in rng.permutation(len(triples)):
        T = triples[k]
        slow = _closes_short_cycle(inc, hyper, T)
        assert slow == _closes_short_cycle_linear(adj, T)
        if slow:
            continue
        for v in T:
            inc[v].add(len(hyper))
        hyper.append(T)
        for x, y in combinations(T, 2):
            adj[x] |= 1 << y
            adj[y] |= 1 << x


def test_triple_blowup_examples():
    T = triple_blowup(Hypergraph(3, ((0, 1, 2),)))
    assert T.hyperedges == (tuple(range(9)),) and count_report(T).deficiency_sum == 6
    T2 = triple_blowup(Hypergraph(6, ((0, 1, 2), (3, 4, 5))))
    assert count_report(T2).deficiency_sum == 12 and contains_berge(T2, C4) is None


def test_triple_blowup_precondition():
    with pytest.raises(PreconditionError, match="Berge-C2"):
        triple_blowup(Hypergraph(4, ((0, 1, 2), (0, 1, 3))))
    with pytest.raises(PreconditionError):
        triple_blowup(Hypergraph(4, ((0, 1),)))


@pytest.mark.parametrize("n,seed", [(6, 0), (9, 1), (12, 2)])
def test_triple_blowup_of_greedy(n, seed):
    G3 = girth5_greedy(n, seed=seed, trials=2)
    T = triple_blowup(G3)
    assert T.n == 3 * n and len(T) == len(G3) and T.is_uniform(9)
    assert count_report(T).deficiency_sum == 6 * len(G3)
    assert contains_berge(T, C4) is None


def test_certificates():
    H = blowup_kr(6, 3)
    c = freeness_certificate(H, K3, "Berge-K3-free")
    assert c.passed and "exhaustive" in c.check_performed
    c = freeness_certificate(H, K3, "Berge-K3-free", host_guard=4)
    assert not c.passed and c.check_performed.startswith("none")
    c = freeness_certificate(H, K3, "Berge-K3-free", host_guard=4, structural=("blow-up structure", True))
    assert c.passed and c.check_performed.startswith("structural")
    bad = freeness_certificate(Hypergraph(3, ((0, 1, 2),) * 3), K3, "Berge-K3-free")
    assert not bad.passed
    assert set(c.to_json()) == {"claimed_property", "check_performed", "passed"}
