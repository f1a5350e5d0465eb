from __future__ import annotations

import math
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from bergekit.berge import berge_girth, contains_berge, verify_witness
from bergekit.constructions import girth5_greedy, triple_blowup
from bergekit.core import Hypergraph, PatternFamily, contains_kst
from bergekit.embeddings import (
    InvalidViolation,
    embed_c4_matchings,
    embed_matchings,
    embed_triangles_and_edges,
    embed_unique_edges,
    extract_witness,
    lift_rainbow_to_berge,
    matching_threshold,
    run_procedure,
)

from conftest import hypergraphs

C4 = PatternFamily.cycle(4)


def H(*hs, n=None):
    n = n if n is not None else max((v for h in hs for v in h), default=-1) + 1
    return Hypergraph(n, tuple(hs))


def assert_well_formed(host, out):
    seen = set()
    for h, s in zip(host.hyperedges, out.per_hyperedge):
        assert all(u in h and v in h for u, v in s)
        assert seen.isdisjoint(s)
        seen |= s
    assert out.shadow.edges == frozenset(seen)
    assert out.shadow.num_edges == sum(out.counts)


# -- unique edges ------------------------------------------------------------

def test_unique_two_copies():
    out = embed_unique_edges(H((1, 2, 3), (1, 2, 3)))
    assert out.ok and out.per_hyperedge == (frozenset({(1, 2)}), frozenset({(1, 3)}))


def test_unique_four_copies_saturate():
    host = H((1, 2, 3), (1, 2, 3), (1, 2, 3), (1, 2, 3))
    out = embed_unique_edges(host)
    assert out.violation.hyperedge_index == 3
    assert out.violation.saturated == (1, 2, 3)
    w = extract_witness(host, out.violation, PatternFamily.complete(3))
    assert verify_witness(host, PatternFamily.complete(3), w)


def test_unique_empty_and_precondition():
    assert embed_unique_edges(Hypergraph(3, ())).shadow.num_edges == 0
    with pytest.raises(ValueError):
        embed_unique_edges(H((0,), (0, 1)))


# -- matchings ---------------------------------------------------------------

def test_thresholds():
    assert matching_threshold(PatternFamily.complete(2)) == 8
    assert matching_threshold(PatternFamily.complete(3)) == 27
    assert matching_threshold(PatternFamily.biclique(2, 2)) == 2 + 2 + 2
    assert matching_threshold(PatternFamily.biclique(2, 3)) == 2 + 4 + 3
    with pytest.raises(ValueError):
        matching_threshold(C4)


def test_matching_single_hyperedge():
    out = embed_matchings(H(tuple(range(10))), PatternFamily.complete(2))
    assert out.ok and out.counts == [5]


def test_matching_two_nines():
    out = embed_matchings(H(tuple(range(9)), tuple(range(9))), PatternFamily.complete(2))
    assert out.ok and out.counts == [4, 4]
    assert out.per_hyperedge[0].isdisjoint(out.per_hyperedge[1])


def test_matching_empty_and_small_skipped():
    assert embed_matchings(Hypergraph(0, ()), PatternFamily.complete(2)).ok
    out = embed_matchings(H((0, 1, 2)), PatternFamily.complete(2))
    assert out.ok and out.counts == [0]


@pytest.mark.parametrize("P,size,copies", [
    (PatternFamily.complete(2), 10, 20),
    (PatternFamily.complete(3), 28, 40),
    (PatternFamily.biclique(2, 2), 8, 20),
])
def test_matching_violation_extracts(P, size, copies):
    host = Hypergraph(size, tuple(tuple(range(size)) for _ in range(copies)))
    out = embed_matchings(host, P)
    assert not out.ok
    v = out.violation
    assert len(v.saturated) > matching_threshold(P)
    assert all(e in v.color_map for e in combinations(v.saturated, 2))
    w = extract_witness(host, v, P)
    assert verify_witness(host, P, w)


# -- C4 matchings -----------------------------------------------------------

def test_c4_examples():
    assert embed_c4_matchings(H((1, 2, 3, 4, 5))).counts == [1]
    out = embed_c4_matchings(H((1, 2, 3, 4), (1, 2, 3, 4)))
    assert out.counts == [1, 1] and out.per_hyperedge[0].isdisjoint(out.per_hyperedge[1])
    assert embed_c4_matchings(H((1, 2, 3))).counts == [0]


def test_c4_violation_gives_verified_c4():
    host = Hypergraph(4, tuple((0, 1, 2, 3) for _ in range(7)))
    out = embed_c4_matchings(host)
    assert out.violation is not None and out.violation.hyperedge_index == 6
    w = extract_witness(host, out.violation, C4)
    assert verify_witness(host, C4, w)


# -- triangles and edges -----------------------------------------------------

def test_triangle_examples():
    assert embed_triangles_and_edges(H((1, 2, 3, 4))).counts == [1]
    out = embed_triangles_and_edges(H((1, 2, 3, 4, 5)))
    (a, b), (c, d) = sorted(out.per_hyperedge[0])
    assert len({a, b, c, d}) == 4
    out = embed_triangles_and_edges(H(tuple(range(1, 8))))
    edges = sorted(out.per_hyperedge[0])
    assert len(edges) == 4
    assert edges[:3] == [(1, 2), (1, 3), (2, 3)]
    assert set(edges[3]).isdisjoint({1, 2, 3})


def _components_ok(edges):
    """Vertex-disjoint triangles plus at most three independent edges."""
    deg = {}
    for u, v in edges:
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
    singles = [e for e in edges if deg[e[0]] == 1 and deg[e[1]] == 1]
    tri = [e for e in edges if e not in singles]
    verts = {v for e in tri for v in e}
    return len(singles) <= 3 and all(deg[v] == 2 for v in verts) and len(tri) == len(verts)


@pytest.mark.parametrize("size", range(4, 16))
def test_triangle_shape_on_fresh_hyperedge(size):
    out = embed_triangles_and_edges(H(tuple(range(size))))
    assert out.counts == [size - 3]
    assert _components_ok(out.per_hyperedge[0])


def test_triangle_violation_is_overfull_quad():
    host = Hypergraph(4, tuple((0, 1, 2, 3) for _ in range(6)))
    out = embed_triangles_and_edges(host)
    assert out.violation is not None
    assert len(out.violation.color_map) >= 5
    w = extract_witness(host, out.violation, C4)
    assert verify_witness(host, C4, w)


# -- fuzz: disjointness, counts, soundness -----------------------------------

@given(hypergraphs(max_n=8, max_edges=8, min_size=2, max_size=7), st.sampled_from(["unique", "c4", "triangle"]),
       st.one_of(st.none(), st.integers(0, 10 ** 6)))
def test_disjoint_and_counts(host, proc, seed):
    out = run_procedure(proc, host, shuffle_seed=seed)
    permuted = host.subfamily(out.order)
    assert_well_formed(permuted, out)
    if out.ok:
        sizes = [len(h) for h in permuted.hyperedges]
        expected = {
            "unique": [1] * len(sizes),
            "c4": [math.ceil((s - 3) / 2) if s >= 4 else 0 for s in sizes],
            "triangle": [s - 3 if s >= 4 else 0 for s in sizes],
        }[proc]
        assert out.counts == expected
    else:
        P = C4 if proc != "unique" else None
        if P is not None:
            assert verify_witness(permuted, P, extract_witness(permuted, out.violation, P))


@given(hypergraphs(max_n=7, max_edges=7, min_size=4, max_size=7))
def test_c4_free_inputs_never_violate(host):
    if contains_berge(host, C4) is None:
        assert embed_c4_matchings(host).ok
        assert embed_triangles_and_edges(host).ok


def test_violation_not_certifying_is_rejected():
    host = H((0, 1, 2, 3), (4, 5, 6, 7))
    out = embed_c4_matchings(Hypergraph(4, tuple((0, 1, 2, 3) for _ in range(7))))
    with pytest.raises(InvalidViolation):
        extract_witness(host, out.violation, PatternFamily.complete(4))


# -- lifting ----------------------------------------------------------------

def test_lift_rainbow_triangle():
    host = Hypergraph(4, tuple((0, 1, 2) if i in (2, 5, 7) else (3,) for i in range(8)))
    w = lift_rainbow_to_berge(host, [(0, 1, 2), (0, 2, 5), (1, 2, 7)])
    assert sorted(w.hyperedge_indices) == [2, 5, 7]
    assert verify_witness(host, PatternFamily.complete(3), w)


def test_lift_rejects_bad_input():
    host = H((0, 1, 2), (0, 1, 2))
    with pytest.raises(InvalidViolation):
        lift_rainbow_to_berge(host, [(0, 1, 0), (1, 2, 0)])
    with pytest.raises(InvalidViolation):
        lift_rainbow_to_berge(H((0, 1), (2, 3)), [(0, 2, 0)])


# -- inherited freeness on constructions -------------------------------------

@pytest.mark.parametrize("n,seed", [(7, 0), (9, 1), (12, 2), (15, 3)])
def test_shadows_of_c4_free_constructions(n, seed):
    G3 = girth5_greedy(n, seed=seed)
    for host in (G3, triple_blowup(G3)):
        assert berge_girth(G3, 4).at_least(5)
        c4 = embed_c4_matchings(host)
        tri = embed_triangles_and_edges(host)
        assert c4.ok and tri.ok
        assert contains_kst(c4.shadow, 2, 4) is None
        assert contains_kst(tri.shadow, 2, 7) is None
