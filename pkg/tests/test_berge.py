from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from bergekit.berge import (
    BergeWitness,
    GuardExceeded,
    berge_girth,
    contains_berge,
    is_linear,
    naive_contains_berge,
    verify_witness,
)
from bergekit.core import Hypergraph, PatternFamily

from conftest import hypergraphs, small_host_family

K2, K3 = PatternFamily.complete(2), PatternFamily.complete(3)
C2, C3, C4 = PatternFamily.cycle(2), PatternFamily.cycle(3), PatternFamily.cycle(4)

SMALL_PATTERNS = [
    PatternFamily.parse(s) for s in ("K2", "K3", "K4", "C2", "C3", "C4", "C5", "P3", "P4", "P5", "K1,2", "K1,3", "K2,2", "K2,3")
]


def H(*hs, n=7):
    return Hypergraph(n, tuple(hs))


def test_single_edge_witness():
    w = contains_berge(H((1, 2, 3)), K2)
    assert w == BergeWitness({0: 1, 1: 2}, ((0, 1, 0),))


def test_no_triangle_in_three_hyperedges_through_a_pair():
    assert contains_berge(H((1, 2, 3), (1, 2, 4), (1, 2, 5)), K3) is None


def test_triangle_on_odd_vertices():
    host = H((1, 2, 3), (3, 4, 5), (5, 6, 1))
    w = contains_berge(host, C3)
    assert w is not None and verify_witness(host, C3, w)
    assert sorted(w.vertex_map.values()) == [1, 3, 5]


def test_c2_pair():
    w = contains_berge(H((1, 2, 3), (1, 2, 4)), C2)
    assert sorted(w.hyperedge_indices) == [0, 1]
    assert verify_witness(H((1, 2, 3), (1, 2, 4)), C2, w)


def test_verify_witness_reasons():
    host = H((1, 2, 3), (4, 5))
    w = contains_berge(host, K2)
    assert verify_witness(host, K2, w)
    moved = BergeWitness(w.vertex_map, ((0, 1, 1),))
    assert verify_witness(host, K2, moved).reason == "endpoint not covered"
    P3 = PatternFamily.path(3)
    shared = BergeWitness({0: 1, 1: 2, 2: 3}, ((0, 1, 0), (1, 2, 0)))
    assert verify_witness(host, P3, shared).reason == "assignment not injective"
    clash = BergeWitness({0: 1, 1: 1}, ((0, 1, 0),))
    assert verify_witness(host, K2, clash).reason == "vertex map not injective"
    wrong = BergeWitness({0: 1, 1: 2}, ((0, 1, 0), (0, 1, 0)))
    assert verify_witness(host, K2, wrong).reason == "edges do not match pattern"
    far = BergeWitness({0: 1, 1: 2}, ((0, 1, 9),))
    assert verify_witness(host, K2, far).reason == "hyperedge index out of range"


def test_witness_json_round_trip():
    w = contains_berge(H((1, 2, 3), (3, 4, 5), (5, 6, 1)), C3)
    assert BergeWitness.from_json(w.to_json()) == w


def test_girth_examples():
    assert berge_girth(H((1, 2, 3), (1, 2, 4)), 5).girth == 2
    rep = berge_girth(H((1, 2, 3), (3, 4, 5), (5, 6, 1)), 5)
    assert rep.girth == 3 and verify_witness(H((1, 2, 3), (3, 4, 5), (5, 6, 1)), C3, rep.witness)
    rep = berge_girth(H((1, 2, 3), (1, 4, 5)), 5)
    assert rep.girth is None and rep.describe() == "at least 6"
    with pytest.raises(ValueError):
        berge_girth(H((1, 2),), 1)


def test_linear_examples():
    assert is_linear(H((1, 2, 3), (3, 4, 5)))
    assert not is_linear(H((1, 2, 3), (1, 2, 4)))
    assert not is_linear(H((1, 2, 3), (1, 2, 3)))


def test_guard_refusal_names_flag():
    with pytest.raises(GuardExceeded, match="--max-pattern-vertices"):
        contains_berge(H((1, 2),), PatternFamily.complete(9))
    assert contains_berge(H((1, 2),), PatternFamily.complete(9), guard=9) is None


def test_isolated_host_vertices_are_fine():
    assert contains_berge(Hypergraph(20, ((18, 19),)), K2) is not None


@given(hypergraphs(max_n=7, max_edges=7, max_size=5), st.sampled_from(SMALL_PATTERNS))
def test_soundness(host, P):
    w = contains_berge(host, P)
    if w is not None:
        assert verify_witness(host, P, w)


@given(hypergraphs(max_n=5, max_edges=5, min_size=2, max_size=4), st.sampled_from(SMALL_PATTERNS[:10]))
def test_agrees_with_naive(host, P):
    assert (contains_berge(host, P) is not None) == naive_contains_berge(host, P)


@given(hypergraphs(max_n=7, max_edges=6, max_size=5), st.sampled_from(SMALL_PATTERNS), st.data())
def test_monotone_under_adding_hyperedges(host, P, data):
    w = contains_berge(host, P)
    if w is None:
        return
    k = data.draw(st.integers(1, host.n))
    extra = tuple(sorted(data.draw(st.lists(st.integers(0, host.n - 1), min_size=k, max_size=k, unique=True))))
    assert verify_witness(host.with_hyperedge(extra), P, w)
    assert contains_berge(host.with_hyperedge(extra), P) is not None


@given(hypergraphs(max_n=8, max_edges=8, min_size=2, max_size=4))
def test_girth_five_implies_c2_c3_c4_free(host):
    if berge_girth(host, 4).at_least(5):
        assert is_linear(host)
        assert contains_berge(host, C3) is None and contains_berge(host, C4) is None


def test_exhaustive_equivalence_n4():
    patterns = [PatternFamily.parse(s) for s in ("K2", "K3", "C2", "C3", "C4", "P3", "P4", "K1,2")]
    bad = [
        (host, P.name)
        for host in small_host_family(4, 3, (2, 4))
        for P in patterns
        if (contains_berge(host, P) is not None) != naive_contains_berge(host, P)
    ]
    assert bad == []


def test_workers_do_not_change_witness():
    rng = random.Random(7)
    for _ in range(4):
        n = 9
        host = Hypergraph(n, tuple(tuple(sorted(rng.sample(range(n), rng.randint(2, 4)))) for _ in range(9)))
        for P in (C3, C4, PatternFamily.path(4)):
            assert contains_berge(host, P, workers=1) == contains_berge(host, P, workers=3)
