"""Greedy shadow-graph embeddings.

Each procedure walks the hyperedges in list order and places previously
unused vertex pairs inside each hyperedge.  Pairs are tried in
lexicographic order of the hyperedge's sorted vertex list, so runs are
reproducible.  When a hyperedge cannot receive what the procedure
promises, the run stops and reports a :class:`Violation`: the set of
vertices whose pairs are all (or too densely) used, coloured by the
hyperedge that used each pair.  :func:`extract_witness` turns such a
report into a Berge witness.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Sequence

from .berge import BergeWitness, contains_berge, verify_witness
from .core import Edge, Graph, Hypergraph, PatternFamily, norm_edge, require_valid
from .ramsey import EdgeColoring, find_rainbow_biclique, find_rainbow_clique


class InvalidViolation(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    hyperedge_index: int
    saturated: tuple[int, ...]
    color_map: dict[Edge, int]
    reason: str = ""

    def to_json(self) -> dict[str, Any]:
        return {
            "hyperedge_index": self.hyperedge_index,
            "saturated_vertex_set": list(self.saturated),
            "color_map": [[u, v, c] for (u, v), c in sorted(self.color_map.items())],
            "reason": self.reason,
        }


@dataclass(frozen=True)
class EmbeddingOutcome:
    shadow: Graph
    per_hyperedge: tuple[frozenset[Edge], ...]
    violation: Violation | None = None
    order: tuple[int, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return self.violation is None

    @property
    def counts(self) -> list[int]:
        return [len(s) for s in self.per_hyperedge]

    def summary(self) -> dict[str, Any]:
        return {
            "edges_embedded": self.shadow.num_edges,
            "per_hyperedge_counts": self.counts,
            "violation": None if self.violation is None else self.violation.to_json(),
        }


class _Run:
    """Single-owner used-pair state for one embedding pass."""

    def __init__(self, H: Hypergraph):
        self.H = H
        self.owner: dict[Edge, int] = {}
        self.per: list[frozenset[Edge]] = [frozenset()] * len(H)

    def free(self, u: int, v: int) -> bool:
        return (u, v) not in self.owner

    def take(self, i: int, edges: Sequence[Edge]) -> None:
        for e in edges:
            assert e not in self.owner
            self.owner[e] = i
        self.per[i] = self.per[i] | frozenset(edges)

    def colors(self, vertices: Sequence[int]) -> dict[Edge, int]:
        return {e: self.owner[e] for e in combinations(sorted(vertices), 2) if e in self.owner}

    def outcome(self, violation: Violation | None = None) -> EmbeddingOutcome:
        edges = frozenset(self.owner)
        return EmbeddingOutcome(Graph(self.H.n, edges), tuple(self.per), violation)


def _free_pairs(run: _Run, verts: Sequence[int]) -> list[Edge]:
    return [e for e in combinations(verts, 2) if run.free(*e)]


def _greedy_matching(run: _Run, verts: Sequence[int]) -> list[Edge]:
    taken: set[int] = set()
    out = []
    for u, v in combinations(verts, 2):
        if u not in taken and v not in taken and run.free(u, v):
            out.append((u, v))
            taken.update((u, v))
    return out


def embed_unique_edges(H: Hypergraph) -> EmbeddingOutcome:
    """One previously unused pair per hyperedge."""
    require_valid(H)
    small = [i for i, h in enumerate(H.hyperedges) if len(h) < 2]
    if small:
        raise ValueError(f"hyperedge {small[0]} has fewer than 2 vertices")
    run = _Run(H)
    for i, h in enumerate(H.hyperedges):
        pairs = _free_pairs(run, h)
        if not pairs:
            return run.outcome(Violation(i, h, run.colors(h), "all pairs of the hyperedge are used"))
        run.take(i, [pairs[0]])
    return run.outcome()


def matching_threshold(P: PatternFamily) -> int:
    if P.kind == "complete":
        return P.params[0] ** 3
    if P.kind == "biclique":
        s, t = P.params
        return s + s * (s - 1) * (t - 1) + t
    raise ValueError(f"matching embedding supports K_r and K_(s,t), not {P.name}")


def embed_matchings(H: Hypergraph, P: PatternFamily) -> EmbeddingOutcome:
    """Greedy maximal matching of unused pairs in every hyperedge of size at
    least the threshold ``T`` (``r**3`` for K_r, ``s+s(s-1)(t-1)+t`` for
    K_{s,t}); smaller hyperedges get nothing.

    If a matching falls below ``(|h|-T)/2`` the unmatched vertices (more
    than ``T`` of them, all pairs used) are reported.
    """
    require_valid(H)
    T = matching_threshold(P)
    run = _Run(H)
    for i, h in enumerate(H.hyperedges):
        if len(h) < T:
            continue
        m = _greedy_matching(run, h)
        if 2 * len(m) < len(h) - T:
            matched = {v for e in m for v in e}
            rest = tuple(v for v in h if v not in matched)
            return run.outcome(Violation(i, rest, run.colors(rest), f"matching of size {len(m)} below (|h|-{T})/2"))
        run.take(i, m)
    return run.outcome()


def _four_set_overfull(run: _Run, verts: Sequence[int]) -> tuple[int, ...] | None:
    for q in combinations(verts, 4):
        if sum(1 for e in combinations(q, 2) if not run.free(*e)) >= 5:
            return q
    return None


def embed_c4_matchings(H: Hypergraph) -> EmbeddingOutcome:
    """``ceil((|h|-3)/2)`` independent unused pairs per hyperedge of size >= 4.

    Pairs are added until fewer than four vertices of ``h`` are untouched;
    four untouched vertices with all six pairs used are reported.
    """
    require_valid(H)
    run = _Run(H)
    for i, h in enumerate(H.hyperedges):
        if len(h) < 4:
            continue
        untouched = list(h)
        chosen: list[Edge] = []
        while len(untouched) >= 4:
            pairs = _free_pairs(run, untouched)
            if not pairs:
                quad = tuple(untouched[:4])
                return run.outcome(Violation(i, quad, run.colors(quad), "all six pairs of four untouched vertices used"))
            u, v = pairs[0]
            chosen.append((u, v))
            untouched.remove(u)
            untouched.remove(v)
            run.take(i, [(u, v)])
        assert len(chosen) == math.ceil((len(h) - 3) / 2)
    return run.outcome()


def _first_triangle(run: _Run, verts: Sequence[int]) -> list[Edge] | None:
    for a, b, c in combinations(verts, 3):
        if run.free(a, b) and run.free(a, c) and run.free(b, c):
            return [(a, b), (a, c), (b, c)]
    return None


def _first_matching(run: _Run, verts: Sequence[int], k: int) -> list[Edge] | None:
    pairs = _free_pairs(run, verts)

    def grow(start: int, used: set[int], acc: list[Edge]) -> list[Edge] | None:
        if len(acc) == k:
            return list(acc)
        for j in range(start, len(pairs)):
            u, v = pairs[j]
            if u in used or v in used:
                continue
            acc.append((u, v))
            found = grow(j + 1, used | {u, v}, acc)
            if found:
                return found
            acc.pop()
        return None

    return grow(0, set(), [])


def embed_triangles_and_edges(H: Hypergraph) -> EmbeddingOutcome:
    """``|h|-3`` unused pairs per hyperedge of size >= 4, forming disjoint
    triangles plus at most three independent edges.

    Untouched vertex count k: 4 gives one edge, 5 a 2-matching, 6 a
    triangle (preferred) or a 3-matching, 7 or more a triangle and then
    the remaining k-3 vertices are handled the same way.  Before a
    hyperedge is processed no four of its vertices may already carry five
    used pairs; such a four-set is reported.
    """
    require_valid(H)
    run = _Run(H)
    for i, h in enumerate(H.hyperedges):
        if len(h) < 4:
            continue
        quad = _four_set_overfull(run, h)
        if quad is not None:
            return run.outcome(Violation(i, quad, run.colors(quad), "four vertices already carry five used pairs"))
        rest = list(h)
        while len(rest) >= 4:
            k = len(rest)
            if k == 4:
                step = _free_pairs(run, rest)[:1] or None
            elif k == 5:
                step = _first_matching(run, rest, 2)
            elif k == 6:
                step = _first_triangle(run, rest) or _first_matching(run, rest, 3)
            else:
                step = _first_triangle(run, rest)
            if step is None:
                return run.outcome(Violation(i, tuple(rest), run.colors(rest), f"no admissible step on {k} untouched vertices"))
            run.take(i, step)
            touched = {v for e in step for v in e}
            rest = [v for v in rest if v not in touched]
            if k <= 6:
                break
        assert len(run.per[i]) == len(h) - 3
    return run.outcome()


PROCEDURES = {
    "unique": lambda H, P=None: embed_unique_edges(H),
    "matching": lambda H, P=None: embed_matchings(H, P),
    "c4": lambda H, P=None: embed_c4_matchings(H),
    "triangle": lambda H, P=None: embed_triangles_and_edges(H),
}


def run_procedure(
    proc: str, H: Hypergraph, P: PatternFamily | None = None, shuffle_seed: int | None = None
) -> EmbeddingOutcome:
    """Run a procedure, optionally on a seeded permutation of the hyperedges.

    Indices in the returned outcome refer to the permuted order, which is
    recorded in ``outcome.order``.
    """
    order = list(range(len(H)))
    if shuffle_seed is not None:
        random.Random(shuffle_seed).shuffle(order)
    Hp = H.subfamily(order)
    out = PROCEDURES[proc](Hp, P)
    return EmbeddingOutcome(out.shadow, out.per_hyperedge, out.violation, tuple(order))


# ---------------------------------------------------------------------------
# Witness extraction
# ---------------------------------------------------------------------------

def lift_rainbow_to_berge(
    H: Hypergraph, rainbow: Sequence[tuple[int, int, int]], violation: Violation | None = None
) -> BergeWitness:
    """Turn coloured edges ``(u, v, hyperedge_index)`` with distinct colours
    into a witness for the graph they form.  Pattern vertices are the host
    vertices renumbered in ascending order."""
    cols = [c for _, _, c in rainbow]
    if len(set(cols)) != len(cols):
        raise InvalidViolation("colour repeated in rainbow subgraph")
    for u, v, c in rainbow:
        if not 0 <= c < len(H) or u not in H.hyperedges[c] or v not in H.hyperedges[c]:
            raise InvalidViolation(f"edge ({u}, {v}) is not inside hyperedge {c}")
        if violation is not None and c != violation.hyperedge_index and violation.color_map.get((min(u, v), max(u, v))) != c:
            raise InvalidViolation(f"edge ({u}, {v}) colour {c} disagrees with the violation")
    hosts = sorted({x for u, v, _ in rainbow for x in (u, v)})
    rank = {x: i for i, x in enumerate(hosts)}
    return BergeWitness(
        {i: x for i, x in enumerate(hosts)},
        tuple((min(rank[u], rank[v]), max(rank[u], rank[v]), c) for u, v, c in rainbow),
    )


def extract_witness(H: Hypergraph, violation: Violation, P: PatternFamily) -> BergeWitness:
    """Berge copy of ``P`` certified by a violation of a run on ``H``.

    When the saturated set is fully and properly coloured, complete
    patterns come from the rainbow-clique finder and bicliques from the
    rainbow-biclique finder.  Otherwise (the four-vertex C4
    configurations, or a colouring that is not rainbow enough) the copy is
    searched among the hyperedges in the colour map plus the violating one.
    """
    sat = sorted(violation.saturated)
    cmap = violation.color_map
    if P.kind in ("complete", "biclique") and all(e in cmap for e in combinations(sat, 2)):
        rank = {x: i for i, x in enumerate(sat)}
        col = {(rank[u], rank[v]): c for (u, v), c in cmap.items() if u in rank and v in rank}
        coloring = EdgeColoring(Graph(len(sat), frozenset(col)), col)
        if coloring.is_proper():
            w = None
            if P.kind == "complete":
                clique = find_rainbow_clique(coloring, P.params[0])
                if clique is not None:
                    w = lift_rainbow_to_berge(
                        H, [(sat[a], sat[b], coloring[(a, b)]) for a, b in combinations(clique, 2)], violation
                    )
            else:
                s, t = P.params
                found = find_rainbow_biclique(coloring, list(range(s)), t)
                if found is not None:
                    S, T = found
                    phi = {a: sat[x] for a, x in enumerate(S)} | {s + b: sat[y] for b, y in enumerate(T)}
                    w = BergeWitness(phi, tuple((u, v, cmap[norm_edge(phi[u], phi[v])]) for u, v in P.edge_list()))
            if w is not None and verify_witness(H, P, w):
                return w
    involved = sorted(set(cmap.values()) | {violation.hyperedge_index})
    w = contains_berge(H.subfamily(involved), P)
    if w is None:
        raise InvalidViolation(f"violation at hyperedge {violation.hyperedge_index} does not certify {P.name}")
    return BergeWitness(w.vertex_map, tuple((u, v, involved[i]) for u, v, i in w.edge_assignment))
