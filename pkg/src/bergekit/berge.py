"""Berge containment, witnesses, girth and linearity.

A host hypergraph contains a Berge copy of a pattern graph when the
pattern's edges can be sent bijectively to distinct hyperedges, each
hyperedge containing the images of its edge's endpoints.

The search places pattern vertices one at a time (highest degree first)
and keeps a matching between the already-determined pattern edges and
host hyperedges; a pattern edge that cannot be augmented into the
matching prunes the placement immediately.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations, product
from typing import Any, Sequence

from .core import Edge, Hypergraph, PatternFamily, iter_bits, mask_of, require_valid

DEFAULT_GUARD = 8
GUARD_FLAG = "--max-pattern-vertices"


class GuardExceeded(ValueError):
    pass


@dataclass(frozen=True)
class BergeWitness:
    """``vertex_map`` sends pattern vertices to host vertices;
    ``edge_assignment`` lists ``(u, v, hyperedge_index)`` per pattern edge."""

    vertex_map: dict[int, int]
    edge_assignment: tuple[tuple[int, int, int], ...]

    @property
    def hyperedge_indices(self) -> list[int]:
        return [i for _, _, i in self.edge_assignment]

    def host_edges(self) -> list[tuple[int, int, int]]:
        m = self.vertex_map
        return [(m[u], m[v], i) for u, v, i in self.edge_assignment]

    def to_json(self) -> dict[str, Any]:
        return {
            "vertex_map": {str(p): h for p, h in sorted(self.vertex_map.items())},
            "edge_assignment": [list(t) for t in self.edge_assignment],
        }

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> "BergeWitness":
        return cls(
            {int(p): int(h) for p, h in obj["vertex_map"].items()},
            tuple(tuple(int(x) for x in t) for t in obj["edge_assignment"]),
        )


@dataclass(frozen=True)
class WitnessCheck:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def verify_witness(H: Hypergraph, P: PatternFamily, w: BergeWitness) -> WitnessCheck:
    edges = P.edge_list()
    vm = w.vertex_map
    if len(set(vm.values())) != len(vm):
        return WitnessCheck(False, "vertex map not injective")
    if sorted((min(u, v), max(u, v)) for u, v, _ in w.edge_assignment) != sorted(edges):
        return WitnessCheck(False, "edges do not match pattern")
    for u, v, i in w.edge_assignment:
        if u not in vm or v not in vm:
            return WitnessCheck(False, "unmapped pattern vertex")
        if not 0 <= i < len(H):
            return WitnessCheck(False, "hyperedge index out of range")
    idx = w.hyperedge_indices
    if len(set(idx)) != len(idx):
        return WitnessCheck(False, "assignment not injective")
    for u, v, i in w.edge_assignment:
        h = H.hyperedges[i]
        if vm[u] not in h or vm[v] not in h:
            return WitnessCheck(False, "endpoint not covered")
    return WitnessCheck(True)


# ---------------------------------------------------------------------------
# Containment search
# ---------------------------------------------------------------------------

def _c2_pair(H: Hypergraph) -> BergeWitness | None:
    masks = H.masks
    for i, j in combinations(range(len(masks)), 2):
        common = masks[i] & masks[j]
        if common.bit_count() >= 2:
            a, b = list(iter_bits(common))[:2]
            return BergeWitness({0: a, 1: b}, ((0, 1, i), (0, 1, j)))
    return None


@lru_cache(maxsize=256)
def _vertex_order(edges: tuple[Edge, ...]) -> tuple[int, ...]:
    deg: dict[int, int] = {}
    nbrs: dict[int, set[int]] = {}
    for u, v in edges:
        for a, b in ((u, v), (v, u)):
            deg[a] = deg.get(a, 0) + 1
            nbrs.setdefault(a, set()).add(b)
    order: list[int] = []
    rest = sorted(deg)
    while rest:
        placed = set(order)
        rest.sort(key=lambda p: (-deg[p], -len(nbrs[p] & placed), p))
        order.append(rest.pop(0))
    return tuple(order)


class _Search:
    """Placement search for one host/pattern pair; picklable for sharding."""

    def __init__(self, H: Hypergraph, edges: Sequence[Edge]):
        self.H = H
        self.edges = list(edges)
        self.order = _vertex_order(tuple(self.edges))
        self.deg = {p: 0 for p in self.order}
        for u, v in self.edges:
            self.deg[u] += 1
            self.deg[v] += 1
        pos = {p: i for i, p in enumerate(self.order)}
        # pattern edges that become determined when order[i] is placed
        self.closing: list[list[int]] = [[] for _ in self.order]
        self.back: list[list[int]] = [[] for _ in self.order]
        for e, (u, v) in enumerate(self.edges):
            i = max(pos[u], pos[v])
            self.closing[i].append(e)
            other = u if pos[u] < pos[v] else v
            self.back[i].append(other)
        self.host_deg = [H.degree(x) for x in range(H.n)]

    def first_candidates(self) -> list[int]:
        need = self.deg[self.order[0]]
        return [x for x in range(self.H.n) if self.host_deg[x] >= need]

    def run(self, first: int | None = None) -> BergeWitness | None:
        phi: dict[int, int] = {}
        assign: dict[int, int] = {}
        owner: dict[int, int] = {}
        firsts = self.first_candidates() if first is None else [first]
        for x in firsts:
            phi[self.order[0]] = x
            found = self._place(1, phi, assign, owner)
            if found is not None:
                return found
            del phi[self.order[0]]
        return None

    def _place(self, i: int, phi, assign, owner) -> BergeWitness | None:
        if i == len(self.order):
            vm = dict(sorted(phi.items()))
            return BergeWitness(vm, tuple((u, v, assign[e]) for e, (u, v) in enumerate(self.edges)))
        H = self.H
        p = self.order[i]
        cand = ((1 << H.n) - 1) & ~mask_of(phi.values())
        for q in self.back[i]:
            cand &= H.neighbourhood[phi[q]]
        need = self.deg[p]
        for x in iter_bits(cand):
            if self.host_deg[x] < need:
                continue
            phi[p] = x
            a2, o2 = dict(assign), dict(owner)
            if self._augment_all(self.closing[i], phi, a2, o2):
                found = self._place(i + 1, phi, a2, o2)
                if found is not None:
                    return found
            del phi[p]
        return None

    def _available(self, e: int, phi) -> int:
        u, v = self.edges[e]
        inc = self.H.incidence
        return inc[phi[u]] & inc[phi[v]]

    def _augment_all(self, new_edges, phi, assign, owner) -> bool:
        for e in new_edges:
            if not self._augment(e, phi, assign, owner, [0]):
                return False
        return True

    def _augment(self, e, phi, assign, owner, seen) -> bool:
        for h in iter_bits(self._available(e, phi) & ~seen[0]):
            seen[0] |= 1 << h
            if h not in owner or self._augment(owner[h], phi, assign, owner, seen):
                owner[h] = e
                assign[e] = h
                return True
        return False


def _run_shard(args: tuple[_Search, int]) -> BergeWitness | None:
    search, first = args
    return search.run(first)


def contains_berge(
    H: Hypergraph,
    P: PatternFamily,
    *,
    guard: int = DEFAULT_GUARD,
    workers: int = 1,
) -> BergeWitness | None:
    """Return a Berge witness of ``P`` in ``H`` or ``None`` if ``H`` is P-free.

    The result does not depend on ``workers``: shards split on the host
    image of the first pattern vertex and the earliest shard wins.
    """
    require_valid(H)
    if P.is_c2:
        return _c2_pair(H)
    if P.vertex_count > guard:
        raise GuardExceeded(
            f"pattern {P.name} has {P.vertex_count} vertices, above the guard {guard}; "
            f"raise {GUARD_FLAG} to allow it"
        )
    edges = P.edge_list()
    if not edges:
        return BergeWitness({}, ())
    if len(edges) > len(H) or P.vertex_count > H.n:
        return None
    search = _Search(H, edges)
    if workers <= 1:
        return search.run()
    firsts = search.first_candidates()
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for found in pool.map(_run_shard, [(search, x) for x in firsts]):
            if found is not None:
                pool.shutdown(wait=False, cancel_futures=True)
                return found
    return None


def naive_contains_berge(H: Hypergraph, P: PatternFamily) -> bool:
    """Definition-level oracle: try every injective placement of the pattern
    vertices and every injective choice of hyperedges for its edges.

    Shares no code with :func:`contains_berge`; exponential, for tiny inputs.
    """
    edges = P.edge_list()
    verts = sorted({v for e in edges for v in e})
    hsets = [set(h) for h in H.hyperedges]
    if len(edges) > len(hsets):
        return False
    for image in permutations(range(H.n), len(verts)):
        phi = dict(zip(verts, image))
        options = []
        for u, v in edges:
            opts = [i for i, h in enumerate(hsets) if phi[u] in h and phi[v] in h]
            if not opts:
                break
            options.append(opts)
        else:
            for choice in product(*options):
                if len(set(choice)) == len(choice):
                    return True
    return False


# ---------------------------------------------------------------------------
# Girth and linearity
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GirthReport:
    """``girth`` is ``None`` when no Berge cycle of length ``<= g_max`` exists,
    in which case the girth is at least ``lower_bound``."""

    girth: int | None
    lower_bound: int
    witness: BergeWitness | None = None

    def at_least(self, g: int) -> bool:
        return (self.girth if self.girth is not None else self.lower_bound) >= g

    def describe(self) -> str:
        if self.girth is None:
            return f"at least {self.lower_bound}"
        return str(self.girth)

    def to_json(self) -> dict[str, Any]:
        return {
            "girth": self.girth,
            "at_least": self.lower_bound if self.girth is None else self.girth,
            "witness": None if self.witness is None else self.witness.to_json(),
        }


def berge_girth(H: Hypergraph, g_max: int, *, guard: int | None = None, workers: int = 1) -> GirthReport:
    if g_max < 2:
        raise ValueError("g_max must be at least 2")
    require_valid(H)
    guard = max(DEFAULT_GUARD, g_max) if guard is None else guard
    for k in range(2, g_max + 1):
        if k > len(H) or k > H.n:
            break
        w = contains_berge(H, PatternFamily.cycle(k), guard=guard, workers=workers)
        if w is not None:
            return GirthReport(k, k, w)
    return GirthReport(None, g_max + 1)


def is_linear(H: Hypergraph) -> bool:
    return _c2_pair(require_valid(H)) is None
