"""Graphs, hypergraphs, pattern families and counting functionals.

Vertices are dense integers ``0..n-1`` everywhere.  A :class:`Hypergraph`
keeps its hyperedges as an ordered tuple because the greedy embedding
procedures consume them in order, and duplicate hyperedges are allowed.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Sequence

Edge = tuple[int, int]


class ValidationError(ValueError):
    """Raised when an operation receives a hypergraph that breaks an invariant."""

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


def norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


# ---------------------------------------------------------------------------
# Graph
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on ``range(n)``."""

    n: int
    edges: frozenset[Edge] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError(f"negative vertex count {self.n}")
        edges = frozenset(norm_edge(u, v) for u, v in self.edges)
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if u < 0 or v >= self.n:
                raise ValueError(f"edge ({u}, {v}) outside 0..{self.n - 1}")
        object.__setattr__(self, "edges", edges)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        seen: set[Edge] = set()
        for e in edges:
            u, v = e
            key = norm_edge(u, v)
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
        return cls(n, frozenset(seen))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def sorted_edges(self) -> tuple[Edge, ...]:
        return tuple(sorted(self.edges))

    @cached_property
    def adj(self) -> tuple[int, ...]:
        """Adjacency bitmask per vertex."""
        adj = [0] * self.n
        for u, v in self.edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return tuple(adj)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def non_isolated(self) -> list[int]:
        return [v for v in range(self.n) if self.adj[v]]


# ---------------------------------------------------------------------------
# Hypergraph
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Hypergraph:
    """Ordered multiset of hyperedges on ``range(n)``.

    Construction never rejects bad input; use :func:`validate` to list
    problems or :func:`require_valid` to raise on them.
    """

    n: int
    hyperedges: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "hyperedges", tuple(tuple(sorted(h)) for h in self.hyperedges)
        )

    def __len__(self) -> int:
        return len(self.hyperedges)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        return tuple(mask_of(h) for h in self.hyperedges)

    @cached_property
    def incidence(self) -> tuple[int, ...]:
        """Per vertex, the bitmask of hyperedge indices containing it."""
        inc = [0] * self.n
        for i, h in enumerate(self.hyperedges):
            for v in h:
                inc[v] |= 1 << i
        return tuple(inc)

    @cached_property
    def neighbourhood(self) -> tuple[int, ...]:
        """Per vertex, the bitmask of vertices sharing a hyperedge with it."""
        nb = [0] * self.n
        for m in self.masks:
            for v in iter_bits(m):
                nb[v] |= m
        return tuple(nb[v] & ~(1 << v) for v in range(self.n))

    def degree(self, v: int) -> int:
        return self.incidence[v].bit_count()

    def sizes(self) -> list[int]:
        return [len(h) for h in self.hyperedges]

    def with_hyperedge(self, h: Iterable[int]) -> "Hypergraph":
        return Hypergraph(self.n, self.hyperedges + (tuple(h),))

    def subfamily(self, indices: Iterable[int]) -> "Hypergraph":
        return Hypergraph(self.n, tuple(self.hyperedges[i] for i in indices))

    def is_uniform(self, k: int) -> bool:
        return all(len(h) == k for h in self.hyperedges)


def validate(H: Hypergraph) -> list[str]:
    """List every invariant violation of ``H``; empty means valid."""
    out: list[str] = []
    if H.n < 0:
        out.append(f"negative vertex count {H.n}")
    for i, h in enumerate(H.hyperedges):
        if not h:
            out.append(f"empty hyperedge {i}")
        if len(set(h)) != len(h):
            out.append(f"repeated vertex in hyperedge {i}")
        bad = [v for v in h if v < 0 or v >= H.n]
        if bad:
            out.append(f"vertex {bad[0]} out of range 0..{H.n - 1} in hyperedge {i}")
    return out


def require_valid(H: Hypergraph) -> Hypergraph:
    problems = validate(H)
    if problems:
        raise ValidationError(problems)
    return H


# ---------------------------------------------------------------------------
# Counting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CountReport:
    edge_count: int
    degree_sum: int
    deficiency_sum: int
    min_size: int
    max_size: int


def count_report(H: Hypergraph) -> CountReport:
    require_valid(H)
    by_edge = sum(len(h) for h in H.hyperedges)
    by_vertex = sum(H.degree(v) for v in range(H.n))
    assert by_edge == by_vertex, "degree-sum identity failed"
    sizes = H.sizes()
    return CountReport(
        edge_count=len(H),
        degree_sum=by_edge,
        deficiency_sum=by_edge - 3 * len(H),
        min_size=min(sizes, default=0),
        max_size=max(sizes, default=0),
    )


# ---------------------------------------------------------------------------
# Pattern families
# ---------------------------------------------------------------------------

_KINDS = ("complete", "biclique", "cycle", "path", "arbitrary")


@dataclass(frozen=True)
class PatternFamily:
    kind: str
    params: tuple[int, ...] = ()
    graph: Graph | None = None

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown pattern kind {self.kind!r}")
        p = self.params
        if self.kind == "complete" and (len(p) != 1 or p[0] < 2):
            raise ValueError("K_r needs r >= 2")
        if self.kind == "biclique" and (len(p) != 2 or not 1 <= p[0] <= p[1]):
            raise ValueError("K_{s,t} needs 1 <= s <= t")
        if self.kind in ("cycle", "path") and (len(p) != 1 or p[0] < 2):
            raise ValueError(f"{self.kind} length must be >= 2")
        if self.kind == "arbitrary" and self.graph is None:
            raise ValueError("arbitrary pattern needs a graph")

    @classmethod
    def complete(cls, r: int) -> "PatternFamily":
        return cls("complete", (r,))

    @classmethod
    def biclique(cls, s: int, t: int) -> "PatternFamily":
        return cls("biclique", (s, t))

    @classmethod
    def cycle(cls, k: int) -> "PatternFamily":
        return cls("cycle", (k,))

    @classmethod
    def path(cls, k: int) -> "PatternFamily":
        return cls("path", (k,))

    @classmethod
    def arbitrary(cls, G: Graph) -> "PatternFamily":
        return cls("arbitrary", (), G)

    @classmethod
    def parse(cls, text: str) -> "PatternFamily":
        """Parse ``K3``, ``K_3``, ``K2,3``, ``K_{2,3}``, ``C4``, ``P4``."""
        s = text.strip().replace("_", "").replace("{", "").replace("}", "")
        m = re.fullmatch(r"([KCP])(\d+)(?:,(\d+))?", s, flags=re.IGNORECASE)
        if not m:
            raise ValueError(f"cannot parse pattern {text!r}")
        letter, a, b = m.group(1).upper(), int(m.group(2)), m.group(3)
        if b is not None:
            if letter != "K":
                raise ValueError(f"cannot parse pattern {text!r}")
            return cls.biclique(*sorted((a, int(b))))
        return {"K": cls.complete, "C": cls.cycle, "P": cls.path}[letter](a)

    @property
    def name(self) -> str:
        p = self.params
        if self.kind == "complete":
            return f"K{p[0]}"
        if self.kind == "biclique":
            return f"K{p[0]},{p[1]}"
        if self.kind == "cycle":
            return f"C{p[0]}"
        if self.kind == "path":
            return f"P{p[0]}"
        return f"G{sorted(self.graph.edges)}"

    @property
    def is_c2(self) -> bool:
        return self.kind == "cycle" and self.params[0] == 2

    def edge_list(self) -> list[Edge]:
        """Pattern edges in canonical order; C2 yields two parallel edges."""
        if self.is_c2:
            return [(0, 1), (0, 1)]
        return list(self.realize().sorted_edges)

    @property
    def vertex_count(self) -> int:
        """Number of pattern vertices of positive degree."""
        return len({v for e in self.edge_list() for v in e})

    def realize(self) -> Graph:
        return realize_pattern(self)


@lru_cache(maxsize=256)
def realize_pattern(P: PatternFamily) -> Graph:
    k = P.kind
    if k == "complete":
        r = P.params[0]
        return Graph(r, frozenset(combinations(range(r), 2)))
    if k == "biclique":
        s, t = P.params
        return Graph(s + t, frozenset((a, s + b) for a in range(s) for b in range(t)))
    if k == "cycle":
        n = P.params[0]
        if n == 2:
            raise ValueError("C2 has no simple-graph realization; use the linearity predicate")
        return Graph(n, frozenset(norm_edge(i, (i + 1) % n) for i in range(n)))
    if k == "path":
        n = P.params[0]
        return Graph(n, frozenset((i, i + 1) for i in range(n - 1)))
    return P.graph


# ---------------------------------------------------------------------------
# Plain graph subgraph search (monomorphism, not induced)
# ---------------------------------------------------------------------------

@lru_cache(maxsize=1024)
def _search_order(F: Graph, first: tuple[int, ...] = ()) -> tuple[int, ...]:
    order = list(first)
    rest = [v for v in F.non_isolated() if v not in order]
    while rest:
        placed = mask_of(order)
        rest.sort(key=lambda v: (-(F.adj[v] & placed).bit_count(), -F.degree(v), v))
        order.append(rest.pop(0))
    return tuple(order)


def find_subgraph(G: Graph, F: Graph, through: Edge | None = None) -> dict[int, int] | None:
    """Map the non-isolated vertices of ``F`` injectively into ``G`` so that
    every edge of ``F`` lands on an edge of ``G``.

    With ``through=(u, v)`` only copies using the edge ``uv`` are searched.
    """
    if F.num_edges == 0:
        return {}
    if through is None:
        return _extend(G, F, _search_order(F), {}, 0)
    u, v = through
    if not G.has_edge(u, v):
        return None
    for a, b in F.sorted_edges:
        for x, y in ((u, v), (v, u)):
            if F.degree(a) > G.degree(x) or F.degree(b) > G.degree(y):
                continue
            order = _search_order(F, (a, b))
            found = _extend(G, F, order, {a: x, b: y}, 2)
            if found is not None:
                return found
    return None


def _extend(G: Graph, F: Graph, order: Sequence[int], phi: dict[int, int], i: int) -> dict[int, int] | None:
    if i == len(order):
        return dict(phi)
    p = order[i]
    used = mask_of(phi.values())
    cand = (1 << G.n) - 1
    for q in iter_bits(F.adj[p]):
        if q in phi:
            cand &= G.adj[phi[q]]
    cand &= ~used
    need = F.degree(p)
    for x in iter_bits(cand):
        if G.degree(x) < need:
            continue
        phi[p] = x
        found = _extend(G, F, order, phi, i + 1)
        if found is not None:
            return found
        del phi[p]
    return None


def contains_kst(G: Graph, s: int, t: int) -> tuple[list[int], list[int]] | None:
    """Find a (not necessarily induced) K_{s,t} in ``G`` as (S side, T side)."""
    for S in combinations(range(G.n), s):
        common = (1 << G.n) - 1
        for v in S:
            common &= G.adj[v]
        if common.bit_count() >= t:
            return list(S), list(iter_bits(common))[:t]
    return None
