"""Lower-bound constructions and the auxiliary graphs they consume."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations, product
from typing import Any

import numpy as np

from .berge import berge_girth, contains_berge
from .core import Graph, Hypergraph, PatternFamily, contains_kst, iter_bits


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class BlowupSpec:
    a_side: tuple[int, ...]
    b_side: tuple[int, ...]
    cross: Graph
    copies: int

    @property
    def uniformity(self) -> int:
        return self.copies + 1


@dataclass(frozen=True)
class Certificate:
    claimed_property: str
    check_performed: str
    passed: bool

    def to_json(self) -> dict[str, Any]:
        return {
            "claimed_property": self.claimed_property,
            "check_performed": self.check_performed,
            "passed": self.passed,
        }


def turan_graph(n: int, p: int) -> Graph:
    """Complete p-partite graph on contiguous, balanced parts (larger parts first)."""
    if not 1 <= p <= n:
        raise ValueError("need 1 <= p <= n")
    part = []
    for i in range(p):
        part += [i] * (n // p + (1 if i < n % p else 0))
    return Graph(n, frozenset((u, v) for u, v in combinations(range(n), 2) if part[u] != part[v]))


def bipartite_half(G: Graph) -> tuple[tuple[int, ...], tuple[int, ...], Graph]:
    """Local switching from the split first half / second half until every
    vertex has at least as many cross edges as internal ones."""
    side = [v >= G.n // 2 for v in range(G.n)]
    moved = True
    while moved:
        moved = False
        for v in range(G.n):
            cross = sum(1 for u in iter_bits(G.adj[v]) if side[u] != side[v])
            if cross < G.degree(v) - cross:
                side[v] = not side[v]
                moved = True
    A = tuple(v for v in range(G.n) if not side[v])
    B = tuple(v for v in range(G.n) if side[v])
    cross = Graph(G.n, frozenset((u, v) for u, v in G.edges if side[u] != side[v]))
    return A, B, cross


def blowup(spec: BlowupSpec) -> Hypergraph:
    """Replace each A-side vertex by ``copies`` new vertices; each cross edge
    ``ab`` becomes the hyperedge ``copies(a) + {b}``."""
    k = spec.copies
    a_index = {a: i for i, a in enumerate(spec.a_side)}
    b_index = {b: k * len(spec.a_side) + j for j, b in enumerate(spec.b_side)}
    hyper = []
    for u, v in spec.cross.sorted_edges:
        a, b = (u, v) if u in a_index else (v, u)
        i = a_index[a]
        hyper.append(tuple(range(i * k, (i + 1) * k)) + (b_index[b],))
    return Hypergraph(k * len(spec.a_side) + len(spec.b_side), tuple(hyper))


def blowup_kr(n: int, r: int) -> Hypergraph:
    """r-uniform Berge-K_r-free hypergraph from the Turán graph T(n, r-1)."""
    if r < 3:
        raise ValueError("r must be at least 3")
    A, B, cross = bipartite_half(turan_graph(n, r - 1))
    return blowup(BlowupSpec(A, B, cross, r - 1))


def blowup_kst(G: Graph, s: int, t: int) -> Hypergraph:
    """(s+t)-uniform Berge-K_{s,t}-free hypergraph from a K_{s,t}-free graph."""
    if not 2 <= s <= t:
        raise ValueError("need 2 <= s <= t")
    found = contains_kst(G, s, t)
    if found is not None:
        raise PreconditionError(f"input graph contains K_{{{s},{t}}}: sides {found[0]} and {found[1]}")
    A, B, cross = bipartite_half(G)
    return blowup(BlowupSpec(A, B, cross, s + t - 1))


def blowup_structure_ok(H: Hypergraph, copies: int, a_count: int) -> bool:
    """No hyperedge meets two B vertices or two distinct copy blocks."""
    split = copies * a_count
    for h in H.hyperedges:
        a_part = [v for v in h if v < split]
        b_part = [v for v in h if v >= split]
        if len(b_part) > 1 or len({v // copies for v in a_part}) > 1:
            return False
    return True


def star_free_construction(n: int, t: int) -> Hypergraph:
    """Blocks of ``1+t`` consecutive vertices, each used as a hyperedge ``t-1`` times."""
    if t < 2:
        raise ValueError("t must be at least 2")
    if n < 1 + t:
        raise ValueError(f"need n >= 1+t = {1 + t}")
    hyper = []
    for b in range(n // (1 + t)):
        block = tuple(range(b * (1 + t), (b + 1) * (1 + t)))
        hyper += [block] * (t - 1)
    return Hypergraph(n, tuple(hyper))


def is_prime(q: int) -> bool:
    return q >= 2 and all(q % d for d in range(2, int(q ** 0.5) + 1))


def projective_points(q: int) -> list[tuple[int, int, int]]:
    """Normalised homogeneous coordinates: first nonzero coordinate is 1."""
    pts = [(1, y, z) for y in range(q) for z in range(q)]
    pts += [(0, 1, z) for z in range(q)]
    pts.append((0, 0, 1))
    return pts


def c4_free_incidence_graph(q: int) -> Graph:
    """Point-line incidence graph of PG(2, q): points ``0..N-1``, lines ``N..2N-1``."""
    if not is_prime(q):
        raise ValueError(f"q={q} is not prime")
    pts = projective_points(q)
    N = len(pts)
    edges = {
        (i, N + j)
        for (i, p), (j, l) in product(enumerate(pts), enumerate(pts))
        if (p[0] * l[0] + p[1] * l[1] + p[2] * l[2]) % q == 0
    }
    return Graph(2 * N, frozenset(edges))


# ---------------------------------------------------------------------------
# Greedy girth-5 triple systems
# ---------------------------------------------------------------------------

def _closes_short_cycle(inc: list[set[int]], hyper: list[tuple[int, int, int]], triple: tuple[int, int, int]) -> bool:
    """Would adding ``triple`` create a Berge cycle of length 2, 3 or 4?

    Such a cycle uses the new triple for one pair ``x, y`` and returns
    from ``y`` to ``x`` along a Berge path of 1 to 3 old hyperedges.
    """
    for x, y in combinations(triple, 2):
        if _berge_path(inc, hyper, y, x, frozenset((x, y)), 0, 3):
            return True
    return False


def _berge_path(inc, hyper, cur: int, target: int, used_v: frozenset, used_e: int, budget: int) -> bool:
    if budget == 0:
        return False
    for e in inc[cur]:
        if used_e >> e & 1:
            continue
        h = hyper[e]
        if target in h:
            return True
        if budget == 1:
            continue
        for w in h:
            if w not in used_v and _berge_path(inc, hyper, w, target, used_v | {w}, used_e | 1 << e, budget - 1):
                return True
    return False


def _closes_short_cycle_linear(adj: list[int], triple: tuple[int, int, int]) -> bool:
    """Same question for a linear host, on shadow adjacency bitmasks.

    In a linear hypergraph every covered pair has one owner, so a return
    path of one, two or three old hyperedges is a covered pair ``xy``, a
    common neighbour, or an edge between a neighbour of ``y`` and one of ``x``.
    """
    for x, y in combinations(triple, 2):
        if adj[x] >> y & 1 or adj[x] & adj[y]:
            return True
        nx = adj[x] & ~(1 << y)
        for w in iter_bits(adj[y] & ~(1 << x)):
            if adj[w] & nx:
                return True
    return False


def _girth5_trial(args: tuple[int, np.random.SeedSequence]) -> tuple[tuple[int, int, int], ...]:
    n, ss = args
    rng = np.random.default_rng(ss)
    triples = list(combinations(range(n), 3))
    adj = [0] * n
    hyper: list[tuple[int, int, int]] = []
    for k in rng.permutation(len(triples)):
        T = triples[k]
        if _closes_short_cycle_linear(adj, T):
            continue
        for x, y in combinations(T, 2):
            adj[x] |= 1 << y
            adj[y] |= 1 << x
        hyper.append(T)
    return tuple(sorted(hyper))


def girth5_greedy(n: int, seed: int = 0, trials: int = 1, workers: int = 1) -> Hypergraph:
    """Best of ``trials`` shuffled greedy runs of a 3-uniform hypergraph with
    Berge girth at least 5 (a greedy lower bound, not an extremal one).

    Ties on edge count go to the lexicographically least sorted edge list,
    so the output depends only on ``(n, seed, trials)``.
    """
    if n < 3:
        raise ValueError("n must be at least 3")
    jobs = [(n, ss) for ss in np.random.SeedSequence(seed).spawn(trials)]
    if workers <= 1:
        results = [_girth5_trial(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_girth5_trial, jobs))
    best = min(results, key=lambda hs: (-len(hs), hs))
    return Hypergraph(n, best)


def triple_blowup(G3: Hypergraph, check: bool = True) -> Hypergraph:
    """Vertex ``v`` becomes ``{3v, 3v+1, 3v+2}``; triples become 9-sets."""
    if not G3.is_uniform(3):
        raise PreconditionError("input is not 3-uniform")
    if check:
        rep = berge_girth(G3, 4)
        if rep.girth is not None:
            raise PreconditionError(
                f"input has a Berge-C{rep.girth} on hyperedges {rep.witness.hyperedge_indices}"
            )
    return Hypergraph(3 * G3.n, tuple(tuple(3 * v + j for v in h for j in range(3)) for h in G3.hyperedges))


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------

def freeness_certificate(
    H: Hypergraph,
    P: PatternFamily,
    claim: str,
    host_guard: int = 60,
    structural: tuple[str, bool] | None = None,
) -> Certificate:
    """Run the containment oracle when ``H`` has at most ``host_guard``
    vertices; above it, fall back to the supplied structural check."""
    if H.n <= host_guard:
        w = contains_berge(H, P)
        return Certificate(claim, f"exhaustive Berge-{P.name} containment search", w is None)
    if structural is None:
        return Certificate(claim, f"none: {H.n} vertices above host guard {host_guard}", False)
    what, ok = structural
    return Certificate(claim, f"structural: {what} (host above guard {host_guard})", ok)
