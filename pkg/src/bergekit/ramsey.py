"""Two-colouring Ramsey checks and rainbow finders for proper colourings.

Red/blue colourings of K_N are integer bitmasks over the C(N,2) edges in
lexicographic order; a set bit means red.  The exhaustive verifier works
on numpy arrays of masks, and the scalar predicates in
:func:`has_substructure` give an independent route for the same facts.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .core import Edge, Graph, norm_edge

LEMMA_ORDERS = (5, 6, 7)


@dataclass(frozen=True)
class EdgeColoring:
    base: Graph
    color: dict[Edge, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        color = {norm_edge(*e): c for e, c in self.color.items()}
        missing = self.base.edges - color.keys()
        if missing:
            raise ValueError(f"edge {min(missing)} has no colour")
        extra = color.keys() - self.base.edges
        if extra:
            raise ValueError(f"coloured pair {min(extra)} is not an edge")
        object.__setattr__(self, "color", color)

    def __getitem__(self, e: Edge) -> int:
        return self.color[norm_edge(*e)]

    def is_proper(self) -> bool:
        seen: set[tuple[int, int]] = set()
        for (u, v), c in self.color.items():
            for x in (u, v):
                if (x, c) in seen:
                    return False
                seen.add((x, c))
        return True

    def is_rainbow(self, edges: Iterable[Edge]) -> bool:
        cols = [self[e] for e in edges]
        return len(cols) == len(set(cols))


def complete_graph(n: int) -> Graph:
    return Graph(n, frozenset(combinations(range(n), 2)))


def round_robin_coloring(n: int) -> EdgeColoring:
    """Proper colouring of K_n: colour (i+j) mod n for odd n, the circle
    method 1-factorisation for even n."""
    if n % 2:
        col = {(i, j): (i + j) % n for i, j in combinations(range(n), 2)}
    else:
        m = n - 1
        col = {}
        for i, j in combinations(range(m), 2):
            col[(i, j)] = (i + j) % m
        for i in range(m):
            col[(i, m)] = (2 * i) % m
    return EdgeColoring(complete_graph(n), col)


def random_proper_coloring(base: Graph, rng: np.random.Generator) -> EdgeColoring:
    """Colour edges in random order with the least colour free at both ends."""
    edges = list(base.sorted_edges)
    used: dict[int, set[int]] = {v: set() for v in range(base.n)}
    col: dict[Edge, int] = {}
    for k in rng.permutation(len(edges)):
        u, v = edges[k]
        c = 0
        while c in used[u] or c in used[v]:
            c += 1
        col[(u, v)] = c
        used[u].add(c)
        used[v].add(c)
    return EdgeColoring(base, col)


# ---------------------------------------------------------------------------
# Rainbow finders
# ---------------------------------------------------------------------------

def find_rainbow_clique(c: EdgeColoring, r: int) -> list[int] | None:
    """Grow a maximal rainbow clique from every seed vertex; return ``r`` of
    its vertices as soon as one reaches size ``r``."""
    G = c.base
    if G.num_edges != G.n * (G.n - 1) // 2:
        raise ValueError("base graph is not complete")
    if not c.is_proper():
        raise ValueError("colouring is not proper")
    if r <= 1:
        return list(range(min(r, G.n))) if G.n >= r else None
    for seed in range(G.n):
        clique = [seed]
        colors: set[int] = set()
        grown = True
        while grown and len(clique) < r:
            grown = False
            for x in range(G.n):
                if x in clique:
                    continue
                new = [c[(x, y)] for y in clique]
                if len(set(new)) == len(new) and colors.isdisjoint(new):
                    clique.append(x)
                    colors.update(new)
                    grown = True
                    if len(clique) == r:
                        break
        if len(clique) >= r:
            return sorted(clique[:r])
    return None


def find_rainbow_biclique(
    c: EdgeColoring, left: Sequence[int], t: int
) -> tuple[list[int], list[int]] | None:
    """Rainbow K_{s,t} using every vertex of ``left`` (``s = len(left)``).

    Columns are added greedily while their edges to ``left`` bring only
    new colours; a maximal set has at least ``t`` columns once the other
    side has ``s(s-1)(t-1)+t`` vertices.
    """
    if not c.is_proper():
        raise ValueError("colouring is not proper")
    G = c.base
    left = list(left)
    lset = set(left)
    right = [x for x in range(G.n) if x not in lset and all(G.has_edge(x, y) for y in left)]
    chosen: list[int] = []
    colors: set[int] = set()
    for x in right:
        new = [c[(x, y)] for y in left]
        if len(set(new)) == len(new) and colors.isdisjoint(new):
            chosen.append(x)
            colors.update(new)
            if len(chosen) == t:
                return sorted(left), chosen
    return None


def rainbow_biclique_threshold(s: int, t: int) -> int:
    return s * (s - 1) * (t - 1) + t


# ---------------------------------------------------------------------------
# Red/blue predicates
# ---------------------------------------------------------------------------

def edge_index(order: int) -> dict[Edge, int]:
    return {e: i for i, e in enumerate(combinations(range(order), 2))}


def _mask(idx: dict[Edge, int], edges: Iterable[Edge]) -> int:
    m = 0
    for e in edges:
        m |= 1 << idx[norm_edge(*e)]
    return m


def _structure_masks(order: int):
    idx = edge_index(order)
    V = range(order)
    quads = [_mask(idx, combinations(q, 2)) for q in combinations(V, 4)]
    triangles = [_mask(idx, combinations(t, 2)) for t in combinations(V, 3)]
    return idx, quads, triangles


def _matchings(order: int, k: int) -> list[int]:
    idx = edge_index(order)
    out = []
    for es in combinations(idx, k):
        if len({v for e in es for v in e}) == 2 * k:
            out.append(_mask(idx, es))
    return out


def has_substructure(red: int, order: int, kind: str, k: int = 2) -> bool:
    """Exact predicate on one red/blue colouring of K_order given as a red mask.

    ``kind`` is one of ``red_K4minus``, ``blue_matching`` (size ``k``),
    ``blue_triangle``, ``monochromatic_triangle``.
    """
    idx = edge_index(order)
    full = (1 << len(idx)) - 1
    blue = full & ~red
    if kind == "red_K4minus":
        return any((red & _mask(idx, combinations(q, 2))).bit_count() >= 5
                   for q in combinations(range(order), 4))
    if kind == "blue_triangle" or kind == "monochromatic_triangle":
        for t in combinations(range(order), 3):
            m = _mask(idx, combinations(t, 2))
            if blue & m == m or (kind == "monochromatic_triangle" and red & m == m):
                return True
        return False
    if kind == "blue_matching":
        return _max_matching_size(order, blue, idx) >= k
    raise ValueError(f"unknown substructure {kind!r}")


def _max_matching_size(order: int, mask: int, idx: dict[Edge, int]) -> int:
    edges = [e for e, i in idx.items() if mask >> i & 1]
    best = 0

    def grow(start: int, used: int, size: int) -> None:
        nonlocal best
        best = max(best, size)
        for j in range(start, len(edges)):
            u, v = edges[j]
            if not (used >> u & 1 or used >> v & 1):
                grow(j + 1, used | 1 << u | 1 << v, size + 1)

    grow(0, 0, 0)
    return best


def lemma_holds_scalar(red: int, order: int) -> bool:
    if has_substructure(red, order, "red_K4minus"):
        return True
    if order == 5:
        return has_substructure(red, 5, "blue_matching", 2)
    if order == 6:
        return has_substructure(red, 6, "blue_triangle") or has_substructure(red, 6, "blue_matching", 3)
    if order == 7:
        return has_substructure(red, 7, "blue_triangle")
    raise ValueError("order must be 5, 6 or 7")


# ---------------------------------------------------------------------------
# Exhaustive verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RamseyVerdict:
    order: int
    colorings_checked: int
    counterexample: int | None

    @property
    def holds(self) -> bool:
        return self.counterexample is None

    def counterexample_edges(self) -> dict[str, list[Edge]] | None:
        if self.counterexample is None:
            return None
        idx = edge_index(self.order)
        red = [e for e, i in idx.items() if self.counterexample >> i & 1]
        blue = [e for e, i in idx.items() if not self.counterexample >> i & 1]
        return {"red": red, "blue": blue}


def _lemma_ok(masks: np.ndarray, order: int) -> np.ndarray:
    _, quads, triangles = _structure_masks(order)
    full = np.uint32((1 << (order * (order - 1) // 2)) - 1)
    blue = masks ^ full
    ok = np.zeros(masks.shape, dtype=bool)
    for q in quads:
        ok |= np.bitwise_count(masks & np.uint32(q)) >= 5
    if order in (6, 7):
        for t in triangles:
            t = np.uint32(t)
            ok |= (blue & t) == t
    if order in (5, 6):
        for m in _matchings(order, 2 if order == 5 else 3):
            m = np.uint32(m)
            ok |= (blue & m) == m
    return ok


def _mono_triangle(masks: np.ndarray, order: int) -> np.ndarray:
    _, _, triangles = _structure_masks(order)
    full = np.uint32((1 << (order * (order - 1) // 2)) - 1)
    blue = masks ^ full
    ok = np.zeros(masks.shape, dtype=bool)
    for t in triangles:
        t = np.uint32(t)
        ok |= ((masks & t) == t) | ((blue & t) == t)
    return ok


def _check_range(args: tuple[str, int, int, int]) -> tuple[int, int | None]:
    which, order, lo, hi = args
    masks = np.arange(lo, hi, dtype=np.uint32)
    ok = _lemma_ok(masks, order) if which == "lemma" else _mono_triangle(masks, order)
    bad = np.flatnonzero(~ok)
    return hi - lo, (int(masks[bad[0]]) if bad.size else None)


def _exhaust(which: str, order: int, workers: int, chunk: int = 1 << 18) -> RamseyVerdict:
    total = 1 << (order * (order - 1) // 2)
    jobs = [(which, order, lo, min(lo + chunk, total)) for lo in range(0, total, chunk)]
    if workers <= 1:
        results = [_check_range(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_check_range, jobs))
    checked = sum(r[0] for r in results)
    bad = [r[1] for r in results if r[1] is not None]
    return RamseyVerdict(order, checked, min(bad) if bad else None)


def verify_ramsey_lemma(order: int, workers: int = 1) -> RamseyVerdict:
    """Check every red/blue colouring of K_order against a disjunction:
    5: red K4^- or blue 2-matching; 6: red K4^-, blue triangle or blue
    3-matching; 7: red K4^- or blue triangle."""
    if order not in LEMMA_ORDERS:
        raise ValueError("order must be 5, 6 or 7")
    return _exhaust("lemma", order, workers)


def verify_monochromatic_triangle(workers: int = 1) -> RamseyVerdict:
    """Every 2-colouring of K6 has a monochromatic triangle."""
    return _exhaust("mono", 6, workers)


# ---------------------------------------------------------------------------
# Randomised rainbow trials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RainbowTrials:
    kind: str
    params: dict[str, int]
    trials: int
    failures: int
    first_failure: int | None

    @property
    def holds(self) -> bool:
        return self.failures == 0


def complete_bipartite(s: int, m: int) -> Graph:
    return Graph(s + m, frozenset((a, s + b) for a in range(s) for b in range(m)))


def rainbow_clique_trials(r: int, trials: int, seed: int, n: int | None = None) -> RainbowTrials:
    """Random proper colourings of K_n (default n = r^3); count how often the
    greedy finder returns nothing.  Returned cliques are re-checked."""
    n = r ** 3 if n is None else n
    base = complete_graph(n)
    failures, first = 0, None
    for i, ss in enumerate(np.random.SeedSequence(seed).spawn(trials)):
        c = random_proper_coloring(base, np.random.default_rng(ss))
        K = find_rainbow_clique(c, r)
        if K is not None:
            assert len(K) == r and c.is_rainbow(combinations(K, 2))
        else:
            failures += 1
            first = i if first is None else first
    return RainbowTrials("clique", {"r": r, "n": n}, trials, failures, first)


def rainbow_biclique_trials(s: int, t: int, trials: int, seed: int, m: int | None = None) -> RainbowTrials:
    """Random proper colourings of K_{s,m} (default m = s(s-1)(t-1)+t)."""
    m = rainbow_biclique_threshold(s, t) if m is None else m
    base = complete_bipartite(s, m)
    failures, first = 0, None
    for i, ss in enumerate(np.random.SeedSequence(seed).spawn(trials)):
        c = random_proper_coloring(base, np.random.default_rng(ss))
        found = find_rainbow_biclique(c, range(s), t)
        if found is not None:
            S, T = found
            assert len(T) == t and c.is_rainbow([(a, b) for a in S for b in T])
        else:
            failures += 1
            first = i if first is None else first
    return RainbowTrials("biclique", {"s": s, "t": t, "m": m}, trials, failures, first)


def empirical_clique_threshold(r: int, trials: int, seed: int) -> int | None:
    """Least n <= r^3 from which greedy growth never failed on ``trials``
    random proper colourings of K_n, for every larger n as well.  Data,
    not a proof."""
    ok_from = None
    for n in range(r ** 3, r - 1, -1):
        if rainbow_clique_trials(r, trials, seed, n).failures:
            break
        ok_from = n
    return ok_from
