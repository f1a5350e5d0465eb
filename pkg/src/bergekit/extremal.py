"""Bound formulas, shadow expansion, and exact extremal searches at tiny n.

Two kinds of bounds live here.  Exact formulas (path bounds, the
edge-sum inequality, Turán and star numbers, thirds of graph Turán
numbers) are evaluated with :class:`fractions.Fraction` and can be
asserted.  Leading-term formulas (the n^{3/2} constants) drop an O(n) or
o(n^{3/2}) slack, so they are evaluated as floats and flagged
``leading_term_only``: comparisons against them are reported, not
asserted.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Any, Callable, Sequence

from .berge import berge_girth, contains_berge, is_linear, naive_contains_berge
from .core import Graph, Hypergraph, PatternFamily, count_report, find_subgraph, require_valid

SEARCH_GUARD_N = 7
GRAPH_GUARD_N = 9


def search_guard() -> int:
    return int(os.environ.get("BERGE_GUARD_N", SEARCH_GUARD_N))


class GuardExceeded(ValueError):
    pass


class UnboundedSearch(ValueError):
    pass


# ---------------------------------------------------------------------------
# Bound formulas
# ---------------------------------------------------------------------------

@dataclass
class BoundReport:
    name: str
    parameters: dict[str, Any]
    value: Fraction | float
    leading_term_only: bool = False
    measured: int | Fraction | None = None
    satisfied: bool | None = None
    hypotheses: dict[str, bool] = field(default_factory=dict)
    note: str = ""

    def with_measurement(self, measured: int | Fraction) -> "BoundReport":
        self.measured = measured
        self.satisfied = measured <= self.value
        return self

    @property
    def hypotheses_met(self) -> bool:
        return all(self.hypotheses.values())

    def to_json(self) -> dict[str, Any]:
        def num(x):
            if isinstance(x, Fraction):
                return int(x) if x.denominator == 1 else float(x)
            return x

        return {
            "name": self.name,
            "parameters": {k: num(v) for k, v in self.parameters.items()},
            "value": num(self.value),
            "exact_value": str(self.value) if isinstance(self.value, Fraction) else None,
            "leading_term_only": self.leading_term_only,
            "measured": num(self.measured),
            "satisfied": self.satisfied,
            "hypotheses": self.hypotheses,
            "note": self.note,
        }


def _path_bound(n: int, k: int, m: int) -> Fraction:
    if m <= 2:
        raise ValueError("path bound needs m > 2")
    if k > m:
        return Fraction(n, k) * math.comb(k, m)
    return Fraction(n * (k - 1), m + 1)


def _kst_graph_bound(n: int, s: int, t: int) -> float:
    # standard Kővári–Sós–Turán closed form; stands in for the unspecified constant
    if not 1 <= s <= t:
        raise ValueError("need 1 <= s <= t")
    return 0.5 * ((t - 1) ** (1 / s) * (n - s + 1) * n ** (1 - 1 / s) + (s - 1) * n)


def _turan_edges(n: int, r: int) -> Fraction:
    """ex(n, K_r): edges of the balanced complete (r-1)-partite graph."""
    p = r - 1
    if p < 1:
        raise ValueError("r must be at least 2")
    sizes = [n // p + (1 if i < n % p else 0) for i in range(p)]
    return Fraction(math.comb(n, 2) - sum(math.comb(s, 2) for s in sizes))


@dataclass(frozen=True)
class _Formula:
    params: tuple[str, ...]
    fn: Callable[..., Fraction | float]
    leading: bool
    description: str


BOUNDS: dict[str, _Formula] = {
    "path_bound": _Formula(("n", "k", "m"), _path_bound, False,
                           "max edges of an m-uniform Berge-P_{k+1}-free hypergraph"),
    "edge_sum_bound": _Formula(("n", "r", "edges"),
                               lambda n, r, edges: Fraction(2 * math.comb(n, 2) + r ** 3 * edges), False,
                               "size sum of an F-free hypergraph, |V(F)|=r, hyperedges of size >= r^3"),
    "kst_graph_bound": _Formula(("n", "s", "t"), _kst_graph_bound, False,
                                "upper bound on ex(n, K_{s,t}) (closed-form stand-in for C n^{2-1/s})"),
    "turan_number": _Formula(("n", "r"), _turan_edges, False, "ex(n, K_r)"),
    "star_number": _Formula(("n", "t"), lambda n, t: Fraction(n * (t - 1) // 2), False,
                            "ex(n, K_{1,t}) for n >= t"),
    "girth_third": _Formula(("ex",), lambda ex: Fraction(ex, 3), False,
                            "one third of ex(n, C_4, ..., C_{g-1})"),
    "c4_free_upper": _Formula(("n",), lambda n: math.sqrt(6) / 2 * n ** 1.5, True,
                              "deficiency sum of a Berge-C4-free hypergraph, leading term"),
    "c4_free_lower": _Formula(("n",), lambda n: n ** 1.5 / (3 * math.sqrt(3)), True,
                              "deficiency sum achieved by the tripled girth-5 construction, leading term"),
    "c4_free_weak_upper": _Formula(("n",), lambda n: math.sqrt(3) * n ** 1.5, True,
                                   "weaker deficiency-sum upper bound, leading term"),
    "girth5_triples": _Formula(("n",), lambda n: n ** 1.5 / 6, True,
                               "max triples in a girth-5 3-uniform hypergraph, leading term"),
}


def evaluate_bound(name: str, **params: int) -> BoundReport:
    if name not in BOUNDS:
        raise ValueError(f"unknown bound {name!r}; choose from {sorted(BOUNDS)}")
    f = BOUNDS[name]
    missing = [p for p in f.params if p not in params]
    if missing:
        raise ValueError(f"{name} needs parameters {missing}")
    args = {p: params[p] for p in f.params}
    value = f.fn(**args)
    return BoundReport(name, args, value, leading_term_only=f.leading, note=f.description)


# ---------------------------------------------------------------------------
# Shadow expansion
# ---------------------------------------------------------------------------

def graph_has_cycle(G: Graph, k: int) -> bool:
    return find_subgraph(G, PatternFamily.cycle(k).realize()) is not None


def shadow_expand(H3: Hypergraph, girth: int | None = None) -> Graph:
    """All three pairs of every triple.  With ``girth=g`` (the Berge girth of
    ``H3``, g >= 5) the result is checked to have no cycle of length 4..g-1."""
    require_valid(H3)
    if not H3.is_uniform(3):
        raise ValueError("shadow expansion needs a 3-uniform hypergraph")
    edges = {e for h in H3.hyperedges for e in combinations(h, 2)}
    G = Graph(H3.n, frozenset(edges))
    if is_linear(H3):
        assert G.num_edges == 3 * len(H3)
    if girth is not None and girth >= 5:
        for k in range(4, girth):
            assert not graph_has_cycle(G, k), f"shadow has a C{k} despite Berge girth {girth}"
    return G


# ---------------------------------------------------------------------------
# Exact hypergraph search
# ---------------------------------------------------------------------------

OBJECTIVES: dict[str, Callable[[int], int]] = {
    "edge_count": lambda size: 1,
    "degree_sum": lambda size: size,
    "deficiency_sum": lambda size: size - 3,
}


@dataclass(frozen=True)
class SearchProblem:
    n: int
    forbidden: tuple[PatternFamily, ...]
    size_range: tuple[int, int]
    simple_only: bool = True
    objective: str = "edge_count"

    def candidates(self) -> list[tuple[int, ...]]:
        lo, hi = self.size_range
        return [c for k in range(lo, hi + 1) for c in combinations(range(self.n), k)]


@dataclass(frozen=True)
class SearchResult:
    value: int
    witness: Hypergraph
    nodes: int = 0


def _check_problem(p: SearchProblem) -> None:
    guard = search_guard()
    if p.n > guard:
        raise GuardExceeded(f"n={p.n} above search guard {guard} (set BERGE_GUARD_N to raise it)")
    lo, hi = p.size_range
    if not 2 <= lo <= hi <= p.n:
        raise ValueError("size range must satisfy 2 <= lo <= hi <= n")
    if p.objective not in OBJECTIVES:
        raise ValueError(f"unknown objective {p.objective!r}")
    if not p.forbidden:
        raise ValueError("at least one forbidden pattern is required")


def multiplicity_cap(size: int, forbidden: Sequence[PatternFamily], simple_only: bool) -> int:
    """Most copies of one hyperedge of this size that avoid every pattern."""
    if simple_only:
        return 1
    caps = [len(P.edge_list()) - 1 for P in forbidden if P.vertex_count <= size]
    if not caps:
        raise UnboundedSearch(
            f"hyperedges of size {size} are smaller than every forbidden pattern, "
            "so arbitrarily many copies stay free; use simple_only"
        )
    return min(caps)


def _free(hyper: Sequence[tuple[int, ...]], n: int, forbidden: Sequence[PatternFamily]) -> bool:
    H = Hypergraph(n, tuple(hyper))
    return all(contains_berge(H, P) is None for P in forbidden)


class _BranchAndBound:
    def __init__(self, p: SearchProblem):
        self.p = p
        self.cands = p.candidates()
        weight = OBJECTIVES[p.objective]
        self.w = [weight(len(c)) for c in self.cands]
        self.cap = [multiplicity_cap(len(c), p.forbidden, p.simple_only) for c in self.cands]
        self.best = -math.inf
        self.best_family: tuple[tuple[int, ...], ...] = ()
        self.nodes = 0

    def max_mult(self, family: list[tuple[int, ...]], j: int, limit: int) -> int:
        c = self.cands[j]
        for m in range(1, limit + 1):
            if not _free(family + [c] * m, self.p.n, self.p.forbidden):
                return m - 1
        return limit

    def root_options(self) -> list[tuple[int, list[tuple[int, int]]]]:
        alive = [(j, self.max_mult([], j, self.cap[j])) for j in range(len(self.cands))]
        return [(j, m) for j, m in alive if m > 0]

    def run(self, family: list[tuple[int, ...]], value: int, alive: list[tuple[int, int]]) -> None:
        self.nodes += 1
        if value > self.best:
            self.best = value
            self.best_family = tuple(family)
        if not alive:
            return
        if value + sum(max(self.w[j], 0) * m for j, m in alive) <= self.best:
            return
        (j, mmax), rest = alive[0], alive[1:]
        for mult in range(mmax, 0, -1):
            fam = family + [self.cands[j]] * mult
            rest2 = []
            for k, m in rest:
                m2 = self.max_mult(fam, k, m)
                if m2:
                    rest2.append((k, m2))
            self.run(fam, value + mult * self.w[j], rest2)
        self.run(family, value, rest)


def _search_shard(args: tuple[SearchProblem, int]) -> tuple[int, tuple, int]:
    p, choice = args
    bb = _BranchAndBound(p)
    alive = bb.root_options()
    _run_root_choice(bb, alive, choice)
    return bb.best, bb.best_family, bb.nodes


def _root_choices(bb: _BranchAndBound, alive) -> list[int]:
    if not alive:
        return [0]
    return list(range(alive[0][1], -1, -1))


def _run_root_choice(bb: _BranchAndBound, alive, choice: int) -> None:
    if not alive:
        bb.run([], 0, [])
        return
    (j, _), rest = alive[0], alive[1:]
    if choice == 0:
        bb.run([], 0, rest)
        return
    fam = [bb.cands[j]] * choice
    rest2 = [(k, m2) for k, m in rest if (m2 := bb.max_mult(fam, k, m))]
    bb.run(fam, choice * bb.w[j], rest2)


def exact_search(p: SearchProblem, workers: int = 1) -> SearchResult:
    """Maximum objective over hyperedge families on ``range(n)`` avoiding every
    forbidden Berge pattern.

    Depth-first branch and bound over candidates in (size, lexicographic)
    order, larger multiplicities first, keeping for each remaining
    candidate the largest multiplicity still compatible with the current
    family.  The witness is the first optimum in that order, whatever
    the number of workers.
    """
    _check_problem(p)
    bb = _BranchAndBound(p)
    alive = bb.root_options()
    if workers <= 1:
        bb.run([], 0, alive)
        best, fam, nodes = bb.best, bb.best_family, bb.nodes
    else:
        choices = _root_choices(bb, alive)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_search_shard, [(p, c) for c in choices]))
        best = max(r[0] for r in results)
        fam = next(r[1] for r in results if r[0] == best)
        nodes = sum(r[2] for r in results)
    return SearchResult(int(best), Hypergraph(p.n, fam), nodes)


def brute_force_search(p: SearchProblem) -> int:
    """Unpruned enumeration of every family (multiplicities up to the cap),
    with the definition-level containment oracle.  Exponential."""
    _check_problem(p)
    cands = p.candidates()
    weight = OBJECTIVES[p.objective]
    caps = [multiplicity_cap(len(c), p.forbidden, p.simple_only) for c in cands]
    best = 0

    def rec(i: int, fam: list[tuple[int, ...]], value: int) -> None:
        nonlocal best
        if i == len(cands):
            H = Hypergraph(p.n, tuple(fam))
            if value > best and not any(naive_contains_berge(H, P) for P in p.forbidden):
                best = value
            return
        for m in range(caps[i] + 1):
            rec(i + 1, fam + [cands[i]] * m, value + m * weight(len(cands[i])))

    rec(0, [], 0)
    return best


# ---------------------------------------------------------------------------
# Exact graph Turán numbers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GraphSearchResult:
    value: int
    witness: Graph
    nodes: int = 0


def _graph_free_through(adj_edges: frozenset, n: int, e, forbidden: Sequence[Graph]) -> bool:
    G = Graph(n, adj_edges | {e})
    return all(find_subgraph(G, F, through=e) is None for F in forbidden)


def graph_ex_search(n: int, forbidden: Sequence[Graph], guard: int = GRAPH_GUARD_N) -> GraphSearchResult:
    """ex(n, forbidden) with a witness graph.

    Works upward from ex(n-1): a graph with ``e`` edges loses at most its
    minimum degree when that vertex is deleted, so an F-free graph with
    ``e`` edges exists only if one exists whose minimum degree is at least
    ``e - ex(n-1)``.  Each target ``e`` is decided by a depth-first search
    over the pairs of ``range(n)`` (include first) with forward checking
    of the remaining pairs and degree-feasibility pruning.
    """
    if n > guard:
        raise GuardExceeded(f"n={n} above graph search guard {guard}")
    return _graph_ex(n, tuple(sorted(forbidden, key=lambda F: (F.n, sorted(F.edges)))))


@lru_cache(maxsize=None)
def _graph_ex(n: int, forbidden: tuple[Graph, ...]) -> GraphSearchResult:
    if n <= 1:
        return GraphSearchResult(0, Graph(max(n, 0), frozenset()), 1)
    prev = _graph_ex(n - 1, forbidden)
    best = GraphSearchResult(prev.value, Graph(n, prev.witness.edges), prev.nodes)
    while True:
        target = best.value + 1
        found, nodes = _graph_with_edges(n, forbidden, target, target - prev.value)
        if found is None:
            return GraphSearchResult(best.value, best.witness, best.nodes + nodes)
        best = GraphSearchResult(target, Graph(n, found), best.nodes + nodes)


def _graph_with_edges(n: int, forbidden: Sequence[Graph], target: int, dmin: int) -> tuple[frozenset | None, int]:
    """Search for an F-free graph with exactly ``target`` edges and minimum
    degree >= ``dmin``.  Up to relabelling, vertex 0 has maximum degree and
    its neighbours are ``1..deg(0)``; both are imposed to cut symmetric
    branches."""
    pairs = list(combinations(range(n), 2))
    alive0 = [e for e in pairs if _graph_free_through(frozenset(), n, e, forbidden)]
    top_min = max(dmin, -(-2 * target // n))
    nodes = 0

    def feasible(edges: frozenset, alive: list) -> bool:
        if len(edges) + len(alive) < target:
            return False
        deg = [0] * n
        for u, v in edges:
            deg[u] += 1
            deg[v] += 1
        room = list(deg)
        for u, v in alive:
            room[u] += 1
            room[v] += 1
        if room[0] < top_min or min(room) < dmin:
            return False
        if not alive or alive[0][0] != 0:
            return max(deg) <= deg[0]
        return True

    def rec(edges: frozenset, alive: list) -> frozenset | None:
        nonlocal nodes
        nodes += 1
        if len(edges) == target:
            return edges
        if not feasible(edges, alive):
            return None
        e, rest = alive[0], alive[1:]
        new = edges | {e}
        found = rec(new, [f for f in rest if _graph_free_through(new, n, f, forbidden)])
        if found is not None:
            return found
        if e[0] == 0:
            rest = [f for f in rest if f[0] != 0]
        return rec(edges, rest)

    return rec(frozenset(), alive0), nodes


def brute_force_ex(n: int, forbidden: Sequence[Graph]) -> int:
    """Every edge subset, largest first; plain subgraph check."""
    pairs = list(combinations(range(n), 2))
    for k in range(len(pairs), -1, -1):
        for es in combinations(pairs, k):
            G = Graph(n, frozenset(es))
            if all(find_subgraph(G, F) is None for F in forbidden):
                return k
    return 0


def ex_number(n: int, forbidden: Sequence[Graph]) -> int:
    return graph_ex_search(n, forbidden).value


def cycles_between(lo: int, hi: int) -> list[Graph]:
    return [PatternFamily.cycle(k).realize() for k in range(lo, hi + 1)]


# ---------------------------------------------------------------------------
# Inequality checks on concrete hypergraphs
# ---------------------------------------------------------------------------

def check_inequality(name: str, H: Hypergraph, pattern: PatternFamily | None = None,
                     g_max: int = 7, **params: int) -> BoundReport:
    """Measure ``H``, verify the hypotheses of the named statement, and
    compare against its bound.

    ``edge_sum``: F-free, every hyperedge of size >= |V(F)|^3, size sum vs
    2C(n,2) + |V(F)|^3 |H|.  ``anygraph``: F-free, sizes >= |V(F)|, |H| vs
    ex(n,F).  ``linear_ex``: linear, F-free, sizes >= 2, |H| vs
    ex(n,F).  ``girth_shadow``: 3-uniform with Berge girth g >= 5,
    |H| vs ex(n, C_4..C_{g-1})/3.  ``path_bound``: m-uniform (m > 2),
    P_{k+1}-free, |H| vs the path bound.  ``c4_free_upper`` and
    ``c4_free_weak_upper``: Berge-C4-free, deficiency sum vs a leading
    term (reported only).
    """
    require_valid(H)
    cr = count_report(H)
    n = H.n
    hyp: dict[str, bool] = {}

    def need_pattern() -> PatternFamily:
        if pattern is None:
            raise ValueError(f"{name} needs a pattern")
        return pattern

    def ex_of(F: PatternFamily) -> int:
        if "ex" in params:
            return params["ex"]
        return ex_number(n, [F.realize()])

    if name == "edge_sum":
        F = need_pattern()
        r = F.vertex_count
        hyp["sizes >= r^3"] = all(s >= r ** 3 for s in H.sizes())
        hyp[f"Berge-{F.name}-free"] = contains_berge(H, F) is None
        rep = evaluate_bound("edge_sum_bound", n=n, r=r, edges=len(H))
        measured = cr.degree_sum
    elif name == "anygraph":
        F = need_pattern()
        hyp["sizes >= |V(F)|"] = all(s >= F.vertex_count for s in H.sizes())
        hyp[f"Berge-{F.name}-free"] = contains_berge(H, F) is None
        rep = BoundReport(name, {"n": n, "F": F.name}, Fraction(ex_of(F)) if all(hyp.values()) else Fraction(0))
        measured = cr.edge_count
    elif name == "linear_ex":
        F = need_pattern()
        hyp["linear"] = is_linear(H)
        hyp[f"Berge-{F.name}-free"] = contains_berge(H, F) is None
        hyp["sizes >= 2"] = all(s >= 2 for s in H.sizes())
        rep = BoundReport(name, {"n": n, "F": F.name}, Fraction(ex_of(F)) if all(hyp.values()) else Fraction(0))
        measured = cr.edge_count
    elif name == "girth_shadow":
        hyp["3-uniform"] = H.is_uniform(3)
        girth = berge_girth(H, g_max)
        g = girth.girth if girth.girth is not None else girth.lower_bound
        hyp["girth >= 5"] = g >= 5
        value = Fraction(0)
        if all(hyp.values()):
            ex = params["ex"] if "ex" in params else ex_number(n, cycles_between(4, g - 1))
            value = evaluate_bound("girth_third", ex=ex).value
        rep = BoundReport(name, {"n": n, "g": g}, value)
        measured = cr.edge_count
    elif name == "path_bound":
        k, m = params["k"], params["m"]
        hyp["m-uniform"] = H.is_uniform(m)
        hyp["m > 2"] = m > 2
        hyp[f"Berge-P{k + 1}-free"] = contains_berge(H, PatternFamily.path(k + 1)) is None
        rep = evaluate_bound("path_bound", n=n, k=k, m=m)
        measured = cr.edge_count
    elif name in ("c4_free_upper", "c4_free_weak_upper"):
        hyp["Berge-C4-free"] = contains_berge(H, PatternFamily.cycle(4)) is None
        rep = evaluate_bound(name, n=n)
        measured = cr.deficiency_sum
    else:
        raise ValueError(f"unknown inequality {name!r}")

    rep.hypotheses = hyp
    if not all(hyp.values()):
        rep.note = "hypotheses not met"
        return rep
    return rep.with_measurement(measured)
