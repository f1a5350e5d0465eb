from __future__ import annotations

import sys
from itertools import combinations

from hypothesis import HealthCheck, settings, strategies as st

from bergekit.core import Hypergraph

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def hypergraphs(draw, max_n: int = 7, max_edges: int = 6, min_size: int = 1, max_size: int = 4) -> Hypergraph:
    n = draw(st.integers(min_value=max(min_size, 1), max_value=max_n))
    hi = min(max_size, n)
    edge = st.integers(min_value=min_size, max_value=hi).flatmap(
        lambda k: st.lists(st.integers(0, n - 1), min_size=k, max_size=k, unique=True)
    )
    hs = draw(st.lists(edge, max_size=max_edges))
    return Hypergraph(n, tuple(tuple(sorted(h)) for h in hs))


def small_host_family(n: int = 5, max_edges: int = 4, sizes: tuple[int, int] = (2, 4)):
    """Every multiset of at most ``max_edges`` hyperedges of the given sizes on ``range(n)``."""
    cands = [c for k in range(sizes[0], sizes[1] + 1) for c in combinations(range(n), k)]

    def rec(start: int, acc: list):
        yield Hypergraph(n, tuple(acc))
        if len(acc) == max_edges:
            return
        for i in range(start, len(cands)):
            acc.append(cands[i])
            yield from rec(i, acc)
            acc.pop()

    yield from rec(0, [])


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for k in sorted(lines):
            terminalreporter.write_line(lines[k])
