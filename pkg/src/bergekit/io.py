"""Text and JSON formats for hypergraphs and graphs.

Text format: one hyperedge per line, whitespace-separated non-negative
integer labels, ``#`` starts a comment line, and an optional ``n=<int>``
header fixes the vertex count.  Without the header, labels are remapped
to ``0..k-1`` in ascending order and the mapping is returned.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .core import Graph, Hypergraph, ValidationError, validate

SCHEMA_VERSION = 1


def parse_hypergraph_text(text: str) -> tuple[Hypergraph, list[int]]:
    """Return the hypergraph and ``labels`` with ``labels[i]`` the input label of vertex ``i``."""
    n: int | None = None
    rows: list[list[int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("n="):
            if n is not None or rows:
                raise ValueError(f"line {lineno}: header must come first and only once")
            n = int(line[2:])
            continue
        try:
            row = [int(tok) for tok in line.split()]
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
        if any(v < 0 for v in row):
            raise ValueError(f"line {lineno}: negative label")
        rows.append(row)
    if n is not None:
        H = Hypergraph(n, tuple(tuple(r) for r in rows))
        labels = list(range(n))
    else:
        labels = sorted({v for r in rows for v in r})
        index = {lab: i for i, lab in enumerate(labels)}
        H = Hypergraph(len(labels), tuple(tuple(index[v] for v in r) for r in rows))
    problems = validate(H)
    if problems:
        raise ValidationError(problems)
    return H, labels


def format_hypergraph_text(H: Hypergraph) -> str:
    lines = [f"n={H.n}"]
    lines += [" ".join(map(str, sorted(h))) for h in H.hyperedges]
    return "\n".join(lines) + "\n"


def hypergraph_to_json(H: Hypergraph) -> dict[str, Any]:
    return {"n": H.n, "hyperedges": [sorted(h) for h in H.hyperedges]}


def hypergraph_from_json(obj: dict[str, Any]) -> Hypergraph:
    H = Hypergraph(int(obj["n"]), tuple(tuple(h) for h in obj["hyperedges"]))
    problems = validate(H)
    if problems:
        raise ValidationError(problems)
    return H


def parse_graph_text(text: str) -> tuple[Graph, list[int]]:
    H, labels = parse_hypergraph_text(text)
    bad = [i for i, h in enumerate(H.hyperedges) if len(h) != 2]
    if bad:
        raise ValueError(f"graph line for edge {bad[0]} does not have exactly two labels")
    return Graph.from_edges(H.n, H.hyperedges), labels


def format_graph_text(G: Graph) -> str:
    return format_hypergraph_text(Hypergraph(G.n, G.sorted_edges))


def load_hypergraph(path: str | Path) -> tuple[Hypergraph, list[int]]:
    """Load from ``.json`` (the JSON mirror) or any other suffix (text)."""
    p = Path(path)
    text = p.read_text(encoding="utf-8")
    if p.suffix == ".json":
        H = hypergraph_from_json(json.loads(text))
        return H, list(range(H.n))
    return parse_hypergraph_text(text)


def save_hypergraph(H: Hypergraph, path: str | Path) -> None:
    p = Path(path)
    if p.suffix == ".json":
        p.write_text(json.dumps(hypergraph_to_json(H)) + "\n", encoding="utf-8")
    else:
        p.write_text(format_hypergraph_text(H), encoding="utf-8")


def load_graph(path: str | Path) -> tuple[Graph, list[int]]:
    return parse_graph_text(Path(path).read_text(encoding="utf-8"))
