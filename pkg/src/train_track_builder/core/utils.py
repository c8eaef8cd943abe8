import hashlib
import json
import os
from typing import Any


def canonical_hash(data: Any) -> str:
    """sha256 of the canonical JSON encoding (sorted keys, no whitespace)."""
    payload = json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def checksum(payload: str) -> str:
    """Checksum stored next to every persisted artifact"""
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def write_json(filepath: str, data: Any) -> None:
    folder = os.path.dirname(filepath)
    if folder:
        os.makedirs(folder, exist_ok=True)
    with open(filepath, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=2, ensure_ascii=False)


def to_dot(vertices: list[str], edges: list[tuple[str, str, str]], name: str = "G") -> str:
    """DOT source for a directed multigraph with labeled edges."""
    lines = [f"digraph {name} {{"]
    for v in vertices:
        lines.append(f'  "{v}";')
    for u, v, label in edges:
        lines.append(f'  "{u}" -> "{v}" [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_dot(graph) -> str:
    """DOT export of a MarkedGraph (one arrow per positive edge)."""
    names = graph.vertex_names
    edges = [(names[graph.init(k)], names[graph.term(k)], graph.name(k)) for k in graph.edges()]
    return to_dot(list(names), edges)


def ggraph_to_dot(g) -> str:
    """DOT export of a G-graph with vertices tagged by their base vertex."""
    base = g.base_graph
    vertices = [f"{i}:{base.vertex_names[b]}" for i, b in enumerate(g.vertex_images)]
    edges = [(vertices[u], vertices[v], base.name(label)) for u, v, label in g.edges]
    return to_dot(vertices, edges, name="S")


def save_history(history_file: str, session_data: dict):
    """Append a run report to the history file, keeping the last 50."""
    history = []
    if os.path.exists(history_file):
        try:
            with open(history_file, "r", encoding="utf-8") as f:
                history = json.load(f)
        except Exception:
            pass

    history.append(session_data)

    if len(history) > 50:
        history = history[-50:]

    try:
        with open(history_file, "w", encoding="utf-8") as f:
            json.dump(history, f, indent=2, ensure_ascii=False)
    except Exception:
        pass
