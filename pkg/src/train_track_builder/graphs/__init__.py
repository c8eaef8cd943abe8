"""Marked graphs, paths, G-graphs and universal cover balls."""

from typing import Sequence

from train_track_builder.core.exceptions import StructuralError
from train_track_builder.graphs.automorphism import Automorphism
from train_track_builder.graphs.cover import CoverBall, cover_ball
from train_track_builder.graphs.ggraph import GGraph, fold, pullback_core, stallings_graph
from train_track_builder.graphs.graph import EdgePath, MarkedGraph
from train_track_builder.graphs.words import Word, cyclic_reduce, reduce_word


def tighten(path: Sequence[int], circuit: bool = False, graph: MarkedGraph | None = None) -> Word:
    """Tightened path (or cyclically reduced circuit)."""
    if graph is not None:
        return graph.tighten(path, circuit)
    return cyclic_reduce(path) if circuit else reduce_word(path)


def map_path(f, path: Sequence[int], circuit: bool = False) -> Word:
    """Tightened image of a path under a topological representative or a rose automorphism."""
    images = f.edge_images if hasattr(f, "edge_images") else f.images
    out: list[int] = []
    for x in path:
        if x == 0 or abs(x) > len(images):
            raise StructuralError(f"unknown edge id {x}")
        img = images[abs(x) - 1]
        out.extend(img if x > 0 else tuple(-y for y in reversed(img)))
    return tighten(out, circuit)


__all__ = [
    "Automorphism",
    "CoverBall",
    "EdgePath",
    "GGraph",
    "MarkedGraph",
    "cover_ball",
    "fold",
    "map_path",
    "pullback_core",
    "stallings_graph",
    "tighten",
]
