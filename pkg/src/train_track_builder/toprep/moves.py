"""Elementary moves on topological representatives.

Every move is a homotopy equivalence ``p: G → G'`` together with the new map
``f' ≃ p f p̄``. Moves rewrite the marking through ``p`` and carry realized
subgraphs along, and they drop the filtration (callers refine again).
"""

from dataclasses import dataclass
from typing import Sequence

import networkx as nx

from train_track_builder.core.exceptions import NotInvertibleError, StructuralError
from train_track_builder.graphs.graph import MarkedGraph
from train_track_builder.graphs.words import Alphabet, Word, common_prefix, inverse, reduce_word
from train_track_builder.toprep.toprep import TopRep


@dataclass
class _Layout:
    """Mutable description of the target graph of a move."""

    names: list[str]
    vertex_names: list[str]
    tails: list[int]
    heads: list[int]


def _apply(subst: dict[int, Word], path: Sequence[int]) -> Word:
    out: list[int] = []
    for x in path:
        img = subst[abs(x)]
        out.extend(img if x > 0 else inverse(img))
    return reduce_word(out)


def _assemble(
    f: TopRep,
    layout: _Layout,
    base: int,
    vertex_map: Sequence[int],
    images: Sequence[Word],
    subst: dict[int, Word],
) -> TopRep:
    g = f.graph
    marking = tuple(_apply(subst, loop) for loop in g.marking or ())
    graph = MarkedGraph(
        Alphabet(tuple(layout.names)),
        tuple(layout.vertex_names),
        tuple(layout.tails),
        tuple(layout.heads),
        base,
        g.generators,
        marking,
    )
    realized = tuple(frozenset(abs(x) for k in piece for x in subst[k]) for piece in f.realized)
    return TopRep(graph, tuple(vertex_map), tuple(reduce_word(img) for img in images), None, realized)


def _layout(g: MarkedGraph) -> _Layout:
    return _Layout(list(g.edge_names.names), list(g.vertex_names), list(g.tails), list(g.heads))


def _fresh_vertex(names: Sequence[str]) -> str:
    k = len(names)
    while f"x{k}" in names:
        k += 1
    return f"x{k}"


def _fresh_edge(names: Sequence[str], base: str) -> str:
    return Alphabet(tuple(names)).fresh(base)


# ----------------------------------------------------------------------
# Subdivision and reorientation
# ----------------------------------------------------------------------


def subdivide(f: TopRep, e: int, i: int) -> tuple[TopRep, int, int]:
    """Split edge ``e`` (positive) at the preimage of the vertex after ``f(e)[:i]``.

    Returns the new representative and the ids of the two pieces.
    """
    g = f.graph
    img = f.image(e)
    if not 0 < i < len(img):
        raise StructuralError(f"cannot subdivide {g.name(e)} at position {i}")
    layout = _layout(g)
    x = len(layout.vertex_names)
    layout.vertex_names.append(_fresh_vertex(layout.vertex_names))
    new = g.num_edges + 1
    layout.names.append(_fresh_edge(layout.names, g.name(e)))
    layout.tails.append(x)
    layout.heads.append(g.heads[e - 1])
    layout.heads[e - 1] = x
    subst = {k: (k,) for k in g.edges()}
    subst[e] = (e, new)
    images = [_apply(subst, f.image(k)) for k in g.edges()]
    images[e - 1] = _apply(subst, img[:i])
    images.append(_apply(subst, img[i:]))
    vertex_map = list(f.vertex_map) + [g.term(img[i - 1])]
    return _assemble(f, layout, g.base, vertex_map, images, subst), e, new


def subdivide_at_fixed_point(f: TopRep, e: int, pos: int) -> tuple[TopRep, int, int]:
    """Split ``e`` at the fixed point inside the occurrence ``f(e)[pos] = ±e``.

    Same orientation: ``f(e₁) = α e₁`` and ``f(e₂) = e₂ β``.
    Reversed occurrence: ``f(e₁) = α ē₂`` and ``f(e₂) = ē₁ β``.
    """
    g = f.graph
    img = f.image(e)
    if abs(img[pos]) != e:
        raise StructuralError("position is not an occurrence of the edge")
    layout = _layout(g)
    x = len(layout.vertex_names)
    layout.vertex_names.append(_fresh_vertex(layout.vertex_names))
    new = g.num_edges + 1
    layout.names.append(_fresh_edge(layout.names, g.name(e)))
    layout.tails.append(x)
    layout.heads.append(g.heads[e - 1])
    layout.heads[e - 1] = x
    subst = {k: (k,) for k in g.edges()}
    subst[e] = (e, new)
    images = [_apply(subst, f.image(k)) for k in g.edges()]
    alpha, beta = _apply(subst, img[:pos]), _apply(subst, img[pos + 1 :])
    if img[pos] > 0:
        images[e - 1] = reduce_word(alpha + (e,))
        images.append(reduce_word((new,) + beta))
    else:
        images[e - 1] = reduce_word(alpha + (-new,))
        images.append(reduce_word((-e,) + beta))
    vertex_map = list(f.vertex_map) + [x]
    return _assemble(f, layout, g.base, vertex_map, images, subst), e, new


def reorient(f: TopRep, e: int) -> TopRep:
    """Reverse the orientation of edge ``e``."""
    g = f.graph
    layout = _layout(g)
    layout.tails[e - 1], layout.heads[e - 1] = layout.heads[e - 1], layout.tails[e - 1]
    subst = {k: (k,) for k in g.edges()}
    subst[e] = (-e,)
    images = [_apply(subst, f.image(k)) for k in g.edges()]
    images[e - 1] = _apply(subst, f.image(-e))
    return _assemble(f, layout, g.base, f.vertex_map, images, subst)


def slide(f: TopRep, e: int, gamma: Sequence[int]) -> TopRep:
    """Slide the terminal end of ``e`` along ``gamma`` (a path from ``term(e)`` avoiding ``e``)."""
    g = f.graph
    gamma = reduce_word(gamma)
    if not gamma:
        return f
    g.check_path(gamma)
    if g.init(gamma[0]) != g.term(e) or e in {abs(x) for x in gamma}:
        raise StructuralError("slide path must start at the terminal vertex and avoid the edge")
    layout = _layout(g)
    layout.heads[e - 1] = g.term(gamma[-1])
    subst = {k: (k,) for k in g.edges()}
    subst[e] = reduce_word((e,) + inverse(gamma))
    images = [_apply(subst, f.image(k)) for k in g.edges()]
    images[e - 1] = _apply(subst, f.image(e) + f.map_path(gamma))
    return _assemble(f, layout, g.base, f.vertex_map, images, subst)


# ----------------------------------------------------------------------
# Collapses
# ----------------------------------------------------------------------


def collapse_forest(f: TopRep, forest: set[int], roots: dict[int, int] | None = None) -> TopRep:
    """Collapse each tree of ``forest`` to a point; ``f' = p f p̄`` with ``p̄`` through tree paths."""
    g = f.graph
    forest = {abs(k) for k in forest}
    if not forest:
        return f
    tree = nx.MultiGraph()
    for k in forest:
        tree.add_edge(g.init(k), g.term(k), key=k)
    if tree.number_of_edges() != tree.number_of_nodes() - nx.number_connected_components(tree):
        raise StructuralError("collapsed edges do not form a forest")
    roots = roots or {}
    cls: dict[int, int] = {}
    tau: dict[int, Word] = {}
    for comp in nx.connected_components(tree):
        preferred = [r for r in comp if r in roots]
        root = preferred[0] if preferred else (g.base if g.base in comp else min(comp))
        tau[root] = ()
        queue = [root]
        while queue:
            x = queue.pop()
            for e in g.star(x):
                if abs(e) in forest and g.term(e) not in tau:
                    tau[g.term(e)] = tau[x] + (e,)
                    queue.append(g.term(e))
        for v in comp:
            cls[v] = root
    keep_vertices = [v for v in range(g.num_vertices) if cls.get(v, v) == v]
    vindex = {v: i for i, v in enumerate(keep_vertices)}
    vertex_of = [vindex[cls.get(v, v)] for v in range(g.num_vertices)]
    keep_edges = [k for k in g.edges() if k not in forest]
    eindex = {k: i for i, k in enumerate(keep_edges, start=1)}
    subst = {k: ((eindex[k],) if k in eindex else ()) for k in g.edges()}
    layout = _Layout(
        [g.edge_names.names[k - 1] for k in keep_edges],
        [g.vertex_names[v] for v in keep_vertices],
        [vertex_of[g.init(k)] for k in keep_edges],
        [vertex_of[g.term(k)] for k in keep_edges],
    )

    def tau_of(v: int) -> Word:
        return tau.get(v, ())

    images = []
    for k in keep_edges:
        path = tau_of(g.init(k)) + (k,) + inverse(tau_of(g.term(k)))
        images.append(_apply(subst, f.map_path(path)))
    vertex_map = [vertex_of[f.vertex_map[cls.get(v, v)]] for v in keep_vertices]
    return _assemble(f, layout, vertex_of[g.base], vertex_map, images, subst)


def pretrivial_forest(f: TopRep) -> set[int]:
    """Edges some iterate of ``f`` collapses."""
    out: set[int] = set()
    changed = True
    while changed:
        changed = False
        for k in f.graph.edges():
            if k not in out and all(abs(x) in out for x in f.image(k)):
                out.add(k)
                changed = True
    return out


def remove_valence_one(f: TopRep) -> TopRep | None:
    """Collapse the edge at one valence-one vertex, None if there is none."""
    g = f.graph
    for v in range(g.num_vertices):
        if g.valence(v) == 1 and g.num_edges > 1:
            e = g.star(v)[0]
            return collapse_forest(f, {abs(e)}, {g.term(e): 1})
    return None


def collapse_edge(f: TopRep, e: int, keep: int) -> TopRep:
    """Collapse a non-loop edge onto its endpoint ``keep`` (valence-two homotopy)."""
    g = f.graph
    if g.init(e) == g.term(e):
        raise StructuralError("cannot collapse a loop")
    return collapse_forest(f, {abs(e)}, {keep: 1})


# ----------------------------------------------------------------------
# Folding
# ----------------------------------------------------------------------


def _split_direction(f: TopRep, d: int, length: int) -> tuple[TopRep, int, dict[int, int]]:
    """Subdivide so the direction ``d`` starts an edge whose image has ``length`` edges.

    Returns the new representative, the new direction and a translation for
    other directions that pointed into the same edge.
    """
    e = abs(d)
    img_len = len(f.image(e))
    if img_len == length:
        return f, d, {}
    if d > 0:
        f2, first, second = subdivide(f, e, length)
        return f2, first, {-e: -second}
    f2, first, second = subdivide(f, e, img_len - length)
    return f2, -second, {e: first}


def fold_turn(f: TopRep, d1: int, d2: int) -> TopRep:
    """Fold the directions ``d1, d2`` along the maximal common prefix of their images."""
    g = f.graph
    if g.init(d1) != g.init(d2) or d1 == d2:
        raise StructuralError("fold needs two distinct directions at one vertex")
    c = common_prefix(f.image(d1), f.image(d2))
    if not c:
        raise StructuralError("directions have different images under Df")
    f, d1, moved = _split_direction(f, d1, len(c))
    d2 = moved.get(d2, d2)
    f, d2, moved = _split_direction(f, d2, len(c))
    d1 = moved.get(d1, d1)
    return fold_full(f, d1, d2)


def fold_full(f: TopRep, d1: int, d2: int) -> TopRep:
    """Identify two edges with equal images leaving the same vertex."""
    g = f.graph
    if f.image(d1) != f.image(d2):
        raise StructuralError("full fold needs equal images")
    y1, y2 = g.term(d1), g.term(d2)
    e2 = abs(d2)
    if y1 == y2:
        raise NotInvertibleError("folding would kill a loop; the map is not a homotopy equivalence")
    keep_vertices = [v for v in range(g.num_vertices) if v != y2]
    vindex = {v: i for i, v in enumerate(keep_vertices)}
    vertex_of = [vindex[y1 if v == y2 else v] for v in range(g.num_vertices)]
    keep_edges = [k for k in g.edges() if k != e2]
    eindex = {k: i for i, k in enumerate(keep_edges, start=1)}
    subst: dict[int, Word] = {k: (eindex[k],) for k in keep_edges}
    target = eindex[abs(d1)] * (1 if d1 > 0 else -1)
    subst[e2] = (target,) if d2 > 0 else (-target,)
    layout = _Layout(
        [g.edge_names.names[k - 1] for k in keep_edges],
        [g.vertex_names[v] for v in keep_vertices],
        [vertex_of[g.init(k)] for k in keep_edges],
        [vertex_of[g.term(k)] for k in keep_edges],
    )
    images = [_apply(subst, f.image(k)) for k in keep_edges]
    vertex_map = [vertex_of[f.vertex_map[v]] for v in keep_vertices]
    return _assemble(f, layout, vertex_of[g.base], vertex_map, images, subst)
