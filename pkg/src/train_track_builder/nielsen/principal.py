"""Nielsen classes of fixed vertices and principal vertices."""

from dataclasses import dataclass, field

import networkx as nx

from train_track_builder.core.config import Config
from train_track_builder.graphs.words import Word, inverse, reduce_word
from train_track_builder.nielsen.inps import find_eg_inps
from train_track_builder.toprep.toprep import TopRep


@dataclass
class NielsenClass:
    vertices: list[int]
    principal: bool
    principal_vertices: list[int] = field(default_factory=list)

    def to_json(self, f: TopRep) -> dict:
        names = f.graph.vertex_names
        return {
            "vertices": [names[v] for v in self.vertices],
            "principal": self.principal,
            "principal_vertices": [names[v] for v in self.principal_vertices],
        }


def fixed_directions(f: TopRep, v: int) -> list[int]:
    return [d for d in f.graph.star(v) if f.df(d) == d]


def fixed_subgraph(f: TopRep) -> nx.MultiGraph:
    """Fixed vertices and fixed edges."""
    g = nx.MultiGraph()
    g.add_nodes_from(f.fixed_vertices())
    for e in f.graph.edges():
        if f.is_fixed_edge(e):
            g.add_edge(f.graph.init(e), f.graph.term(e), key=e)
    return g


def inp_endpoints(f: TopRep, config: Config | None = None) -> list[tuple[int, int]]:
    """Endpoint pairs of the EG iNps."""
    out = []
    if f.filtration is None:
        return out
    for r, s in enumerate(f.filtration):
        if s.is_eg:
            for rho in find_eg_inps(f, r, config):
                out.append((f.graph.init(rho[0]), f.graph.term(rho[-1])))
    return out


def nielsen_connections(
    f: TopRep, edges: frozenset[int] | None = None, config: Config | None = None
) -> nx.MultiGraph:
    """Fixed vertices joined by fixed edges and EG iNps.

    Every edge carries its ``path`` and the vertex it ``start``s at. With
    ``edges`` only connections inside that subgraph are used.
    """
    g = f.graph
    out = nx.MultiGraph()
    out.add_nodes_from(f.fixed_vertices())
    for e in g.edges():
        if f.is_fixed_edge(e) and (edges is None or e in edges):
            out.add_edge(g.init(e), g.term(e), path=(e,), start=g.init(e))
    if f.filtration is not None:
        for r, s in enumerate(f.filtration):
            if not s.is_eg or (edges is not None and not set(s.edges) <= edges):
                continue
            for rho in find_eg_inps(f, r, config):
                out.add_edge(g.init(rho[0]), g.term(rho[-1]), path=rho, start=g.init(rho[0]))
    return out


def nielsen_path(connections: nx.MultiGraph, u: int, v: int) -> Word | None:
    """A Nielsen path from ``u`` to ``v``, None if they lie in different Nielsen classes."""
    if u not in connections or v not in connections:
        return None
    try:
        hops = nx.shortest_path(connections, u, v)
    except nx.NetworkXNoPath:
        return None
    out: list[int] = []
    for a, b in zip(hops, hops[1:]):
        data = connections[a][b][min(connections[a][b])]
        out.extend(data["path"] if data["start"] == a else inverse(data["path"]))
    return reduce_word(out)


def _is_circle_component(f: TopRep, fix: nx.MultiGraph, v: int) -> bool:
    comp = nx.node_connected_component(fix, v)
    sub = fix.subgraph(comp)
    if sub.number_of_edges() == 0 or sub.number_of_edges() != sub.number_of_nodes():
        return False
    return all(sub.degree(x) == 2 and len(fixed_directions(f, x)) == 2 for x in comp)


def is_principal(f: TopRep, v: int, fix: nx.MultiGraph, inp_vertices: set[int]) -> bool:
    """A fixed vertex is principal unless it has exactly two fixed directions in one EG stratum
    and ends no iNp, or it lies on a fixed circle with two fixed directions at each point."""
    directions = fixed_directions(f, v)
    if len(directions) == 2 and v not in inp_vertices and f.filtration is not None:
        h1, h2 = (f.filtration.height(d) for d in directions)
        if h1 == h2 and f.filtration[h1].is_eg:
            return False
    if _is_circle_component(f, fix, v):
        return False
    return True


def principal_set(f: TopRep, config: Config | None = None) -> set[int]:
    fix = fixed_subgraph(f)
    inp_vertices = {v for pair in inp_endpoints(f, config) for v in pair}
    return {v for v in f.fixed_vertices() if is_principal(f, v, fix, inp_vertices)}


def principal_vertices(f: TopRep, config: Config | None = None) -> list[NielsenClass]:
    """Fixed vertices grouped into Nielsen classes, each flagged principal or not.

    Classes are joined by fixed edges and EG iNps.
    """
    joined = nielsen_connections(f, config=config)
    principal = principal_set(f, config)
    classes = []
    for comp in sorted(nx.connected_components(joined), key=min):
        vertices = sorted(comp)
        members = [v for v in vertices if v in principal]
        classes.append(NielsenClass(vertices, bool(members), members))
    return classes
