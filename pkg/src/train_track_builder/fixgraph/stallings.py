"""Fixed-point Stallings graphs S(f), PS(f) and CS(f) of a CT."""

from dataclasses import dataclass, field, replace

import networkx as nx

from train_track_builder.core.config import Config, get_config
from train_track_builder.core.exceptions import DegenerateRayError, StructuralError
from train_track_builder.core.logger import get_logger
from train_track_builder.core.utils import to_dot
from train_track_builder.graphs.ggraph import GGraph
from train_track_builder.graphs.words import Word, canonical_circuit, cyclic_reduce, inverse, reduce_word
from train_track_builder.nielsen.inps import find_eg_inps
from train_track_builder.nielsen.principal import principal_set
from train_track_builder.nielsen.rays import Ray, rays_common_tail
from train_track_builder.toprep.toprep import StratumKind, TopRep, refine_filtration


class Variant:
    """Constants for the three fixed-point graphs."""

    S = "S"
    PS = "PS"
    CS = "CS"

    ALL = (S, PS, CS)


class RayKind:
    EG = "EG"
    NEG = "NEG"


@dataclass
class Lollipop:
    """Stem labeled by a linear edge ``E`` and a circle labeled by its axis."""

    edge: int
    axis: Word
    exponent: int
    tip: int  # vertex of the fixed-point graph where the circle is attached


@dataclass
class RayAttachment:
    vertex: int
    edge: int
    kind: str
    ray: Ray = field(repr=False)
    end: int = 0  # rays with the same end share a tail

    def to_json(self, f: TopRep, depth: int) -> dict:
        return {
            "vertex": self.vertex,
            "edge": f.graph.name(self.edge),
            "kind": self.kind,
            "end": self.end,
            "prefix": f.format(self.ray.prefix(depth)),
        }


@dataclass
class FixedPointGraph:
    """A graph immersed in ``G`` whose paths between stage-one vertices are the Nielsen paths of ``f``.

    ``graph`` carries the edgelets; stage-one vertices are copies of fixed
    vertices of ``G``. Rays are stored by generator and only expanded on demand.
    """

    f: TopRep
    variant: str
    graph: GGraph
    vertex_of: dict[int, int]
    principal: frozenset[int]
    lollipops: list[Lollipop] = field(default_factory=list)
    inp_edges: list[Word] = field(default_factory=list)
    rays: list[RayAttachment] = field(default_factory=list)

    @property
    def stage1(self) -> frozenset[int]:
        return frozenset(self.vertex_of.values())

    def components(self) -> list[list[int]]:
        return self.graph.component_vertex_sets()

    def component_of(self, v: int) -> list[int]:
        return next(c for c in self.components() if v in c)

    def component_rank(self, comp: list[int]) -> int:
        return self.graph.subgraph(comp).rank

    def fundamental_group(self, v: int) -> list[Word]:
        """Free basis of π₁ at the vertex ``v`` as closed paths of ``G``."""
        return self.graph.generators(v)

    def rays_at(self, comp: list[int]) -> list[RayAttachment]:
        members = set(comp)
        return [r for r in self.rays if r.vertex in members]

    def ends(self, comp: list[int]) -> int:
        return len({r.end for r in self.rays_at(comp)})

    def neg_ends(self, comp: list[int]) -> int:
        return len({r.end for r in self.rays_at(comp) if r.kind == RayKind.NEG})

    def circuits(self, max_length: int) -> list[Word]:
        """Immersed circuits up to ``max_length``, as circuits of ``G``."""
        return self.graph.circuits(max_length)

    def has_circuits(self) -> bool:
        return bool(self.graph.core().edges)

    def is_immersion(self) -> bool:
        return self.graph.is_immersion()

    def valence(self, v: int) -> int:
        return self.graph.valence(v) + sum(1 for r in self.rays if r.vertex == v)

    def conjugacy_class(self, circuit: Word) -> Word:
        """The conjugacy class in ``F_n`` read off a circuit of ``G``."""
        g = self.f.graph
        return cyclic_reduce(g.unmark(g.based_loop(g.init(circuit[0]), circuit)))

    def to_json(self, depth: int | None = None) -> dict:
        depth = depth or get_config().DEPTH
        g = self.f.graph
        comps = []
        for comp in self.components():
            vertex = comp[0]
            comps.append(
                {
                    "vertices": len(comp),
                    "rank": self.component_rank(comp),
                    "principal": any(v in self.principal for v in comp),
                    "generators": [self.f.format(w) for w in self.fundamental_group(vertex)],
                    "ends": self.ends(comp),
                }
            )
        return {
            "variant": self.variant,
            "stage1": sorted(g.vertex_names[v] for v in self.vertex_of),
            "lollipops": [{"edge": g.name(lp.edge), "axis": self.f.format(lp.axis)} for lp in self.lollipops],
            "inps": [self.f.format(rho) for rho in self.inp_edges],
            "components": comps,
            "rays": [r.to_json(self.f, depth) for r in self.rays],
        }

    def to_dot(self, depth: int | None = None) -> str:
        """DOT source with each ray drawn as a path truncated at ``depth`` edges."""
        depth = depth or get_config().DEPTH
        base = self.f.graph
        vertices = [f"{i}:{base.vertex_names[b]}" for i, b in enumerate(self.graph.vertex_images)]
        edges = [(vertices[u], vertices[v], base.name(label)) for u, v, label in self.graph.edges]
        for k, r in enumerate(self.rays):
            prev = vertices[r.vertex]
            for i, x in enumerate(r.ray.prefix(depth)):
                node = f"r{k}.{i + 1}"
                vertices.append(node)
                edges.append((prev, node, base.name(x)))
                prev = node
        return to_dot(vertices, edges, name=self.variant)


class _Builder:
    def __init__(self, f: TopRep):
        self.f = f
        self.images: list[int] = []
        self.edges: list[tuple[int, int, int]] = []

    def vertex(self, image: int) -> int:
        self.images.append(image)
        return len(self.images) - 1

    def path(self, start: int, labels: Word, end: int | None = None) -> int:
        """Subdivided path labeled ``labels`` from ``start``; returns its last vertex."""
        g = self.f.graph
        prev = start
        for i, x in enumerate(labels):
            last = i == len(labels) - 1
            nxt = end if last and end is not None else self.vertex(g.term(x))
            self.edges.append((prev, nxt, x))
            prev = nxt
        return prev


def stallings_fixed_graph(f: TopRep, variant: str = Variant.S, config: Config | None = None) -> FixedPointGraph:
    """S(f) from fixed vertices, fixed edges, lollipops of linear edges and iNp edges.

    ``PS`` drops the components that are a single non-principal vertex.
    """
    if variant not in (Variant.S, Variant.PS):
        raise StructuralError(f"unknown fixed-point graph variant {variant}")
    cfg = config or get_config()
    log = get_logger()
    if f.filtration is None:
        f = refine_filtration(f)
    assert f.filtration is not None
    g = f.graph
    principal = principal_set(f, cfg)

    fixed_edges = [e for e in g.edges() if f.is_fixed_edge(e)]
    linear = [s for s in f.filtration if s.kind == StratumKind.NEG_LINEAR]
    inps: list[Word] = []
    for r, s in enumerate(f.filtration):
        if s.is_eg:
            for rho in find_eg_inps(f, r, cfg):
                if inverse(rho) not in inps:
                    inps.append(rho)

    touched = {g.init(e) for e in fixed_edges} | {g.term(e) for e in fixed_edges}
    touched |= {g.init(s.edges[0]) for s in linear}
    touched |= {g.init(rho[0]) for rho in inps} | {g.term(rho[-1]) for rho in inps}

    b = _Builder(f)
    vertex_of: dict[int, int] = {}
    for v in f.fixed_vertices():
        if variant == Variant.PS and v not in touched and v not in principal:
            continue
        vertex_of[v] = b.vertex(v)
    for e in fixed_edges:
        b.path(vertex_of[g.init(e)], (e,), vertex_of[g.term(e)])

    lollipops = []
    for s in linear:
        e = s.edges[0]
        if g.init(e) not in vertex_of:
            log.debug(f"linear edge {g.name(e)} does not start at a fixed vertex")
            continue
        tip = b.path(vertex_of[g.init(e)], (e,))
        b.path(tip, s.axis, tip)
        lollipops.append(Lollipop(e, s.axis, s.exponent, tip))
    for rho in inps:
        u, w = g.init(rho[0]), g.term(rho[-1])
        if u in vertex_of and w in vertex_of:
            b.path(vertex_of[u], rho, vertex_of[w])

    graph = GGraph(g, tuple(b.images), tuple(b.edges))
    stage_principal = frozenset(vertex_of[v] for v in principal if v in vertex_of)
    out = FixedPointGraph(f, variant, graph, vertex_of, stage_principal, lollipops, inps)
    if not out.is_immersion():
        log.warning(f"{variant}(f) is not immersed; the representative is probably not a CT")
    log.debug(f"{variant}(f): {graph.num_vertices} vertices, {len(graph.edges)} edgelets")
    return out


def eigenray_candidates(f: TopRep, config: Config | None = None) -> list[tuple[int, str]]:
    """Oriented edges at principal vertices generating an eigenray, with the kind of their stratum."""
    assert f.filtration is not None
    g = f.graph
    principal = principal_set(f, config)
    out = []
    for e in g.oriented_edges():
        img = f.image(e)
        if g.init(e) not in principal or f.is_fixed_edge(e) or len(img) < 2 or img[0] != e:
            continue
        s = f.filtration[f.filtration.height(e)]
        if s.kind == StratumKind.NEG_LINEAR:
            continue
        out.append((e, RayKind.EG if s.is_eg else RayKind.NEG))
    return out


def extend_to_rays(psf: FixedPointGraph, config: Config | None = None) -> FixedPointGraph:
    """CS(f): PS(f) with the eigenrays of edges at principal vertices attached.

    Rays attached to one component that share a tail count as a single end.
    """
    cfg = config or get_config()
    log = get_logger()
    if psf.variant != Variant.PS:
        raise StructuralError("rays are attached to PS(f)")
    f = psf.f
    rays: list[RayAttachment] = []
    for e, kind in eigenray_candidates(f, cfg):
        v = psf.vertex_of.get(f.graph.init(e))
        if v is None:
            continue
        try:
            ray = Ray.eigenray(f, e)
        except (DegenerateRayError, StructuralError) as exc:
            log.debug(f"no eigenray for {f.graph.name(e)}: {exc}")
            continue
        rays.append(RayAttachment(v, e, kind, ray))

    tails = nx.Graph()
    tails.add_nodes_from(range(len(rays)))
    comp_of = {v: i for i, comp in enumerate(psf.components()) for v in comp}
    for i, r1 in enumerate(rays):
        for j in range(i + 1, len(rays)):
            r2 = rays[j]
            if comp_of[r1.vertex] == comp_of[r2.vertex] and rays_common_tail(f, r1.ray, r2.ray, cfg) is not None:
                tails.add_edge(i, j)
    for end, members in enumerate(sorted(nx.connected_components(tails), key=min)):
        for i in members:
            rays[i].end = end
    log.debug(f"CS(f): {len(rays)} rays, {len({r.end for r in rays})} ends")
    return replace(psf, variant=Variant.CS, rays=rays)


def fixed_conjugacy_classes(f: TopRep, max_length: int, config: Config | None = None) -> list[Word]:
    """Fixed conjugacy classes read off circuits of S(f) up to ``max_length``, each class once."""
    s = stallings_fixed_graph(f, Variant.S, config)
    seen: set[Word] = set()
    out = []
    for circuit in sorted(s.circuits(max_length), key=lambda c: (len(c), c)):
        word = s.conjugacy_class(circuit)
        key = canonical_circuit(word)
        if word and key not in seen:
            seen.add(key)
            out.append(word)
    return out


def closed_path_at(f: TopRep, eta: Word, loop: Word) -> Word:
    """The word of ``η·loop·η̄`` for a path ``η`` from the base."""
    return f.graph.unmark(reduce_word(eta + loop + inverse(eta)))


__all__ = [
    "FixedPointGraph",
    "Lollipop",
    "RayAttachment",
    "RayKind",
    "Variant",
    "closed_path_at",
    "eigenray_candidates",
    "extend_to_rays",
    "fixed_conjugacy_classes",
    "stallings_fixed_graph",
]
