"""Free factor systems as collections of core Stallings graphs over the rose."""

from dataclasses import dataclass
from functools import cache, cached_property
from typing import Iterable, Sequence

from train_track_builder.core.exceptions import TrivialSubgroupError
from train_track_builder.graphs.automorphism import Automorphism
from train_track_builder.graphs.ggraph import GGraph, pullback_core, stallings_graph
from train_track_builder.graphs.graph import MarkedGraph
from train_track_builder.graphs.words import Alphabet, Word


@cache
def rose(names: tuple[str, ...]) -> MarkedGraph:
    return MarkedGraph.rose(len(names), Alphabet(names))


@dataclass(frozen=True, eq=False)
class FreeFactorSystem:
    """Conjugacy classes of subgroups, one core graph per component.

    Operations never check that the components really are free factors; the
    constructors used by the pipeline only produce free factor systems.
    """

    names: Alphabet
    components: tuple[GGraph, ...]

    @property
    def rank(self) -> int:
        return len(self.names)

    @property
    def base(self) -> MarkedGraph:
        return rose(self.names.names)

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    @classmethod
    def empty(cls, names: Alphabet) -> "FreeFactorSystem":
        return cls(names, ())

    @classmethod
    def full(cls, names: Alphabet) -> "FreeFactorSystem":
        return cls.from_generators(names, [[(i,) for i in range(1, len(names) + 1)]])

    @classmethod
    def from_generators(cls, names: Alphabet, generators: Iterable[Sequence[Sequence[int]]]) -> "FreeFactorSystem":
        base = rose(names.names)
        comps = []
        for gens in generators:
            try:
                comps.append(stallings_graph(gens, base))
            except TrivialSubgroupError:
                continue
        return cls(names, tuple(comps)).deduplicated()

    @classmethod
    def parse(cls, names: Alphabet, text: str) -> "FreeFactorSystem":
        """``<a>, <b, cAB>`` or ``{}`` for the empty system."""
        text = text.strip()
        if text in ("", "{}", "∅", "empty"):
            return cls.empty(names)
        groups = []
        for chunk in text.replace("⟨", "<").replace("⟩", ">").split(">"):
            chunk = chunk.strip().lstrip(",").strip()
            if not chunk:
                continue
            chunk = chunk.lstrip("<")
            groups.append([names.parse(w) for w in chunk.split(",") if w.strip()])
        return cls.from_generators(names, groups)

    @classmethod
    def of_subgraph(cls, graph: MarkedGraph, edges: Iterable[int]) -> "FreeFactorSystem":
        """Free factor system ``[K]`` of a subgraph, read through the marking."""
        edges = frozenset(abs(e) for e in edges)
        names = graph.generators
        assert names is not None
        base = rose(names.names)
        comps = []
        for vertices in _edge_components(graph, edges):
            comp_edges = {k for k in edges if graph.init(k) in vertices}
            v = min(vertices)
            basis = graph.cycle_basis(comp_edges, v)
            if not basis:
                continue
            eta = graph.path_between(graph.base, v)
            words = [graph.unmark(graph.based_loop(v, loop, eta)) for loop in basis]
            comps.append(stallings_graph(words, base))
        return cls(names, tuple(comps))

    def deduplicated(self) -> "FreeFactorSystem":
        seen: dict[tuple, GGraph] = {}
        for c in self.components:
            seen.setdefault(c.canonical, c)
        return FreeFactorSystem(self.names, tuple(seen[k] for k in sorted(seen)))

    # ------------------------------------------------------------------
    # Queries
    # ------------------------------------------------------------------

    @property
    def complexity(self) -> int:
        return sum(c.complexity for c in self.components)

    @cached_property
    def canonical(self) -> tuple:
        return tuple(sorted(c.canonical for c in self.components))

    def same_as(self, other: "FreeFactorSystem") -> bool:
        return self.canonical == other.canonical

    def is_empty(self) -> bool:
        return not self.components

    def is_proper(self) -> bool:
        return all(c.rank < self.rank for c in self.components)

    def is_full(self) -> bool:
        return len(self.components) == 1 and self.components[0].rank == self.rank

    def carried_by(self, other: "FreeFactorSystem") -> bool:
        return carries(self, other)

    def generators(self) -> list[list[Word]]:
        return [c.generators(0) for c in self.components]

    def format(self) -> str:
        if not self.components:
            return "{}"
        parts = []
        for gens in self.generators():
            parts.append("<" + ", ".join(self.names.format(w) for w in gens) + ">")
        return ", ".join(parts)

    def to_json(self) -> list[list[str]]:
        return [[self.names.format(w) for w in gens] for gens in self.generators()]

    def __str__(self) -> str:
        return self.format()


def _edge_components(graph: MarkedGraph, edges: frozenset[int]) -> list[set[int]]:
    import networkx as nx

    g = nx.MultiGraph()
    for k in edges:
        g.add_edge(graph.init(k), graph.term(k))
    return [set(c) for c in nx.connected_components(g)]


def carries(f1: FreeFactorSystem, f2: FreeFactorSystem) -> bool:
    """``F1 ⊑ F2``: each component of F1 is conjugate into a component of F2."""
    for c in f1.components:
        if not any(c.maps_into(d) for d in f2.components):
            return False
    return True


def meet(f1: FreeFactorSystem, f2: FreeFactorSystem) -> FreeFactorSystem:
    """Components of all pullback cores, deduplicated."""
    comps: list[GGraph] = []
    for a in f1.components:
        for b in f2.components:
            product = pullback_core(a, b)
            for comp in product.components():
                if comp.edges:
                    comps.append(comp)
    result = FreeFactorSystem(f1.names, tuple(comps)).deduplicated()
    maximal = [
        c
        for c in result.components
        if not any(d is not c and c.maps_into(d) and not d.maps_into(c) for d in result.components)
    ]
    return FreeFactorSystem(f1.names, tuple(maximal))


def apply_automorphism(phi: Automorphism, system: FreeFactorSystem) -> FreeFactorSystem:
    """``φ(F)``: images of component generators, refolded."""
    base = system.base
    comps = tuple(stallings_graph([phi(w) for w in gens], base) for gens in system.generators())
    return FreeFactorSystem(system.names, comps).deduplicated()


def is_invariant(phi: Automorphism, system: FreeFactorSystem) -> bool:
    return apply_automorphism(phi, system).same_as(system)
