"""Topological representatives, strata and filtrations."""

import json
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Sequence

import networkx as nx
import numpy as np

from train_track_builder.core.exceptions import (
    NotInvariantError,
    NotInvertibleError,
    NotRealizableError,
    ParseError,
    StructuralError,
)
from train_track_builder.graphs.automorphism import Automorphism
from train_track_builder.graphs.graph import MarkedGraph
from train_track_builder.graphs.words import Word, inverse, reduce_word, root, split_cyclic
from train_track_builder.toprep.perron import PFValue, is_irreducible, pf_eigenvalue


class StratumKind:
    """Constants for stratum types."""

    EG = "EG"
    NEG_FIXED = "NEG-fixed"
    NEG_LINEAR = "NEG-linear"
    NEG_NONLINEAR = "NEG-nonlinear"
    NEG = "NEG"  # periodic permutation of several edges
    ZERO = "ZERO"


@dataclass(frozen=True)
class Stratum:
    edges: tuple[int, ...]
    kind: str
    matrix: tuple[tuple[int, ...], ...]
    pf: PFValue | None = None
    axis: Word = ()  # root w of a linear edge, f(E) = E w^d
    exponent: int = 0

    @property
    def is_eg(self) -> bool:
        return self.kind == StratumKind.EG

    @property
    def is_zero(self) -> bool:
        return self.kind == StratumKind.ZERO

    @property
    def is_neg(self) -> bool:
        return self.kind not in (StratumKind.EG, StratumKind.ZERO)


@dataclass(frozen=True)
class Filtration:
    """Strata listed bottom-up; ``G_r`` is the union of the first ``r`` strata."""

    strata: tuple[Stratum, ...]

    def __len__(self) -> int:
        return len(self.strata)

    def __iter__(self):
        return iter(self.strata)

    def __getitem__(self, r: int) -> Stratum:
        return self.strata[r]

    def element(self, r: int) -> frozenset[int]:
        """Edges of ``G_r`` (the first ``r+1`` strata, 0-based ``r``)."""
        out: set[int] = set()
        for s in self.strata[: r + 1]:
            out.update(s.edges)
        return frozenset(out)

    def below(self, r: int) -> frozenset[int]:
        return self.element(r - 1) if r > 0 else frozenset()

    def height(self, e: int) -> int:
        for i, s in enumerate(self.strata):
            if abs(e) in s.edges:
                return i
        raise StructuralError(f"edge {e} is in no stratum")

    def path_height(self, path: Sequence[int]) -> int:
        return max((self.height(x) for x in path), default=-1)


@dataclass(frozen=True, eq=False)
class TopRep:
    """A homotopy equivalence ``f: G → G`` sending vertices to vertices and edges to tight paths."""

    graph: MarkedGraph
    vertex_map: tuple[int, ...]
    edge_images: tuple[Word, ...]
    filtration: Filtration | None = None
    realized: tuple[frozenset[int], ...] = field(default=())

    def __post_init__(self):
        g = self.graph
        if len(self.vertex_map) != g.num_vertices or len(self.edge_images) != g.num_edges:
            raise StructuralError("vertex or edge image tables have the wrong size")
        for k, img in enumerate(self.edge_images, start=1):
            g.check_path(img)
            if reduce_word(img) != tuple(img):
                raise StructuralError(f"image of {g.name(k)} is not tight")
            start = self.vertex_map[g.init(k)]
            end = self.vertex_map[g.term(k)]
            if img:
                if g.init(img[0]) != start or g.term(img[-1]) != end:
                    raise StructuralError(f"image of {g.name(k)} does not join the images of its endpoints")
            elif start != end:
                raise StructuralError(f"edge {g.name(k)} collapses but its endpoints have distinct images")

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    @classmethod
    def from_automorphism(cls, phi: Automorphism) -> "TopRep":
        graph = MarkedGraph.rose(phi.rank, phi.names)
        return cls(graph, (0,), phi.images)

    @classmethod
    def from_json(cls, data: dict | str) -> "TopRep":
        if isinstance(data, str):
            try:
                data = json.loads(data)
            except json.JSONDecodeError as e:
                raise ParseError(f"invalid JSON: {e.msg}", e.pos) from e
        graph = MarkedGraph.from_json(data)
        try:
            raw = data["images"]
        except KeyError as e:
            raise ParseError("representative JSON needs 'images'") from e
        images = tuple(graph.parse(raw[name]) for name in graph.edge_names.names)
        index = {name: i for i, name in enumerate(graph.vertex_names)}
        vmap: list[int | None] = [None] * graph.num_vertices
        for name, target in data.get("vertex_images", {}).items():
            vmap[index[name]] = index[target]
        for k, img in enumerate(images, start=1):
            if img:
                for v, w in ((graph.init(k), graph.init(img[0])), (graph.term(k), graph.term(img[-1]))):
                    if vmap[v] is None:
                        vmap[v] = w
        if any(v is None for v in vmap):
            raise ParseError("vertex_images required for vertices met only by collapsed edges")
        f = cls(graph, tuple(vmap), images)  # type: ignore[arg-type]
        f.automorphism()
        return f

    def to_json(self) -> dict:
        out = self.graph.to_json()
        out["images"] = {self.graph.name(k): self.graph.format(img) for k, img in enumerate(self.edge_images, start=1)}
        out["vertex_images"] = {
            self.graph.vertex_names[v]: self.graph.vertex_names[w] for v, w in enumerate(self.vertex_map)
        }
        if self.filtration is not None:
            out["strata"] = [
                {"edges": [self.graph.name(e) for e in s.edges], "kind": s.kind, "pf": float(s.pf) if s.pf else None}
                for s in self.filtration
            ]
        return out

    def with_filtration(self, filtration: Filtration) -> "TopRep":
        return replace(self, filtration=filtration)

    # ------------------------------------------------------------------
    # Maps
    # ------------------------------------------------------------------

    def image(self, e: int) -> Word:
        img = self.edge_images[abs(e) - 1]
        return img if e > 0 else inverse(img)

    def map_path(self, path: Sequence[int], circuit: bool = False) -> Word:
        out: list[int] = []
        for x in path:
            out.extend(self.image(x))
        if circuit:
            return split_cyclic(out)[1]
        return reduce_word(out)

    def iterate_path(self, path: Sequence[int], k: int) -> Word:
        for _ in range(k):
            path = self.map_path(path)
        return tuple(path)

    def power(self, k: int) -> "TopRep":
        """The iterate ``f^k`` on the same marked graph, without filtration."""
        if k < 1:
            raise StructuralError("iterates start at 1")
        vmap = tuple(range(self.graph.num_vertices))
        for _ in range(k):
            vmap = tuple(self.vertex_map[v] for v in vmap)
        images = tuple(self.iterate_path((e,), k) for e in self.graph.edges())
        return TopRep(self.graph, vmap, images)

    def vertex_image(self, v: int) -> int:
        return self.vertex_map[v]

    def df(self, d: int) -> int | None:
        """Derivative on directions: first edge of the image, None if the edge collapses."""
        img = self.image(d)
        return img[0] if img else None

    def df_power(self, d: int, k: int) -> int | None:
        for _ in range(k):
            if d is None:
                return None
            d = self.df(d)
        return d

    def is_legal_turn(self, d1: int, d2: int) -> bool:
        """A turn is illegal when some iterate of Df identifies its directions."""
        seen = set()
        while (d1, d2) not in seen:
            if d1 is None or d2 is None:
                return True
            if d1 == d2:
                return False
            seen.add((d1, d2))
            d1, d2 = self.df(d1), self.df(d2)
        return True

    def turns(self, path: Sequence[int]) -> list[tuple[int, int]]:
        return [(-path[i], path[i + 1]) for i in range(len(path) - 1)]

    def is_legal(self, path: Sequence[int], stratum: int | None = None) -> bool:
        """Legal (or r-legal: only turns between edges of ``stratum`` are tested)."""
        for d1, d2 in self.turns(path):
            if stratum is not None and self.filtration is not None:
                s = self.filtration[stratum].edges
                if abs(d1) not in s or abs(d2) not in s:
                    continue
            if not self.is_legal_turn(d1, d2):
                return False
        return True

    # ------------------------------------------------------------------
    # Marking
    # ------------------------------------------------------------------

    def default_rho(self) -> Word:
        """Tree path from base to the image of base."""
        return self.graph.tree_path(self.vertex_map[self.graph.base])

    def automorphism(self, rho: Sequence[int] | None = None) -> Automorphism:
        """Automorphism of F_n induced through the marking by the lift given by ``rho``."""
        g = self.graph
        if g.marking is None or g.generators is None:
            raise StructuralError("representative has no marking")
        rho = self.default_rho() if rho is None else tuple(rho)
        images = []
        for loop in g.marking:
            images.append(g.unmark(reduce_word(rho + self.map_path(loop) + inverse(rho))))
        phi = Automorphism(g.generators, tuple(images))
        try:
            phi.inverse()
        except NotInvertibleError as e:
            raise NotInvertibleError("map is not a homotopy equivalence") from e
        return phi

    # ------------------------------------------------------------------
    # Transition data
    # ------------------------------------------------------------------

    @cached_property
    def transition_matrix(self) -> np.ndarray:
        """``M[i][j]`` counts crossings of edge ``j+1`` by the image of edge ``i+1``."""
        n = self.graph.num_edges
        m = np.zeros((n, n), dtype=np.int64)
        for i, img in enumerate(self.edge_images):
            for x in img:
                m[i, abs(x) - 1] += 1
        return m

    def lambdas(self) -> tuple[float, ...]:
        """PF eigenvalues of the EG strata, decreasing."""
        if self.filtration is None:
            return ()
        return tuple(sorted((float(s.pf) for s in self.filtration if s.is_eg and s.pf is not None), reverse=True))

    def fixed_vertices(self) -> list[int]:
        return [v for v, w in enumerate(self.vertex_map) if v == w]

    def is_fixed_edge(self, e: int) -> bool:
        return self.image(abs(e)) == (abs(e),)

    def num_eg_strata(self) -> int:
        return 0 if self.filtration is None else sum(1 for s in self.filtration if s.is_eg)

    def format(self, path: Sequence[int]) -> str:
        return self.graph.format(path) or "1"

    def __str__(self) -> str:
        return "; ".join(
            f"{self.graph.name(k)}->{self.format(img)}" for k, img in enumerate(self.edge_images, start=1)
        )


# ----------------------------------------------------------------------
# Operations
# ----------------------------------------------------------------------


def transition_matrices(f: TopRep) -> list[np.ndarray]:
    """One transition submatrix per stratum, bottom up.

    The full matrix is ``f.transition_matrix``; an unfiltered map is refined first.
    """
    if f.filtration is None:
        f = refine_filtration(f)
    assert f.filtration is not None
    full = f.transition_matrix
    out = []
    for s in f.filtration:
        idx = [e - 1 for e in s.edges]
        out.append(full[np.ix_(idx, idx)])
    return out


def classify_stratum(f: TopRep, edges: Sequence[int]) -> Stratum:
    edges = tuple(sorted(edges))
    idx = [e - 1 for e in edges]
    sub = f.transition_matrix[np.ix_(idx, idx)]
    matrix = tuple(tuple(int(x) for x in row) for row in sub)
    if not is_irreducible(sub):
        return Stratum(edges, StratumKind.ZERO, matrix)
    pf = pf_eigenvalue(sub)
    if pf > 1:
        return Stratum(edges, StratumKind.EG, matrix, pf)
    if len(edges) > 1:
        return Stratum(edges, StratumKind.NEG, matrix, pf)
    e = edges[0]
    img = f.image(e)
    if img == (e,):
        return Stratum(edges, StratumKind.NEG_FIXED, matrix, pf)
    if img and img[0] == e and e not in img[1:] and -e not in img[1:]:
        u = img[1:]
        closed = u and f.graph.init(u[0]) == f.graph.term(u[-1])
        if closed and f.map_path(u) == u:
            p, c = split_cyclic(u)
            w0, d = root(c)
            w = reduce_word(p + w0 + inverse(p))
            return Stratum(edges, StratumKind.NEG_LINEAR, matrix, pf, w, d)
    return Stratum(edges, StratumKind.NEG_NONLINEAR, matrix, pf)


def refine_filtration(f: TopRep, systems: Sequence = (), realize: Sequence[frozenset[int]] = ()) -> TopRep:
    """Maximal filtration by strongly connected components of the edge dependency digraph.

    Strata are ordered so every stratum comes after the strata its image meets;
    ties go to edges of the smallest subgraph in ``realize`` (when given) and
    then to the smallest edge id. Each free factor system in ``systems`` must be
    invariant and represented by a filtration element.
    """
    from train_track_builder.ffs.system import FreeFactorSystem, apply_automorphism

    g = f.graph
    dep = nx.DiGraph()
    dep.add_nodes_from(g.edges())
    for k in g.edges():
        for x in f.image(k):
            dep.add_edge(k, abs(x))
    cond = nx.condensation(dep)
    members = cond.graph["mapping"]
    scc_edges: dict[int, tuple[int, ...]] = {}
    for e, c in members.items():
        scc_edges.setdefault(c, ())
        scc_edges[c] = tuple(sorted(scc_edges[c] + (e,)))

    phi = f.automorphism() if systems else None
    targets = list(realize) or list(f.realized)
    for system in systems:
        if not apply_automorphism(phi, system).same_as(system):
            raise NotInvariantError("free factor system is not invariant")
        if not any(FreeFactorSystem.of_subgraph(g, k).same_as(system) for k in targets):
            targets.append(_maximal_subgraph_carried(f, system, cond, scc_edges))
    targets.sort(key=len)

    def level(c: int) -> int:
        for i, k in enumerate(targets):
            if set(scc_edges[c]) <= k:
                return i
        return len(targets)

    # reversed condensation: lower strata first
    order_graph = cond.reverse(copy=True)
    order = list(nx.lexicographical_topological_sort(order_graph, key=lambda c: (level(c), scc_edges[c][0])))
    strata = tuple(classify_stratum(f, scc_edges[c]) for c in order)
    filtration = Filtration(strata)
    result = replace(f, filtration=filtration, realized=tuple(frozenset(k) for k in targets))
    for system in systems:
        if not any(
            FreeFactorSystem.of_subgraph(g, filtration.element(r)).same_as(system) for r in range(len(filtration))
        ):
            raise NotRealizableError("free factor system is not represented by a filtration element")
    return result


def _maximal_subgraph_carried(f: TopRep, system, cond: nx.DiGraph, scc_edges: dict) -> frozenset[int]:
    from train_track_builder.ffs.system import FreeFactorSystem

    out: set[int] = set()
    for c in cond.nodes:
        down = set()
        for d in nx.descendants(cond, c) | {c}:
            down.update(scc_edges[d])
        if FreeFactorSystem.of_subgraph(f.graph, frozenset(down)).carried_by(system):
            out |= down
    return frozenset(out)


def core_subgraph(graph: MarkedGraph, edges: frozenset[int]) -> frozenset[int]:
    """Edges of the core of the subgraph spanned by ``edges``."""
    alive = set(edges)
    changed = True
    while changed:
        changed = False
        valence: dict[int, int] = {}
        for k in alive:
            valence[graph.init(k)] = valence.get(graph.init(k), 0) + 1
            valence[graph.term(k)] = valence.get(graph.term(k), 0) + 1
        for k in list(alive):
            if valence[graph.init(k)] == 1 or valence[graph.term(k)] == 1:
                alive.discard(k)
                changed = True
    return frozenset(alive)


def subgraph_vertices(graph: MarkedGraph, edges) -> set[int]:
    out = set()
    for k in edges:
        out.add(graph.init(k))
        out.add(graph.term(k))
    return out
