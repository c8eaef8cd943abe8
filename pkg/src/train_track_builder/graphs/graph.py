"""Finite marked graphs and tightened edge paths."""

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import networkx as nx

from train_track_builder.core.exceptions import ParseError, StructuralError
from train_track_builder.graphs.words import Alphabet, Word, inverse, is_cyclically_reduced, reduce_word, split_cyclic


@dataclass(frozen=True)
class EdgePath:
    """A path of oriented edges; circuits are read cyclically."""

    edges: Word
    circuit: bool = False

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)

    def reversed(self) -> "EdgePath":
        return EdgePath(inverse(self.edges), self.circuit)


@dataclass(frozen=True, eq=False)
class MarkedGraph:
    """Graph with oriented edges ``±k`` and an optional marking from the rose.

    ``tails[k-1]`` and ``heads[k-1]`` are the endpoints of the positive edge ``k``.
    ``marking[i]`` is a closed path at ``base`` representing generator ``i+1``.
    """

    edge_names: Alphabet
    vertex_names: tuple[str, ...]
    tails: tuple[int, ...]
    heads: tuple[int, ...]
    base: int = 0
    generators: Alphabet | None = None
    marking: tuple[Word, ...] | None = None

    def __post_init__(self):
        if len(self.tails) != len(self.edge_names) or len(self.heads) != len(self.edge_names):
            raise StructuralError("edge endpoint tables do not match the edge names")
        nv = len(self.vertex_names)
        for v in self.tails + self.heads:
            if not 0 <= v < nv:
                raise StructuralError(f"edge endpoint {v} is not a vertex")
        if nv and not 0 <= self.base < nv:
            raise StructuralError("base vertex out of range")
        if self.marking is None and nv:
            gens, marking = self._default_marking()
            object.__setattr__(self, "generators", gens)
            object.__setattr__(self, "marking", marking)
        if self.marking is not None:
            for path in self.marking:
                self.check_path(path)
                if path and (self.init(path[0]) != self.base or self.term(path[-1]) != self.base):
                    raise StructuralError("marking paths must be closed at the base vertex")

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    @classmethod
    def rose(cls, n: int, names: Alphabet | None = None) -> "MarkedGraph":
        names = names or Alphabet.standard(n)
        return cls(
            edge_names=names,
            vertex_names=("*",),
            tails=(0,) * n,
            heads=(0,) * n,
            generators=names,
            marking=tuple((i,) for i in range(1, n + 1)),
        )

    @classmethod
    def from_json(cls, data: dict) -> "MarkedGraph":
        try:
            vertex_names = tuple(data["vertices"])
            edges = data["edges"]
        except (KeyError, TypeError) as e:
            raise ParseError(f"graph JSON is missing field {e}") from e
        index = {name: i for i, name in enumerate(vertex_names)}
        names = Alphabet(tuple(edges))
        try:
            tails = tuple(index[edges[name][0]] for name in names.names)
            heads = tuple(index[edges[name][1]] for name in names.names)
            base = index[data.get("base", vertex_names[0])]
        except KeyError as e:
            raise ParseError(f"unknown vertex {e}") from e
        generators = marking = None
        if "marking" in data:
            generators = Alphabet(tuple(data["marking"]))
            marking = tuple(names.parse(data["marking"][g]) for g in generators.names)
        return cls(names, vertex_names, tails, heads, base, generators, marking)

    def to_json(self) -> dict:
        out = {
            "vertices": list(self.vertex_names),
            "edges": {
                name: [self.vertex_names[self.tails[i]], self.vertex_names[self.heads[i]]]
                for i, name in enumerate(self.edge_names.names)
            },
            "base": self.vertex_names[self.base],
        }
        if self.marking is not None and self.generators is not None:
            out["marking"] = {g: self.format(p) for g, p in zip(self.generators.names, self.marking)}
        return out

    def with_marking(self, generators: Alphabet, marking: Sequence[Word], base: int | None = None) -> "MarkedGraph":
        return MarkedGraph(
            self.edge_names,
            self.vertex_names,
            self.tails,
            self.heads,
            self.base if base is None else base,
            generators,
            tuple(tuple(p) for p in marking),
        )

    # ------------------------------------------------------------------
    # Incidence
    # ------------------------------------------------------------------

    @property
    def num_edges(self) -> int:
        return len(self.tails)

    @property
    def num_vertices(self) -> int:
        return len(self.vertex_names)

    def edges(self) -> range:
        return range(1, self.num_edges + 1)

    def oriented_edges(self) -> list[int]:
        return [x for k in self.edges() for x in (k, -k)]

    def init(self, e: int) -> int:
        return self.tails[e - 1] if e > 0 else self.heads[-e - 1]

    def term(self, e: int) -> int:
        return self.heads[e - 1] if e > 0 else self.tails[-e - 1]

    @cached_property
    def _stars(self) -> tuple[tuple[int, ...], ...]:
        stars: list[list[int]] = [[] for _ in self.vertex_names]
        for e in self.oriented_edges():
            stars[self.init(e)].append(e)
        return tuple(tuple(s) for s in stars)

    def star(self, v: int) -> tuple[int, ...]:
        """Oriented edges (directions) with initial vertex ``v``."""
        return self._stars[v]

    def valence(self, v: int) -> int:
        return len(self.star(v))

    @cached_property
    def nx_graph(self) -> nx.MultiGraph:
        g = nx.MultiGraph()
        g.add_nodes_from(range(self.num_vertices))
        for k in self.edges():
            g.add_edge(self.init(k), self.term(k), key=k)
        return g

    def components(self) -> list[set[int]]:
        return [set(c) for c in nx.connected_components(self.nx_graph)]

    @property
    def rank(self) -> int:
        return self.num_edges - self.num_vertices + nx.number_connected_components(self.nx_graph)

    def name(self, e: int) -> str:
        return self.edge_names.letter(e)

    def format(self, path: Iterable[int]) -> str:
        return self.edge_names.format(tuple(path))

    def parse(self, text: str) -> Word:
        return self.edge_names.parse(text)

    # ------------------------------------------------------------------
    # Paths
    # ------------------------------------------------------------------

    def check_path(self, path: Sequence[int]) -> None:
        for x in path:
            if x == 0 or abs(x) > self.num_edges:
                raise StructuralError(f"unknown edge id {x}")
        for a, b in zip(path, path[1:]):
            if self.term(a) != self.init(b):
                raise StructuralError(f"edges {self.name(a)} and {self.name(b)} are not consecutive")

    def tighten(self, path: Sequence[int], circuit: bool = False) -> Word:
        self.check_path(path)
        if circuit:
            if path and self.term(path[-1]) != self.init(path[0]):
                raise StructuralError("circuit is not closed")
            return split_cyclic(path)[1]
        return reduce_word(path)

    def is_tight(self, path: Sequence[int], circuit: bool = False) -> bool:
        if circuit:
            return is_cyclically_reduced(path)
        return reduce_word(path) == tuple(path)

    # ------------------------------------------------------------------
    # Spanning tree and marking
    # ------------------------------------------------------------------

    @cached_property
    def _tree(self) -> tuple[dict[int, int], frozenset[int]]:
        """Parent edge of every vertex reachable from base (BFS) and the tree edge ids."""
        parent: dict[int, int] = {self.base: 0}
        tree: set[int] = set()
        queue = deque([self.base])
        while queue:
            v = queue.popleft()
            for e in self.star(v):
                w = self.term(e)
                if w not in parent:
                    parent[w] = e
                    tree.add(abs(e))
                    queue.append(w)
        return parent, frozenset(tree)

    def tree_path(self, v: int, start: int | None = None) -> Word:
        """Path in the spanning tree from ``start`` (default base) to ``v``."""
        parent, _ = self._tree
        if v not in parent:
            raise StructuralError(f"vertex {self.vertex_names[v]} is not connected to the base")
        out: list[int] = []
        while v != self.base:
            e = parent[v]
            out.append(e)
            v = self.init(e)
        to_v = tuple(reversed(out))
        if start is None or start == self.base:
            return to_v
        return reduce_word(inverse(self.tree_path(start)) + to_v)

    def path_between(self, u: int, v: int) -> Word | None:
        """Some tight path from ``u`` to ``v``, or None when they lie in different components."""
        if u == v:
            return ()
        seen = {u: 0}
        queue = deque([u])
        while queue:
            x = queue.popleft()
            for e in self.star(x):
                y = self.term(e)
                if y not in seen:
                    seen[y] = e
                    if y == v:
                        out = []
                        while y != u:
                            out.append(seen[y])
                            y = self.init(seen[y])
                        return tuple(reversed(out))
                    queue.append(y)
        return None

    @property
    def tree_edges(self) -> frozenset[int]:
        return self._tree[1]

    def non_tree_edges(self) -> list[int]:
        return [k for k in self.edges() if k not in self.tree_edges]

    def loop_of(self, e: int) -> Word:
        """Closed path at base through the non-tree edge ``e``."""
        return reduce_word(self.tree_path(self.init(e)) + (e,) + inverse(self.tree_path(self.term(e))))

    def _default_marking(self) -> tuple[Alphabet, tuple[Word, ...]]:
        gens = [k for k in self.edges() if k not in self.tree_edges]
        names = Alphabet(tuple(self.edge_names.names[k - 1] for k in gens))
        return names, tuple(self.loop_of(k) for k in gens)

    def tree_coordinates(self, closed: Sequence[int]) -> Word:
        """Word in the non-tree edges (numbered 1..rank) representing a closed path at base."""
        index = {k: i for i, k in enumerate(self.non_tree_edges(), start=1)}
        out = []
        for x in closed:
            if abs(x) in index:
                out.append(index[abs(x)] if x > 0 else -index[abs(x)])
        return reduce_word(out)

    @cached_property
    def _unmarking(self):
        from train_track_builder.graphs.ggraph import AnnotatedFolding

        if self.marking is None:
            raise StructuralError("graph has no marking")
        images = [self.tree_coordinates(p) for p in self.marking]
        return AnnotatedFolding.invert(images, len(self.non_tree_edges()))

    def unmark(self, closed: Sequence[int]) -> Word:
        """Word in the marking generators for a closed path at base."""
        self.check_path(closed)
        return self._unmarking.express(self.tree_coordinates(closed))

    def mark(self, word: Sequence[int]) -> Word:
        """Tight closed path at base representing a word in the marking generators."""
        if self.marking is None:
            raise StructuralError("graph has no marking")
        out: list[int] = []
        for x in word:
            out.extend(self.marking[x - 1] if x > 0 else inverse(self.marking[-x - 1]))
        return reduce_word(out)

    def based_loop(self, v: int, closed: Sequence[int], via: Sequence[int] | None = None) -> Word:
        """Translate a closed path at ``v`` to the base along ``via`` (default: the tree path)."""
        eta = tuple(via) if via is not None else self.tree_path(v)
        return reduce_word(eta + tuple(closed) + inverse(eta))

    def cycle_basis(self, edges: set[int], v: int) -> list[Word]:
        """Free basis of π₁ of the subgraph spanned by ``edges`` (positive ids) at ``v``."""
        parent: dict[int, int] = {v: 0}
        tree: set[int] = set()
        queue = deque([v])
        while queue:
            x = queue.popleft()
            for e in self.star(x):
                if abs(e) in edges and self.term(e) not in parent:
                    parent[self.term(e)] = e
                    tree.add(abs(e))
                    queue.append(self.term(e))

        def to(x: int) -> Word:
            out = []
            while x != v:
                out.append(parent[x])
                x = self.init(parent[x])
            return tuple(reversed(out))

        basis = []
        for k in sorted(edges):
            if k in tree or self.init(k) not in parent:
                continue
            basis.append(reduce_word(to(self.init(k)) + (k,) + inverse(to(self.term(k)))))
        return basis
