"""Graphs immersed over a base graph (G-graphs), Stallings folding and pullbacks.

A G-graph component represents the conjugacy class of a finitely generated
subgroup of π₁ of the base graph; over the rose these are subgroups of F_n.
"""

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import networkx as nx

from train_track_builder.core.exceptions import NotInvertibleError, StructuralError, TrivialSubgroupError
from train_track_builder.graphs.graph import MarkedGraph
from train_track_builder.graphs.words import Word, concat, inverse, letter_key, reduce_word


@dataclass(frozen=True, eq=False)
class GGraph:
    """Graph whose edges are labeled by oriented edges of ``base_graph``.

    ``edges[i] = (tail, head, label)``; ``vertex_images[v]`` is the base vertex
    ``v`` maps to. The optional ``basepoint`` is kept through folding.
    """

    base_graph: MarkedGraph
    vertex_images: tuple[int, ...]
    edges: tuple[tuple[int, int, int], ...]
    basepoint: int | None = None

    def __post_init__(self):
        for u, v, label in self.edges:
            bg = self.base_graph
            if bg.init(label) != self.vertex_images[u] or bg.term(label) != self.vertex_images[v]:
                raise StructuralError(f"edge label {self.base_graph.name(label)} does not match its endpoints")

    @classmethod
    def empty(cls, base_graph: MarkedGraph) -> "GGraph":
        return cls(base_graph, (), ())

    @property
    def num_vertices(self) -> int:
        return len(self.vertex_images)

    @property
    def complexity(self) -> int:
        """Number of edges."""
        return len(self.edges)

    def is_empty(self) -> bool:
        return not self.edges and not self.vertex_images

    @cached_property
    def germs(self) -> tuple[tuple[tuple[int, int, int], ...], ...]:
        """Per vertex: ``(label, other endpoint, signed edge index)`` for every outgoing germ."""
        out: list[list[tuple[int, int, int]]] = [[] for _ in self.vertex_images]
        for i, (u, v, label) in enumerate(self.edges):
            out[u].append((label, v, i + 1))
            out[v].append((-label, u, -(i + 1)))
        for g in out:
            g.sort(key=lambda t: letter_key(t[0]))
        return tuple(tuple(g) for g in out)

    def valence(self, v: int) -> int:
        return len(self.germs[v])

    def step(self, v: int, label: int) -> int | None:
        for lab, w, _ in self.germs[v]:
            if lab == label:
                return w
        return None

    def is_immersion(self) -> bool:
        return all(len({g[0] for g in gs}) == len(gs) for gs in self.germs)

    @property
    def rank(self) -> int:
        g = nx.MultiGraph()
        g.add_nodes_from(range(self.num_vertices))
        g.add_edges_from((u, v) for u, v, _ in self.edges)
        return len(self.edges) - self.num_vertices + nx.number_connected_components(g)

    # ------------------------------------------------------------------
    # Components and cores
    # ------------------------------------------------------------------

    def component_vertex_sets(self) -> list[list[int]]:
        g = nx.Graph()
        g.add_nodes_from(range(self.num_vertices))
        g.add_edges_from((u, v) for u, v, _ in self.edges)
        return sorted((sorted(c) for c in nx.connected_components(g)), key=lambda c: c[0])

    def subgraph(self, vertices: Iterable[int], basepoint: int | None = None) -> "GGraph":
        keep = sorted(set(vertices))
        index = {v: i for i, v in enumerate(keep)}
        edges = tuple((index[u], index[v], label) for u, v, label in self.edges if u in index and v in index)
        bp = index.get(basepoint) if basepoint is not None else None
        return GGraph(self.base_graph, tuple(self.vertex_images[v] for v in keep), edges, bp)

    def components(self) -> list["GGraph"]:
        return [self.subgraph(c, self.basepoint if self.basepoint in c else None) for c in self.component_vertex_sets()]

    def core(self, keep_basepoint: bool = False) -> "GGraph":
        """Delete valence-one and isolated vertices until none remain."""
        alive = set(range(self.num_vertices))
        live_edges = set(range(len(self.edges)))
        valence = [self.valence(v) for v in range(self.num_vertices)]
        queue = deque(v for v in alive if valence[v] <= 1)
        while queue:
            v = queue.popleft()
            if v not in alive or valence[v] > 1 or (keep_basepoint and v == self.basepoint):
                continue
            alive.discard(v)
            for _, w, signed in self.germs[v]:
                i = abs(signed) - 1
                if i in live_edges:
                    live_edges.discard(i)
                    valence[w] -= 1
                    valence[v] -= 1
                    if w in alive and valence[w] <= 1:
                        queue.append(w)
        keep = sorted(alive)
        index = {v: i for i, v in enumerate(keep)}
        edges = tuple(
            (index[u], index[v], label) for i, (u, v, label) in enumerate(self.edges) if i in live_edges
        )
        bp = index.get(self.basepoint) if self.basepoint is not None else None
        return GGraph(self.base_graph, tuple(self.vertex_images[v] for v in keep), edges, bp)

    # ------------------------------------------------------------------
    # Paths and generators
    # ------------------------------------------------------------------

    def read(self, word: Sequence[int], start: int) -> int | None:
        """Endpoint of the path labeled ``word`` from ``start``, or None if it falls off."""
        v: int | None = start
        for x in word:
            if v is None:
                return None
            v = self.step(v, x)
        return v

    def accepts(self, word: Sequence[int], start: int | None = None) -> bool:
        start = self.basepoint if start is None else start
        if start is None:
            raise StructuralError("no start vertex for membership")
        return self.read(reduce_word(word), start) == start

    def spanning_paths(self, v: int) -> dict[int, Word]:
        """Label of a tree path from ``v`` to every vertex of its component."""
        paths = {v: ()}
        queue = deque([v])
        while queue:
            x = queue.popleft()
            for label, y, _ in self.germs[x]:
                if y not in paths:
                    paths[y] = paths[x] + (label,)
                    queue.append(y)
        return paths

    def generators(self, v: int | None = None) -> list[Word]:
        """Free basis of π₁ at ``v`` as label words."""
        v = self.basepoint if v is None else v
        if v is None:
            v = 0
        paths = self.spanning_paths(v)
        tree: set[int] = set()
        for x, p in paths.items():
            if p:
                prev = self.read(p[:-1], v)
                for label, y, signed in self.germs[prev]:
                    if label == p[-1] and y == x:
                        tree.add(abs(signed))
                        break
        out = []
        for i, (a, b, label) in enumerate(self.edges, start=1):
            if i in tree or a not in paths:
                continue
            out.append(reduce_word(paths[a] + (label,) + inverse(paths[b])))
        return out

    def circuits(self, max_length: int) -> list[Word]:
        """Immersed circuits up to ``max_length``, one per cyclic word class and orientation."""
        seen: set[Word] = set()
        out: list[Word] = []
        for start in range(self.num_vertices):
            stack = [(start, (), 0)]
            while stack:
                v, path, last = stack.pop()
                if path and v == start and path[0] != -path[-1]:
                    key = min(path[i:] + path[:i] for i in range(len(path)))
                    if key not in seen:
                        seen.add(key)
                        out.append(path)
                if len(path) >= max_length:
                    continue
                for label, w, _ in self.germs[v]:
                    if path and label == -last:
                        continue
                    stack.append((w, path + (label,), label))
        return out

    # ------------------------------------------------------------------
    # Canonical form
    # ------------------------------------------------------------------

    def _bfs_code(self, start: int) -> tuple:
        order = {start: 0}
        queue = deque([start])
        code: list[tuple[int, tuple[int, bool], int]] = [(-1, (0, False), self.vertex_images[start])]
        used: set[int] = set()
        while queue:
            x = queue.popleft()
            for label, y, signed in self.germs[x]:
                if abs(signed) in used:
                    continue
                used.add(abs(signed))
                if y not in order:
                    order[y] = len(order)
                    queue.append(y)
                code.append((order[x], letter_key(label), order[y]))
        return tuple(code)

    @cached_property
    def canonical(self) -> tuple:
        """Least BFS labeling per component; equal iff isomorphic as G-graphs."""
        codes = []
        for comp in self.component_vertex_sets():
            codes.append(min(self._bfs_code(v) for v in comp))
        return tuple(sorted(codes))

    def same_as(self, other: "GGraph") -> bool:
        return self.canonical == other.canonical

    def maps_into(self, other: "GGraph") -> bool:
        """Every component of self admits a label-preserving morphism into some component of ``other``."""
        for comp in self.component_vertex_sets():
            start = comp[0]
            if not any(self._morphism_from(start, other, w) for w in range(other.num_vertices)):
                return False
        return True

    def _morphism_from(self, start: int, other: "GGraph", target: int) -> bool:
        if self.vertex_images[start] != other.vertex_images[target]:
            return False
        image = {start: target}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for label, y, _ in self.germs[x]:
                ty = other.step(image[x], label)
                if ty is None:
                    return False
                if y in image:
                    if image[y] != ty:
                        return False
                else:
                    image[y] = ty
                    queue.append(y)
        return True

    def to_json(self) -> dict:
        names = self.base_graph.edge_names
        return {
            "vertices": [self.base_graph.vertex_names[v] for v in self.vertex_images],
            "edges": [[u, v, names.letter(label)] for u, v, label in self.edges],
            "basepoint": self.basepoint,
        }

    def generator_strings(self) -> list[list[str]]:
        out = []
        for comp in self.components():
            out.append([self.base_graph.format(w) for w in comp.generators(0)])
        return out


# ----------------------------------------------------------------------
# Folding
# ----------------------------------------------------------------------


def fold(g: GGraph) -> GGraph:
    """Stallings fold ``g`` until its label map is an immersion."""
    parent = list(range(g.num_vertices))
    images = list(g.vertex_images)

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    edges = list(g.edges)
    dead = [False] * len(edges)
    adj: dict[int, dict[int, set[int]]] = {v: {} for v in range(g.num_vertices)}
    pending: list[tuple[int, int]] = []

    def add_germ(v: int, label: int, i: int) -> None:
        bucket = adj[v].setdefault(label, set())
        bucket.add(i)
        if len(bucket) > 1:
            pending.append((v, label))

    for i, (u, v, label) in enumerate(edges):
        add_germ(u, label, i)
        add_germ(v, -label, i)

    def other_end(i: int, x: int, label: int) -> int:
        u, v, lab = edges[i]
        if find(u) == x and lab == label:
            return find(v)
        return find(u)

    while pending:
        x, label = pending.pop()
        x = find(x)
        bucket = adj[x].get(label)
        if not bucket or len(bucket) < 2:
            continue
        i, j = sorted(bucket)[:2]
        yi, yj = other_end(i, x, label), other_end(j, x, label)
        # drop edge j
        dead[j] = True
        uj, vj, lj = edges[j]
        adj[find(uj)].get(lj, set()).discard(j)
        adj[find(vj)].get(-lj, set()).discard(j)
        if yi != yj:
            if images[yi] != images[yj]:
                raise StructuralError("folding identified vertices over different base vertices")
            keep, gone = (yi, yj) if yi < yj else (yj, yi)
            parent[gone] = keep
            for lab, ids in adj.pop(gone).items():
                bucket2 = adj[keep].setdefault(lab, set())
                bucket2.update(ids)
                if len(bucket2) > 1:
                    pending.append((keep, lab))
        if len(adj[find(x)].get(label, ())) > 1:
            pending.append((find(x), label))

    reps = sorted({find(v) for v in range(g.num_vertices)})
    index = {v: k for k, v in enumerate(reps)}
    new_edges = tuple(
        (index[find(u)], index[find(v)], label) for k, (u, v, label) in enumerate(edges) if not dead[k]
    )
    bp = index[find(g.basepoint)] if g.basepoint is not None else None
    return GGraph(g.base_graph, tuple(images[v] for v in reps), new_edges, bp)


def wedge(words: Iterable[Sequence[int]], base_graph: MarkedGraph, start: int | None = None) -> GGraph:
    """Wedge of subdivided circles, one per nontrivial reduced closed path, at ``start``."""
    start = base_graph.base if start is None else start
    images = [start]
    edges: list[tuple[int, int, int]] = []
    for w in words:
        w = reduce_word(w)
        if not w:
            continue
        base_graph.check_path(w)
        if base_graph.init(w[0]) != start or base_graph.term(w[-1]) != start:
            raise StructuralError("wedge words must be closed at the start vertex")
        prev = 0
        for k, label in enumerate(w):
            if k == len(w) - 1:
                nxt = 0
            else:
                images.append(base_graph.term(label))
                nxt = len(images) - 1
            edges.append((prev, nxt, label))
            prev = nxt
    return GGraph(base_graph, tuple(images), tuple(edges), 0)


def based_stallings_graph(words: Iterable[Sequence[int]], base_graph: MarkedGraph, start: int | None = None) -> GGraph:
    """Folded wedge with hanging trees trimmed away from the basepoint."""
    return fold(wedge(words, base_graph, start)).core(keep_basepoint=True)


def stallings_graph(
    words: Iterable[Sequence[int]], base_graph: MarkedGraph | None = None, rank: int | None = None
) -> GGraph:
    """Core Stallings graph of the subgroup generated by ``words``."""
    words = [reduce_word(w) for w in words]
    if base_graph is None:
        if rank is None:
            rank = max((abs(x) for w in words for x in w), default=1)
        base_graph = MarkedGraph.rose(rank)
    if not any(words):
        raise TrivialSubgroupError("all generating words are trivial")
    core = fold(wedge(words, base_graph)).core()
    return GGraph(core.base_graph, core.vertex_images, core.edges, None)


def pullback_core(g1: GGraph, g2: GGraph) -> GGraph:
    """Core of the fiber product over the common base graph."""
    pairs: dict[tuple[int, int], int] = {}
    images: list[int] = []
    for a in range(g1.num_vertices):
        for b in range(g2.num_vertices):
            if g1.vertex_images[a] == g2.vertex_images[b]:
                pairs[(a, b)] = len(images)
                images.append(g1.vertex_images[a])
    edges = []
    for u1, v1, l1 in g1.edges:
        for u2, v2, l2 in g2.edges:
            if l1 == l2:
                edges.append((pairs[(u1, u2)], pairs[(v1, v2)], l1))
            elif l1 == -l2:
                edges.append((pairs[(u1, v2)], pairs[(v1, u2)], l1))
    product = GGraph(g1.base_graph, tuple(images), tuple(edges))
    return product.core()


def disjoint_union(graphs: Sequence[GGraph]) -> GGraph:
    if not graphs:
        raise StructuralError("disjoint union of nothing")
    images: list[int] = []
    edges: list[tuple[int, int, int]] = []
    for g in graphs:
        off = len(images)
        images.extend(g.vertex_images)
        edges.extend((u + off, v + off, label) for u, v, label in g.edges)
    return GGraph(graphs[0].base_graph, tuple(images), tuple(edges))


# ----------------------------------------------------------------------
# Annotated folding: inversion and membership with coordinates
# ----------------------------------------------------------------------


class AnnotatedFolding:
    """Folded wedge of image words with every edge annotated by a word in the generators.

    Reading a closed path from the basepoint multiplies annotations; the
    product is the word in the generators whose image is the label read.
    Gauge changes at non-base vertices keep that invariant through every fold.
    """

    def __init__(self, images: Sequence[Sequence[int]], rank: int):
        self.rank = rank
        self.images = [reduce_word(w) for w in images]
        self.injective = True
        self._build()

    def _build(self) -> None:
        nodes = 1
        edges: list[list] = []  # [tail, head, label, annotation]
        for i, w in enumerate(self.images, start=1):
            if not w:
                self.injective = False
                continue
            prev = 0
            for k, label in enumerate(w):
                if k == len(w) - 1:
                    nxt = 0
                else:
                    nxt = nodes
                    nodes += 1
                edges.append([prev, nxt, label, (i,) if k == 0 else ()])
                prev = nxt
        alive = [True] * len(edges)
        parent = list(range(nodes))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        changed = True
        while changed:
            changed = False
            germs: dict[tuple[int, int], tuple[int, int, Word]] = {}
            for idx, edge in enumerate(edges):
                if not alive[idx]:
                    continue
                u, v = find(edge[0]), find(edge[1])
                edge[0], edge[1] = u, v
                for x, lab, y, ann in ((u, edge[2], v, edge[3]), (v, -edge[2], u, inverse(edge[3]))):
                    key = (x, lab)
                    if key not in germs:
                        germs[key] = (idx, y, ann)
                        continue
                    j, y2, ann2 = germs[key]
                    if j == idx:
                        continue
                    # fold edge idx onto edge j
                    if y != y2:
                        if y == 0:
                            y, y2, ann, ann2, idx_src = y2, y, ann2, ann, j
                        else:
                            idx_src = idx
                        # gauge at y so that the germ x->y reads ann2
                        g = concat(inverse(ann), ann2)
                        for k, e in enumerate(edges):
                            if not alive[k]:
                                continue
                            if find(e[0]) == y:
                                e[3] = concat(inverse(g), e[3])
                            if find(e[1]) == y:
                                e[3] = concat(e[3], g)
                        parent[y] = y2
                        alive[idx_src] = False
                    else:
                        if concat(ann, inverse(ann2)):
                            self.injective = False
                        alive[idx] = False
                    changed = True
                    break
                if changed:
                    break
        self.vertices = sorted({find(v) for v in range(nodes)})
        self.edges = [tuple(e) for k, e in enumerate(edges) if alive[k]]
        self._find = find

    def express(self, word: Sequence[int]) -> Word:
        """Word in the generators mapping to ``word``; raises if ``word`` is not in the image."""
        v = 0
        out: list[int] = []
        for x in reduce_word(word):
            for u, w, label, ann in self.edges:
                if u == v and label == x:
                    out.extend(ann)
                    v = w
                    break
                if w == v and label == -x:
                    out.extend(inverse(ann))
                    v = u
                    break
            else:
                raise NotInvertibleError("word is not in the image subgroup")
        if v != 0:
            raise NotInvertibleError("word is not in the image subgroup")
        return reduce_word(out)

    def contains(self, word: Sequence[int]) -> bool:
        try:
            self.express(word)
        except NotInvertibleError:
            return False
        return True

    def is_rose(self) -> bool:
        labels = sorted(abs(e[2]) for e in self.edges)
        return self.vertices == [0] and labels == list(range(1, self.rank + 1))

    @classmethod
    def invert(cls, images: Sequence[Sequence[int]], rank: int) -> "AnnotatedFolding":
        """Fold the images of a basis; raises NotInvertibleError unless they form a basis of F_rank."""
        if len(images) != rank:
            raise NotInvertibleError(f"{len(images)} images for rank {rank}")
        folding = cls(images, rank)
        if not folding.injective or not folding.is_rose():
            raise NotInvertibleError("images do not form a free basis")
        return folding

    def inverse_images(self) -> list[Word]:
        return [self.express((x,)) for x in range(1, self.rank + 1)]
