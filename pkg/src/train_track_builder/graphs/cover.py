"""Finite balls in the universal cover of a marked graph.

A vertex of the cover is the tight path from the base vertex that reaches it,
so balls never need to be materialized; enumeration is lazy and cached.
"""

import threading
from typing import Callable, Iterator, Sequence

from train_track_builder.core.exceptions import RadiusExceededError, StructuralError
from train_track_builder.graphs.graph import MarkedGraph
from train_track_builder.graphs.words import Word, concat, inverse, reduce_word


class CoverBall:
    """Radius-``radius`` ball of the universal cover of ``graph`` at ``base``.

    ``image`` maps a path of ``graph`` to its tightened image under a
    topological representative; together with ``rho`` (a path from ``base``
    to the image of ``base``) it defines the lift ``f̃(p) = [ρ f(p)]``.
    """

    def __init__(
        self,
        graph: MarkedGraph,
        base: int,
        radius: int,
        rho: Sequence[int] = (),
        image: Callable[[Word], Word] | None = None,
    ):
        self.graph = graph
        self.base = base
        self.radius = radius
        self.rho = reduce_word(rho)
        self._image = image
        self._lock = threading.Lock()
        self._layers: list[list[Word]] = [[()]]
        if self.rho:
            graph.check_path(self.rho)
            if graph.init(self.rho[0]) != base:
                raise StructuralError("rho must start at the base vertex")

    def contains(self, p: Sequence[int]) -> bool:
        return len(reduce_word(p)) <= self.radius

    def _check(self, p: Sequence[int]) -> Word:
        p = reduce_word(p)
        self.graph.check_path(p)
        if p and self.graph.init(p[0]) != self.base:
            raise StructuralError("cover vertices are paths from the base vertex")
        if len(p) > self.radius:
            raise RadiusExceededError(f"vertex at distance {len(p)} outside radius {self.radius}")
        return p

    def projection(self, p: Sequence[int]) -> int:
        p = self._check(p)
        return self.graph.term(p[-1]) if p else self.base

    def lift_image(self, p: Sequence[int]) -> Word:
        """Image of the cover vertex ``p`` under the lift."""
        p = self._check(p)
        if self._image is None:
            raise StructuralError("ball has no map to lift")
        return concat(self.rho, self._image(p))

    def translate(self, g: Sequence[int], p: Sequence[int]) -> Word:
        """Covering translation by the closed path ``g`` at base."""
        p = self._check(p)
        g = reduce_word(g)
        if g and (self.graph.init(g[0]) != self.base or self.graph.term(g[-1]) != self.base):
            raise StructuralError("translations are closed paths at the base vertex")
        return concat(g, p)

    @staticmethod
    def distance(p: Sequence[int], q: Sequence[int]) -> int:
        return len(concat(inverse(p), q))

    def _layer(self, k: int) -> list[Word]:
        with self._lock:
            while len(self._layers) <= k:
                last = self._layers[-1]
                nxt = []
                for p in last:
                    v = self.graph.term(p[-1]) if p else self.base
                    for e in self.graph.star(v):
                        if p and e == -p[-1]:
                            continue
                        nxt.append(p + (e,))
                self._layers.append(nxt)
            return self._layers[k]

    def vertices(self) -> Iterator[Word]:
        for k in range(self.radius + 1):
            yield from self._layer(k)

    def extend(self, radius: int) -> None:
        self.radius = max(self.radius, radius)

    def fixed_vertices(self) -> list[Word]:
        """Vertices of the ball fixed by the lift (brute force)."""
        return [p for p in self.vertices() if self.lift_image(p) == p]


def cover_ball(
    graph: MarkedGraph,
    base: int,
    radius: int,
    rho: Sequence[int] = (),
    image: Callable[[Word], Word] | None = None,
) -> CoverBall:
    return CoverBall(graph, base, radius, rho, image)
