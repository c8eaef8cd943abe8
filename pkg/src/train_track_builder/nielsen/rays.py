"""Rays generated by paths and their comparison."""

import threading
from typing import Sequence

from train_track_builder.core.config import Config, get_config
from train_track_builder.core.exceptions import DegenerateRayError, StructuralError
from train_track_builder.graphs.words import Word, reduce_word
from train_track_builder.toprep.toprep import TopRep


class Ray:
    """The ray ``head · σ · f#(σ) · f#²(σ) · …``.

    An eigenray of an edge ``E`` with ``f(E) = E·u`` has head ``E`` and
    generator ``u``. Expansion is lazy; the cached prefix is shared by
    concurrent readers under a lock.
    """

    def __init__(self, f: TopRep, generator: Sequence[int], head: Sequence[int] = ()):
        self.f = f
        self.head = tuple(head)
        self.generator = tuple(generator)
        if not self.generator:
            raise DegenerateRayError("trivial ray generator")
        if f.map_path(self.generator) == self.generator:
            raise DegenerateRayError(f"generator {f.format(self.generator)} is a Nielsen path")
        self._lock = threading.Lock()
        self._prefix: list[int] = list(self.head) + list(self.generator)
        self._last = self.generator

    @classmethod
    def eigenray(cls, f: TopRep, e: int) -> "Ray":
        img = f.image(e)
        if not img or img[0] != e or len(img) < 2:
            raise StructuralError(f"{f.graph.name(e)} does not have a fixed initial direction")
        return cls(f, img[1:], (e,))

    @property
    def start(self) -> int:
        first = self.head[0] if self.head else self.generator[0]
        return self.f.graph.init(first)

    def prefix(self, n: int) -> Word:
        with self._lock:
            while len(self._prefix) < n:
                self._last = self.f.map_path(self._last)
                if not self._last:
                    raise DegenerateRayError("ray generator collapses")
                self._prefix.extend(self._last)
                reduced = reduce_word(self._prefix)
                if len(reduced) != len(self._prefix):
                    self._prefix = list(reduced)
            return tuple(self._prefix[:n])

    def to_json(self) -> dict:
        return {
            "generator": self.f.format(self.head + self.generator),
            "start": self.f.graph.vertex_names[self.start],
        }

    def __repr__(self) -> str:
        return f"Ray({self.f.format(self.prefix(8))}…)"


def rays_common_tail(f: TopRep, r1: Ray, r2: Ray, config: Config | None = None) -> tuple[int, int] | None:
    """Offsets after which the two rays coincide as edge paths, None if they never do.

    Offsets up to the comparison window are tried (smallest total first) and a
    match must persist for three windows.
    """
    cfg = config or get_config()
    window = cfg.RAY_COMPARE_WINDOW
    length = 3 * window
    p1, p2 = r1.prefix(length + window), r2.prefix(length + window)
    candidates = sorted(((i, j) for i in range(window + 1) for j in range(window + 1)), key=lambda t: (t[0] + t[1], t))
    for i, j in candidates:
        if p1[i : i + length] == p2[j : j + length]:
            return i, j
    return None
