"""Lifts of a representative to the universal cover."""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from train_track_builder.core.exceptions import LiftError
from train_track_builder.graphs.automorphism import Automorphism, find_conjugator
from train_track_builder.graphs.cover import CoverBall
from train_track_builder.graphs.words import Word, concat, inverse, reduce_word
from train_track_builder.toprep.toprep import TopRep


@dataclass(frozen=True, eq=False)
class Lift:
    """The lift ``f̃`` with ``f̃(⋆̃)`` at the end of ``rho``; Φ(γ) = ρ f(γ) ρ̄."""

    f: TopRep
    rho: Word = field(default=())

    def __post_init__(self):
        g = self.f.graph
        rho = reduce_word(self.rho)
        object.__setattr__(self, "rho", rho)
        target = self.f.vertex_map[g.base]
        if rho:
            g.check_path(rho)
            if g.init(rho[0]) != g.base or g.term(rho[-1]) != target:
                raise LiftError("rho must run from the base vertex to its image")
        elif target != g.base:
            raise LiftError("a trivial rho needs a fixed base vertex")

    @classmethod
    def default(cls, f: TopRep) -> "Lift":
        return cls(f, f.default_rho())

    @classmethod
    def for_automorphism(cls, f: TopRep, phi: Automorphism) -> "Lift":
        """The lift whose induced automorphism is ``phi`` (which must represent the same outer class)."""
        base = cls.default(f)
        c = find_conjugator(phi, base.automorphism)
        if c is None:
            raise LiftError("automorphism is not in the outer class of the representative")
        return cls(f, reduce_word(f.graph.mark(c) + base.rho))

    @cached_property
    def automorphism(self) -> Automorphism:
        return self.f.automorphism(self.rho)

    def image(self, p: Sequence[int]) -> Word:
        """Image of the cover vertex reached from ⋆̃ along ``p``."""
        return concat(self.rho, self.f.map_path(p))

    def displacement(self, p: Sequence[int]) -> Word:
        """Path from the cover vertex ``p`` to its image."""
        return concat(inverse(p), self.image(p))

    def is_fixed(self, p: Sequence[int]) -> bool:
        return self.image(p) == reduce_word(p)

    def ball(self, radius: int) -> CoverBall:
        return CoverBall(self.f.graph, self.f.graph.base, radius, self.rho, self.f.map_path)

    def translate(self, c: Sequence[int]) -> "Lift":
        """The lift ``t_c ∘ f̃`` for a closed path ``c`` at base."""
        return Lift(self.f, concat(c, self.rho))
