"""Complete splittings of paths under a CT."""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from train_track_builder.core.config import Config, get_config
from train_track_builder.core.exceptions import StructuralError
from train_track_builder.graphs.words import Word, inverse, reduce_word
from train_track_builder.nielsen.inps import find_eg_inps
from train_track_builder.toprep.toprep import StratumKind, TopRep


class PieceKind:
    """Constants for splitting pieces."""

    EDGE = "edge"
    INP = "iNp"
    EXCEPTIONAL = "exceptional"
    ZERO = "zero"


@dataclass(frozen=True)
class Piece:
    kind: str
    path: Word


@dataclass
class CompleteSplitting:
    """Pieces of a completely split path and the vertices between them."""

    pieces: list[Piece] = field(default_factory=list)

    @property
    def path(self) -> Word:
        out: list[int] = []
        for p in self.pieces:
            out.extend(p.path)
        return tuple(out)

    def splitting_positions(self) -> list[int]:
        out, pos = [], 0
        for p in self.pieces[:-1]:
            pos += len(p.path)
            out.append(pos)
        return out

    def format(self, f: TopRep) -> str:
        return " · ".join(f.format(p.path) for p in self.pieces)


class SplittingContext:
    """Per-CT data reused across splittings: iNps, linear edges and zero strata."""

    def __init__(self, f: TopRep, config: Config | None = None):
        if f.filtration is None:
            raise StructuralError("splittings need a filtration")
        self.f = f
        self.config = config or get_config()

    @cached_property
    def inps(self) -> list[Word]:
        out: list[Word] = []
        assert self.f.filtration is not None
        for r, s in enumerate(self.f.filtration):
            if s.is_eg:
                for rho in find_eg_inps(self.f, r, self.config):
                    out.extend((rho, inverse(rho)))
        return sorted(set(out), key=len, reverse=True)

    @cached_property
    def linear(self) -> dict[int, tuple[Word, int]]:
        """Linear edge → (axis, exponent)."""
        assert self.f.filtration is not None
        return {s.edges[0]: (s.axis, s.exponent) for s in self.f.filtration if s.kind == StratumKind.NEG_LINEAR}

    @cached_property
    def zero_edges(self) -> frozenset[int]:
        assert self.f.filtration is not None
        return frozenset(e for s in self.f.filtration if s.is_zero for e in s.edges)

    def _axis_run(self, path: Sequence[int], i: int) -> int | None:
        """End of an ``E w^k Ē'`` piece starting at ``i``, None if there is none."""
        e = path[i]
        if e not in self.linear:
            return None
        w, _ = self.linear[e]
        j = i + 1
        while True:
            if j < len(path) and -path[j] in self.linear and self.linear[-path[j]][0] in (w, inverse(w)):
                return j + 1
            if tuple(path[j : j + len(w)]) == w or tuple(path[j : j + len(w)]) == inverse(w):
                j += len(w)
                continue
            return None

    def candidates(self, path: Sequence[int], i: int) -> list[Piece]:
        out = []
        for rho in self.inps:
            if tuple(path[i : i + len(rho)]) == rho:
                out.append(Piece(PieceKind.INP, rho))
        end = self._axis_run(path, i)
        if end is not None:
            piece = tuple(path[i:end])
            kind = PieceKind.INP if piece[0] == -piece[-1] else PieceKind.EXCEPTIONAL
            out.append(Piece(kind, piece))
        if abs(path[i]) in self.zero_edges:
            j = i
            while j < len(path) and abs(path[j]) in self.zero_edges:
                j += 1
            out.append(Piece(PieceKind.ZERO, tuple(path[i:j])))
        else:
            out.append(Piece(PieceKind.EDGE, (path[i],)))
        return out

    def is_splitting(self, pieces: Sequence[Piece]) -> bool:
        """Iterates of the pieces concatenate without cancellation."""
        current = [p.path for p in pieces]
        for _ in range(self.config.SPLIT_CHECK_ITERATES):
            current = [self.f.map_path(p) for p in current]
            joined: list[int] = []
            for p in current:
                joined.extend(p)
            if reduce_word(joined) != tuple(joined):
                return False
        return True


def complete_split(f: TopRep, path: Sequence[int], context: SplittingContext | None = None) -> CompleteSplitting | None:
    """The complete splitting of ``path``, None if it is not completely split."""
    f.graph.check_path(path)
    path = tuple(path)
    if reduce_word(path) != path:
        raise StructuralError("complete splittings are defined for tight paths")
    context = context or SplittingContext(f)
    if not path:
        return CompleteSplitting()

    # longest pieces first; the first splitting found is the complete splitting
    def search(i: int) -> list[Piece] | None:
        if i == len(path):
            return []
        for piece in sorted(context.candidates(path, i), key=lambda p: -len(p.path)):
            if piece.kind == PieceKind.ZERO and not _zero_piece_is_taken(f, piece.path):
                continue
            rest = search(i + len(piece.path))
            if rest is not None:
                return [piece] + rest
        return None

    pieces = search(0)
    if pieces is None or not context.is_splitting(pieces):
        return None
    return CompleteSplitting(pieces)


def _zero_piece_is_taken(f: TopRep, piece: Word) -> bool:
    for img in f.edge_images:
        for i in range(len(img) - len(piece) + 1):
            window = img[i : i + len(piece)]
            if window == piece or window == inverse(piece):
                return True
    return False
