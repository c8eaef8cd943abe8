"""Whitehead descent and minimal free factor support."""

from collections import deque
from dataclasses import dataclass
from functools import cache
from itertools import product
from typing import Sequence

from train_track_builder.core.logger import get_logger
from train_track_builder.ffs.system import FreeFactorSystem, rose
from train_track_builder.graphs.automorphism import Automorphism
from train_track_builder.graphs.ggraph import GGraph, stallings_graph
from train_track_builder.graphs.words import Alphabet, Word, concat, reduce_word

PLATEAU_STATES = 4


@cache
def whitehead_automorphisms(names: tuple[str, ...]) -> tuple[Automorphism, ...]:
    """Type-II Whitehead automorphisms ``(A, a)``, identity excluded."""
    n = len(names)
    alphabet = Alphabet(names)
    out = []
    for a in [x for k in range(1, n + 1) for x in (k, -k)]:
        others = [k for k in range(1, n + 1) if k != abs(a)]
        for choice in product(range(4), repeat=len(others)):
            if not any(choice):
                continue
            images: list[Word] = [(k,) for k in range(1, n + 1)]
            for k, c in zip(others, choice):
                x = (k,)
                if c == 1:
                    images[k - 1] = concat(x, (a,))
                elif c == 2:
                    images[k - 1] = concat((-a,), x)
                elif c == 3:
                    images[k - 1] = concat((-a,), x, (a,))
            out.append(Automorphism(alphabet, tuple(images)))
    return tuple(out)


@cache
def permutation_automorphisms(names: tuple[str, ...]) -> tuple[Automorphism, ...]:
    """Type-I generators: adjacent transpositions and single inversions."""
    n = len(names)
    alphabet = Alphabet(names)
    out = []
    for k in range(1, n):
        images = [(x,) for x in range(1, n + 1)]
        images[k - 1], images[k] = (k + 1,), (k,)
        out.append(Automorphism(alphabet, tuple(images)))
    for k in range(1, n + 1):
        images = [(x,) for x in range(1, n + 1)]
        images[k - 1] = (-k,)
        out.append(Automorphism(alphabet, tuple(images)))
    return tuple(out)


@dataclass
class WhiteheadResult:
    """Minimized components and the change of basis ``theta`` that produced them."""

    theta: Automorphism
    components: list[GGraph]
    segments: list[Word]
    complexity: int
    plateaus: int = 0


def _complexity(components: Sequence[GGraph], segments: Sequence[Word]) -> int:
    return sum(c.complexity for c in components) + sum(len(s) for s in segments)


def _apply(theta: Automorphism, components: Sequence[GGraph], segments: Sequence[Word]):
    base = rose(theta.names.names)
    comps = [stallings_graph([theta(w) for w in c.generators(0)], base) for c in components]
    segs = [reduce_word(theta(s)) for s in segments]
    return comps, segs


def _state_key(components: Sequence[GGraph], segments: Sequence[Word]) -> tuple:
    return tuple(c.canonical for c in components), tuple(segments)


def _escape_plateau(seeds, seen, best, moves, level_moves, limit):
    """Breadth-first walk over states of complexity ``best`` until a move from one of them descends.

    ``seeds`` are ``(theta, components, segments)`` one move away from the
    plateau state. Returns ``(theta, components, segments, value)`` or None
    after ``limit`` states.
    """
    queue = deque(seeds)
    visited = 0
    while queue and visited < limit:
        path, c0, s0 = queue.popleft()
        visited += 1
        for w in moves:
            c2, s2 = _apply(w, c0, s0)
            value = _complexity(c2, s2)
            if value < best:
                return w.compose(path), c2, s2, value
        for w in level_moves:
            c2, s2 = _apply(w, c0, s0)
            key = _state_key(c2, s2)
            if key not in seen and _complexity(c2, s2) == best:
                seen.add(key)
                queue.append((w.compose(path), c2, s2))
    return None


def whitehead_minimize(
    components: Sequence[GGraph],
    names: Alphabet,
    segments: Sequence[Word] = (),
    moves: Sequence[Automorphism] | None = None,
    plateau_states: int = PLATEAU_STATES,
) -> WhiteheadResult:
    """Steepest descent over Whitehead automorphisms until no move lowers the complexity.

    At a plateau the states of equal complexity reachable by type-I and
    type-II moves are searched (at most ``plateau_states`` of them) and the
    descent restarts from the first one that admits a lowering move.
    """
    log = get_logger()
    theta = Automorphism.identity(len(names), names)
    comps, segs = list(components), list(segments)
    best = _complexity(comps, segs)
    moves = tuple(moves) if moves is not None else whitehead_automorphisms(names.names)
    type_one = permutation_automorphisms(names.names)
    plateaus = 0
    while True:
        winner = None
        level = []
        for w in moves:
            c2, s2 = _apply(w, comps, segs)
            value = _complexity(c2, s2)
            if value < best:
                best, winner = value, (w, c2, s2)
            elif value == best and winner is None:
                level.append((w, c2, s2))
        if winner is None:
            if not (comps or segs) or plateau_states <= 0:
                break
            seen = {_state_key(comps, segs)}
            seeds = []
            for w, c2, s2 in level + [(w, *_apply(w, comps, segs)) for w in type_one]:
                key = _state_key(c2, s2)
                if key not in seen:
                    seen.add(key)
                    seeds.append((w, c2, s2))
            escape = _escape_plateau(seeds, seen, best, moves, type_one + moves, plateau_states)
            if escape is None:
                break
            w, c2, s2, best = escape
            winner = (w, c2, s2)
            plateaus += 1
            log.debug(f"left a plateau, complexity {best}")
        w, comps, segs = winner
        theta = w.compose(theta)
        log.debug(f"Whitehead step lowers complexity to {best}")
    return WhiteheadResult(theta, comps, segs, best, plateaus)


def _letter_blocks(result: WhiteheadResult, trim: int) -> list[set[int]]:
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        parent.setdefault(x, x)
        while parent[x] != x:
            x = parent[x]
        return x

    def union(letters: set[int]) -> None:
        letters = set(letters)
        if not letters:
            return
        first = letters.pop()
        for x in letters:
            parent[find(x)] = find(first)
        find(first)

    for comp in result.components:
        union({abs(label) for _, _, label in comp.edges})
    for seg in result.segments:
        core = seg[trim : len(seg) - trim] if len(seg) > 2 * trim else seg
        union({abs(x) for x in core})
    blocks: dict[int, set[int]] = {}
    for x in list(parent):
        blocks.setdefault(find(x), set()).add(x)
    return sorted(blocks.values(), key=min)


def minimal_support(
    names: Alphabet,
    elements: Sequence[Word] = (),
    subgroups: Sequence[GGraph] = (),
    segments: Sequence[Word] = (),
    trim: int = 0,
) -> FreeFactorSystem:
    """Smallest free factor system carrying the given conjugacy classes, subgroups and line segments.

    ``segments`` approximate lines (such as leaf segments); ``trim`` letters at
    each end are ignored when reading off the support.
    """
    base = rose(names.names)
    comps = [stallings_graph([w], base) for w in elements if reduce_word(w)]
    comps.extend(c for c in subgroups if c.edges)
    result = whitehead_minimize(comps, names, segments)
    theta_inv = result.theta.inverse()
    groups = [[theta_inv((x,)) for x in sorted(block)] for block in _letter_blocks(result, trim)]
    return FreeFactorSystem.from_generators(names, groups)


def standardize(system: FreeFactorSystem) -> tuple[Automorphism, list[list[int]]]:
    """Change of basis Θ under which every component is ``⟨block⟩`` for disjoint letter blocks.

    A final letter permutation makes the blocks consecutive in component
    order, so Θ returns blocks ``[1..k1], [k1+1..k2], ...``.
    """
    names = system.names
    result = whitehead_minimize(system.components, names)
    blocks = [sorted({abs(label) for _, _, label in comp.edges}) for comp in result.components]
    order = [x for b in blocks for x in b]
    order += [x for x in range(1, len(names) + 1) if x not in order]
    relabel = {x: i for i, x in enumerate(order, start=1)}
    perm = Automorphism(names, tuple((relabel[x],) for x in range(1, len(names) + 1)))
    return perm.compose(result.theta), [[relabel[x] for x in b] for b in blocks]


def unused_letters(n: int, blocks: Sequence[Sequence[int]]) -> list[int]:
    used = {x for b in blocks for x in b}
    return [x for x in range(1, n + 1) if x not in used]


__all__ = [
    "WhiteheadResult",
    "minimal_support",
    "permutation_automorphisms",
    "standardize",
    "whitehead_automorphisms",
    "whitehead_minimize",
]
