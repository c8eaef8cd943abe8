"""Indivisible Nielsen paths of EG strata."""

from train_track_builder.core.config import Config, get_config
from train_track_builder.core.exceptions import NotEGError
from train_track_builder.core.logger import get_logger
from train_track_builder.graphs.words import Word, canonical_circuit, inverse, reduce_word, word_key
from train_track_builder.nielsen.constants import bcc
from train_track_builder.toprep.toprep import TopRep


def illegal_turns(f: TopRep, r: int) -> list[tuple[int, int]]:
    """Turns of H_r edges identified by one application of Df."""
    assert f.filtration is not None
    stratum = set(f.filtration[r].edges)
    out = []
    for v in range(f.graph.num_vertices):
        star = [d for d in f.graph.star(v) if abs(d) in stratum]
        for i, d1 in enumerate(star):
            for d2 in star[i + 1 :]:
                if f.df(d1) == f.df(d2):
                    out.append((d1, d2))
    return out


def _legal_continuations(f: TopRep, path: Word) -> list[int]:
    g = f.graph
    last = path[-1]
    return [x for x in g.star(g.term(last)) if x != -last and f.is_legal_turn(-last, x)]


def _common_prefix(u: Word, w: Word) -> int:
    k = 0
    for x, y in zip(u, w):
        if x != y:
            break
        k += 1
    return k


def _divergent_pairs(f: TopRep, d1: int, d2: int, max_shift: int, max_length: int) -> list[tuple[Word, Word, int]]:
    """Shortest legal pairs from the turn ``(d1, d2)`` whose images stop agreeing.

    The shared image prefix is the cancellation at the turn, so it never
    exceeds ``max_shift``. Only the path with the shorter image grows.
    """
    out: list[tuple[Word, Word, int]] = []
    stack: list[tuple[Word, Word]] = [((d1,), (d2,))]
    while stack:
        a, b = stack.pop()
        ia, ib = f.map_path(a), f.map_path(b)
        k = _common_prefix(ia, ib)
        if k > max_shift:
            continue
        if k < min(len(ia), len(ib)):
            out.append((a, b, k))
            continue
        if len(ia) <= len(ib):
            if len(a) < max_length:
                stack.extend((a + (x,), b) for x in _legal_continuations(f, a))
        elif len(b) < max_length:
            stack.extend((a, b + (x,)) for x in _legal_continuations(f, b))
    return out


def _half_paths(f: TopRep, start: Word, shift: int, max_length: int, memo: dict) -> list[Word]:
    """Legal extensions ``a`` of ``start`` with ``f(a) = c·a`` for the first ``shift`` edges ``c`` of ``f(a)``."""
    key = (start, shift)
    if key in memo:
        return memo[key]
    out: list[Word] = []
    stack: list[Word] = [start]
    while stack:
        a = stack.pop()
        image = f.map_path(a)
        if any(image[shift + i] != a[i] for i in range(min(len(a), len(image) - shift))):
            continue
        if len(image) == shift + len(a):
            out.append(a)
            continue
        if len(a) >= max_length:
            continue
        if len(image) > shift + len(a):
            # the image already dictates the next edge
            nxt = image[shift + len(a)]
            if f.graph.init(nxt) == f.graph.term(a[-1]) and nxt != -a[-1] and f.is_legal_turn(-a[-1], nxt):
                stack.append(a + (nxt,))
            continue
        stack.extend(a + (x,) for x in _legal_continuations(f, a))
    memo[key] = out
    return out


def find_eg_inps(f: TopRep, r: int, config: Config | None = None) -> list[Word]:
    """All period-one indivisible Nielsen paths of height ``r`` up to reversal.

    An iNp reads ``ā·b`` with ``a, b`` r-legal paths leaving an illegal turn
    and ``f(a) = c·a``, ``f(b) = c·b`` for one common prefix ``c``. The
    prefix ``c`` is what cancels at the turn, so its length is at most the
    bounded cancellation constant; half paths are capped by
    ``INP_SEARCH_MAX_LENGTH``.
    """
    if f.filtration is None or not f.filtration[r].is_eg:
        raise NotEGError(f"stratum {r} is not exponentially growing")
    cfg = config or get_config()
    max_length = cfg.INP_SEARCH_MAX_LENGTH
    max_shift = min(bcc(f), max_length)
    memo: dict = {}
    found: dict[Word, Word] = {}
    for d1, d2 in illegal_turns(f, r):
        for a0, b0, shift in _divergent_pairs(f, d1, d2, max_shift, max_length):
            for a in _half_paths(f, a0, shift, max_length, memo):
                for b in _half_paths(f, b0, shift, max_length, memo):
                    rho = reduce_word(inverse(a) + b)
                    if rho and f.map_path(rho) == rho:
                        key = min(rho, inverse(rho), key=word_key)
                        found.setdefault(key, rho)
    result = sorted(found.values(), key=word_key)
    get_logger().debug(f"stratum {r}: {len(result)} iNp(s) {[f.format(p) for p in result]}")
    return result


def is_closed(f: TopRep, path: Word) -> bool:
    return bool(path) and f.graph.init(path[0]) == f.graph.term(path[-1])


def inp_circuit(f: TopRep, path: Word) -> Word:
    """Canonical circuit of a closed iNp."""
    return canonical_circuit(path)
