"""Reduced words over oriented edge ids.

A word (or edge path) is a tuple of nonzero ints: ``k`` traverses edge ``k`` in
its positive orientation and ``-k`` traverses it backwards. Text uses one token
per letter, ``[A-Za-z][0-9]*``; a lowercase first letter is the positive
orientation and an uppercase one the inverse, so ``"abA2"`` over the names
``a, b, a2`` is ``(1, 2, -3)``.
"""

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from train_track_builder.core.exceptions import ParseError, StructuralError

Word = tuple[int, ...]

TOKEN_RE = re.compile(r"[A-Za-z][0-9]*")


def inverse(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def reduce_word(w: Iterable[int]) -> Word:
    """Free reduction: cancel every adjacent ``x x⁻¹`` pair."""
    stack: list[int] = []
    for x in w:
        if x == 0:
            raise StructuralError("edge id 0 is not an oriented edge")
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


def concat(*words: Sequence[int]) -> Word:
    out: list[int] = []
    for w in words:
        out.extend(w)
    return reduce_word(out)


def is_reduced(w: Sequence[int]) -> bool:
    return all(w[i] != -w[i + 1] for i in range(len(w) - 1))


def split_cyclic(w: Sequence[int]) -> tuple[Word, Word]:
    """Return ``(p, c)`` with ``w = p c p⁻¹`` and ``c`` cyclically reduced."""
    w = reduce_word(w)
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    return tuple(w[:i]), tuple(w[i : j + 1])


def cyclic_reduce(w: Sequence[int]) -> Word:
    return split_cyclic(w)[1]


def is_cyclically_reduced(w: Sequence[int]) -> bool:
    return is_reduced(w) and (len(w) < 2 or w[0] != -w[-1])


def rotations(w: Sequence[int]) -> list[Word]:
    w = tuple(w)
    return [w[i:] + w[:i] for i in range(len(w))] or [()]


def root(w: Sequence[int]) -> tuple[Word, int]:
    """Primitive root of a cyclically reduced word and its exponent."""
    w = tuple(w)
    n = len(w)
    for d in range(1, n + 1):
        if n % d == 0 and w[:d] * (n // d) == w:
            return w[:d], n // d
    return w, 1


def letter_key(x: int) -> tuple[int, bool]:
    """Order letters as ``a < A < b < B < ...``."""
    return abs(x), x < 0


def word_key(w: Sequence[int]) -> tuple:
    return len(w), tuple(letter_key(x) for x in w)


def canonical_circuit(w: Sequence[int]) -> Word:
    """Least rotation of a cyclic word or its inverse; identifies conjugacy classes."""
    c = cyclic_reduce(w)
    if not c:
        return ()
    candidates = rotations(c) + rotations(inverse(c))
    return min(candidates, key=word_key)


def common_prefix(u: Sequence[int], v: Sequence[int]) -> Word:
    k = 0
    while k < len(u) and k < len(v) and u[k] == v[k]:
        k += 1
    return tuple(u[:k])


def power(w: Sequence[int], k: int) -> Word:
    if k < 0:
        return reduce_word(inverse(w) * (-k))
    return reduce_word(tuple(w) * k)


def conjugate(w: Sequence[int], c: Sequence[int]) -> Word:
    """``c w c⁻¹``"""
    return concat(c, w, inverse(c))


def is_conjugate(u: Sequence[int], v: Sequence[int]) -> bool:
    return canonical_circuit(u) == canonical_circuit(v)


def conjugators(u: Sequence[int], v: Sequence[int], window: int = 2) -> list[Word]:
    """Words ``c`` with ``c u c⁻¹ = v``, with the centralizer exponent kept to ``|m| <= window``.

    The full solution set is a coset ``c₀ ⟨r⟩`` for ``r`` the root of ``u``; callers
    that need one element of an intersection of such cosets widen ``window``.
    """
    pu, cu = split_cyclic(u)
    pv, cv = split_cyclic(v)
    if len(cu) != len(cv) or not cu:
        return [] if cu or cv else [()]
    r, _ = root(cu)
    out = []
    for t in range(len(r)):
        rot = cu[t:] + cu[:t]
        if rot != cv:
            continue
        # cv = s⁻¹ cu s with s = cu[:t]
        s = cu[:t]
        for m in range(-window, window + 1):
            c = concat(pv, inverse(s), power(r, m), inverse(pu))
            out.append(c)
    return out


@dataclass
class Alphabet:
    """Names of oriented edges or generators, indexed from 1."""

    names: tuple[str, ...]
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        self.names = tuple(self.names)
        self._index = {}
        for i, name in enumerate(self.names, start=1):
            if not TOKEN_RE.fullmatch(name) or not name[0].islower():
                raise ParseError(f"invalid generator name '{name}'")
            if name in self._index:
                raise ParseError(f"duplicate generator name '{name}'")
            self._index[name] = i

    @classmethod
    def standard(cls, n: int) -> "Alphabet":
        """``a, b, c, ...`` up to rank 26, then ``a1, a2, ...``."""
        if n <= 26:
            return cls(tuple(chr(ord("a") + i) for i in range(n)))
        return cls(tuple(f"a{i}" for i in range(1, n + 1)))

    def __len__(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        return self._index[name]

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def letter(self, x: int) -> str:
        name = self.names[abs(x) - 1]
        return name if x > 0 else name[0].upper() + name[1:]

    def format(self, w: Sequence[int]) -> str:
        return "".join(self.letter(x) for x in w)

    def parse(self, text: str, offset: int = 0) -> Word:
        """Parse a word; ``1`` or the empty string is the trivial word."""
        s = text.strip()
        if s in ("", "1"):
            return ()
        lead = len(text) - len(text.lstrip())
        pos = 0
        out: list[int] = []
        while pos < len(s):
            m = TOKEN_RE.match(s, pos)
            if not m:
                raise ParseError(f"unexpected character '{s[pos]}'", offset + lead + pos)
            tok = m.group(0)
            name = tok[0].lower() + tok[1:]
            if name not in self._index:
                raise ParseError(f"unknown generator '{tok}'", offset + lead + pos)
            x = self._index[name]
            out.append(x if tok[0].islower() else -x)
            pos = m.end()
        return tuple(out)

    def fresh(self, base: str) -> str:
        """Unused name derived from ``base``."""
        stem = base[:1].lower() or "e"
        k = 1
        while f"{stem}{k}" in self._index:
            k += 1
        return f"{stem}{k}"

    def extended(self, *new_names: str) -> "Alphabet":
        return Alphabet(self.names + tuple(new_names))
