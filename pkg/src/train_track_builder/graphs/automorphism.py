"""Automorphisms of F_n given by generator images."""

import json
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from train_track_builder.core.exceptions import NotInvertibleError, ParseError
from train_track_builder.core.utils import canonical_hash
from train_track_builder.graphs.ggraph import AnnotatedFolding
from train_track_builder.graphs.words import (
    Alphabet,
    Word,
    canonical_circuit,
    concat,
    conjugators,
    inverse,
    reduce_word,
)

RULE_RE = re.compile(r"\s*([A-Za-z][0-9]*)\s*(?:->|→|=>|:)\s*([A-Za-z0-9]*)\s*")


@dataclass(frozen=True, eq=False)
class Automorphism:
    """An automorphism Φ of F_n, ``images[i]`` being Φ of generator ``i+1``."""

    names: Alphabet
    images: tuple[Word, ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(reduce_word(w) for w in self.images))

    @property
    def rank(self) -> int:
        return len(self.names)

    # ------------------------------------------------------------------
    # Parsing / formatting
    # ------------------------------------------------------------------

    @classmethod
    def from_images(cls, images: dict[str, str] | Sequence[str], names: Alphabet | None = None, check: bool = True):
        if isinstance(images, dict):
            names = names or Alphabet(tuple(images))
            words = tuple(names.parse(images[g]) for g in names.names)
        else:
            names = names or Alphabet.standard(len(images))
            words = tuple(names.parse(w) for w in images)
        phi = cls(names, words)
        if check:
            phi.inverse()
        return phi

    @classmethod
    def parse(cls, text: str, check: bool = True) -> "Automorphism":
        """Parse ``{"rank": 2, "images": {"a": "ab", ...}}`` or ``a->ab; b->bab``."""
        stripped = text.strip()
        if stripped.startswith("{"):
            try:
                data = json.loads(stripped)
            except json.JSONDecodeError as e:
                raise ParseError(f"invalid JSON: {e.msg}", e.pos) from e
            return cls.from_json(data, check=check)
        rules: list[tuple[str, str, int]] = []
        pos = 0
        for chunk in re.split(r"([;,\n])", text):
            if chunk in (";", ",", "\n"):
                pos += 1
                continue
            if chunk.strip():
                m = RULE_RE.fullmatch(chunk)
                if not m:
                    arrow = re.search(r"->|→|=>|:", chunk)
                    start = arrow.end() if arrow else 0
                    bad = next(
                        (i for i in range(start, len(chunk)) if not (chunk[i].isalnum() or chunk[i].isspace())), start
                    )
                    raise ParseError("expected 'x->word'", pos + bad)
                rules.append((m.group(1), m.group(2), pos + m.start(2)))
            pos += len(chunk)
        if not rules:
            raise ParseError("no generator images", 0)
        for gen, _, p in rules:
            if not gen[0].islower():
                raise ParseError(f"generator '{gen}' must be lowercase", p)
        names = Alphabet(tuple(gen for gen, _, _ in rules))
        words = tuple(names.parse(word, offset) for _, word, offset in rules)
        phi = cls(names, words)
        if check:
            phi.inverse()
        return phi

    @classmethod
    def from_json(cls, data: dict, check: bool = True) -> "Automorphism":
        if not isinstance(data, dict) or "images" not in data:
            raise ParseError("JSON automorphism needs an 'images' object", 0)
        images = data["images"]
        rank = data.get("rank", len(images))
        if rank != len(images):
            raise ParseError(f"rank {rank} but {len(images)} images", 0)
        return cls.from_images(images, check=check)

    def to_json(self) -> dict:
        return {"rank": self.rank, "images": {g: self.format_word(w) for g, w in zip(self.names.names, self.images)}}

    def format_word(self, w: Sequence[int]) -> str:
        return self.names.format(w) or "1"

    def __str__(self) -> str:
        return "; ".join(f"{g}->{self.format_word(w)}" for g, w in zip(self.names.names, self.images))

    def key(self) -> str:
        """Content hash of the images sorted by generator name."""
        data = {g: self.format_word(w) for g, w in zip(self.names.names, self.images)}
        return canonical_hash({"rank": self.rank, "images": dict(sorted(data.items()))})

    # ------------------------------------------------------------------
    # Algebra
    # ------------------------------------------------------------------

    @classmethod
    def identity(cls, n: int, names: Alphabet | None = None) -> "Automorphism":
        return cls(names or Alphabet.standard(n), tuple((i,) for i in range(1, n + 1)))

    def __call__(self, word: Sequence[int]) -> Word:
        out: list[int] = []
        for x in word:
            out.extend(self.images[x - 1] if x > 0 else inverse(self.images[-x - 1]))
        return reduce_word(out)

    def compose(self, other: "Automorphism") -> "Automorphism":
        """``self ∘ other``"""
        return Automorphism(self.names, tuple(self(w) for w in other.images))

    def __matmul__(self, other: "Automorphism") -> "Automorphism":
        return self.compose(other)

    @cached_property
    def _inverse(self) -> "Automorphism":
        folding = AnnotatedFolding.invert(self.images, self.rank)
        return Automorphism(self.names, tuple(folding.inverse_images()))

    def inverse(self) -> "Automorphism":
        """Inverse automorphism; raises NotInvertibleError for non-bases."""
        return self._inverse

    def power(self, k: int) -> "Automorphism":
        base = self if k >= 0 else self.inverse()
        result = Automorphism.identity(self.rank, self.names)
        square = base
        k = abs(k)
        while k:
            if k & 1:
                result = square.compose(result)
            square = square.compose(square)
            k >>= 1
        return result

    def is_identity(self) -> bool:
        return all(w == (i,) for i, w in enumerate(self.images, start=1))

    def __eq__(self, other) -> bool:
        return isinstance(other, Automorphism) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def conjugated_by(self, c: Sequence[int]) -> "Automorphism":
        """``i_c ∘ self``, i.e. ``x ↦ c Φ(x) c⁻¹``"""
        return Automorphism(self.names, tuple(concat(c, w, inverse(c)) for w in self.images))

    def is_inner(self) -> bool:
        return find_conjugator(self, Automorphism.identity(self.rank, self.names)) is not None

    def map_circuit(self, w: Sequence[int]) -> Word:
        return canonical_circuit(self(w))


def find_conjugator(phi: Automorphism, psi: Automorphism) -> Word | None:
    """Word ``c`` with ``Φ = i_c ∘ Ψ`` or None if Φ and Ψ are not in the same outer class."""
    if phi.rank != psi.rank:
        return None
    if phi.rank == 1:
        return () if phi.images == psi.images else None
    window = sum(len(w) for w in phi.images + psi.images) + 2
    for c in conjugators(psi.images[0], phi.images[0], window=window):
        if all(concat(c, psi.images[i], inverse(c)) == phi.images[i] for i in range(1, phi.rank)):
            return c
    return None


def random_automorphism(rank: int, steps: int, rng) -> Automorphism:
    """Product of ``steps`` random elementary Nielsen moves (for corpus runs)."""
    names = Alphabet.standard(rank)
    images = [(i,) for i in range(1, rank + 1)]
    for _ in range(steps):
        i = rng.randrange(rank)
        move = rng.randrange(3) if rank > 1 else 2
        if move == 0:
            j = rng.choice([k for k in range(rank) if k != i])
            sign = rng.choice((1, -1))
            other = images[j] if sign > 0 else inverse(images[j])
            images[i] = concat(images[i], other) if rng.random() < 0.5 else concat(other, images[i])
        elif move == 1:
            j = rng.choice([k for k in range(rank) if k != i])
            images[i], images[j] = images[j], images[i]
        else:
            images[i] = inverse(images[i])
    return Automorphism(names, tuple(images))
