"""Cancellation and attraction constants of a representative."""

import math
from dataclasses import dataclass
from functools import cache

import sympy

from train_track_builder.core.exceptions import NotEGError
from train_track_builder.toprep.toprep import TopRep


def is_locally_injective(f: TopRep) -> bool:
    """Df is injective on the directions at every vertex."""
    for v in range(f.graph.num_vertices):
        images = [f.df(d) for d in f.graph.star(v)]
        if None in images or len(set(images)) != len(images):
            return False
    return True


def lipschitz(f: TopRep) -> int:
    return max((len(img) for img in f.edge_images), default=0)


def inverse_length(f: TopRep) -> int:
    """Longest edge path a homotopy inverse of ``f`` needs per edge (through the marking)."""
    g = f.graph
    psi = f.automorphism().inverse()
    longest = max((len(g.mark(img)) for img in psi.images), default=0)
    tree = max((len(g.tree_path(v)) for v in range(g.num_vertices)), default=0)
    return longest + 2 * tree


def bcc(f: TopRep) -> int:
    """Bounded cancellation constant.

    Zero when Df is injective at every vertex (no cancellation can start);
    otherwise ``ceil(2 · Lip(f) · D)`` with ``D`` the inverse length.
    """
    if is_locally_injective(f):
        return 0
    return math.ceil(2 * lipschitz(f) * inverse_length(f))


def image_doubling_exponent(f: TopRep, r: int, limit: int = 64) -> int:
    """Least ``l`` with every H_r edge crossing at least two H_r edges under ``f^l``."""
    assert f.filtration is not None
    stratum = set(f.filtration[r].edges)
    paths = {e: (e,) for e in stratum}
    for l in range(1, limit + 1):
        paths = {e: f.map_path(p) for e, p in paths.items()}
        if all(sum(1 for x in p if abs(x) in stratum) >= 2 for p in paths.values()):
            return l
    raise NotEGError(f"stratum {r} does not expand")


def critical_constant(f: TopRep, r: int) -> int:
    """``C = 4·l·C0 + 1`` with ``C0 = bcc(f)``."""
    if f.filtration is None or not f.filtration[r].is_eg:
        raise NotEGError(f"stratum {r} is not exponentially growing")
    return 4 * image_doubling_exponent(f, r) * bcc(f) + 1


@cache
def landau(m: int) -> int:
    """Largest order of a permutation of ``m`` letters (maximal lcm of a partition of m)."""
    best = [1] * (m + 1)
    for p in sympy.primerange(2, m + 1):
        new = best[:]
        for s in range(m + 1):
            q = p
            while q <= s:
                new[s] = max(new[s], best[s - q] * q)
                q *= p
        best = new
    return max(best)


@cache
def kn_bound(n: int) -> int:
    """Certified rotationless exponent ``g(15(n−1))! · 3^(n²−1)``."""
    return math.factorial(landau(15 * (n - 1))) * 3 ** (n * n - 1)


def improved_kn_bound(n: int) -> int:
    """``g(6(n−1))! · 3^(n²−1)``."""
    return math.factorial(landau(6 * (n - 1))) * 3 ** (n * n - 1)


@dataclass(frozen=True)
class Constants:
    bcc: int
    C: int
    C0: int
    C_E: int
    M: int
    l: int
    K_n: int

    def to_json(self) -> dict:
        return {
            "bcc": self.bcc,
            "C": self.C,
            "C0": self.C0,
            "C_E": self.C_E,
            "M": self.M,
            "l": self.l,
            "K_n_bits": self.K_n.bit_length(),
        }


def constants(f: TopRep, r: int) -> Constants:
    n = f.graph.rank
    l = image_doubling_exponent(f, r)
    c = critical_constant(f, r)
    return Constants(bcc(f), c, c + 2, 6 * (n - 1), 2 * n, l, kn_bound(n))
