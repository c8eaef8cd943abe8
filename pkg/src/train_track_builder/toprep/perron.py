"""Perron-Frobenius eigenvalues with certified isolating intervals."""

from dataclasses import dataclass
from functools import total_ordering
from typing import Sequence

import networkx as nx
import numpy as np
import sympy

from train_track_builder.core.config import get_config
from train_track_builder.core.exceptions import NotIrreducibleError

LAMBDA = sympy.Symbol("lambda")


def is_irreducible(matrix: Sequence[Sequence[int]]) -> bool:
    """Nonzero and the support digraph is strongly connected."""
    m = np.asarray(matrix, dtype=np.int64)
    if m.size == 0 or not m.any():
        return False
    g = nx.DiGraph()
    g.add_nodes_from(range(m.shape[0]))
    g.add_edges_from(zip(*np.nonzero(m)))
    return nx.is_strongly_connected(g)


@total_ordering
@dataclass(frozen=True, eq=False)
class PFValue:
    """A real algebraic number: root of ``poly`` isolated in ``[lower, upper]``."""

    poly: sympy.Poly
    lower: sympy.Rational
    upper: sympy.Rational

    def __float__(self) -> float:
        return float((self.lower + self.upper) / 2)

    def __repr__(self) -> str:
        return f"PFValue({float(self):.10f}, {self.poly.as_expr()})"

    def refined(self, eps) -> "PFValue":
        if self.lower == self.upper:
            return self
        lo, hi = self.poly.refine_root(self.lower, self.upper, eps=eps)
        return PFValue(self.poly, sympy.Rational(lo), sympy.Rational(hi))

    def _isolated_against(self, q: sympy.Poly) -> "PFValue":
        value = self
        while q.count_roots(value.lower, value.upper) > 1:
            value = value.refined((value.upper - value.lower) / 4)
        return value

    def compare(self, other: "PFValue") -> int:
        a, b = self, other
        if a.upper < b.lower:
            return -1
        if b.upper < a.lower:
            return 1
        q = (a.poly * b.poly).sqf_part()
        a, b = a._isolated_against(q), b._isolated_against(q)
        lo, hi = max(a.lower, b.lower), min(a.upper, b.upper)
        if lo <= hi and q.count_roots(lo, hi) > 0:
            return 0
        while not (a.upper < b.lower or b.upper < a.lower):
            a = a.refined((a.upper - a.lower) / 4)
            b = b.refined((b.upper - b.lower) / 4)
        return -1 if a.upper < b.lower else 1

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, float)):
            other = PFValue.exact(other)
        return isinstance(other, PFValue) and self.compare(other) == 0

    def __lt__(self, other) -> bool:
        if isinstance(other, (int, float)):
            other = PFValue.exact(other)
        return self.compare(other) < 0

    def __hash__(self) -> int:
        return hash(round(float(self), 9))

    @classmethod
    def exact(cls, value) -> "PFValue":
        r = sympy.Rational(value)
        return cls(sympy.Poly(LAMBDA - r, LAMBDA), r, r)


def characteristic_polynomial(matrix: Sequence[Sequence[int]]) -> sympy.Poly:
    m = sympy.Matrix(np.asarray(matrix, dtype=np.int64).tolist())
    return sympy.Poly(m.charpoly(LAMBDA).as_expr(), LAMBDA)


def pf_eigenvalue(matrix: Sequence[Sequence[int]], precision: float | None = None) -> PFValue:
    """Perron-Frobenius eigenvalue of a nonnegative irreducible integer matrix."""
    if not is_irreducible(matrix):
        raise NotIrreducibleError("matrix is zero or reducible")
    eps = sympy.Rational(precision or get_config().PF_PRECISION)
    poly = characteristic_polynomial(matrix).sqf_part()
    intervals = poly.intervals()
    (lo, hi), _ = max(intervals, key=lambda item: item[0][1])
    value = PFValue(poly, sympy.Rational(lo), sympy.Rational(hi))
    return value.refined(eps)


def pf_eigenvector(matrix: Sequence[Sequence[int]]) -> np.ndarray:
    """Positive right eigenvector (edge lengths, M L = λ L) normalized to sum 1."""
    m = np.asarray(matrix, dtype=float)
    values, vectors = np.linalg.eig(m)
    k = int(np.argmax(values.real))
    v = np.abs(vectors[:, k].real)
    total = v.sum()
    return v / total if total else v
