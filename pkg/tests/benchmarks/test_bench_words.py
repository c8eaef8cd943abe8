"""Benchmarks for word reduction, folding and path maps."""

import random

import pytest

from train_track_builder.ffs.system import rose
from train_track_builder.graphs.automorphism import Automorphism
from train_track_builder.graphs.ggraph import based_stallings_graph
from train_track_builder.graphs.words import canonical_circuit, reduce_word
from train_track_builder.toprep.toprep import TopRep


def random_word(length: int, rank: int = 3, seed: int = 0) -> tuple[int, ...]:
    rng = random.Random(seed)  # nosec B311
    return tuple(rng.choice([1, -1]) * rng.randint(1, rank) for _ in range(length))


# ---------------------------------------------------------------------------
# Word benchmarks
# ---------------------------------------------------------------------------
class TestWordBenchmarks:
    """Benchmarks for free reduction and cyclic normal forms."""

    @pytest.mark.parametrize("length", [100, 10_000])
    def test_reduce(self, benchmark, length):
        """Benchmark: free reduction of a random word."""
        benchmark(reduce_word, random_word(length))

    def test_canonical_circuit(self, benchmark):
        """Benchmark: least rotation of a 500 letter circuit."""
        benchmark(canonical_circuit, reduce_word(random_word(500)))


# ---------------------------------------------------------------------------
# Folding benchmarks
# ---------------------------------------------------------------------------
class TestFoldBenchmarks:
    """Benchmarks for Stallings folding of subgroup generators."""

    def test_fold_ten_generators(self, benchmark):
        """Benchmark: fold ten random generators of length 20 in F_3."""
        words = [reduce_word(random_word(20, seed=s)) for s in range(10)]
        base = rose(("a", "b", "c"))
        benchmark(based_stallings_graph, words, base)


# ---------------------------------------------------------------------------
# Path map benchmarks
# ---------------------------------------------------------------------------
class TestMapPathBenchmarks:
    """Benchmarks for tightened images of paths."""

    @pytest.fixture
    def rep(self):
        return TopRep.from_automorphism(Automorphism.parse("a->ab; b->bab"))

    def test_map_path(self, benchmark, rep):
        """Benchmark: image of a 1000 edge path."""
        path = reduce_word(random_word(1000, rank=2))
        benchmark(rep.map_path, path)

    def test_iterate_path(self, benchmark, rep):
        """Benchmark: eighth iterate of an edge."""
        benchmark(rep.iterate_path, (1,), 8)
