from fractions import Fraction

import pytest

from train_track_builder.core.config import Verdict
from train_track_builder.core.exceptions import StructuralError
from train_track_builder.fixgraph import (
    CoreCase,
    IndexReport,
    RayKind,
    Variant,
    compute_fix,
    core_filtration,
    extend_to_rays,
    fix_possibilities,
    fixed_conjugacy_classes,
    index,
    is_hyperbolic,
    is_primitively_atoroidal,
    stallings_fixed_graph,
)
from train_track_builder.fixgraph.index import ClassIndex, index_of_graph
from train_track_builder.fixgraph.properties import h1_mod2_trivial
from train_track_builder.graphs.automorphism import Automorphism
from train_track_builder.graphs.words import canonical_circuit, inverse
from train_track_builder.toprep.toprep import TopRep, refine_filtration

COMMUTATOR = (1, 2, -1, -2)

# a1 fixed, a2 linear over a1, a3 split at a new vertex into two NEG edges
# whose suffixes are powers of a2.
EYEGLASSES_AND_LINE = {
    "vertices": ["v", "w"],
    "edges": {"a": ["v", "v"], "b": ["v", "v"], "c": ["w", "v"], "d": ["w", "v"]},
    "base": "v",
    "images": {"a": "a", "b": "ba", "c": "cBBBBBB", "d": "dbbbbbbb"},
}


def is_commutator_class(word) -> bool:
    return canonical_circuit(word) in {canonical_circuit(COMMUTATOR), canonical_circuit(inverse(COMMUTATOR))}


@pytest.fixture
def linear_tower():
    return Automorphism.parse("a->a; b->baa; d->Adb")


@pytest.fixture
def eyeglasses_rep():
    return refine_filtration(TopRep.from_json(EYEGLASSES_AND_LINE))


# ---------------------------------------------------------------------------
# Fixed-point graphs
# ---------------------------------------------------------------------------


class TestStallingsGraphs:
    def test_fixed_loop_and_lollipops(self, two_vertex_rep):
        s = stallings_fixed_graph(two_vertex_rep)
        assert s.variant == Variant.S
        assert [two_vertex_rep.graph.name(lp.edge) for lp in s.lollipops] == ["b", "c"]
        assert s.is_immersion()
        assert len(s.components()) == 2

    def test_inp_edge(self, commutator_rep):
        s = stallings_fixed_graph(commutator_rep)
        assert len(s.inp_edges) == 1
        assert s.has_circuits()
        assert s.component_rank(s.components()[0]) == 1

    def test_principal_graph_keeps_principal_vertices(self, two_vertex_rep):
        ps = stallings_fixed_graph(two_vertex_rep, Variant.PS)
        assert len(ps.components()) == 2
        assert ps.principal == frozenset(ps.vertex_of.values())

    def test_unknown_variant(self, commutator_rep):
        with pytest.raises(StructuralError):
            stallings_fixed_graph(commutator_rep, "QS")

    def test_rays_need_the_principal_graph(self, commutator_rep):
        with pytest.raises(StructuralError):
            extend_to_rays(stallings_fixed_graph(commutator_rep, Variant.S))

    def test_rays_with_a_common_tail_share_an_end(self, commutator_rep):
        cs = extend_to_rays(stallings_fixed_graph(commutator_rep, Variant.PS))
        assert cs.variant == Variant.CS
        assert len(cs.rays) == 3
        assert all(r.kind == RayKind.EG for r in cs.rays)
        (comp,) = cs.components()
        assert cs.ends(comp) == 2

    def test_fixed_classes(self, commutator_rep, two_vertex_rep):
        (word,) = fixed_conjugacy_classes(commutator_rep, 4)
        assert is_commutator_class(word)
        classes = fixed_conjugacy_classes(two_vertex_rep, 3)
        assert (1,) in classes or (-1,) in classes

    def test_json_and_dot(self, two_vertex_rep):
        cs = extend_to_rays(stallings_fixed_graph(two_vertex_rep, Variant.PS))
        data = cs.to_json(depth=4)
        assert data["variant"] == "CS"
        assert sorted(lp["edge"] for lp in data["lollipops"]) == ["b", "c"]
        assert all(len(r["prefix"]) > 0 for r in data["rays"])
        assert cs.to_dot(depth=3).startswith("digraph")


# ---------------------------------------------------------------------------
# Fixed subgroups
# ---------------------------------------------------------------------------


class TestFix:
    def test_identity_fixes_everything(self, identity3):
        fix = compute_fix(identity3)
        assert fix.rank == 3
        assert fix.contains((1, 2, -3))

    def test_swap_fixes_nothing(self, swap):
        fix = compute_fix(swap)
        assert fix.rank == 0
        assert not fix.contains((1, 2))
        assert fix.contains(())

    def test_linear_tower(self, linear_tower):
        fix = compute_fix(linear_tower)
        assert fix.rank == 2
        assert fix.contains((1,))
        assert fix.contains((2, 1, -2))
        assert all(linear_tower(w) == w for w in fix.generators)
        assert fix.to_json()["rank"] == 2

    def test_generators_are_fixed(self, commutator_tt):
        fix = compute_fix(commutator_tt)
        assert fix.rank <= 1
        assert all(commutator_tt(w) == w for w in fix.generators)

    def test_possibilities(self, linear_tower):
        classes = fix_possibilities(linear_tower)
        assert len(classes) == 2
        assert all(c.principal for c in classes)
        assert sorted(c.rank for c in classes) == [1, 2]


# ---------------------------------------------------------------------------
# Index
# ---------------------------------------------------------------------------


class TestIndex:
    def test_class_index(self):
        c = ClassIndex(rank=1, attractors=3, neg_rays=1)
        assert c.r_hat == Fraction(5, 2)
        assert c.i == Fraction(3, 2)
        assert c.j == 2

    def test_index_is_never_negative(self):
        assert ClassIndex(0, 1, 0).i == 0

    def test_fully_irreducible(self, commutator_tt):
        report = index(commutator_tt)
        assert report.exact
        assert report.i == 1
        assert report.j == 1
        assert report.bound_violations() == []

    def test_identity(self, identity3):
        report = index(identity3)
        assert report.i == report.j == 2

    def test_eyeglasses_and_line(self, eyeglasses_rep):
        cs = extend_to_rays(stallings_fixed_graph(eyeglasses_rep, Variant.PS))
        report = IndexReport(3, 1, index_of_graph(cs))
        assert report.components == 2
        assert report.i == 1
        assert report.j == 2
        assert report.to_json()["violations"] == []

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_eyeglasses_and_lines_family(self, lollipop_chain, n):
        report = index(lollipop_chain(n))
        assert report.exact
        assert report.components == n - 1
        assert (report.i, report.j) == (1, n - 1)
        assert report.bound_violations() == []

    def test_violations_are_reported(self):
        report = IndexReport(2, 1, [ClassIndex(3, 0, 0)])
        assert report.bound_violations()
        assert not IndexReport(2, 2, []).exact


# ---------------------------------------------------------------------------
# Decision procedures
# ---------------------------------------------------------------------------


class TestDecisions:
    def test_fixed_commutator_is_not_hyperbolic(self, commutator_tt):
        result = is_hyperbolic(commutator_tt)
        assert result.verdict == Verdict.NO
        assert is_commutator_class(result.witness)
        assert "witness" in result.to_json(commutator_tt)

    def test_fixed_generator_is_not_hyperbolic(self, linear_tower):
        assert not is_hyperbolic(linear_tower).holds

    def test_fully_irreducible_is_primitively_atoroidal(self, commutator_tt):
        result = is_primitively_atoroidal(commutator_tt)
        assert result.verdict == Verdict.YES
        assert result.detail["h1_trivial"]

    def test_fixed_loop_stratum(self, linear_tower):
        result = is_primitively_atoroidal(linear_tower)
        assert result.verdict == Verdict.NO
        assert result.witness == (1,)
        assert result.to_json(linear_tower)["witness"] == "a"

    @pytest.mark.parametrize("word, expected", [((1, 2, -1, -2), True), ((1,), False), ((1, 1, 2, 2), True)])
    def test_h1_mod2(self, word, expected):
        assert h1_mod2_trivial(word) == expected


class TestCoreFiltration:
    def test_single_eg_step(self, commutator_rep):
        assert core_filtration(commutator_rep).cases() == [CoreCase.EG]

    def test_neg_steps(self, two_vertex_rep):
        core = core_filtration(two_vertex_rep)
        assert core.cases() == [CoreCase.FIXED_LOOP, CoreCase.ATTACHED_EDGE, CoreCase.EDGE_PAIR]
        assert core.levels == [0, 1, 3]
        assert [s.delta_chi for s in core.steps] == [0, 1, 1]
        assert core.to_json(two_vertex_rep)["steps"][2]["edges"] == ["c", "d"]
