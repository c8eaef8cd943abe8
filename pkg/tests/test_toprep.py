import random

import numpy as np
import pytest

from train_track_builder.core.exceptions import NotInvertibleError, NotIrreducibleError, ParseError, StructuralError
from train_track_builder.graphs.automorphism import Automorphism, find_conjugator, random_automorphism
from train_track_builder.toprep.moves import collapse_edge, fold_turn, reorient, slide, subdivide
from train_track_builder.toprep.normalize import (
    NormalizationNotes,
    check_core_closure,
    close_under_cores,
    normalize_representative,
)
from train_track_builder.toprep.perron import PFValue, is_irreducible, pf_eigenvalue, pf_eigenvector
from train_track_builder.toprep.rtt import LedgerEntry, RTTLedger, check_rtt, rtt
from train_track_builder.toprep.toprep import (
    Filtration,
    StratumKind,
    TopRep,
    core_subgraph,
    refine_filtration,
    transition_matrices,
)

GOLDEN_SQUARE = (3 + 5**0.5) / 2


def same_outer_class(f: TopRep, phi: Automorphism) -> bool:
    return find_conjugator(f.automorphism(), phi) is not None


# ---------------------------------------------------------------------------
# Representatives
# ---------------------------------------------------------------------------


class TestTopRep:
    def test_from_automorphism(self, commutator_tt):
        f = TopRep.from_automorphism(commutator_tt)
        assert f.graph.num_vertices == 1
        assert f.automorphism() == commutator_tt
        assert str(f) == "a->ab; b->bab"

    def test_iterates(self, commutator_rep):
        assert commutator_rep.iterate_path((1,), 2) == (1, 2, 2, 1, 2)
        assert commutator_rep.power(2).image(1) == (1, 2, 2, 1, 2)

    def test_transition_matrix(self, commutator_rep):
        assert commutator_rep.transition_matrix.tolist() == [[1, 1], [1, 2]]

    def test_transition_matrices_per_stratum(self, two_vertex_rep):
        strata = transition_matrices(two_vertex_rep)
        assert len(strata) == len(two_vertex_rep.filtration)
        assert [m.tolist() for m in strata] == [[[1]], [[1]], [[1]], [[1]]]
        assert two_vertex_rep.transition_matrix.shape == (4, 4)

    def test_unfiltered_map_is_refined(self, commutator_tt):
        (eg,) = transition_matrices(TopRep.from_automorphism(commutator_tt))
        assert eg.tolist() == [[1, 1], [1, 2]]

    def test_derivative_and_legality(self, commutator_rep):
        assert commutator_rep.df(1) == 1
        assert commutator_rep.df(-1) == -2
        assert commutator_rep.is_legal(commutator_rep.image(2))

    def test_two_vertex_automorphism(self, two_vertex_rep):
        assert str(two_vertex_rep.automorphism()) == "a->a; b->baa; d->Adb"
        assert two_vertex_rep.fixed_vertices() == [0, 1]
        assert two_vertex_rep.is_fixed_edge(1)
        assert not two_vertex_rep.is_fixed_edge(2)

    def test_json_round_trip(self, two_vertex_rep):
        again = TopRep.from_json(two_vertex_rep.to_json())
        assert again.edge_images == two_vertex_rep.edge_images
        assert again.vertex_map == two_vertex_rep.vertex_map

    def test_missing_images(self, two_vertex_json):
        del two_vertex_json["images"]
        with pytest.raises(ParseError):
            TopRep.from_json(two_vertex_json)

    def test_untight_image(self, two_vertex_json):
        two_vertex_json["images"] = dict(two_vertex_json["images"], a="aAa")
        with pytest.raises(StructuralError):
            TopRep.from_json(two_vertex_json)

    def test_not_a_homotopy_equivalence(self):
        data = {"vertices": ["v"], "edges": {"a": ["v", "v"], "b": ["v", "v"]}, "images": {"a": "aa", "b": "b"}}
        with pytest.raises(NotInvertibleError):
            TopRep.from_json(data)


class TestFiltration:
    def test_single_eg_stratum(self, commutator_rep):
        (stratum,) = commutator_rep.filtration
        assert stratum.kind == StratumKind.EG
        assert float(stratum.pf) == pytest.approx(GOLDEN_SQUARE)
        assert commutator_rep.lambdas() == pytest.approx((GOLDEN_SQUARE,))

    def test_neg_kinds(self, two_vertex_rep):
        kinds = [s.kind for s in two_vertex_rep.filtration]
        assert kinds == [
            StratumKind.NEG_FIXED,
            StratumKind.NEG_LINEAR,
            StratumKind.NEG_LINEAR,
            StratumKind.NEG_NONLINEAR,
        ]
        b = two_vertex_rep.filtration[1]
        assert (b.axis, b.exponent) == ((1,), 2)
        c = two_vertex_rep.filtration[2]
        assert (c.axis, c.exponent) == ((1,), 1)

    def test_elements(self, two_vertex_rep):
        filtration = two_vertex_rep.filtration
        assert filtration.element(1) == frozenset({1, 2})
        assert filtration.below(0) == frozenset()
        assert filtration.height(-4) == 3
        assert filtration.path_height((1, 2)) == 1

    def test_core_subgraph(self, two_vertex_rep):
        g = two_vertex_rep.graph
        assert core_subgraph(g, frozenset({1, 2, 3})) == frozenset({1, 2})
        assert core_subgraph(g, frozenset({3, 4})) == frozenset({3, 4})


# ---------------------------------------------------------------------------
# Moves
# ---------------------------------------------------------------------------


class TestMoves:
    def test_subdivide_keeps_the_automorphism(self, commutator_rep, commutator_tt):
        f, first, second = subdivide(commutator_rep, 1, 1)
        assert f.graph.num_edges == 3
        assert f.image(first) == (1, second)
        assert f.image(second) == (2,)
        assert f.automorphism() == commutator_tt

    def test_subdivide_out_of_range(self, commutator_rep):
        with pytest.raises(StructuralError):
            subdivide(commutator_rep, 1, 2)

    def test_collapse_undoes_subdivision(self, commutator_rep, commutator_tt):
        f, _, second = subdivide(commutator_rep, 1, 1)
        back = collapse_edge(f, second, 0)
        assert back.graph.num_edges == 2
        assert same_outer_class(back, commutator_tt)

    def test_reorient(self, two_vertex_rep):
        f = reorient(two_vertex_rep, 3)
        assert f.image(3) == (-1, 3)
        assert same_outer_class(f, two_vertex_rep.automorphism())

    def test_slide(self, two_vertex_rep):
        f = slide(two_vertex_rep, 4, (2,))
        assert same_outer_class(f, two_vertex_rep.automorphism())

    def test_slide_rejects_paths_through_the_edge(self, two_vertex_rep):
        with pytest.raises(StructuralError):
            slide(two_vertex_rep, 2, (2,))

    def test_fold_turn(self):
        phi = Automorphism.parse("a->ab; b->aab")
        f = fold_turn(TopRep.from_automorphism(phi), 1, 2)
        assert same_outer_class(f, phi)

    def test_fold_needs_a_common_prefix(self, commutator_rep):
        with pytest.raises(StructuralError):
            fold_turn(commutator_rep, 1, 2)


# ---------------------------------------------------------------------------
# Perron-Frobenius
# ---------------------------------------------------------------------------


class TestPerron:
    @pytest.mark.parametrize(
        "matrix, expected",
        [
            ([[1, 1], [1, 2]], True),
            ([[0, 1], [1, 0]], True),
            ([[1, 0], [0, 1]], False),
            ([[0]], False),
            ([[1, 1], [0, 1]], False),
        ],
    )
    def test_irreducible(self, matrix, expected):
        assert is_irreducible(matrix) == expected

    def test_eigenvalue(self):
        value = pf_eigenvalue([[1, 1], [1, 2]], precision=1e-12)
        assert float(value) == pytest.approx(GOLDEN_SQUARE, abs=1e-11)
        assert value.upper - value.lower <= 1e-12

    def test_exact_comparison(self):
        assert pf_eigenvalue([[1, 1], [1, 2]]) == pf_eigenvalue([[2, 1], [1, 1]])
        assert pf_eigenvalue([[0, 1], [1, 0]]) == 1
        assert PFValue.exact(2) < pf_eigenvalue([[1, 1], [1, 2]])
        assert pf_eigenvalue([[1, 1], [1, 1]]) == PFValue.exact(2)

    def test_reducible_matrix(self):
        with pytest.raises(NotIrreducibleError):
            pf_eigenvalue([[1, 0], [0, 2]])

    def test_eigenvector(self):
        m = np.array([[1, 1], [1, 2]])
        v = pf_eigenvector(m)
        assert v.sum() == pytest.approx(1.0)
        assert (v > 0).all()
        assert m @ v == pytest.approx(GOLDEN_SQUARE * v)


# ---------------------------------------------------------------------------
# Relative train tracks
# ---------------------------------------------------------------------------


class TestRTT:
    def test_already_a_train_track(self, commutator_tt):
        ledger = RTTLedger()
        f = rtt(commutator_tt, ledger=ledger)
        assert check_rtt(f).ok
        assert ledger[0].move == "start"
        assert ledger.is_non_increasing()

    def test_inverse_has_the_same_growth(self, commutator_tt):
        f = rtt(commutator_tt.inverse())
        assert f.lambdas() == pytest.approx((GOLDEN_SQUARE,))

    def test_reducible(self):
        f = rtt(Automorphism.parse("a->ab; b->b"))
        assert check_rtt(f).ok
        assert f.num_eg_strata() == 0

    @pytest.mark.parametrize("seed", [1, 7, 42])
    def test_random_automorphisms(self, seed):
        phi = random_automorphism(3, 6, random.Random(seed))
        ledger = RTTLedger()
        f = rtt(phi, ledger=ledger)
        assert check_rtt(f).ok
        assert ledger.is_non_increasing()
        assert ledger.repairs_strictly_decrease()
        assert same_outer_class(f, phi)

    @pytest.mark.parametrize("seed", [1, 7, 42])
    def test_every_repair_is_recorded(self, seed):
        phi = random_automorphism(3, 6, random.Random(seed))
        ledger = RTTLedger()
        f = rtt(phi, ledger=ledger)
        assert ledger[0].condition == ""
        assert all(e.condition in ("i", "ii", "iii") for e in ledger[1:])
        assert len(ledger.repairs()) == len(ledger) - 1
        assert not any(e.forced_tightening for e in ledger if e.condition in ("i", "ii"))
        assert ledger[-1].num_edges == f.graph.num_edges

    def test_tightening_fold_must_lower_growth(self):
        ledger = RTTLedger()
        ledger.append(LedgerEntry(0, "start", (2.0,), condition="", num_edges=2))
        ledger.append(LedgerEntry(1, "fold", (2.0,), forced_tightening=True, condition="iii", num_edges=2))
        assert not ledger.repairs_strictly_decrease()

    def test_no_repair_may_raise_growth(self):
        ledger = RTTLedger()
        ledger.append(LedgerEntry(0, "start", (2.0,), num_edges=2))
        ledger.append(LedgerEntry(1, "core subdivision", (2.5,), condition="i", num_edges=3))
        assert not ledger.repairs_strictly_decrease()
        ledger[-1] = LedgerEntry(1, "core subdivision", (2.0,), condition="i", num_edges=3)
        assert ledger.repairs_strictly_decrease()


class TestNormalize:
    def test_nothing_to_do(self, two_vertex_rep):
        notes = NormalizationNotes()
        f = normalize_representative(two_vertex_rep, notes)
        assert notes.subdivided == []
        assert notes.reoriented == []
        assert f.graph.num_edges == 4

    def test_interior_fixed_point_becomes_a_vertex(self):
        phi = Automorphism.parse("a->bab; b->b")
        notes = NormalizationNotes()
        f = normalize_representative(refine_filtration(TopRep.from_automorphism(phi)), notes)
        assert notes.subdivided == ["a"]
        assert f.graph.num_vertices == 2
        assert same_outer_class(f, phi)

    def test_reorients_edges_ending_with_themselves(self):
        phi = Automorphism.parse("a->a; b->ab")
        notes = NormalizationNotes()
        f = normalize_representative(refine_filtration(TopRep.from_automorphism(phi)), notes)
        assert notes.reoriented == ["b"]
        assert f.image(2)[0] == 2

    def test_fixed_points_are_taken_for_the_rotationless_power(self):
        phi = Automorphism.parse("a->b; b->cac; c->c; d->D")
        notes = NormalizationNotes()
        f = normalize_representative(refine_filtration(TopRep.from_automorphism(phi)), notes)
        assert notes.exponent == 2
        assert sorted(notes.subdivided) == ["a", "b"]
        assert same_outer_class(f, phi.power(2))
        assert check_core_closure(f) == []

    def test_explicit_exponent_is_used(self, two_vertex_rep):
        notes = NormalizationNotes()
        normalize_representative(two_vertex_rep, notes, exponent=1)
        assert notes.exponent == 1

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_lollipop_family_is_closed_under_cores(self, lollipop_chain, n):
        notes = NormalizationNotes()
        f = normalize_representative(refine_filtration(TopRep.from_automorphism(lollipop_chain(n))), notes)
        assert notes.exponent == 1
        assert sorted(notes.subdivided) == [f"a{k}" for k in range(3, n + 1)]
        assert check_core_closure(f) == []

    def test_interleaved_halves_are_regrouped(self, lollipop_chain):
        f = normalize_representative(refine_filtration(TopRep.from_automorphism(lollipop_chain(4))))
        g = f.graph
        by_edge = {s.edges[0]: s for s in f.filtration}
        assert len(by_edge) == len(f.filtration) == 6
        loop_vertex = g.init(1)

        def other_half(e):
            (x,) = {g.init(e), g.term(e)} - {loop_vertex}
            return next(k for k in g.edges() if k != e and x in (g.init(k), g.term(k)))

        order = (1, 2, 3, 4, other_half(3), other_half(4))
        interleaved = f.with_filtration(Filtration(tuple(by_edge[k] for k in order)))
        assert check_core_closure(interleaved)
        closed = close_under_cores(interleaved)
        assert check_core_closure(closed) == []
        assert [s.edges[0] for s in closed.filtration] == [1, 2, 3, other_half(3), 4, other_half(4)]

    def test_closed_filtration_is_left_alone(self, two_vertex_rep):
        assert close_under_cores(two_vertex_rep) is two_vertex_rep
