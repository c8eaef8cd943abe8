import math
import time

import pytest

from train_track_builder.core.config import Config
from train_track_builder.core.exceptions import DegenerateRayError, LiftError, NotEGError, StructuralError
from train_track_builder.graphs.words import canonical_circuit
from train_track_builder.nielsen import (
    FixedPointKind,
    Lift,
    PieceKind,
    Ray,
    complete_split,
    find_eg_inps,
    find_fixed_point,
    illegal_turns,
    is_rotationless,
    kn_bound,
    landau,
    principal_set,
    principal_vertices,
    rays_common_tail,
    rotationless_power,
)
from train_track_builder.nielsen.constants import bcc, constants, critical_constant, improved_kn_bound
from train_track_builder.nielsen.principal import fixed_subgraph
from train_track_builder.toprep.toprep import TopRep, refine_filtration

COMMUTATOR = (1, 2, -1, -2)


class TestConstants:
    @pytest.mark.parametrize("m, expected", [(1, 1), (2, 2), (5, 6), (7, 12), (8, 15), (15, 105)])
    def test_landau(self, m, expected):
        assert landau(m) == expected

    def test_kn_bound_rank_two(self):
        assert kn_bound(2) == math.factorial(105) * 27

    def test_improved_bound(self):
        assert improved_kn_bound(2) == math.factorial(6) * 27
        assert improved_kn_bound(3) < kn_bound(3)

    def test_no_cancellation_for_a_homeomorphism(self, identity3):
        assert bcc(refine_filtration(TopRep.from_automorphism(identity3))) == 0

    def test_critical_constant(self, commutator_rep):
        c0 = bcc(commutator_rep)
        assert c0 > 0
        c = constants(commutator_rep, 0)
        assert c.C == critical_constant(commutator_rep, 0)
        assert (c.C - 1) % (4 * c0) == 0
        assert (c.C0, c.C_E, c.M) == (c.C + 2, 6, 4)

    def test_critical_constant_needs_an_eg_stratum(self, two_vertex_rep):
        with pytest.raises(NotEGError):
            critical_constant(two_vertex_rep, 3)


# ---------------------------------------------------------------------------
# Indivisible Nielsen paths and principal vertices
# ---------------------------------------------------------------------------


class TestNielsenPaths:
    def test_illegal_turn(self, commutator_rep):
        turns = {frozenset(t) for t in illegal_turns(commutator_rep, 0)}
        assert frozenset({-1, -2}) in turns

    def test_commutator_is_the_only_inp(self, commutator_rep):
        inps = find_eg_inps(commutator_rep, 0)
        assert len(inps) == 1
        (rho,) = inps
        assert commutator_rep.map_path(rho) == rho
        assert canonical_circuit(rho) == canonical_circuit(COMMUTATOR)

    def test_search_finishes_quickly_at_the_default_length(self, commutator_rep):
        start = time.perf_counter()
        inps = find_eg_inps(commutator_rep, 0)
        assert time.perf_counter() - start < 5.0
        assert [canonical_circuit(rho) for rho in inps] == [canonical_circuit(COMMUTATOR)]

    @pytest.mark.parametrize("max_length", [8, 64, 512])
    def test_result_does_not_depend_on_the_length_cap(self, commutator_rep, max_length):
        inps = find_eg_inps(commutator_rep, 0, Config(INP_SEARCH_MAX_LENGTH=max_length))
        assert [canonical_circuit(rho) for rho in inps] == [canonical_circuit(COMMUTATOR)]

    def test_needs_an_eg_stratum(self, two_vertex_rep):
        with pytest.raises(NotEGError):
            find_eg_inps(two_vertex_rep, 0)

    def test_principal_vertices(self, commutator_rep, two_vertex_rep):
        assert principal_set(commutator_rep) == {0}
        assert principal_set(two_vertex_rep) == {0, 1}
        classes = principal_vertices(two_vertex_rep)
        assert [c.vertices for c in classes] == [[0], [1]]
        assert all(c.principal for c in classes)

    def test_fixed_subgraph(self, two_vertex_rep):
        fix = fixed_subgraph(two_vertex_rep)
        assert set(fix.nodes) == {0, 1}
        assert fix.number_of_edges() == 1


class TestSplittings:
    def test_linear_nielsen_path(self, two_vertex_rep):
        split = complete_split(two_vertex_rep, (3, 1, -3))
        assert [p.kind for p in split.pieces] == [PieceKind.INP]

    def test_exceptional_path(self, two_vertex_rep):
        split = complete_split(two_vertex_rep, (2, 1, -3))
        assert [p.kind for p in split.pieces] == [PieceKind.EXCEPTIONAL]

    def test_edge_splitting(self, two_vertex_rep):
        split = complete_split(two_vertex_rep, (4, 2))
        assert [p.kind for p in split.pieces] == [PieceKind.EDGE, PieceKind.EDGE]
        assert split.splitting_positions() == [1]
        assert split.format(two_vertex_rep) == "d · b"

    def test_cancelling_path_is_not_split(self, two_vertex_rep):
        assert complete_split(two_vertex_rep, (3, 2, -3)) is None

    def test_untight_path(self, two_vertex_rep):
        with pytest.raises(StructuralError):
            complete_split(two_vertex_rep, (1, -1))


class TestRays:
    def test_eigenray_prefix(self, two_vertex_rep):
        ray = Ray.eigenray(two_vertex_rep, 4)
        assert ray.prefix(4) == (4, 2, 2, 1)
        assert ray.start == 1

    def test_common_tail(self, two_vertex_rep):
        ray = Ray.eigenray(two_vertex_rep, 4)
        shifted = Ray(two_vertex_rep, (2,))
        assert rays_common_tail(two_vertex_rep, ray, ray) == (0, 0)
        assert rays_common_tail(two_vertex_rep, ray, shifted) == (1, 0)

    def test_nielsen_generator_is_degenerate(self, two_vertex_rep):
        with pytest.raises(DegenerateRayError):
            Ray(two_vertex_rep, (1,))

    def test_fixed_edge_has_no_eigenray(self, two_vertex_rep):
        with pytest.raises(StructuralError):
            Ray.eigenray(two_vertex_rep, 1)


# ---------------------------------------------------------------------------
# Lifts and fixed points
# ---------------------------------------------------------------------------


class TestLifts:
    def test_default_lift(self, commutator_rep, commutator_tt):
        assert Lift.default(commutator_rep).automorphism == commutator_tt

    def test_lift_for_a_representative(self, commutator_rep, commutator_tt):
        psi = commutator_tt.conjugated_by((2, -1))
        assert Lift.for_automorphism(commutator_rep, psi).automorphism == psi

    def test_wrong_outer_class(self, commutator_rep, swap):
        with pytest.raises(LiftError):
            Lift.for_automorphism(commutator_rep, swap)

    def test_rho_must_end_at_the_image(self, two_vertex_rep):
        with pytest.raises(LiftError):
            Lift(two_vertex_rep, (-3,))

    def test_fixed_base(self, commutator_rep):
        lift = Lift.default(commutator_rep)
        result = find_fixed_point(commutator_rep, lift)
        assert result.kind == FixedPointKind.FIXED
        assert result.vertex == ()
        assert result.to_json(commutator_rep) == {"kind": "fixed", "steps": 0, "vertex": "1"}

    @pytest.mark.parametrize("c", [(1,), (2,), (-1, -2), (1, 2)])
    def test_walk_agrees_with_the_ball(self, commutator_rep, c):
        lift = Lift.default(commutator_rep).translate(c)
        result = find_fixed_point(commutator_rep, lift)
        if result.is_fixed:
            assert lift.is_fixed(result.vertex)
        else:
            assert not lift.ball(3).fixed_vertices()

    def test_lift_of_another_representative(self, commutator_rep, two_vertex_rep):
        with pytest.raises(LiftError):
            find_fixed_point(commutator_rep, Lift.default(two_vertex_rep))


class TestRotationless:
    def test_train_track_is_rotationless(self, commutator_tt):
        k, cert = rotationless_power(commutator_tt)
        assert k == 1
        assert cert.to_json()["K_n"] == str(math.factorial(105) * 27)

    def test_identity(self, identity3):
        k, _ = rotationless_power(identity3)
        assert k == 1

    def test_swap_needs_the_square(self, swap):
        k, cert = rotationless_power(swap)
        assert k == 2
        assert cert.tried == [2]
        f = refine_filtration(TopRep.from_automorphism(swap))
        assert not is_rotationless(f)
        assert is_rotationless(f.power(2))
