import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from train_track_builder.core.exceptions import (
    NotInvertibleError,
    ParseError,
    RadiusExceededError,
    StructuralError,
    TrivialSubgroupError,
)
from train_track_builder.graphs.cover import cover_ball
from train_track_builder.graphs.ggraph import (
    AnnotatedFolding,
    based_stallings_graph,
    disjoint_union,
    fold,
    pullback_core,
    stallings_graph,
    wedge,
)
from train_track_builder.graphs.graph import MarkedGraph
from train_track_builder.graphs.words import reduce_word

letters = st.integers(min_value=-2, max_value=2).filter(lambda x: x != 0)
words = st.lists(letters, min_size=1, max_size=8).map(reduce_word).filter(bool)


@pytest.fixture
def rose2():
    return MarkedGraph.rose(2)


@pytest.fixture
def two_vertex_graph(two_vertex_json):
    return MarkedGraph.from_json(two_vertex_json)


class TestMarkedGraph:
    def test_rose(self, rose2):
        assert rose2.num_vertices == 1
        assert rose2.rank == 2
        assert rose2.star(0) == (1, -1, 2, -2)

    def test_default_marking_uses_spanning_tree(self, two_vertex_graph):
        g = two_vertex_graph
        assert g.rank == 3
        assert g.tree_edges == frozenset({3})
        assert g.generators.names == ("a", "b", "d")
        assert g.loop_of(4) == (-3, 4)

    def test_mark_and_unmark(self, two_vertex_graph):
        g = two_vertex_graph
        assert g.unmark((-3, 4)) == (3,)
        assert g.mark((3, -1)) == (-3, 4, -1)

    def test_check_path_rejects_gaps(self, two_vertex_graph):
        with pytest.raises(StructuralError):
            two_vertex_graph.check_path((3, 3))

    def test_tighten(self, rose2):
        assert rose2.tighten((1, 2, -2)) == (1,)
        assert rose2.tighten((1, 2, -1), circuit=True) == (2,)

    def test_tree_path_and_path_between(self, two_vertex_graph):
        g = two_vertex_graph
        assert g.tree_path(1) == (-3,)
        assert g.tree_path(0, start=1) == (3,)
        assert g.path_between(0, 0) == ()
        path = g.path_between(1, 0)
        assert g.init(path[0]) == 1 and g.term(path[-1]) == 0

    def test_cycle_basis(self, two_vertex_graph):
        basis = two_vertex_graph.cycle_basis({1, 3, 4}, 0)
        assert len(basis) == 2
        assert all(two_vertex_graph.init(w[0]) == 0 for w in basis)

    def test_json_round_trip(self, two_vertex_graph):
        data = two_vertex_graph.to_json()
        assert MarkedGraph.from_json(data).to_json() == data

    def test_unknown_vertex(self):
        with pytest.raises(ParseError):
            MarkedGraph.from_json({"vertices": ["v"], "edges": {"a": ["v", "w"]}})


class TestGGraph:
    def test_fold_wedge(self, rose2):
        g = fold(wedge([(1, 2), (1, -2)], rose2))
        assert g.is_immersion()
        assert g.rank == 2

    def test_based_membership(self, rose2):
        g = based_stallings_graph([(1,), (2, 1, -2)], rose2)
        assert g.accepts((2, 1, 1, -2))
        assert g.accepts((1, 2, 1, -2))
        assert not g.accepts((2,))

    def test_core_trims_hanging_trees(self, rose2):
        g = stallings_graph([(1, 2, -1)], rose2)
        assert g.num_vertices == 1
        assert g.complexity == 1

    def test_trivial_subgroup(self):
        with pytest.raises(TrivialSubgroupError):
            stallings_graph([(1, -1)], rank=2)

    def test_conjugate_subgroups_share_core(self):
        assert stallings_graph([(1, 2)], rank=2).same_as(stallings_graph([(2, 1)], rank=2))
        assert not stallings_graph([(1, 2)], rank=2).same_as(stallings_graph([(1, 1)], rank=2))

    def test_maps_into(self):
        square = stallings_graph([(1, 1)], rank=1)
        loop = stallings_graph([(1,)], rank=1)
        assert square.maps_into(loop)
        assert not loop.maps_into(square)

    def test_pullback_core(self):
        g1 = stallings_graph([(1,), (2, 2)], rank=2)
        g2 = stallings_graph([(2,)], rank=2)
        meet = pullback_core(g1, g2)
        assert meet.rank == 1
        assert meet.complexity == 2

    def test_disjoint_union(self):
        union = disjoint_union([stallings_graph([(1,)], rank=2), stallings_graph([(2,)], rank=2)])
        assert len(union.components()) == 2
        assert union.rank == 2

    def test_generators_and_circuits(self):
        g = stallings_graph([(1,), (2,)], rank=2)
        assert len(g.generators(0)) == 2
        assert (1,) in g.circuits(3)

    @settings(max_examples=30, deadline=None)
    @given(st.lists(words, min_size=1, max_size=3))
    def test_generators_are_accepted(self, ws):
        g = based_stallings_graph(ws, MarkedGraph.rose(2))
        assert g.is_immersion()
        for w in ws:
            assert g.accepts(w)


class TestAnnotatedFolding:
    def test_invert(self):
        folding = AnnotatedFolding.invert([(1, 2), (2,)], 2)
        assert folding.inverse_images() == [(1, -2), (2,)]

    def test_express(self):
        folding = AnnotatedFolding([(1, 2), (2,)], 2)
        assert folding.express((1, 2, 2)) == (1, 2)
        assert folding.contains((1,))

    @pytest.mark.parametrize("images", [[(1, 2), (1, 2)], [(1, 1), (2,)], [(1,)]])
    def test_not_a_basis(self, images):
        with pytest.raises(NotInvertibleError):
            AnnotatedFolding.invert(images, 2)

    def test_not_in_image(self):
        folding = AnnotatedFolding([(1, 1), (2,)], 2)
        assert not folding.contains((1,))


class TestCoverBall:
    def test_layers(self, rose2):
        ball = cover_ball(rose2, 0, 2)
        assert len(list(ball.vertices())) == 1 + 4 + 12

    def test_identity_lift_fixes_everything(self, rose2):
        ball = cover_ball(rose2, 0, 1, image=lambda p: p)
        assert len(ball.fixed_vertices()) == 5

    def test_lift_with_rho(self, rose2):
        ball = cover_ball(rose2, 0, 3, rho=(1,), image=lambda p: p)
        assert ball.lift_image((2,)) == (1, 2)
        assert ball.translate((1,), (-1, 2)) == (2,)

    def test_radius_exceeded(self, rose2):
        ball = cover_ball(rose2, 0, 1, image=lambda p: p)
        with pytest.raises(RadiusExceededError):
            ball.lift_image((1, 1))
