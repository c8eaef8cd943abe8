import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from train_track_builder.core.exceptions import NotInvertibleError, ParseError
from train_track_builder.graphs.automorphism import Automorphism, find_conjugator, random_automorphism


class TestParsing:
    def test_arrow_syntax(self, commutator_tt):
        assert commutator_tt.rank == 2
        assert commutator_tt.images == ((1, 2), (2, 1, 2))
        assert str(commutator_tt) == "a->ab; b->bab"

    @pytest.mark.parametrize("text", ["a->ab, b->bab", "a => ab\nb => bab", "a: ab; b: bab", "a→ab; b→bab"])
    def test_separators(self, text, commutator_tt):
        assert Automorphism.parse(text) == commutator_tt

    def test_json(self, commutator_tt):
        phi = Automorphism.parse('{"rank": 2, "images": {"a": "ab", "b": "bab"}}')
        assert phi == commutator_tt
        assert phi.to_json() == {"rank": 2, "images": {"a": "ab", "b": "bab"}}

    def test_not_invertible(self):
        with pytest.raises(NotInvertibleError):
            Automorphism.parse('{"rank":2,"images":{"a":"ab","b":"ab"}}')

    def test_unchecked_parse(self):
        phi = Automorphism.parse("a->aa; b->b", check=False)
        assert phi.images == ((1, 1), (2,))

    @pytest.mark.parametrize(
        "text, position",
        [
            ("a->ab; b->b*a", 11),
            ("a->az", 4),
            ("", 0),
        ],
    )
    def test_parse_errors_carry_positions(self, text, position):
        with pytest.raises(ParseError) as exc:
            Automorphism.parse(text)
        assert exc.value.position == position

    def test_rank_mismatch(self):
        with pytest.raises(ParseError):
            Automorphism.from_json({"rank": 3, "images": {"a": "a", "b": "b"}})

    def test_key_is_stable(self, commutator_tt):
        assert commutator_tt.key() == Automorphism.parse("b->bab; a->ab").key()
        assert commutator_tt.key() != Automorphism.parse("a->ba; b->bab").key()


class TestAlgebra:
    def test_inverse(self, commutator_tt):
        inv = commutator_tt.inverse()
        assert inv.compose(commutator_tt).is_identity()
        assert commutator_tt.compose(inv).is_identity()

    def test_power(self, commutator_tt):
        assert commutator_tt.power(3) == commutator_tt @ commutator_tt @ commutator_tt
        assert commutator_tt.power(0).is_identity()
        assert commutator_tt.power(-2) == commutator_tt.inverse().power(2)

    def test_apply(self, commutator_tt):
        assert commutator_tt((1, -2)) == (-2,)
        assert commutator_tt(()) == ()

    def test_commutator_class_is_fixed(self, commutator_tt):
        c = (1, 2, -1, -2)
        assert commutator_tt.map_circuit(c) == commutator_tt.map_circuit(commutator_tt.map_circuit(c))
        assert commutator_tt.map_circuit(c) == Automorphism.identity(2).map_circuit(c)

    def test_inner(self):
        inner = Automorphism.identity(2).conjugated_by((1, 2))
        assert inner.is_inner()
        assert find_conjugator(inner, Automorphism.identity(2)) == (1, 2)

    def test_not_inner(self, commutator_tt, swap):
        assert not commutator_tt.is_inner()
        assert not swap.is_inner()
        assert swap.power(2).is_identity()

    def test_find_conjugator(self, commutator_tt):
        psi = commutator_tt.conjugated_by((2, -1))
        c = find_conjugator(psi, commutator_tt)
        assert c is not None
        assert commutator_tt.conjugated_by(c) == psi

    def test_rank_one(self):
        phi = Automorphism.parse("a->A")
        assert phi.power(2).is_identity()
        assert find_conjugator(phi, Automorphism.identity(1)) is None

    @settings(max_examples=25, deadline=None)
    @given(st.integers(min_value=2, max_value=4), st.integers(min_value=1, max_value=6), st.integers(0, 10**6))
    def test_random_automorphisms_invert(self, rank, steps, seed):
        phi = random_automorphism(rank, steps, random.Random(seed))
        assert phi.rank == rank
        assert phi.compose(phi.inverse()).is_identity()
