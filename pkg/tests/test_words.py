import pytest
from hypothesis import given
from hypothesis import strategies as st

from train_track_builder.core.exceptions import ParseError, StructuralError
from train_track_builder.graphs.words import (
    Alphabet,
    canonical_circuit,
    concat,
    conjugators,
    conjugate,
    cyclic_reduce,
    inverse,
    is_conjugate,
    is_reduced,
    reduce_word,
    root,
    split_cyclic,
)

letters = st.integers(min_value=-3, max_value=3).filter(lambda x: x != 0)
words = st.lists(letters, max_size=16).map(tuple)


class TestReduction:
    @pytest.mark.parametrize(
        "word, expected",
        [
            ((), ()),
            ((1, -1), ()),
            ((1, 2, -2, 3), (1, 3)),
            ((1, 2, -2, -1, 2), (2,)),
            ((-1, 1, 1), (1,)),
        ],
    )
    def test_reduce_word(self, word, expected):
        assert reduce_word(word) == expected

    def test_zero_is_rejected(self):
        with pytest.raises(StructuralError):
            reduce_word((1, 0))

    @given(words)
    def test_reduced_output(self, w):
        r = reduce_word(w)
        assert is_reduced(r)
        assert reduce_word(r) == r

    @given(words)
    def test_inverse_cancels(self, w):
        assert concat(w, inverse(w)) == ()

    @given(words, words, words)
    def test_concat_associative(self, u, v, w):
        assert concat(concat(u, v), w) == concat(u, concat(v, w))


class TestCyclicWords:
    def test_split_cyclic(self):
        p, c = split_cyclic((1, 2, 3, -1))
        assert p == (1,)
        assert c == (2, 3)
        assert concat(p, c, inverse(p)) == (1, 2, 3, -1)

    def test_cyclic_reduce_of_trivial(self):
        assert cyclic_reduce((1, -1)) == ()

    @pytest.mark.parametrize(
        "word, expected",
        [
            ((1, 2, 1, 2), ((1, 2), 2)),
            ((1, 1, 1), ((1,), 3)),
            ((1, 2, -1), ((1, 2, -1), 1)),
        ],
    )
    def test_root(self, word, expected):
        assert root(word) == expected

    def test_canonical_circuit_identifies_rotation_and_inverse(self):
        w = (1, 2, -1, -2)
        assert canonical_circuit(w) == canonical_circuit((2, -1, -2, 1))
        assert canonical_circuit(w) == canonical_circuit(inverse(w))

    @given(words, words)
    def test_conjugates_share_a_class(self, w, c):
        assert is_conjugate(w, conjugate(w, c))

    @given(words, words)
    def test_conjugators_solve_the_equation(self, w, c):
        v = conjugate(w, c)
        for d in conjugators(w, v):
            assert conjugate(w, d) == v

    def test_conjugator_found(self):
        u = (1, 2)
        v = conjugate(u, (3, -1))
        assert any(conjugate(u, c) == v for c in conjugators(u, v))


class TestAlphabet:
    def test_standard(self):
        assert Alphabet.standard(3).names == ("a", "b", "c")
        assert Alphabet.standard(27).names[0] == "a1"

    def test_parse_and_format(self):
        names = Alphabet.standard(2)
        w = names.parse("abAB")
        assert w == (1, 2, -1, -2)
        assert names.format(w) == "abAB"

    def test_indexed_names(self):
        names = Alphabet(("a1", "a2", "a3"))
        assert names.parse("a2A1a3") == (2, -1, 3)
        assert names.format((-3,)) == "A3"

    @pytest.mark.parametrize("text", ["", "1", "  "])
    def test_trivial_word(self, text):
        assert Alphabet.standard(2).parse(text) == ()

    def test_unknown_generator_reports_position(self):
        with pytest.raises(ParseError) as exc:
            Alphabet.standard(2).parse("abz", offset=10)
        assert exc.value.position == 12

    def test_bad_character(self):
        with pytest.raises(ParseError):
            Alphabet.standard(2).parse("a*b")

    @pytest.mark.parametrize("names", [("a", "a"), ("A",), ("1a",)])
    def test_invalid_names(self, names):
        with pytest.raises(ParseError):
            Alphabet(names)

    def test_fresh_name(self):
        names = Alphabet(("a", "e1"))
        assert names.fresh("e") == "e2"
        assert names.extended("e2").names == ("a", "e1", "e2")
