"""Occupation vectors, words and formal expressions."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qisom import (Expression, OccVector, Word, multinomial, occ, occ_range,
                   subset_indicator, words_with_occ)

letters = st.tuples(st.integers(1, 3), st.booleans())
words = st.lists(letters, max_size=8).map(lambda ls: Word(tuple(ls)))


class TestOccVector:
    def test_arithmetic(self):
        a = OccVector((2, 1, 0))
        b = OccVector((1, 1, 1))
        assert (a + b).entries == (3, 2, 1)
        assert (a + b - b) == a
        assert a.vmax(b).entries == (2, 1, 1)

    def test_subtraction_guards_negativity(self):
        with pytest.raises(ValueError):
            OccVector((1, 0)) - OccVector((0, 1))

    def test_partial_order(self):
        assert OccVector((1, 0)) <= OccVector((1, 1))
        assert not OccVector((2, 0)) <= OccVector((1, 1))
        assert not OccVector((1, 1)) <= OccVector((2, 0))
        assert OccVector((1, 0)) < OccVector((1, 1))
        assert not OccVector((1, 1)) < OccVector((1, 1))

    def test_rejects_negative_entries(self):
        with pytest.raises(ValueError):
            OccVector((1, -1))

    def test_constructors(self):
        assert OccVector.zeros(3).entries == (0, 0, 0)
        assert OccVector.constant(2, 2).entries == (2, 2)
        assert OccVector.zeros(2).total == 0
        assert OccVector((1, 3)).max_entry == 3


def test_occ_counts_letters():
    assert occ((1, 3, 1), 3) == OccVector((2, 0, 1))
    assert occ((), 2) == OccVector.zeros(2)
    with pytest.raises(ValueError):
        occ((4,), 3)


def test_subset_indicator():
    assert subset_indicator((1, 3), 3) == OccVector((1, 0, 1))
    assert subset_indicator((), 2) == OccVector.zeros(2)


def test_multinomial_values():
    assert multinomial(OccVector((0, 0))) == 1
    assert multinomial(OccVector((1, 1))) == 2
    assert multinomial(OccVector((2, 1))) == 3
    assert multinomial(OccVector((2, 2))) == 6
    assert multinomial(OccVector((1, 1, 1))) == 6


def test_words_with_occ_is_lex_sorted_and_complete():
    ws = words_with_occ(OccVector((2, 1)))
    assert ws == ((1, 1, 2), (1, 2, 1), (2, 1, 1))
    assert len(ws) == multinomial(OccVector((2, 1)))
    assert words_with_occ(OccVector.zeros(2)) == ((),)


def test_occ_range_level_then_lex():
    got = occ_range(OccVector((1, 1)))
    assert got == [OccVector((0, 0)), OccVector((0, 1)),
                   OccVector((1, 0)), OccVector((1, 1))]
    # every element bounded, no duplicates
    deep = occ_range(OccVector((2, 2)))
    assert len(deep) == len(set(deep)) == 9
    totals = [v.total for v in deep]
    assert totals == sorted(totals)


class TestWord:
    def test_from_text(self):
        w = Word.from_text("a1* a2 a1")
        assert w.letters == ((1, True), (2, False), (1, False))
        assert str(w) == "a1* a2 a1"

    def test_unit_spellings(self):
        assert Word.from_text("1") == Word(())
        assert Word.from_text("") == Word(())
        assert str(Word(())) == "1"

    def test_from_text_rejects_junk(self):
        with pytest.raises(ValueError):
            Word.from_text("b2")
        with pytest.raises(ValueError):
            Word.from_text("a0")

    def test_from_indices_reverses_starred_half(self):
        # a_mu a_sigma* lays out sigma right to left
        w = Word.from_indices((1, 2), (1, 3))
        assert str(w) == "a1 a2 a3* a1*"

    @given(words)
    def test_star_is_an_involution(self, w):
        assert w.star().star() == w

    @given(words, words)
    def test_star_reverses_concatenation(self, a, b):
        assert (a + b).star() == b.star() + a.star()


class TestExpression:
    def test_drops_tiny_coefficients(self):
        x = Expression({((1,), ()): 1e-16})
        assert not x
        assert len(Expression({((1,), ()): 1.0, ((2,), ()): 0.0})) == 1

    def test_arithmetic(self):
        x = Expression.monomial((1,), (), 2.0)
        y = Expression.monomial((1,), (), -2.0)
        assert not (x + y)
        assert (x - x) == Expression.zero()
        assert (x * 0.5).coefficient((1,)) == pytest.approx(1.0)

    def test_isclose_tolerance(self):
        x = Expression.monomial((1, 2), (2,), 1.0)
        y = Expression.monomial((1, 2), (2,), 1.0 + 1e-12)
        assert x.isclose(y)
        assert not x.isclose(y * 2.0)

    def test_one_and_degree(self):
        assert Expression.one().coefficient(()) == 1.0
        assert Expression.monomial((1, 2), (1,)).degree == 3
        assert Expression.one().degree == 0
