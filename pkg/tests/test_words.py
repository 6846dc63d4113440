from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grig2.words import (
    EMPTY,
    MAX_SHIFT,
    Letter,
    ShiftOverflow,
    Word,
    WordError,
    all_words,
    inverse,
    is_reduced,
    parse,
    random_word,
    reduce,
    reduce_random_order,
    shift_endo,
)

letters = st.builds(
    lambda b, s: Letter(b, 0 if b == "a" else s),
    st.sampled_from(["a", "b", "c", "d", "t0", "t1", "t2"]),
    st.integers(0, 3),
)
words = st.lists(letters, max_size=14).map(lambda ls: Word(tuple(ls)))


@pytest.mark.parametrize(
    "text,expected",
    [("aa", ""), ("bb", ""), ("bc", "d"), ("cd", "b"), ("bcd", ""), ("b@1c@1", "d@1"), ("abab", "abab"), ("bc@1", "bc@1")],
)
def test_reduce_examples(text, expected):
    assert reduce(parse(text)) == parse(expected)


def test_t_letters_do_not_merge_across_bases():
    assert str(reduce(parse("t0t1"))) == "t0t1"
    assert reduce(parse("t0t0")) == EMPTY


def test_parse_round_trip_and_identity_spellings():
    for s in ["", "e", "1", "ε"]:
        assert parse(s) == EMPTY
    w = parse("a b@2 t1@3 d")
    assert parse(str(w)) == w


def test_parse_errors():
    with pytest.raises(WordError):
        parse("x")
    with pytest.raises(WordError):
        parse("a@1")
    with pytest.raises(ShiftOverflow):
        parse(f"b@{MAX_SHIFT + 1}")


def test_all_words_shortlex_and_count():
    ws = list(all_words(2))
    assert ws[0] == EMPTY and len(ws) == 1 + 4 + 16
    assert [w.shortlex_key() for w in ws] == sorted(w.shortlex_key() for w in ws)


@given(words)
def test_reduce_idempotent_and_reduced(w):
    r = reduce(w)
    assert is_reduced(r)
    assert reduce(r) == r


@given(words, words)
def test_reduce_is_a_congruence(u, v):
    assert reduce(u * v) == reduce(reduce(u) * reduce(v))


def test_confluence_on_random_words():
    rng = random.Random(1)
    for _ in range(10_000):
        w = random_word(rng, rng.randint(0, 20), ("a", "b", "c", "d", "t0", "t1", "t2"), max_shift=2)
        assert reduce_random_order(w, rng) == reduce(w)


@given(words)
def test_inverse(w):
    assert reduce(w * inverse(w)) == EMPTY


@given(words)
def test_shift_endo_commutes_with_reduce(w):
    assert shift_endo(reduce(w)) == reduce(shift_endo(w))


def test_shift_endo_injective_on_reduced_ball():
    reduced = {reduce(w) for w in all_words(5)}
    assert len({shift_endo(w) for w in reduced}) == len(reduced)
