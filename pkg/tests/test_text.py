"""Tokenizer, sentiment and surface/readability extractors."""

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import make_article
from credlens.errors import ConfigError
from credlens.resources import abbreviations, dictionary
from credlens.sentiment import (
    SentimentLabel,
    SentimentLexicon,
    SentimentProfile,
    SentimentSequenceProfile,
    TRANSITION_NAMES,
    label_sentence,
    load_lexicon,
    score_sentence,
    sentiment_profile,
    sentiment_sequence_profile,
)
from credlens.textfeat import (
    DomainWordLists,
    count_syllables,
    flesch_reading_ease,
    ncsl_counts,
    surface_counts,
    typo_rate,
)
from credlens.tokens import segment_sentences, tokenize_words

P, N, U = SentimentLabel.POSITIVE, SentimentLabel.NEGATIVE, SentimentLabel.NEUTRAL
GOOD = SentimentLexicon({"good": 1.9})


# -- tokens ----------------------------------------------------------------


def test_segment_three_terminators():
    assert segment_sentences("A. B? C!") == ["A.", "B?", "C!"]


def test_segment_empty():
    assert segment_sentences("") == []


def test_segment_abbreviation():
    assert len(segment_sentences("Dr. Smith won. He smiled.")) == 2
    assert "dr." in abbreviations()


def test_segment_closing_quote():
    assert segment_sentences('He said "stop." Then left.') == ['He said "stop."', "Then left."]


def test_tokenize_examples():
    assert tokenize_words("don't stop 123") == ["don't", "stop"]
    assert tokenize_words("") == []
    assert tokenize_words("Hello,world") == ["Hello", "world"]


@given(st.text(max_size=200))
def test_segments_preserve_nonspace_text(text):
    joined = "".join("".join(s.split()) for s in segment_sentences(text))
    assert joined == "".join(text.split())


# -- sentiment ---------------------------------------------------------------


def test_score_good():
    assert score_sentence("good", GOOD) == pytest.approx(1.9 / math.sqrt(1.9**2 + 15))
    assert round(score_sentence("good", GOOD), 4) == 0.4404


def test_score_negated():
    expected = -1.406 / math.sqrt(1.406**2 + 15)
    assert score_sentence("not good", GOOD) == pytest.approx(expected)
    assert score_sentence("Not GOOD", GOOD) == pytest.approx(expected)
    assert score_sentence("it isn't very good", GOOD) == pytest.approx(expected)


def test_negation_window_is_three_tokens():
    assert score_sentence("not a b c good", GOOD) > 0


def test_no_hits_is_zero():
    assert score_sentence("the table", GOOD) == 0.0
    assert score_sentence("", GOOD) == 0.0


def test_label_thresholds():
    assert label_sentence(0.0) is U
    assert label_sentence(0.05) is P
    assert label_sentence(-0.05) is N
    assert label_sentence(-0.0501) is N
    assert label_sentence(0.0499) is U


@given(st.text(alphabet="abcdefghij nogtd", max_size=60))
def test_compound_bounded(text):
    lex = SentimentLexicon({"good": 1.9, "bad": -2.5, "not": 0.0})
    assert -1.0 < score_sentence(text, lex) < 1.0


def test_profile_counts():
    prof = SentimentProfile.from_labels([P, N, P])
    assert (prof.p_pos, prof.p_neu, prof.p_neg) == pytest.approx((2 / 3, 0.0, 1 / 3))


def test_profile_empty():
    prof = sentiment_profile("", GOOD)
    assert (prof.p_pos, prof.p_neu, prof.p_neg, prof.n_sentences) == (0, 0, 0, 0)


def test_sequence_profile():
    seq = SentimentSequenceProfile.from_labels([P, N, P])
    feats = seq.as_features()
    assert feats["seq_pos_neg"] == 0.5 and feats["seq_neg_pos"] == 0.5
    assert sum(feats.values()) == pytest.approx(1.0)
    assert SentimentSequenceProfile.from_labels([N, N, N]).as_features()["seq_neg_neg"] == 1.0
    single = sentiment_sequence_profile("Good.", GOOD)
    assert single.n_pairs == 0 and sum(single.as_features().values()) == 0


@given(st.lists(st.sampled_from([P, N, U]), min_size=1, max_size=40))
def test_profiles_normalized(labels):
    prof = SentimentProfile.from_labels(labels)
    assert prof.p_pos + prof.p_neu + prof.p_neg == pytest.approx(1.0)
    seq = SentimentSequenceProfile.from_labels(labels)
    assert seq.n_pairs == len(labels) - 1
    if seq.n_pairs:
        assert sum(seq.as_features().values()) == pytest.approx(1.0)
    assert tuple(seq.as_features()) == TRANSITION_NAMES


def test_bundled_lexicon():
    lex = load_lexicon()
    assert len(lex.valences) > 7000
    assert lex.valences["good"] == pytest.approx(1.9)


# -- surface and readability -------------------------------------------------


def test_surface_counts_example():
    sc = surface_counts(make_article(1, "fake", body="Hi! #1?"))
    assert (sc.n_special, sc.n_digits, sc.n_chars) == (3, 1, 7)


def test_url_count():
    assert surface_counts(make_article(1, "fake", body="see https://a.b and http://c.d")).n_urls == 2


def test_syllables():
    assert [count_syllables(w) for w in ("cat", "table", "the")] == [1, 2, 1]


def test_flesch_hand_check():
    r = flesch_reading_ease("The cat sat.")
    assert r.score == pytest.approx(206.835 - 1.015 * 3 - 84.6 * 1)
    assert round(r.score, 2) == 119.19
    assert not r.degenerate


def test_flesch_degenerate():
    assert flesch_reading_ease("") == (0.0, True)


def test_typo_rate():
    assert typo_rate("cat dog", {"cat", "dog"}) == 0.0
    assert typo_rate("zzxqy cat dog", {"cat", "dog"}) == pytest.approx(1 / 3)
    with pytest.raises(ConfigError):
        typo_rate("cat", set())


def test_bundled_dictionary():
    words = dictionary()
    assert len(words) > 200_000
    assert {"cat", "table", "legislature"} <= words


def test_ncsl_examples():
    lists = DomainWordLists.bundled()
    assert ncsl_counts("The veto and the caucus.", lists) == (0, 2)
    assert ncsl_counts("impeachment petition impeachment", lists) == (3, 0)
    assert ncsl_counts("impeachment petition impeachment", lists, distinct=True) == (2, 0)
    assert ncsl_counts("nothing here", lists) == (0, 0)


def test_ncsl_lists_disjoint():
    with pytest.raises(ConfigError):
        DomainWordLists(frozenset({"veto"}), frozenset({"Veto"}))
