import dataclasses
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_article
from credlens.corpus import Corpus
from credlens.errors import FoldError, LeakageError
from credlens.ml.evaluation import (
    EvalReport,
    content_table,
    cross_validate,
    f1_scores,
    fold_history,
    stratified_folds,
)
from credlens.ml.features import CONFIGS, REGISTRY, SELECTED13, FeatureConfig, assemble_features
from credlens.ml.learners import ModelSpec


def test_registry_shapes():
    assert len(REGISTRY) == 27
    assert len(CONFIGS["source3"]) == 3
    assert len(SELECTED13) == 13
    assert set(CONFIGS["content23"]) | set(CONFIGS["source3"]) == set(REGISTRY)


def test_config_parse():
    assert FeatureConfig.parse("source3").name == "source3"
    custom = FeatureConfig.parse("n_authors, past_fake")
    assert custom.features == ("n_authors", "past_fake") and custom.needs_history
    with pytest.raises(ValueError):
        FeatureConfig.parse("n_authors,bogus")


# -- F1 --------------------------------------------------------------------


def test_f1_examples():
    assert f1_scores([1, 0, 1], [1, 0, 1])[:3] == (1.0, 1.0, 1.0)
    assert f1_scores([1, 1, 0, 0], [1, 0, 1, 0])[:3] == pytest.approx((0.5, 0.5, 0.5))
    s = f1_scores(["a", "a", "b", "b"], ["a"] * 4)
    assert s.macro == pytest.approx(1 / 3)
    assert s.undefined == ("b",)


def test_f1_length_mismatch():
    with pytest.raises(ValueError):
        f1_scores([1, 0], [1])


@given(st.lists(st.tuples(st.sampled_from("ab"), st.sampled_from("ab")), min_size=1, max_size=40))
def test_f1_bounds(pairs):
    t, p = zip(*pairs)
    s = f1_scores(t, p)
    acc = np.mean(np.array(t) == np.array(p))
    assert s.micro == pytest.approx(acc)
    for v in s[:3]:
        assert 0.0 <= v <= 1.0


# -- folds -----------------------------------------------------------------


@settings(max_examples=40)
@given(st.integers(2, 6), st.integers(0, 30), st.integers(0, 30), st.integers(0, 2**16))
def test_stratified_folds_partition(k, n_a, n_b, seed):
    labels = ["a"] * (n_a + k) + ["b"] * (n_b + k)
    folds = stratified_folds(labels, k, seed)
    sizes = Counter(folds.tolist())
    assert set(sizes) == set(range(k))
    assert max(sizes.values()) - min(sizes.values()) <= 1
    for c in ("a", "b"):
        per = Counter(f for f, lab in zip(folds, labels) if lab == c)
        assert max(per.values()) - min(per.values()) <= 1
    assert np.array_equal(folds, stratified_folds(labels, k, seed))


def test_fold_error():
    with pytest.raises(FoldError):
        stratified_folds(["a"] * 20 + ["b"] * 3, 10, 0)


# -- features --------------------------------------------------------------


def test_source3_example():
    target = make_article(1, "true", ["A", "B"])
    ref = [make_article(2, "fake", ["B"]), make_article(3, "fake", ["Z"])]
    vec = assemble_features(target, FeatureConfig.named("source3"), ref)
    assert vec.values == (2.0, 1.0, 0.0)


def test_empty_body_all26():
    vec = assemble_features(make_article(1, "fake", body="", title=""), FeatureConfig.named("all26"), ())
    d = vec.as_dict()
    assert d["flesch_score"] == 0.0 and "flesch_degenerate" in vec.flags
    assert d["p_pos"] == d["p_neg"] == d["p_neu"] == 0.0
    assert d["n_words"] == d["n_chars"] == d["n_sentences"] == 0.0


def test_feature_determinism(synthetic_corpus):
    a = synthetic_corpus.articles[5]
    ref = synthetic_corpus.articles[10:]
    cfg = FeatureConfig.named("all26")
    assert assemble_features(a, cfg, ref) == assemble_features(a, cfg, ref)


def test_assemble_leakage():
    a = make_article(1, "fake", ["A"])
    with pytest.raises(LeakageError):
        assemble_features(a, FeatureConfig.named("source3"), [a])


def test_content_features_label_blind(synthetic_corpus):
    flipped = Corpus(tuple(
        dataclasses.replace(a, label="true" if a.label == "fake" else "fake") for a in synthetic_corpus
    ))
    assert content_table(synthetic_corpus).equals(content_table(flipped))


def test_fold_history_uses_training_only(synthetic_corpus):
    labels = np.array(synthetic_corpus.labels())
    folds = stratified_folds(labels, 5, 0)
    hist = fold_history(synthetic_corpus, folds != 0)
    train = [a for a, f in zip(synthetic_corpus, folds) if f != 0]
    for a, f in zip(synthetic_corpus, folds):
        if f == 0:
            shared = [b for b in train if set(b.author_keys) & set(a.author_keys)]
            assert hist.loc[a.id, "past_fake"] == sum(b.label == "fake" for b in shared)


# -- cross validation ---------------------------------------------------------


def test_cross_validate_report(synthetic_corpus):
    rep = cross_validate(ModelSpec("gaussian_nb"), synthetic_corpus, FeatureConfig.named("source3"), k=5, seed=3)
    assert len(rep.folds) == 5
    test_ids = [i for f in rep.folds for i in f["test_ids"]]
    assert sorted(test_ids) == sorted(a.id for a in synthetic_corpus)
    assert 0.0 <= rep.means["f1_macro"] <= 1.0
    assert EvalReport.from_dict(rep.to_dict()) == rep
