"""Feature registry, named feature subsets and per-article feature assembly."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
import pandas as pd

from credlens import resources
from credlens.corpus import NewsArticle
from credlens.sentiment import (
    TRANSITION_NAMES,
    SentimentLexicon,
    SentimentProfile,
    SentimentSequenceProfile,
    load_lexicon,
    sentence_labels,
)
from credlens.sourcefeat import HistoryReference, author_count
from credlens.textfeat import DomainWordLists, flesch_reading_ease, ncsl_counts, surface_counts, typo_rate

SOURCE_FEATURES = ("n_authors", "past_fake", "past_true")
HISTORY_FEATURES = ("past_fake", "past_true")

REGISTRY = (
    "n_authors",
    "p_pos",
    "p_neu",
    "p_neg",
    *TRANSITION_NAMES,
    "n_ncsl_fake_only",
    "n_ncsl_true_only",
    "flesch_score",
    "n_title_words",
    "n_chars",
    "n_special",
    "n_words",
    "n_sentences",
    "n_digits",
    "typo_rate",
    "words_per_sentence",
    "chars_per_word",
    "past_fake",
    "past_true",
)

SELECTED13 = (
    "n_authors",
    "past_fake",
    "past_true",
    "n_ncsl_fake_only",
    "n_ncsl_true_only",
    "flesch_score",
    "n_words",
    "n_title_words",
    "n_chars",
    "n_special",
    "typo_rate",
    "words_per_sentence",
    "chars_per_word",
)

CONFIGS = {
    "all26": REGISTRY,
    "source3": SOURCE_FEATURES,
    "content23": tuple(f for f in REGISTRY if f not in SOURCE_FEATURES),
    "selected13": SELECTED13,
}


@dataclass(frozen=True)
class FeatureConfig:
    name: str
    features: tuple

    def __post_init__(self):
        unknown = [f for f in self.features if f not in REGISTRY]
        if unknown:
            raise ValueError(f"unknown feature names: {unknown}")
        if len(set(self.features)) != len(self.features):
            raise ValueError("duplicate feature names in config")
        object.__setattr__(self, "features", tuple(self.features))

    @classmethod
    def named(cls, name: str) -> FeatureConfig:
        if name not in CONFIGS:
            raise ValueError(f"unknown feature config {name!r}; expected one of {sorted(CONFIGS)} or a custom list")
        return cls(name, CONFIGS[name])

    @classmethod
    def custom(cls, features: Sequence[str]) -> FeatureConfig:
        return cls("custom", tuple(features))

    @classmethod
    def parse(cls, text: str) -> FeatureConfig:
        """A config name, or a comma-separated list of registry names."""
        if text in CONFIGS:
            return cls.named(text)
        return cls.custom([t.strip() for t in text.split(",") if t.strip()])

    @property
    def needs_history(self) -> bool:
        return any(f in HISTORY_FEATURES for f in self.features)


@dataclass(frozen=True)
class Extractors:
    """Resources the content extractors depend on."""

    lexicon: SentimentLexicon
    dictionary: frozenset
    wordlists: DomainWordLists
    abbreviations: frozenset
    ncsl_distinct: bool = False

    @classmethod
    def load(cls, directory: str | Path | None = None, ncsl_distinct: bool = False) -> Extractors:
        return cls(
            lexicon=load_lexicon(directory),
            dictionary=resources.dictionary(directory),
            wordlists=DomainWordLists.bundled(directory),
            abbreviations=resources.abbreviations(directory),
            ncsl_distinct=ncsl_distinct,
        )


_DEFAULT: list = []


def default_extractors() -> Extractors:
    if not _DEFAULT:
        _DEFAULT.append(Extractors.load())
    return _DEFAULT[0]


@dataclass(frozen=True)
class FeatureVector:
    id: str
    names: tuple
    values: tuple
    flags: tuple = field(default=())

    def as_dict(self) -> dict:
        return dict(zip(self.names, self.values))


def content_features(article: NewsArticle, ext: Extractors | None = None) -> tuple[dict, tuple]:
    """Every registry feature except the history pair, plus degeneracy flags.

    Body text only; the title contributes ``n_title_words``.
    """
    ext = ext or default_extractors()
    body = article.body
    labels = sentence_labels(body, ext.lexicon, ext.abbreviations)
    prof = SentimentProfile.from_labels(labels)
    seq = SentimentSequenceProfile.from_labels(labels)
    sc = surface_counts(article, ext.abbreviations)
    flesch = flesch_reading_ease(body, ext.abbreviations)
    n_fake, n_true = ncsl_counts(body, ext.wordlists, distinct=ext.ncsl_distinct)
    out = {
        "n_authors": float(author_count(article)),
        "p_pos": prof.p_pos,
        "p_neu": prof.p_neu,
        "p_neg": prof.p_neg,
        **seq.as_features(),
        "n_ncsl_fake_only": float(n_fake),
        "n_ncsl_true_only": float(n_true),
        "flesch_score": flesch.score,
        "n_title_words": float(sc.n_title_words),
        "n_chars": float(sc.n_chars),
        "n_special": float(sc.n_special),
        "n_words": float(sc.n_words),
        "n_sentences": float(sc.n_sentences),
        "n_digits": float(sc.n_digits),
        "typo_rate": typo_rate(body, ext.dictionary),
        "words_per_sentence": sc.words_per_sentence,
        "chars_per_word": sc.chars_per_word,
    }
    flags = ("flesch_degenerate",) if flesch.degenerate else ()
    return out, flags


def _history(article: NewsArticle, reference) -> dict:
    if not isinstance(reference, HistoryReference):
        reference = HistoryReference(reference)
    h = reference.features(article)
    return {"past_fake": float(h.past_fake), "past_true": float(h.past_true)}


def assemble_features(
    article: NewsArticle,
    config: FeatureConfig,
    reference: Iterable[NewsArticle] | HistoryReference = (),
    extractors: Extractors | None = None,
) -> FeatureVector:
    """Feature vector for ``article``; history comes from ``reference`` only.

    Raises :class:`~credlens.errors.LeakageError` when ``article`` is part of
    ``reference``.
    """
    values, flags = ({}, ()) if set(config.features) <= set(SOURCE_FEATURES) else content_features(article, extractors)
    values["n_authors"] = float(author_count(article))
    values.update(_history(article, reference))
    return FeatureVector(article.id, config.features, tuple(values[f] for f in config.features), flags)


def feature_frame(vectors: Sequence[FeatureVector], labels: Sequence[str] | None = None) -> pd.DataFrame:
    """Stack vectors into a frame indexed by article id, with an optional ``label`` column last."""
    if not vectors:
        return pd.DataFrame(columns=["id"]).set_index("id")
    names = list(vectors[0].names)
    df = pd.DataFrame(
        np.array([v.values for v in vectors], dtype=float).reshape(len(vectors), len(names)),
        columns=names,
        index=pd.Index([v.id for v in vectors], name="id"),
    )
    if labels is not None:
        df["label"] = list(labels)
    return df
