"""Lexicon-based sentence sentiment and per-article sentiment profiles.

The scorer is a reduced VADER: lexicon valences are summed per sentence, a
negation token up to three tokens earlier flips and damps a valence, and the
sum is squashed with ``s / sqrt(s**2 + alpha)``. Boosters, punctuation and
capitalisation rules are intentionally not applied.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from itertools import product
from pathlib import Path
from typing import Mapping

from credlens import resources
from credlens.tokens import segment_sentences, tokenize_words

ALPHA = 15.0
NEGATION_SCALE = -0.74
NEGATION_WINDOW = 3
THRESHOLD = 0.05

NEGATIONS = frozenset(
    """
    aint arent cannot cant couldnt darent didnt doesnt ain't aren't can't couldn't
    daren't didn't doesn't dont hadnt hasnt havent isnt mightnt mustnt neither
    don't hadn't hasn't haven't isn't mightn't mustn't neednt needn't never none
    nope nor not nothing nowhere oughtnt shant shouldnt uhuh wasnt werent oughtn't
    shan't shouldn't wasn't weren't without wont wouldnt won't wouldn't rarely
    seldom despite
    """.split()
)


class SentimentLabel(str, Enum):
    POSITIVE = "positive"
    NEUTRAL = "neutral"
    NEGATIVE = "negative"

    @property
    def short(self) -> str:
        return {"positive": "pos", "neutral": "neu", "negative": "neg"}[self.value]


# transition order: pos->pos, pos->neg, pos->neu, neg->pos, ...
_SEQ_ORDER = (SentimentLabel.POSITIVE, SentimentLabel.NEGATIVE, SentimentLabel.NEUTRAL)
TRANSITIONS = tuple(product(_SEQ_ORDER, _SEQ_ORDER))
TRANSITION_NAMES = tuple(f"seq_{a.short}_{b.short}" for a, b in TRANSITIONS)


@dataclass(frozen=True)
class SentimentLexicon:
    valences: Mapping[str, float]
    negations: frozenset = NEGATIONS
    negation_scale: float = NEGATION_SCALE

    def __post_init__(self):
        clean = {}
        for token, value in self.valences.items():
            value = float(value)
            if not math.isfinite(value):
                raise ValueError(f"non-finite valence for {token!r}")
            clean[token.casefold()] = value
        object.__setattr__(self, "valences", clean)
        object.__setattr__(self, "negations", frozenset(t.casefold() for t in self.negations))

    def is_negation(self, token: str) -> bool:
        return token in self.negations or token.endswith(("n't", "n’t"))


def read_lexicon(path: str | Path) -> SentimentLexicon:
    """Parse ``token<TAB>valence`` rows; extra columns are ignored."""
    valences = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\r\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) < 2:
                raise ValueError(f"{path}:{lineno}: expected token<TAB>valence")
            valences[parts[0].strip()] = float(parts[1])
    return SentimentLexicon(valences)


@lru_cache(maxsize=4)
def _cached_lexicon(path: str) -> SentimentLexicon:
    return read_lexicon(path)


def load_lexicon(directory: str | Path | None = None) -> SentimentLexicon:
    return _cached_lexicon(str(resources.resolve(resources.LEXICON, directory)))


def score_sentence(sentence: str, lex: SentimentLexicon) -> float:
    """Compound score in [-1, 1]; 0.0 when no lexicon token occurs."""
    tokens = tokenize_words(sentence.casefold())
    total = 0.0
    hits = 0
    for i, tok in enumerate(tokens):
        valence = lex.valences.get(tok)
        if valence is None:
            continue
        hits += 1
        if any(lex.is_negation(t) for t in tokens[max(0, i - NEGATION_WINDOW) : i]):
            valence *= lex.negation_scale
        total += valence
    if not hits:
        return 0.0
    return total / math.sqrt(total * total + ALPHA)


def label_sentence(compound: float) -> SentimentLabel:
    if compound >= THRESHOLD:
        return SentimentLabel.POSITIVE
    if compound <= -THRESHOLD:
        return SentimentLabel.NEGATIVE
    return SentimentLabel.NEUTRAL


def sentence_labels(text: str, lex: SentimentLexicon, abbreviations=None) -> list[SentimentLabel]:
    return [label_sentence(score_sentence(s, lex)) for s in segment_sentences(text, abbreviations)]


@dataclass(frozen=True)
class SentimentProfile:
    p_pos: float = 0.0
    p_neu: float = 0.0
    p_neg: float = 0.0
    n_sentences: int = 0

    @classmethod
    def from_labels(cls, labels) -> SentimentProfile:
        n = len(labels)
        if n == 0:
            return cls()
        return cls(
            p_pos=labels.count(SentimentLabel.POSITIVE) / n,
            p_neu=labels.count(SentimentLabel.NEUTRAL) / n,
            p_neg=labels.count(SentimentLabel.NEGATIVE) / n,
            n_sentences=n,
        )


@dataclass(frozen=True)
class SentimentSequenceProfile:
    fractions: dict = field(default_factory=lambda: {t: 0.0 for t in TRANSITIONS})
    n_pairs: int = 0

    @classmethod
    def from_labels(cls, labels) -> SentimentSequenceProfile:
        pairs = list(zip(labels, labels[1:]))
        if not pairs:
            return cls()
        fractions = {t: 0.0 for t in TRANSITIONS}
        for pair in pairs:
            fractions[pair] += 1
        return cls({t: c / len(pairs) for t, c in fractions.items()}, len(pairs))

    def __getitem__(self, transition) -> float:
        a, b = transition
        return self.fractions[(SentimentLabel(a), SentimentLabel(b))]

    def as_features(self) -> dict[str, float]:
        return {name: self.fractions[t] for name, t in zip(TRANSITION_NAMES, TRANSITIONS)}


def sentiment_profile(text: str, lex: SentimentLexicon, abbreviations=None) -> SentimentProfile:
    return SentimentProfile.from_labels(sentence_labels(text, lex, abbreviations))


def sentiment_sequence_profile(text: str, lex: SentimentLexicon, abbreviations=None) -> SentimentSequenceProfile:
    return SentimentSequenceProfile.from_labels(sentence_labels(text, lex, abbreviations))
