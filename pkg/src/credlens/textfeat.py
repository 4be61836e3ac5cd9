"""Content-credibility extractors over article text."""

from __future__ import annotations

import re
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import NamedTuple

from credlens import resources
from credlens.corpus import NewsArticle
from credlens.errors import ConfigError
from credlens.tokens import segment_sentences, tokenize_words

__all__ = [
    "DomainWordLists",
    "Readability",
    "SPECIAL_CHARS",
    "SurfaceCounts",
    "count_syllables",
    "flesch_reading_ease",
    "ncsl_counts",
    "segment_sentences",
    "surface_counts",
    "tokenize_words",
    "typo_rate",
]

SPECIAL_CHARS = frozenset("!#$%*+-?@|")
_URL = re.compile(r"https?://", re.IGNORECASE)
_VOWEL_RUN = re.compile(r"[aeiouy]+")


@dataclass(frozen=True)
class SurfaceCounts:
    n_chars: int
    n_words: int
    n_sentences: int
    n_title_words: int
    words_per_sentence: float
    chars_per_word: float
    n_special: int
    n_digits: int
    n_urls: int

    def to_dict(self) -> dict:
        return asdict(self)


def surface_counts(article: NewsArticle, abbreviations=None) -> SurfaceCounts:
    body = article.body
    n_chars = len(body)
    n_words = len(tokenize_words(body))
    n_sentences = len(segment_sentences(body, abbreviations))
    return SurfaceCounts(
        n_chars=n_chars,
        n_words=n_words,
        n_sentences=n_sentences,
        n_title_words=len(tokenize_words(article.title)),
        words_per_sentence=n_words / n_sentences if n_sentences else 0.0,
        chars_per_word=n_chars / n_words if n_words else 0.0,
        n_special=sum(1 for ch in body if ch in SPECIAL_CHARS),
        n_digits=sum(1 for ch in body if "0" <= ch <= "9"),
        n_urls=len(_URL.findall(body)),
    )


def count_syllables(word: str) -> int:
    """Vowel-group heuristic: one syllable per run of a/e/i/o/u/y, silent final e dropped."""
    w = word.casefold()
    count = len(_VOWEL_RUN.findall(w))
    if count > 1 and w.endswith("e") and not w.endswith("le"):
        count -= 1
    return max(count, 1)


class Readability(NamedTuple):
    score: float
    degenerate: bool


def flesch_reading_ease(text: str, abbreviations=None) -> Readability:
    words = tokenize_words(text)
    n_sentences = len(segment_sentences(text, abbreviations))
    if not words or not n_sentences:
        return Readability(0.0, True)
    n_syllables = sum(count_syllables(w) for w in words)
    n_words = len(words)
    score = 206.835 - 1.015 * (n_words / n_sentences) - 84.6 * (n_syllables / n_words)
    return Readability(score, False)


def typo_rate(text: str, dictionary) -> float:
    """Fraction of word tokens whose casefolded form is not in ``dictionary``."""
    if not dictionary:
        raise ConfigError("typo dictionary is empty")
    tokens = tokenize_words(text)
    if not tokens:
        return 0.0
    misses = sum(1 for t in tokens if t.casefold() not in dictionary)
    return misses / len(tokens)


@dataclass(frozen=True)
class DomainWordLists:
    fake_only: frozenset
    true_only: frozenset

    def __post_init__(self):
        fake = frozenset(w.casefold() for w in self.fake_only)
        true = frozenset(w.casefold() for w in self.true_only)
        overlap = fake & true
        if overlap:
            raise ConfigError(f"domain word lists overlap: {sorted(overlap)}")
        object.__setattr__(self, "fake_only", fake)
        object.__setattr__(self, "true_only", true)

    @classmethod
    def from_files(cls, fake_path: str | Path, true_path: str | Path) -> DomainWordLists:
        return cls(resources.load_wordset(fake_path), resources.load_wordset(true_path))

    @classmethod
    def bundled(cls, directory: str | Path | None = None) -> DomainWordLists:
        return cls.from_files(
            resources.resolve(resources.NCSL_FAKE, directory),
            resources.resolve(resources.NCSL_TRUE, directory),
        )


def ncsl_counts(text: str, lists: DomainWordLists, distinct: bool = False) -> tuple[int, int]:
    """Occurrences of fake-only and true-only domain words among the tokens.

    With ``distinct=True`` each listed word counts at most once.
    """
    tokens = [t.casefold() for t in tokenize_words(text)]
    if distinct:
        seen = set(tokens)
        return len(seen & lists.fake_only), len(seen & lists.true_only)
    return (
        sum(1 for t in tokens if t in lists.fake_only),
        sum(1 for t in tokens if t in lists.true_only),
    )
