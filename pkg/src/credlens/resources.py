"""Locating and loading the bundled text resources.

A resources directory holds:

    vader_lexicon.txt     token<TAB>valence[<TAB>...]
    abbreviations.txt     one abbreviation per line, e.g. ``dr.``
    words.txt[.gz]        dictionary wordlist, one word per line
    ncsl_fake_only.txt    domain words seen only in fake news
    ncsl_true_only.txt    domain words seen only in true news

Lookup order: explicit directory, ``$CREDLENS_RESOURCES``, bundled defaults.
Individual files missing from a user directory fall back to the bundled copy.
"""

from __future__ import annotations

import gzip
import os
from functools import lru_cache
from pathlib import Path

from credlens.errors import ConfigError

BUNDLED = Path(__file__).resolve().parent / "resources"
ENV_VAR = "CREDLENS_RESOURCES"

LEXICON = "vader_lexicon.txt"
ABBREVIATIONS = "abbreviations.txt"
DICTIONARY = "words.txt"
NCSL_FAKE = "ncsl_fake_only.txt"
NCSL_TRUE = "ncsl_true_only.txt"


def resource_dir(explicit: str | Path | None = None) -> Path:
    raw = explicit or os.environ.get(ENV_VAR)
    if not raw:
        return BUNDLED
    path = Path(raw)
    if not path.is_dir():
        raise ConfigError(f"resources directory not found: {path}")
    return path


def resolve(name: str, directory: str | Path | None = None) -> Path:
    base = resource_dir(directory)
    for root in (base, BUNDLED):
        for candidate in (root / name, root / (name + ".gz")):
            if candidate.is_file():
                return candidate
    raise ConfigError(f"resource {name!r} not found under {base} or {BUNDLED}")


def read_lines(path: str | Path) -> list[str]:
    """Non-empty stripped lines; ``#`` starts a comment line."""
    path = Path(path)
    opener = gzip.open if path.suffix == ".gz" else open
    with opener(path, "rt", encoding="utf-8") as fh:
        return [s for s in (line.strip() for line in fh) if s and not s.startswith("#")]


def load_wordset(path: str | Path) -> frozenset[str]:
    return frozenset(w.casefold() for w in read_lines(path))


@lru_cache(maxsize=8)
def _cached_wordset(path: str) -> frozenset[str]:
    return load_wordset(path)


def dictionary(directory: str | Path | None = None) -> frozenset[str]:
    return _cached_wordset(str(resolve(DICTIONARY, directory)))


def abbreviations(directory: str | Path | None = None) -> frozenset[str]:
    return _cached_wordset(str(resolve(ABBREVIATIONS, directory)))
