"""Word and sentence segmentation shared by the sentiment and text extractors."""

from __future__ import annotations

import re
from typing import Iterable

from credlens import resources

# letters only, internal apostrophes allowed ("don't", "o'neill")
_WORD = re.compile(r"[^\W\d_]+(?:['’][^\W\d_]+)*")

# terminator run, optional closing quotes/brackets, then whitespace or end
_BOUNDARY = re.compile(r"[.!?]+[\"'”’)\]]*(?=\s|$)")
_OPENERS = "\"'“‘(["


def tokenize_words(text: str) -> list[str]:
    return _WORD.findall(text)


def _is_abbreviation(text: str, end: int, abbreviations: Iterable[str]) -> bool:
    start = max(text.rfind(" ", 0, end), text.rfind("\n", 0, end), text.rfind("\t", 0, end)) + 1
    chunk = text[start:end].lstrip(_OPENERS).casefold()
    return chunk in abbreviations


def segment_sentences(text: str, abbreviations: frozenset[str] | None = None) -> list[str]:
    """Split ``text`` after ``.``, ``!`` or ``?`` followed by whitespace or end.

    A period ending a listed abbreviation (``dr.``, ``u.s.``) does not split.
    Whitespace-only segments are dropped. ``abbreviations`` defaults to the
    bundled list.
    """
    if abbreviations is None:
        abbreviations = resources.abbreviations()
    out = []
    start = 0
    for m in _BOUNDARY.finditer(text):
        term = m.group()
        stripped_end = m.start() + len(term.rstrip("\"'”’)]"))
        if term.rstrip("\"'”’)]") == "." and _is_abbreviation(text, stripped_end, abbreviations):
            continue
        piece = text[start : m.end()].strip()
        if piece:
            out.append(piece)
        start = m.end()
    tail = text[start:].strip()
    if tail:
        out.append(tail)
    return out
