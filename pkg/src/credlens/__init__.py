"""credlens: credibility-based fake news detection.

Source credibility (authors, coauthorship, publication history) and content
credibility (sentiment, readability, domain words, surface counts, typos)
features, the group-comparison statistics used to analyse them, and
from-scratch classifiers evaluated with stratified k-fold cross-validation.
"""

from credlens.corpus import Corpus, NewsArticle, corpus_stats, deduplicate, load_corpus

__version__ = "0.1.0"

__all__ = [
    "Corpus",
    "NewsArticle",
    "corpus_stats",
    "deduplicate",
    "load_corpus",
]
