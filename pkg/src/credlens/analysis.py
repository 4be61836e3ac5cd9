"""Corpus-level analysis: group comparisons, author and coauthorship summaries."""

from __future__ import annotations

import numpy as np
import pandas as pd

from credlens.corpus import FAKE, TRUE, Corpus, corpus_stats
from credlens.errors import UndefinedCorrelationError
from credlens.ml.evaluation import content_table
from credlens.ml.features import REGISTRY, Extractors
from credlens.sourcefeat import (
    MIN_ARTICLES,
    HistoryReference,
    affiliation_report,
    authorship_breakdown,
    build_author_index,
    build_coauthor_graph,
    consistency_report,
)
from credlens.stats import compare_groups, pearson_r
from credlens.textfeat import surface_counts


def feature_table(corpus: Corpus, extractors: Extractors | None = None) -> pd.DataFrame:
    """Registry features plus ``n_urls`` per article.

    History features use every other article of the corpus as reference, so
    they describe the corpus rather than a leakage-free evaluation.
    """
    table = content_table(corpus, extractors)
    ref = HistoryReference(corpus.articles)
    hist = [ref.features(a, exclude_self=True) for a in corpus.articles]
    table["past_fake"] = [float(h.past_fake) for h in hist]
    table["past_true"] = [float(h.past_true) for h in hist]
    abbreviations = extractors.abbreviations if extractors else None
    table["n_urls"] = [float(surface_counts(a, abbreviations).n_urls) for a in corpus.articles]
    return table


def analyze(corpus: Corpus, extractors: Extractors | None = None, min_articles: int = MIN_ARTICLES):
    """Full analysis document plus the coauthor graph (for CSV export)."""
    labels = np.array(corpus.labels())
    table = feature_table(corpus, extractors)
    features = [*REGISTRY, "n_urls"]

    comparisons = {}
    if (labels == FAKE).any() and (labels == TRUE).any():
        for name in features:
            comparisons[name] = compare_groups(table[name].to_numpy(), labels, feature=name).to_dict()

    n_authors = table["n_authors"].to_numpy()
    label01 = (labels == TRUE).astype(float)
    try:
        r = pearson_r(label01, n_authors)
    except (UndefinedCorrelationError, ValueError):
        r = None

    index = build_author_index(corpus)
    graph = build_coauthor_graph(index, min_articles)
    type_counts = graph.type_counts()
    has_url = table["n_urls"].to_numpy() > 0

    doc = {
        "kind": "analysis",
        "n_articles": len(corpus),
        "corpus_stats": corpus_stats(corpus).to_dict(),
        "comparisons": comparisons,
        "authors": {
            "pearson_label_vs_n_authors": r,
            "n_unique_authors": index.n_unique_authors,
            "n_eligible_authors": index.n_eligible(min_articles),
            "min_articles": min_articles,
        },
        "coauthorship": {
            "n_nodes": graph.graph.number_of_nodes(),
            "n_edges": graph.graph.number_of_edges(),
            "type_counts": {t.value: type_counts[t] for t in sorted(type_counts, key=lambda t: t.value)},
            "mixed_fraction": graph.mixed_fraction,
            "breakdown": authorship_breakdown(corpus, index, min_articles),
        },
        "consistency": consistency_report(corpus, min_articles).to_dict(),
        "affiliations": affiliation_report(corpus),
        "urls_in_body": {
            "n_articles": int(has_url.sum()),
            FAKE: int((has_url & (labels == FAKE)).sum()),
            TRUE: int((has_url & (labels == TRUE)).sum()),
        },
    }
    return doc, graph
