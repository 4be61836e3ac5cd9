"""Author-based credibility: indexes, coauthorship graph, history, consistency."""

from __future__ import annotations

import csv
import datetime as dt
import io
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Iterable

import networkx as nx

from credlens.corpus import FAKE, TRUE, Corpus, NewsArticle
from credlens.errors import LeakageError

MIN_ARTICLES = 2

# organisation names observed inside author strings
ORGANIZATION_KEYWORDS = (
    "abc news",
    "associated press",
    "bloomberg",
    "cbs news",
    "cnn",
    "fox news",
    "nbc news",
    "new york times",
    "npr",
    "politico",
    "reuters",
    "washington post",
)


class AuthorType(str, Enum):
    TRUE_ONLY = "true_only"
    FAKE_ONLY = "fake_only"
    MIXED = "mixed"
    INSUFFICIENT = "insufficient"


def author_count(article: NewsArticle) -> int:
    return len(article.authors)


def _sort_key(article: NewsArticle):
    # dated articles first in date order, then undated; ties broken by id
    return (article.publish_date is None, article.publish_date or dt.date.min, article.id)


@dataclass(frozen=True)
class AuthorIndex:
    """Casefolded author name -> article ids, plus what is needed to type authors."""

    articles: dict  # author key -> tuple of article ids
    display: dict  # author key -> first-seen display name
    labels: dict  # article id -> label
    coauthors: dict  # article id -> tuple of author keys

    @property
    def n_unique_authors(self) -> int:
        return len(self.articles)

    def n_eligible(self, min_articles: int = MIN_ARTICLES) -> int:
        return sum(1 for ids in self.articles.values() if len(ids) >= min_articles)

    def eligible(self, min_articles: int = MIN_ARTICLES) -> list[str]:
        return sorted(k for k, ids in self.articles.items() if len(ids) >= min_articles)

    def author_type(self, key: str, min_articles: int = MIN_ARTICLES) -> AuthorType:
        ids = self.articles.get(key, ())
        if len(ids) < min_articles:
            return AuthorType.INSUFFICIENT
        return classify_labels(self.labels[i] for i in ids)


def classify_labels(labels: Iterable[str]) -> AuthorType:
    seen = set(labels)
    if seen == {TRUE}:
        return AuthorType.TRUE_ONLY
    if seen == {FAKE}:
        return AuthorType.FAKE_ONLY
    return AuthorType.MIXED


def build_author_index(corpus: Corpus) -> AuthorIndex:
    by_author: dict[str, list[NewsArticle]] = {}
    display = {}
    for a in corpus.articles:
        for name in a.authors:
            key = name.casefold()
            display.setdefault(key, name)
            by_author.setdefault(key, []).append(a)
    return AuthorIndex(
        articles={k: tuple(x.id for x in sorted(v, key=_sort_key)) for k, v in sorted(by_author.items())},
        display=display,
        labels={a.id: a.label for a in corpus.articles},
        coauthors={a.id: a.author_keys for a in corpus.articles},
    )


@dataclass
class CoauthorGraph:
    """Undirected graph of eligible authors; node attr ``type``/``n_articles``, edge attr ``weight``."""

    graph: nx.Graph
    min_articles: int = MIN_ARTICLES

    def author_type(self, key: str) -> AuthorType:
        return self.graph.nodes[key]["type"]

    def type_counts(self) -> Counter:
        return Counter(t for _, t in self.graph.nodes(data="type"))

    @property
    def mixed_fraction(self) -> float:
        n = self.graph.number_of_nodes()
        return self.type_counts()[AuthorType.MIXED] / n if n else 0.0

    def edges_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["author_a", "author_b", "weight"])
        for a, b, weight in sorted((min(u, v), max(u, v), d) for u, v, d in self.graph.edges(data="weight")):
            w.writerow([self.graph.nodes[a]["name"], self.graph.nodes[b]["name"], weight])
        return buf.getvalue()

    def nodes_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["author", "type", "n_articles"])
        for key in sorted(self.graph.nodes):
            d = self.graph.nodes[key]
            w.writerow([d["name"], d["type"].value, d["n_articles"]])
        return buf.getvalue()


def build_coauthor_graph(index: AuthorIndex, min_articles: int = MIN_ARTICLES) -> CoauthorGraph:
    """Coauthorship among eligible authors; ineligible coauthors are dropped from edges."""
    eligible = set(index.eligible(min_articles))
    g = nx.Graph()
    for key in sorted(eligible):
        g.add_node(
            key,
            name=index.display[key],
            type=index.author_type(key, min_articles),
            n_articles=len(index.articles[key]),
        )
    for article_id in sorted(index.coauthors):
        keys = sorted(k for k in set(index.coauthors[article_id]) if k in eligible)
        for a, b in combinations(keys, 2):
            if g.has_edge(a, b):
                g[a][b]["weight"] += 1
            else:
                g.add_edge(a, b, weight=1)
    return CoauthorGraph(g, min_articles)


def neighbor_type_profile(g: CoauthorGraph) -> dict[str, tuple[int, int, int]]:
    """Per author: neighbours that are (true_only, fake_only, mixed)."""
    out = {}
    for key in sorted(g.graph.nodes):
        c = Counter(g.author_type(n) for n in g.graph.neighbors(key))
        out[key] = (c[AuthorType.TRUE_ONLY], c[AuthorType.FAKE_ONLY], c[AuthorType.MIXED])
    return out


def neighbor_profile_csv(g: CoauthorGraph) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["author", "n_true_only", "n_fake_only", "n_mixed"])
    for key, counts in neighbor_type_profile(g).items():
        w.writerow([g.graph.nodes[key]["name"], *counts])
    return buf.getvalue()


@dataclass(frozen=True)
class HistoryFeatures:
    past_fake: int = 0
    past_true: int = 0


class HistoryReference:
    """Reference article set indexed by author, for repeated history lookups."""

    def __init__(self, reference: Iterable[NewsArticle]):
        self.labels = {}
        self.by_author: dict[str, set] = {}
        for a in reference:
            self.labels[a.id] = a.label
            for key in a.author_keys:
                self.by_author.setdefault(key, set()).add(a.id)

    def __contains__(self, article_id) -> bool:
        return article_id in self.labels

    def features(self, article: NewsArticle, exclude_self: bool = False) -> HistoryFeatures:
        """Count reference articles sharing at least one author with ``article``.

        The target must not be part of the reference, unless ``exclude_self``
        asks for a leave-one-out view of a reference that contains it.
        """
        if article.id in self.labels and not exclude_self:
            raise LeakageError(f"article {article.id!r} is inside its own history reference set")
        shared = set()
        for key in article.author_keys:
            shared |= self.by_author.get(key, set())
        shared.discard(article.id)
        c = Counter(self.labels[i] for i in shared)
        return HistoryFeatures(past_fake=c[FAKE], past_true=c[TRUE])


def history_features(article: NewsArticle, reference: Iterable[NewsArticle]) -> HistoryFeatures:
    return HistoryReference(reference).features(article)


@dataclass
class ConsistencyReport:
    n_dated_articles: int
    n_eligible_authors: int
    n_eligible_articles: int
    n_consistent: int
    n_contradicting: int
    flips: dict = field(default_factory=dict)  # author -> list of flip records

    def to_dict(self) -> dict:
        return {
            "n_dated_articles": self.n_dated_articles,
            "n_eligible_authors": self.n_eligible_authors,
            "n_eligible_articles": self.n_eligible_articles,
            "n_consistent": self.n_consistent,
            "n_contradicting": self.n_contradicting,
            "flips": self.flips,
        }


def consistency_report(corpus: Corpus, min_articles: int = MIN_ARTICLES) -> ConsistencyReport:
    """Chronological label consistency of authors with enough dated articles."""
    dated = [a for a in corpus.articles if a.publish_date is not None]
    by_author: dict[str, list[NewsArticle]] = {}
    display = {}
    for a in dated:
        for name in a.authors:
            display.setdefault(name.casefold(), name)
            by_author.setdefault(name.casefold(), []).append(a)
    eligible = {k: sorted(v, key=_sort_key) for k, v in by_author.items() if len(v) >= min_articles}
    flips = {}
    for key in sorted(eligible):
        seq = eligible[key]
        changes = [
            {"position": i, "article_id": seq[i].id, "date": seq[i].publish_date.isoformat(),
             "from": seq[i - 1].label, "to": seq[i].label}
            for i in range(1, len(seq))
            if seq[i].label != seq[i - 1].label
        ]
        if changes:
            flips[display[key]] = changes
    articles = {a.id for v in eligible.values() for a in v}
    return ConsistencyReport(
        n_dated_articles=len(dated),
        n_eligible_authors=len(eligible),
        n_eligible_articles=len(articles),
        n_consistent=len(eligible) - len(flips),
        n_contradicting=len(flips),
        flips=flips,
    )


def authorship_breakdown(corpus: Corpus, index: AuthorIndex, min_articles: int = MIN_ARTICLES) -> list[dict]:
    """Articles with at least one eligible author, by label, author count and author group.

    The group is ``mixed`` when any eligible author publishes both kinds,
    otherwise the single pure type of its eligible authors.
    """
    eligible = set(index.eligible(min_articles))
    rows = Counter()
    for a in corpus.articles:
        keys = [k for k in a.author_keys if k in eligible]
        if not keys:
            continue
        types = {index.author_type(k, min_articles) for k in keys}
        group = AuthorType.MIXED if AuthorType.MIXED in types or len(types) > 1 else types.pop()
        size = "one" if len(a.authors) == 1 else "multiple"
        rows[(a.label, size, group.value)] += 1
    order = {TRUE: 0, FAKE: 1}
    return [
        {"label": label, "n_authors": size, "author_group": group, "n_articles": n}
        for (label, size, group), n in sorted(rows.items(), key=lambda kv: (order[kv[0][0]], kv[0][1] != "one", kv[0][2]))
    ]


def affiliation_report(corpus: Corpus, keywords=ORGANIZATION_KEYWORDS) -> dict:
    """Organisation keywords found inside author strings, counted per label."""
    found: dict[str, Counter] = {}
    for a in corpus.articles:
        names = " | ".join(a.authors).casefold()
        for kw in keywords:
            if kw in names:
                found.setdefault(kw, Counter())[a.label] += 1
    return {kw: {FAKE: c[FAKE], TRUE: c[TRUE]} for kw, c in sorted(found.items())}
