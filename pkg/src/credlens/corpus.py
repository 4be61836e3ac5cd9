"""Loading, normalizing, deduplicating and persisting labeled news corpora."""

from __future__ import annotations

import csv
import datetime as dt
import json
import logging
import re
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from credlens.errors import CorpusIOError, DuplicateIdError, RecordParseError

logger = logging.getLogger(__name__)

FAKE = "fake"
TRUE = "true"
LABELS = (FAKE, TRUE)
DATASETS = ("politifact", "buzzfeed", "other")
FORMATS = ("fakenewsnet", "csv", "json")

CSV_COLUMNS = ("id", "dataset", "label", "title", "text", "authors", "url", "publish_date")

_WS = re.compile(r"\s+")


def normalize_author(name: str) -> str:
    """Trim and collapse internal whitespace; display case is preserved."""
    return _WS.sub(" ", name).strip()


def author_key(name: str) -> str:
    """Identity key for an author: the casefolded normalized name."""
    return normalize_author(name).casefold()


def normalize_authors(names: Iterable[str]) -> tuple[str, ...]:
    seen = set()
    out = []
    for raw in names:
        name = normalize_author(raw)
        key = name.casefold()
        if not name or key in seen:
            continue
        seen.add(key)
        out.append(name)
    return tuple(out)


def normalize_body(text: str) -> str:
    return unicodedata.normalize("NFC", text).strip()


@dataclass(frozen=True)
class NewsArticle:
    id: str
    dataset: str
    title: str
    body: str
    authors: tuple[str, ...]
    label: str
    url: str | None = None
    publish_date: dt.date | None = None

    def __post_init__(self):
        if self.label not in LABELS:
            raise RecordParseError(self.id, "label", f"expected one of {LABELS}, got {self.label!r}")
        if self.dataset not in DATASETS:
            raise RecordParseError(self.id, "dataset", f"expected one of {DATASETS}, got {self.dataset!r}")
        object.__setattr__(self, "authors", normalize_authors(self.authors))

    @property
    def author_keys(self) -> tuple[str, ...]:
        return tuple(a.casefold() for a in self.authors)

    @property
    def is_fake(self) -> bool:
        return self.label == FAKE

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "dataset": self.dataset,
            "label": self.label,
            "title": self.title,
            "body": self.body,
            "authors": list(self.authors),
            "url": self.url,
            "publish_date": self.publish_date.isoformat() if self.publish_date else None,
        }

    @classmethod
    def from_dict(cls, d: dict) -> NewsArticle:
        rid = d.get("id", "<missing id>")
        for key in ("id", "dataset", "label", "title", "body"):
            if not isinstance(d.get(key), str):
                raise RecordParseError(rid, key, "missing or not a string")
        authors = d.get("authors") or []
        if not isinstance(authors, list) or not all(isinstance(a, str) for a in authors):
            raise RecordParseError(rid, "authors", "expected a list of strings")
        return cls(
            id=d["id"],
            dataset=d["dataset"],
            label=d["label"],
            title=d["title"],
            body=d["body"],
            authors=tuple(authors),
            url=_optional_str(rid, "url", d.get("url")),
            publish_date=parse_date(rid, d.get("publish_date")),
        )


@dataclass(frozen=True)
class Corpus:
    articles: tuple[NewsArticle, ...]
    provenance: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "articles", tuple(self.articles))
        dupes = [i for i, n in Counter(a.id for a in self.articles).items() if n > 1]
        if dupes:
            raise DuplicateIdError(f"duplicate article ids: {sorted(dupes)[:10]}")

    def __len__(self):
        return len(self.articles)

    def __iter__(self):
        return iter(self.articles)

    def by_id(self) -> dict[str, NewsArticle]:
        return {a.id: a for a in self.articles}

    def filter(self, predicate) -> Corpus:
        return Corpus(tuple(a for a in self.articles if predicate(a)), dict(self.provenance))

    def labels(self) -> list[str]:
        return [a.label for a in self.articles]


def parse_date(record_id, value) -> dt.date | None:
    """Accept ISO-8601 strings, Mongo-style ``{"$date": ms}`` and epoch numbers."""
    if value is None or value == "":
        return None
    if isinstance(value, dict) and "$date" in value:
        value = value["$date"]
    if isinstance(value, bool):
        raise RecordParseError(record_id, "publish_date", f"unsupported value {value!r}")
    if isinstance(value, (int, float)):
        secs = value / 1000.0 if abs(value) > 1e11 else float(value)
        return dt.datetime.fromtimestamp(secs, tz=dt.timezone.utc).date()
    if isinstance(value, str):
        text = value.strip()
        try:
            return dt.date.fromisoformat(text[:10])
        except ValueError:
            raise RecordParseError(record_id, "publish_date", f"not an ISO-8601 date: {value!r}") from None
    raise RecordParseError(record_id, "publish_date", f"unsupported value {value!r}")


def _optional_str(record_id, name, value):
    if value is None or value == "":
        return None
    if not isinstance(value, str):
        raise RecordParseError(record_id, name, "expected a string")
    return value.strip() or None


def _dataset_name(name: str) -> str:
    low = name.casefold()
    for ds in ("politifact", "buzzfeed"):
        if ds in low:
            return ds
    return "other"


def _label_from_dir(name: str) -> str | None:
    low = name.casefold()
    if low.startswith("fake"):
        return FAKE
    if low.startswith("real") or low.startswith("true"):
        return TRUE
    return None


def _read_json(path: Path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise CorpusIOError(path, exc.strerror or str(exc)) from exc
    except json.JSONDecodeError as exc:
        raise RecordParseError(path.stem, "<json>", str(exc)) from exc


def _fnn_record(rid: str, dataset: str, label: str, data) -> NewsArticle:
    if not isinstance(data, dict):
        raise RecordParseError(rid, "<root>", "expected a JSON object")
    for key in ("title", "text"):
        if not isinstance(data.get(key), str):
            raise RecordParseError(rid, key, "missing or not a string")
    authors = data.get("authors")
    if authors is None:
        authors = []
    if not isinstance(authors, list) or not all(isinstance(a, str) for a in authors):
        raise RecordParseError(rid, "authors", "expected an array of strings")
    return NewsArticle(
        id=rid,
        dataset=dataset,
        label=label,
        title=data["title"],
        body=data["text"],
        authors=tuple(authors),
        url=_optional_str(rid, "url", data.get("url")),
        publish_date=parse_date(rid, data.get("publish_date")),
    )


def _label_dir_records(label_dir: Path, dataset: str, label: str):
    for entry in sorted(label_dir.iterdir()):
        if entry.is_file() and entry.suffix == ".json":
            yield _fnn_record(entry.stem, dataset, label, _read_json(entry))
        elif entry.is_dir():
            # FakeNewsNet v2 layout: <label>/<id>/news content.json
            candidates = sorted(entry.glob("*.json"))
            if candidates:
                yield _fnn_record(entry.name, dataset, label, _read_json(candidates[0]))


def _social_counts(dataset_dir: Path) -> dict:
    """Row counts of the optional user / news-user / user-user edge files."""
    out = {}
    patterns = {"n_users": "*User.txt", "n_news_users": "*NewsUser.txt", "n_user_user": "*UserUser.txt"}
    for key, pattern in patterns.items():
        files = [p for p in dataset_dir.glob(pattern)]
        if key == "n_users":
            files = [p for p in files if not p.name.endswith(("NewsUser.txt", "UserUser.txt"))]
        if files:
            with open(files[0], encoding="utf-8", errors="replace") as fh:
                out[key] = sum(1 for line in fh if line.strip())
    return out


def _load_fakenewsnet(path: Path, provenance: dict) -> list[NewsArticle]:
    if path.is_file():
        label = _label_from_dir(path.parent.name)
        if label is None:
            raise CorpusIOError(path, "cannot infer label from parent directory name")
        dataset = _dataset_name(path.parent.parent.name)
        return [_fnn_record(path.stem, dataset, label, _read_json(path))]

    def label_dirs(d: Path):
        return [(c, _label_from_dir(c.name)) for c in sorted(d.iterdir()) if c.is_dir() and _label_from_dir(c.name)]

    if label_dirs(path):
        dataset_dirs = [path]
    else:
        dataset_dirs = [c for c in sorted(path.iterdir()) if c.is_dir() and label_dirs(c)]
        if not dataset_dirs:
            raise CorpusIOError(path, "no <dataset>/<fake|real>/ directories found")

    articles = []
    for ddir in dataset_dirs:
        dataset = _dataset_name(ddir.name)
        for ldir, label in label_dirs(ddir):
            articles.extend(_label_dir_records(ldir, dataset, label))
        social = _social_counts(ddir)
        if social:
            provenance.setdefault("social", {})[dataset] = social
    return articles


def _load_csv(path: Path) -> list[NewsArticle]:
    try:
        fh = open(path, encoding="utf-8", newline="")
    except OSError as exc:
        raise CorpusIOError(path, exc.strerror or str(exc)) from exc
    articles = []
    with fh:
        reader = csv.DictReader(fh)
        missing = [c for c in CSV_COLUMNS if c not in (reader.fieldnames or [])]
        if missing:
            raise RecordParseError("<header>", ",".join(missing), f"{path}: missing CSV columns")
        for row in reader:
            rid = row["id"]
            label = row["label"].strip().casefold()
            if label == "real":
                label = TRUE
            dataset = row["dataset"].strip().casefold() or "other"
            authors = [a for a in (row["authors"] or "").split(";")]
            articles.append(
                NewsArticle(
                    id=rid,
                    dataset=dataset if dataset in DATASETS else _dataset_name(dataset),
                    label=label,
                    title=row["title"] or "",
                    body=row["text"] or "",
                    authors=tuple(authors),
                    url=_optional_str(rid, "url", row["url"]),
                    publish_date=parse_date(rid, row["publish_date"]),
                )
            )
    return articles


def _load_json(path: Path) -> list[NewsArticle]:
    data = _read_json(path)
    if not isinstance(data, list):
        raise RecordParseError("<root>", "<root>", f"{path}: expected a JSON array of articles")
    return [NewsArticle.from_dict(d) for d in data]


def load_corpus(paths: Sequence[str | Path], format: str = "json") -> Corpus:
    """Load one or more inputs of the same format into a single corpus.

    ``fakenewsnet`` reads ``<dataset>/<fake|real>/<id>.json`` trees, ``csv``
    the consolidated CSV layout and ``json`` a previously saved corpus.
    """
    if format not in FORMATS:
        raise ValueError(f"unknown corpus format {format!r}; expected one of {FORMATS}")
    provenance = {
        "sources": [str(p) for p in paths],
        "format": format,
        "loaded_at": dt.datetime.now(dt.timezone.utc).isoformat(),
    }
    articles: list[NewsArticle] = []
    for raw in paths:
        path = Path(raw)
        if not path.exists():
            raise CorpusIOError(path, "no such file or directory")
        if format == "fakenewsnet":
            articles.extend(_load_fakenewsnet(path, provenance))
        elif format == "csv":
            articles.extend(_load_csv(path))
        else:
            articles.extend(_load_json(path))
    logger.info("loaded %d articles from %d input(s)", len(articles), len(paths))
    return Corpus(tuple(articles), provenance)


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    Path(path).write_text(dumps_corpus(corpus), encoding="utf-8")


def dumps_corpus(corpus: Corpus) -> str:
    return json.dumps([a.to_dict() for a in corpus.articles], ensure_ascii=False, indent=1) + "\n"


def deduplicate(corpus: Corpus) -> tuple[Corpus, list[tuple[str, str]]]:
    """Keep one article per distinct normalized body; the smallest id survives.

    Returns the reduced corpus (original order preserved) and the
    ``(kept_id, dropped_id)`` pairs.
    """
    groups: dict[str, list[str]] = {}
    for a in corpus.articles:
        groups.setdefault(normalize_body(a.body), []).append(a.id)
    removed = []
    dropped = set()
    for ids in groups.values():
        if len(ids) < 2:
            continue
        keep, *rest = sorted(ids)
        for rid in rest:
            removed.append((keep, rid))
            dropped.add(rid)
    removed.sort()
    kept = tuple(a for a in corpus.articles if a.id not in dropped)
    prov = dict(corpus.provenance)
    if removed:
        prov["deduplicated"] = len(removed)
    return Corpus(kept, prov), removed


@dataclass(frozen=True)
class LabelCounts:
    total: int = 0
    fake: int = 0
    true: int = 0

    def to_dict(self):
        return {"total": self.total, "fake": self.fake, "true": self.true}


def _count(articles) -> LabelCounts:
    c = Counter(a.label for a in articles)
    return LabelCounts(total=c[FAKE] + c[TRUE], fake=c[FAKE], true=c[TRUE])


def url_scheme(url: str | None) -> str:
    low = (url or "").casefold()
    if low.startswith("https://"):
        return "https"
    if low.startswith("http://"):
        return "http"
    return "missing"


@dataclass(frozen=True)
class CorpusStats:
    datasets: dict
    combined: LabelCounts
    url_schemes: dict
    social: dict = field(default_factory=dict)

    @property
    def n_http(self) -> int:
        return self.url_schemes["http"].total

    @property
    def n_https(self) -> int:
        return self.url_schemes["https"].total

    @property
    def n_missing(self) -> int:
        return self.url_schemes["missing"].total

    def to_dict(self) -> dict:
        return {
            "datasets": {k: v.to_dict() for k, v in sorted(self.datasets.items())},
            "combined": self.combined.to_dict(),
            "url_schemes": {k: v.to_dict() for k, v in self.url_schemes.items()},
            "social": self.social,
        }


def corpus_stats(corpus: Corpus) -> CorpusStats:
    by_ds: dict[str, list] = {}
    by_scheme: dict[str, list] = {"http": [], "https": [], "missing": []}
    for a in corpus.articles:
        by_ds.setdefault(a.dataset, []).append(a)
        by_scheme[url_scheme(a.url)].append(a)
    return CorpusStats(
        datasets={k: _count(v) for k, v in by_ds.items()},
        combined=_count(corpus.articles),
        url_schemes={k: _count(v) for k, v in by_scheme.items()},
        social=dict(corpus.provenance.get("social", {})),
    )
