import json
import os
import random
from pathlib import Path

import pytest

from credlens.corpus import Corpus, NewsArticle

DATA_ENV = "CREDLENS_DATA"

_ACCEPTANCE = {}

FAKE_SENTENCES = [
    "This is a shocking scandal that the media refuses to report!",
    "Patriots are furious about the terrible betrayal.",
    "Share this before it gets deleted!",
    "The corrupt elite want you to stay silent.",
    "Nobody is talking about this horrible disaster.",
    "A petition demands impeachment now.",
]
TRUE_SENTENCES = [
    "The committee met on Tuesday to review the fiscal plan.",
    "Lawmakers approved the bipartisan measure by a vote of 62 to 38.",
    "The governor said the veto would be considered next week.",
    "Officials reported a 4.5 percent increase in revenue.",
    "The caucus is expected to convene in the main chamber.",
    "Analysts described the outlook as stable.",
]


def make_article(i, label, authors=(), body=None, title=None, date=None, dataset="politifact", url=None):
    return NewsArticle(
        id=f"a{i:03d}",
        dataset=dataset,
        title=title if title is not None else f"Headline number {i}",
        body=body if body is not None else f"Body text {i}.",
        authors=tuple(authors),
        label=label,
        url=url,
        publish_date=date,
    )


def synthetic_records(n_per_label=30, seed=0):
    """FakeNewsNet-like records: (dataset, label, id, json dict)."""
    rng = random.Random(seed)
    fake_authors = [f"Fake Writer {i}" for i in range(6)]
    true_authors = [f"Staff Reporter {i}" for i in range(10)]
    out = []
    for label, pool, sents in (("fake", fake_authors, FAKE_SENTENCES), ("real", true_authors, TRUE_SENTENCES)):
        for j in range(n_per_label):
            dataset = "politifact" if j % 2 == 0 else "buzzfeed"
            if label == "fake":
                authors = [] if j % 3 else [rng.choice(pool)]
            else:
                authors = rng.sample(pool, 2) if j % 4 else [rng.choice(pool)]
            body = " ".join(rng.choice(sents) for _ in range(rng.randint(3, 8)))
            rec = {
                "title": f"{label} story {j} about the election",
                "text": body + f" Reference {j}.",
                "authors": authors,
                "url": (f"http://news.example/{label}/{j}" if j % 5 else f"https://x.example/{j}") if j % 7 else None,
                "publish_date": f"2016-{1 + j % 12:02d}-{1 + j % 27:02d}" if j % 6 else None,
            }
            out.append((dataset, label, f"{dataset}_{label}_{j}", rec))
    return out


def separable_data(n=200, d=5, seed=7):
    """Linearly separable set: x0 = +/-(1.5 + U(0,1)) by class, other columns N(0,1)."""
    import numpy as np
    import pandas as pd

    rng = np.random.default_rng(seed)
    y = np.array(["fake", "true"] * (n // 2))
    X = rng.normal(size=(n, d))
    sign = np.where(y == "true", 1.0, -1.0)
    X[:, 0] = sign * (1.5 + rng.uniform(size=n))
    frame = pd.DataFrame(X, columns=[f"x{i}" for i in range(d)], index=[f"s{i:03d}" for i in range(n)])
    return frame, y


def write_fakenewsnet_tree(root: Path, records):
    for dataset, label, rid, rec in records:
        d = root / dataset / label
        d.mkdir(parents=True, exist_ok=True)
        (d / f"{rid}.json").write_text(json.dumps(rec), encoding="utf-8")
    return root


@pytest.fixture
def fnn_tree(tmp_path):
    return write_fakenewsnet_tree(tmp_path / "data", synthetic_records())


@pytest.fixture(scope="session")
def synthetic_corpus():
    from credlens.corpus import _fnn_record

    arts = []
    for dataset, label, rid, rec in synthetic_records(60, seed=3):
        arts.append(_fnn_record(rid, dataset, "fake" if label == "fake" else "true", rec))
    return Corpus(tuple(arts))


@pytest.fixture(scope="session")
def real_data_path():
    path = os.environ.get(DATA_ENV)
    if not path:
        pytest.skip(f"real FakeNewsNet data not available; set ${DATA_ENV} to a corpus JSON or dataset tree")
    p = Path(path)
    if not p.exists():
        pytest.skip(f"${DATA_ENV}={path} does not exist")
    return p


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("acceptance")
    if marker is None or call.when != "call":
        if marker is not None and call.when == "setup" and call.excinfo is not None:
            if call.excinfo.errisinstance(pytest.skip.Exception):
                _ACCEPTANCE.setdefault(marker.args[0], []).append((item.name, "SKIP", str(call.excinfo.value)))
        return
    if call.excinfo is None:
        status = "PASS"
    elif call.excinfo.errisinstance(pytest.skip.Exception):
        status = "SKIP"
    else:
        status = "FAIL"
    detail = "" if call.excinfo is None else str(call.excinfo.value).splitlines()[0][:120]
    _ACCEPTANCE.setdefault(marker.args[0], []).append((item.name, status, detail))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(_ACCEPTANCE):
        for name, status, detail in _ACCEPTANCE[crit]:
            line = f"AC{crit} {status:4s} {name}"
            if detail and status != "PASS":
                line += f"  ({detail})"
            terminalreporter.write_line(line)
