"""Rendering result documents as JSON, CSV or Markdown.

Documents are the JSON objects written by the CLI and carry a ``kind`` of
``evaluation``, ``analysis`` or ``corpus_stats``. Rendering is deterministic:
the same document always yields the same bytes.
"""

from __future__ import annotations

import csv
import io
import json
from collections import defaultdict

from credlens.errors import ConfigError
from credlens.ml.learners import DISPLAY_NAMES

FORMATS = ("json", "csv", "markdown")

# row order of the classifier tables, including the unimplemented RBF SVM
CLASSIFIER_ROWS = ("svm_rbf", "linear_svm", "logreg", "random_forest", "adaboost_stumps", "gaussian_nb", "gbdt_stumps")
NOT_IMPLEMENTED = ("svm_rbf",)

METRICS = ("f1_micro", "f1_macro", "f1_weighted")
COMPARISON_COLUMNS = (
    "feature", "fake_mean", "fake_median", "true_mean", "true_median", "shapiro_p_fake", "shapiro_p_true", "mwu_p",
)


def dumps_json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _fmt(value, digits=2) -> str:
    if value is None:
        return "n/a"
    if isinstance(value, float):
        if value != 0 and abs(value) < 10 ** -(digits + 1):
            return f"{value:.2e}"
        return f"{value:.{digits}f}"
    return str(value)


def _md_table(header, rows) -> str:
    lines = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
    lines += ["| " + " | ".join(row) + " |" for row in rows]
    return "\n".join(lines) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(v) if isinstance(v, float) else ("" if v is None else v) for v in row])
    return buf.getvalue()


def _kind(doc) -> str:
    if isinstance(doc, dict) and "kind" in doc:
        return doc["kind"]
    if isinstance(doc, dict) and "classifier" in doc:
        return "evaluation"
    return "analysis"


def _reports(doc) -> list:
    if "classifier" in doc:
        return [doc]
    return list(doc.get("reports", []))


def seed_averaged(reports) -> dict:
    """(feature_config, classifier) -> metric means averaged over seeds."""
    acc = defaultdict(list)
    for r in reports:
        acc[(r["feature_config"], r["classifier"])].append(r["means"])
    return {
        key: {m: sum(x[m] for x in vals) / len(vals) for m in METRICS} | {"n_seeds": len(vals)}
        for key, vals in acc.items()
    }


def _evaluation_markdown(doc) -> str:
    averaged = seed_averaged(_reports(doc))
    configs = sorted({cfg for cfg, _ in averaged})
    out = []
    for cfg in configs or [""]:
        rows = []
        for kind in CLASSIFIER_ROWS:
            name = DISPLAY_NAMES[kind]
            if kind in NOT_IMPLEMENTED:
                rows.append([name, "not implemented", "not implemented", "not implemented"])
            elif (cfg, kind) in averaged:
                m = averaged[(cfg, kind)]
                rows.append([name, *(_fmt(m[k]) for k in METRICS)])
        title = f"### Average F1 scores ({cfg})\n\n" if cfg else ""
        out.append(title + _md_table(["Classifier", "F1-micro", "F1-macro", "F1-weighted"], rows))
    return "\n".join(out)


def _evaluation_csv(doc) -> str:
    rows = [
        [r["feature_config"], r["classifier"], r["seed"], r["k"], *(r["means"][m] for m in METRICS)]
        for r in _reports(doc)
    ]
    return _csv(["feature_config", "classifier", "seed", "k", *METRICS], rows)


def _comparison_rows(doc):
    rows = []
    for name in sorted(doc.get("comparisons", {})):
        c = doc["comparisons"][name]
        sw = c.get("shapiro") or {}
        rows.append([
            name,
            c["fake"]["mean"], c["fake"]["median"], c["true"]["mean"], c["true"]["median"],
            (sw.get("fake") or {}).get("p_value"), (sw.get("true") or {}).get("p_value"),
            (c.get("mann_whitney") or {}).get("p_value"),
        ])
    return rows


def _analysis_markdown(doc) -> str:
    header = ["Feature", "Fake mean", "Fake median", "True mean", "True median", "SW p (fake)", "SW p (true)", "MWU p"]
    rows = [[r[0], *(_fmt(v) if i < 4 else _fmt(v, 3) for i, v in enumerate(r[1:]))] for r in _comparison_rows(doc)]
    out = [_md_table(header, rows)]
    if "coauthorship" in doc:
        co = doc["coauthorship"]
        out.append(
            "\n".join([
                f"Unique authors: {doc['authors']['n_unique_authors']}; "
                f"eligible (>= {doc['authors']['min_articles']} articles): {doc['authors']['n_eligible_authors']}; "
                f"mixed fraction: {_fmt(co['mixed_fraction'], 3)}",
                "",
                _md_table(
                    ["News type", "Authors", "Author group", "Articles"],
                    [[b["label"], b["n_authors"], b["author_group"], str(b["n_articles"])] for b in co["breakdown"]],
                ),
            ])
        )
    if "consistency" in doc:
        c = doc["consistency"]
        out.append(
            f"Dated articles: {c['n_dated_articles']}; eligible dated authors: {c['n_eligible_authors']} "
            f"({c['n_eligible_articles']} articles); contradicting: {c['n_contradicting']}; "
            f"consistent: {c['n_consistent']}\n"
        )
    return "\n".join(out)


def _stats_markdown(doc) -> str:
    ds = doc.get("datasets", {})
    names = sorted(ds)
    rows = [
        ["# News Stories", *(str(ds[n]["total"]) for n in names)],
        ["# True News", *(str(ds[n]["true"]) for n in names)],
        ["# Fake News", *(str(ds[n]["fake"]) for n in names)],
    ]
    social_rows = (("n_users", "# Users"), ("n_news_users", "# News-Users"), ("n_user_user", "# Users-Users"))
    social = doc.get("social", {})
    for key, label in social_rows:
        if any(key in social.get(n, {}) for n in names):
            rows.insert(len(rows) - 3, [label, *(str(social.get(n, {}).get(key, "n/a")) for n in names)])
    out = [_md_table(["Data", *names], rows)]
    schemes = doc.get("url_schemes", {})
    if schemes:
        out.append(_md_table(
            ["URL scheme", "Total", "Fake", "True"],
            [[s, str(v["total"]), str(v["fake"]), str(v["true"])] for s, v in schemes.items()],
        ))
    return "\n".join(out)


def _stats_csv(doc) -> str:
    ds = doc.get("datasets", {})
    rows = [[n, ds[n]["total"], ds[n]["fake"], ds[n]["true"]] for n in sorted(ds)]
    return _csv(["dataset", "total", "fake", "true"], rows)


def emit_report(doc, fmt: str) -> str:
    """Render a result document in ``fmt`` (json, csv or markdown)."""
    if fmt not in FORMATS:
        raise ConfigError(f"unknown report format {fmt!r}; expected one of {FORMATS}")
    if fmt == "json":
        return dumps_json(doc)
    kind = _kind(doc)
    if kind == "evaluation":
        return _evaluation_markdown(doc) if fmt == "markdown" else _evaluation_csv(doc)
    if kind == "corpus_stats":
        return _stats_markdown(doc) if fmt == "markdown" else _stats_csv(doc)
    if fmt == "markdown":
        return _analysis_markdown(doc)
    return _csv(list(COMPARISON_COLUMNS), _comparison_rows(doc))
