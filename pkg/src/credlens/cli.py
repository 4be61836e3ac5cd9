"""``credlens`` command-line interface.

Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.
Data goes to files or stdout; progress and warnings go to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from credlens import __version__, resources
from credlens.corpus import FORMATS as CORPUS_FORMATS
from credlens.corpus import corpus_stats, deduplicate, dumps_corpus, load_corpus
from credlens.errors import ConfigError, CorpusIOError, CredlensError
from credlens.ml.evaluation import content_table, cross_validate
from credlens.ml.features import Extractors, FeatureConfig, assemble_features, feature_frame
from credlens.ml.learners import KINDS, ModelSpec
from credlens.report import FORMATS as REPORT_FORMATS
from credlens.report import dumps_json, emit_report, seed_averaged
from credlens.sourcefeat import HistoryReference, neighbor_profile_csv

logger = logging.getLogger("credlens")

DEFAULT_SEED = 42
DEFAULT_K = 10


class UsageError(CredlensError):
    pass


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="credlens", description="Credibility-based fake news detection.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--resources", help=f"resource directory (default: ${resources.ENV_VAR} or bundled)")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("ingest", help="load, deduplicate and save a corpus")
    s.add_argument("--input", nargs="+", required=True, help="dataset directories or files")
    s.add_argument("--format", choices=CORPUS_FORMATS, default="fakenewsnet")
    s.add_argument("--out", required=True, help="output corpus JSON")
    s.add_argument("--no-dedup", action="store_true", help="keep duplicate bodies")

    s = sub.add_parser("stats", help="dataset statistics")
    s.add_argument("--corpus", required=True)
    s.add_argument("--format", choices=REPORT_FORMATS, default="json")
    s.add_argument("--out", help="output file (default: stdout)")

    s = sub.add_parser("analyze", help="group comparisons, coauthorship graph and consistency report")
    s.add_argument("--corpus", required=True)
    s.add_argument("--out-dir", required=True)
    s.add_argument("--min-articles", type=int, default=2)
    s.add_argument("--ncsl-distinct", action="store_true", help="count distinct domain words instead of occurrences")

    s = sub.add_parser("featurize", help="write the feature matrix as CSV")
    s.add_argument("--corpus", required=True)
    s.add_argument("--features", default="all26", help="config name or comma-separated feature list")
    s.add_argument("--out", required=True)
    s.add_argument("--ncsl-distinct", action="store_true")

    s = sub.add_parser("evaluate", help="k-fold cross-validation of classifiers")
    s.add_argument("--corpus", required=True)
    s.add_argument("--models", nargs="+", default=["all"], help=f"any of {', '.join(KINDS)} or 'all'")
    s.add_argument("--features", nargs="+", default=["all26"], help="config names or comma-separated feature lists")
    s.add_argument("--k", type=int, default=DEFAULT_K)
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--repeats", type=int, default=1, help="run seeds seed..seed+repeats-1")
    s.add_argument("--dataset", help="restrict to one dataset (politifact, buzzfeed, other)")
    s.add_argument("--out", help="output JSON (default: stdout)")
    s.add_argument("--ncsl-distinct", action="store_true")

    s = sub.add_parser("report", help="render a JSON result document")
    s.add_argument("--input", required=True)
    s.add_argument("--format", choices=REPORT_FORMATS, default="markdown")
    s.add_argument("--out", help="output file (default: stdout)")
    return p


def _require_file(path: str) -> Path:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"input file not found: {path}")
    return p


def _require_writable_parent(path: str | None):
    if path is None:
        return
    parent = Path(path).resolve().parent
    if not parent.is_dir():
        raise UsageError(f"output directory does not exist: {parent}")


def _write(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _extractors(args) -> Extractors:
    return Extractors.load(args.resources, ncsl_distinct=getattr(args, "ncsl_distinct", False))


def _cmd_ingest(args) -> int:
    for raw in args.input:
        if not Path(raw).exists():
            raise UsageError(f"input not found: {raw}")
    _require_writable_parent(args.out)
    corpus = load_corpus(args.input, args.format)
    removed = []
    if not args.no_dedup:
        corpus, removed = deduplicate(corpus)
    Path(args.out).write_text(dumps_corpus(corpus), encoding="utf-8")
    summary = {
        "n_articles": len(corpus),
        "n_removed": len(removed),
        "removed": [list(pair) for pair in removed],
        "social": corpus.provenance.get("social", {}),
    }
    sys.stdout.write(dumps_json(summary))
    logger.info("wrote %d articles to %s (%d duplicates removed)", len(corpus), args.out, len(removed))
    return 0


def _cmd_stats(args) -> int:
    corpus = load_corpus([_require_file(args.corpus)], "json")
    doc = {"kind": "corpus_stats", **corpus_stats(corpus).to_dict()}
    _write(emit_report(doc, args.format), args.out)
    return 0


def _cmd_analyze(args) -> int:
    from credlens.analysis import analyze

    path = _require_file(args.corpus)
    ext = _extractors(args)
    corpus = load_corpus([path], "json")
    doc, graph = analyze(corpus, ext, args.min_articles)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "analysis.json").write_text(dumps_json(doc), encoding="utf-8")
    (out / "analysis.md").write_text(emit_report(doc, "markdown"), encoding="utf-8")
    (out / "coauthor_edges.csv").write_text(graph.edges_csv(), encoding="utf-8")
    (out / "coauthor_nodes.csv").write_text(graph.nodes_csv(), encoding="utf-8")
    (out / "neighbor_profile.csv").write_text(neighbor_profile_csv(graph), encoding="utf-8")
    logger.info("analysis written to %s", out)
    return 0


def _parse_config(text: str) -> FeatureConfig:
    try:
        return FeatureConfig.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _cmd_featurize(args) -> int:
    path = _require_file(args.corpus)
    config = _parse_config(args.features)
    _require_writable_parent(args.out)
    ext = _extractors(args)
    corpus = load_corpus([path], "json")
    ref = HistoryReference(corpus.articles)
    vectors = []
    for a in corpus.articles:
        vec = assemble_features(a, config, (), ext)
        if config.needs_history:
            # full-corpus leave-one-out history, flagged in the metadata below
            h = ref.features(a, exclude_self=True)
            values = vec.as_dict() | {"past_fake": float(h.past_fake), "past_true": float(h.past_true)}
            vec = type(vec)(vec.id, vec.names, tuple(values[n] for n in vec.names), vec.flags)
        vectors.append(vec)
    df = feature_frame(vectors, corpus.labels())
    df.to_csv(args.out)
    meta = {
        "corpus": str(path),
        "feature_config": config.name,
        "features": list(config.features),
        "n_articles": len(corpus),
        "warnings": (
            ["history features (past_fake, past_true) were computed against all other articles of the corpus; "
             "they leak label information and must not be used for evaluation"]
            if config.needs_history else []
        ),
    }
    Path(str(args.out) + ".meta.json").write_text(dumps_json(meta), encoding="utf-8")
    for w in meta["warnings"]:
        logger.warning(w)
        print(f"warning: {w}", file=sys.stderr)
    return 0


def _cmd_evaluate(args) -> int:
    path = _require_file(args.corpus)
    models = list(KINDS) if "all" in args.models else args.models
    bad = [m for m in models if m not in KINDS]
    if bad:
        raise UsageError(f"unknown model(s) {bad}; expected {list(KINDS)} or 'all'")
    configs = [_parse_config(f) for f in args.features]
    if args.k < 2 or args.repeats < 1:
        raise UsageError("--k must be >= 2 and --repeats >= 1")
    _require_writable_parent(args.out)
    ext = _extractors(args)
    corpus = load_corpus([path], "json")
    if args.dataset:
        corpus = corpus.filter(lambda a: a.dataset == args.dataset)
    content = None
    if any(set(c.features) - {"n_authors", "past_fake", "past_true"} for c in configs):
        content = content_table(corpus, ext)
    reports = []
    for i in range(args.repeats):
        seed = args.seed + i
        for config in configs:
            for kind in models:
                logger.info("evaluating %s on %s (seed %d)", kind, config.name, seed)
                rep = cross_validate(ModelSpec(kind, seed=seed), corpus, config, k=args.k, seed=seed,
                                     extractors=ext, content=content)
                reports.append(rep.to_dict())
    summary = [
        {"feature_config": cfg, "classifier": kind, **vals}
        for (cfg, kind), vals in sorted(seed_averaged(reports).items())
    ]
    doc = {
        "kind": "evaluation",
        "corpus": str(path),
        "dataset": args.dataset,
        "k": args.k,
        "seeds": [args.seed + i for i in range(args.repeats)],
        "not_implemented": ["svm_rbf"],
        "reports": reports,
        "summary": summary,
    }
    _write(dumps_json(doc), args.out)
    return 0


def _cmd_report(args) -> int:
    path = _require_file(args.input)
    _require_writable_parent(args.out)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: not valid JSON ({exc})") from exc
    _write(emit_report(doc, args.format), args.out)
    return 0


COMMANDS = {
    "ingest": _cmd_ingest,
    "stats": _cmd_stats,
    "analyze": _cmd_analyze,
    "featurize": _cmd_featurize,
    "evaluate": _cmd_evaluate,
    "report": _cmd_report,
}


def run(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        if args.resources:
            resources.resource_dir(args.resources)
        return COMMANDS[args.command](args)
    except (UsageError, ConfigError) as exc:
        print(f"credlens: error: {exc}", file=sys.stderr)
        return 2
    except (CorpusIOError, CredlensError, OSError) as exc:
        print(f"credlens: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
