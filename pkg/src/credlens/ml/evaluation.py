"""F1 metrics, stratified folds and leakage-free k-fold cross-validation."""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
import pandas as pd

from credlens.corpus import Corpus
from credlens.errors import FoldError, LeakageError
from credlens.ml.features import (
    HISTORY_FEATURES,
    REGISTRY,
    SOURCE_FEATURES,
    Extractors,
    FeatureConfig,
    content_features,
)
from credlens.ml.learners import ModelSpec, fit
from credlens.sourcefeat import HistoryReference

logger = logging.getLogger(__name__)

STANDARDIZED_KINDS = ("logreg", "linear_svm")


class F1Scores(NamedTuple):
    micro: float
    macro: float
    weighted: float
    undefined: tuple = ()


def f1_scores(y_true: Sequence, y_pred: Sequence) -> F1Scores:
    """Micro, macro and support-weighted F1.

    A class whose precision or recall is 0/0 contributes F1 = 0 and is listed
    in ``undefined``.
    """
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if len(y_true) != len(y_pred):
        raise ValueError(f"length mismatch: {len(y_true)} true vs {len(y_pred)} predicted labels")
    if len(y_true) == 0:
        raise ValueError("f1_scores needs at least one label")
    classes = sorted(set(y_true.tolist()) | set(y_pred.tolist()))
    f1s, supports, undefined = [], [], []
    tp_sum = fp_sum = fn_sum = 0
    for c in classes:
        tp = int(np.sum((y_true == c) & (y_pred == c)))
        fp = int(np.sum((y_true != c) & (y_pred == c)))
        fn = int(np.sum((y_true == c) & (y_pred != c)))
        tp_sum, fp_sum, fn_sum = tp_sum + tp, fp_sum + fp, fn_sum + fn
        if tp + fp == 0 or tp + fn == 0:
            undefined.append(c)
        denom = 2 * tp + fp + fn
        f1s.append(2 * tp / denom if denom and tp else 0.0)
        supports.append(tp + fn)
    micro_denom = 2 * tp_sum + fp_sum + fn_sum
    micro = 2 * tp_sum / micro_denom if micro_denom else 0.0
    macro = float(np.mean(f1s))
    weighted = float(np.dot(f1s, supports) / sum(supports))
    return F1Scores(micro, macro, weighted, tuple(undefined))


def stratified_folds(labels: Sequence, k: int, seed: int) -> np.ndarray:
    """Fold index per sample: each class shuffled, then dealt round-robin.

    Classes are dealt consecutively so overall fold sizes differ by at most one.
    """
    labels = np.asarray(labels)
    counts = Counter(labels.tolist())
    too_small = {c: n for c, n in counts.items() if n < k}
    if too_small:
        raise FoldError(f"every class needs at least k={k} samples; got {too_small}")
    rng = np.random.default_rng(seed)
    folds = np.empty(len(labels), dtype=int)
    pos = 0
    for c in sorted(counts):
        idx = np.flatnonzero(labels == c)
        idx = idx[rng.permutation(len(idx))]
        folds[idx] = (pos + np.arange(len(idx))) % k
        pos += len(idx)
    return folds


@dataclass
class Standardizer:
    mean: np.ndarray
    scale: np.ndarray

    @classmethod
    def fit(cls, X: pd.DataFrame) -> Standardizer:
        mean = X.mean(axis=0).to_numpy()
        scale = X.std(axis=0, ddof=0).to_numpy()
        scale = np.where(scale > 0, scale, 1.0)
        return cls(mean, scale)

    def transform(self, X: pd.DataFrame) -> pd.DataFrame:
        return (X - self.mean) / self.scale


def content_table(corpus: Corpus, extractors: Extractors | None = None) -> pd.DataFrame:
    """Fold-independent features for every article, indexed by id."""
    rows = {}
    for a in corpus.articles:
        values, _ = content_features(a, extractors)
        rows[a.id] = values
    columns = [f for f in REGISTRY if f not in HISTORY_FEATURES]
    return pd.DataFrame.from_dict(rows, orient="index", columns=columns)


def source_table(corpus: Corpus) -> pd.DataFrame:
    return pd.DataFrame({"n_authors": [float(len(a.authors)) for a in corpus.articles]},
                        index=[a.id for a in corpus.articles])


def fold_history(corpus: Corpus, train_mask: np.ndarray) -> pd.DataFrame:
    """History features for all articles against the training articles only.

    Training rows use a leave-one-out view of the training set; test rows the
    full training set. Raises LeakageError if a test id is in the reference.
    """
    train = [a for a, m in zip(corpus.articles, train_mask) if m]
    ref = HistoryReference(train)
    leaked = [a.id for a, m in zip(corpus.articles, train_mask) if not m and a.id in ref]
    if leaked:
        raise LeakageError(f"test articles inside the history reference: {leaked[:5]}")
    rows = []
    for a, m in zip(corpus.articles, train_mask):
        h = ref.features(a, exclude_self=bool(m))
        rows.append((float(h.past_fake), float(h.past_true)))
    return pd.DataFrame(rows, columns=list(HISTORY_FEATURES), index=[a.id for a in corpus.articles])


@dataclass
class EvalReport:
    classifier: str
    feature_config: str
    features: list
    seed: int
    k: int
    folds: list = field(default_factory=list)
    means: dict = field(default_factory=dict)
    hyperparameters: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "classifier": self.classifier,
            "feature_config": self.feature_config,
            "features": list(self.features),
            "seed": self.seed,
            "k": self.k,
            "hyperparameters": self.hyperparameters,
            "folds": self.folds,
            "means": self.means,
        }

    @classmethod
    def from_dict(cls, d: dict) -> EvalReport:
        return cls(
            classifier=d["classifier"],
            feature_config=d["feature_config"],
            features=list(d.get("features", [])),
            seed=d["seed"],
            k=d["k"],
            folds=list(d.get("folds", [])),
            means=dict(d.get("means", {})),
            hyperparameters=dict(d.get("hyperparameters", {})),
        )


def cross_validate(
    spec: ModelSpec,
    corpus: Corpus,
    config: FeatureConfig,
    k: int = 10,
    seed: int | None = None,
    extractors: Extractors | None = None,
    content: pd.DataFrame | None = None,
) -> EvalReport:
    """Stratified k-fold CV of ``spec`` on ``corpus`` using ``config`` features.

    ``seed`` drives the fold assignment (defaults to ``spec.seed``).
    ``content`` may carry a precomputed :func:`content_table` to share work
    across classifiers.
    """
    seed = spec.seed if seed is None else seed
    labels = np.array(corpus.labels())
    folds = stratified_folds(labels, k, seed)
    ids = [a.id for a in corpus.articles]

    static_cols = [f for f in config.features if f not in HISTORY_FEATURES]
    if any(f not in SOURCE_FEATURES for f in static_cols):
        if content is None:
            content = content_table(corpus, extractors)
        static = content.loc[ids, static_cols]
    else:
        static = source_table(corpus).loc[ids, static_cols]

    def matrix(test):
        X = static
        if config.needs_history:
            X = pd.concat([static, fold_history(corpus, ~test)], axis=1)
        return X[list(config.features)]

    report = EvalReport(spec.kind, config.name, list(config.features), seed, k, hyperparameters=spec.hyperparameters)
    return _run_folds(spec, ids, labels, folds, matrix, report)


def cross_validate_frame(spec: ModelSpec, X: pd.DataFrame, y: Sequence, k: int = 10, seed: int | None = None,
                         name: str = "custom") -> EvalReport:
    """Stratified k-fold CV on a fixed feature frame (no history features)."""
    seed = spec.seed if seed is None else seed
    labels = np.asarray(y)
    folds = stratified_folds(labels, k, seed)
    report = EvalReport(spec.kind, name, list(X.columns), seed, k, hyperparameters=spec.hyperparameters)
    return _run_folds(spec, [str(i) for i in X.index], labels, folds, lambda test: X, report)


def _run_folds(spec, ids, labels, folds, matrix_for_fold, report):
    for fold in range(report.k):
        test = folds == fold
        X = matrix_for_fold(test)
        X_train, X_test = X[~test], X[test]
        if spec.kind in STANDARDIZED_KINDS:
            scaler = Standardizer.fit(X_train)
            X_train, X_test = scaler.transform(X_train), scaler.transform(X_test)
        model = fit(spec, X_train, labels[~test])
        scores = f1_scores(labels[test], model.predict(X_test))
        report.folds.append(
            {
                "index": fold,
                "test_ids": [i for i, t in zip(ids, test) if t],
                "f1_micro": scores.micro,
                "f1_macro": scores.macro,
                "f1_weighted": scores.weighted,
            }
        )
        logger.debug("%s/%s fold %d: macro-F1 %.3f", spec.kind, report.feature_config, fold, scores.macro)
    report.means = {
        key: float(np.mean([f[key] for f in report.folds])) for key in ("f1_micro", "f1_macro", "f1_weighted")
    }
    return report
