"""From-scratch binary classifiers.

All learners take a :class:`pandas.DataFrame` whose columns are feature names
and remember that schema; prediction on a frame with different columns fails
with :class:`~credlens.errors.SchemaError`. Every source of randomness is a
``numpy.random.Generator`` seeded from :attr:`ModelSpec.seed`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from credlens.errors import DataError, SchemaError, TrainingError

KINDS = ("logreg", "linear_svm", "gaussian_nb", "random_forest", "adaboost_stumps", "gbdt_stumps")

DEFAULTS = {
    "logreg": {"lam": 1.0, "tol": 1e-6, "max_iter": 5000},
    "linear_svm": {"C": 1.0, "epochs": 200},
    "gaussian_nb": {"var_smoothing": 1e-9},
    "random_forest": {"n_trees": 100, "max_features": "sqrt", "max_depth": None, "min_samples_leaf": 1},
    "adaboost_stumps": {"n_estimators": 100},
    "gbdt_stumps": {"n_estimators": 100, "learning_rate": 0.1},
}

DISPLAY_NAMES = {
    "svm_rbf": "SVM (RBF Kernel)",
    "linear_svm": "Linear SVM",
    "logreg": "Logistic Regression",
    "random_forest": "Random Forest",
    "adaboost_stumps": "AdaBoost",
    "gaussian_nb": "Naive Bayes",
    "gbdt_stumps": "Gradient Boosting Decision Tree",
}


@dataclass(frozen=True)
class ModelSpec:
    kind: str
    params: dict = field(default_factory=dict)
    seed: int = 42

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}; expected one of {KINDS}")
        unknown = set(self.params) - set(DEFAULTS[self.kind])
        if unknown:
            raise ValueError(f"unknown hyperparameters for {self.kind}: {sorted(unknown)}")

    @property
    def hyperparameters(self) -> dict:
        return {**DEFAULTS[self.kind], **self.params}


def _sigmoid(z):
    return 0.5 * (1.0 + np.tanh(0.5 * z))


def _as_matrix(X: pd.DataFrame) -> np.ndarray:
    values = X.to_numpy(dtype=float)
    bad = ~np.isfinite(values)
    if bad.any():
        col = X.columns[np.where(bad.any(axis=0))[0][0]]
        raise DataError(f"non-finite value in feature {col!r}")
    return values


class TrainedModel:
    kind = ""

    def __init__(self, feature_names, classes):
        self.feature_names = list(feature_names)
        self.classes_ = np.asarray(classes)

    def _matrix(self, X: pd.DataFrame) -> np.ndarray:
        cols = list(X.columns)
        if cols != self.feature_names:
            missing = [c for c in self.feature_names if c not in cols]
            extra = [c for c in cols if c not in self.feature_names]
            if missing or extra:
                raise SchemaError(missing, extra)
            X = X[self.feature_names]
        return _as_matrix(X)

    def decision_function(self, X: pd.DataFrame) -> np.ndarray:
        """Real-valued score; positive favours ``classes_[1]``."""
        return self._decision(self._matrix(X))

    def predict(self, X: pd.DataFrame) -> np.ndarray:
        return self.classes_[(self.decision_function(X) > 0).astype(int)]

    def _decision(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError


class ProbabilisticModel(TrainedModel):
    def predict_proba(self, X: pd.DataFrame) -> np.ndarray:
        """Columns follow ``classes_``."""
        p1 = _sigmoid(self.decision_function(X))
        return np.column_stack([1.0 - p1, p1])


# ---------------------------------------------------------------- logistic regression


def logistic_objective(w: np.ndarray, X: np.ndarray, y01: np.ndarray, lam: float):
    """Mean logistic loss plus ``lam / (2n) * ||w[:-1]||^2``; ``w[-1]`` is the bias.

    Returns ``(value, gradient)``.
    """
    n = len(y01)
    z = X @ w[:-1] + w[-1]
    # log(1 + exp(z)) - y z, stable for large |z|
    loss = np.logaddexp(0.0, z) - y01 * z
    value = loss.mean() + lam / (2 * n) * float(w[:-1] @ w[:-1])
    r = _sigmoid(z) - y01
    grad = np.empty_like(w)
    grad[:-1] = X.T @ r / n + lam / n * w[:-1]
    grad[-1] = r.mean()
    return float(value), grad


class LogisticRegression(ProbabilisticModel):
    kind = "logreg"

    def __init__(self, feature_names, classes, coef, intercept, n_iter, converged):
        super().__init__(feature_names, classes)
        self.coef_ = coef
        self.intercept_ = intercept
        self.n_iter_ = n_iter
        self.converged_ = converged

    def _decision(self, X):
        return X @ self.coef_ + self.intercept_


def _fit_logreg(X, y01, lam, tol, max_iter):
    # Nesterov-accelerated full-batch gradient descent, step 1/L, adaptive restart
    n, d = X.shape
    xb = np.hstack([X, np.ones((n, 1))])
    L = 0.25 * np.linalg.norm(xb, 2) ** 2 / n + lam / n
    step = 1.0 / L
    w = np.zeros(d + 1)
    v = w.copy()
    t = 1.0
    prev_value = math.inf
    for it in range(1, max_iter + 1):
        value, grad = logistic_objective(v, X, y01, lam)
        w_next = v - step * grad
        t_next = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * t * t))
        v = w_next + (t - 1.0) / t_next * (w_next - w)
        w, t = w_next, t_next
        if value > prev_value:
            v, t = w.copy(), 1.0
        prev_value = value
        _, g = logistic_objective(w, X, y01, lam)
        if np.linalg.norm(g) <= tol:
            return w, it, True
    return w, max_iter, False


# ---------------------------------------------------------------- linear SVM


class LinearSVM(TrainedModel):
    kind = "linear_svm"

    def __init__(self, feature_names, classes, coef, intercept):
        super().__init__(feature_names, classes)
        self.coef_ = coef
        self.intercept_ = intercept

    def _decision(self, X):
        return X @ self.coef_ + self.intercept_


def _fit_linear_svm(X, ypm, C, epochs, rng):
    # Pegasos: hinge loss + lam/2 ||w||^2 with lam = 1/(C n), step 1/(lam t),
    # bias as a constant feature; iterate averaged over the final half of steps
    n, d = X.shape
    xb = np.hstack([X, np.ones((n, 1))])
    lam = 1.0 / (C * n)
    w = np.zeros(d + 1)
    avg = np.zeros(d + 1)
    total = epochs * n
    start_avg = total // 2
    t = 0
    for _ in range(epochs):
        for i in rng.permutation(n):
            t += 1
            eta = 1.0 / (lam * t)
            margin = ypm[i] * (xb[i] @ w)
            w *= 1.0 - eta * lam
            if margin < 1.0:
                w += eta * ypm[i] * xb[i]
            if t > start_avg:
                avg += w
    avg /= total - start_avg
    return avg[:-1], float(avg[-1])


# ---------------------------------------------------------------- gaussian naive Bayes


class GaussianNB(ProbabilisticModel):
    kind = "gaussian_nb"

    def __init__(self, feature_names, classes, log_prior, theta, var):
        super().__init__(feature_names, classes)
        self.log_prior_ = log_prior
        self.theta_ = theta
        self.var_ = var

    def joint_log_likelihood(self, X):
        out = []
        for k in range(len(self.classes_)):
            ll = -0.5 * np.sum(np.log(2.0 * np.pi * self.var_[k]))
            ll = ll - 0.5 * np.sum((X - self.theta_[k]) ** 2 / self.var_[k], axis=1)
            out.append(self.log_prior_[k] + ll)
        return np.column_stack(out)

    def _decision(self, X):
        jll = self.joint_log_likelihood(X)
        return jll[:, 1] - jll[:, 0]


def _fit_gaussian_nb(X, y01, var_smoothing):
    eps = var_smoothing * float(np.var(X, axis=0).max()) if X.size else 0.0
    if eps == 0.0:
        eps = var_smoothing
    theta, var, prior = [], [], []
    for k in (0, 1):
        Xk = X[y01 == k]
        theta.append(Xk.mean(axis=0))
        var.append(Xk.var(axis=0) + eps)
        prior.append(len(Xk) / len(X))
    return np.log(prior), np.array(theta), np.array(var)


# ---------------------------------------------------------------- trees


def _gini_best_split(x_sorted, y_sorted, w_sorted=None):
    """Best threshold on one presorted feature by weighted Gini impurity.

    Returns ``(impurity, threshold)`` or ``None`` when the feature is constant.
    """
    n = len(x_sorted)
    valid = x_sorted[1:] > x_sorted[:-1]
    if not valid.any():
        return None
    w = np.ones(n) if w_sorted is None else w_sorted
    pos = np.cumsum(w * y_sorted)[:-1]
    tot = np.cumsum(w)[:-1]
    all_pos = pos[-1] + w[-1] * y_sorted[-1]
    all_tot = tot[-1] + w[-1]
    left_p = pos / tot
    right_tot = all_tot - tot
    right_p = (all_pos - pos) / right_tot
    impurity = tot * 2 * left_p * (1 - left_p) + right_tot * 2 * right_p * (1 - right_p)
    impurity = np.where(valid, impurity, np.inf)
    i = int(np.argmin(impurity))
    return float(impurity[i]), 0.5 * (x_sorted[i] + x_sorted[i + 1])


class _Tree:
    """Array-backed binary tree; leaves store the class-1 fraction."""

    def __init__(self):
        self.feature, self.threshold, self.left, self.right, self.value = [], [], [], [], []

    def add(self, value):
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.value.append(value)
        return len(self.value) - 1

    def freeze(self):
        self.feature = np.array(self.feature)
        self.threshold = np.array(self.threshold)
        self.left = np.array(self.left)
        self.right = np.array(self.right)
        self.value = np.array(self.value)
        return self

    def predict_value(self, X):
        node = np.zeros(len(X), dtype=int)
        while True:
            f = self.feature[node]
            internal = f >= 0
            if not internal.any():
                return self.value[node]
            idx = np.where(internal)[0]
            go_left = X[idx, f[idx]] <= self.threshold[node[idx]]
            node[idx] = np.where(go_left, self.left[node[idx]], self.right[node[idx]])


def _grow_cart(X, y01, rng, max_features, max_depth, min_samples_leaf):
    tree = _Tree()
    d = X.shape[1]
    stack = [(np.arange(len(y01)), 0, None)]
    while stack:
        idx, depth, parent = stack.pop()
        ys = y01[idx]
        node = tree.add(float(ys.mean()))
        if parent is not None:
            p, side = parent
            (tree.left if side == 0 else tree.right)[p] = node
        pure = ys.min() == ys.max()
        if pure or len(idx) < 2 * min_samples_leaf or (max_depth is not None and depth >= max_depth):
            continue
        best = None
        # keep drawing features past max_features until one admits a split
        for rank, f in enumerate(rng.permutation(d)):
            if rank >= max_features and best is not None:
                break
            xs = X[idx, f]
            order = np.argsort(xs, kind="mergesort")
            found = _gini_best_split(xs[order], ys[order])
            if found is None:
                continue
            if min_samples_leaf > 1:
                left_n = int((xs <= found[1]).sum())
                if left_n < min_samples_leaf or len(idx) - left_n < min_samples_leaf:
                    continue
            if best is None or found[0] < best[0]:
                best = (found[0], found[1], f)
        if best is None:
            continue
        _, thr, f = best
        tree.feature[node] = int(f)
        tree.threshold[node] = thr
        mask = X[idx, f] <= thr
        stack.append((idx[~mask], depth + 1, (node, 1)))
        stack.append((idx[mask], depth + 1, (node, 0)))
    return tree.freeze()


class RandomForest(TrainedModel):
    kind = "random_forest"

    def __init__(self, feature_names, classes, trees):
        super().__init__(feature_names, classes)
        self.trees_ = trees

    def predict_proba(self, X: pd.DataFrame) -> np.ndarray:
        M = self._matrix(X)
        p1 = np.mean([t.predict_value(M) for t in self.trees_], axis=0)
        return np.column_stack([1.0 - p1, p1])

    def _decision(self, X):
        return np.mean([t.predict_value(X) for t in self.trees_], axis=0) - 0.5


def _resolve_max_features(spec, d):
    if spec == "sqrt":
        return max(1, int(math.sqrt(d)))
    if spec is None:
        return d
    return max(1, min(d, int(spec)))


# ---------------------------------------------------------------- stumps


@dataclass(frozen=True)
class Stump:
    feature: int
    threshold: float
    left: float
    right: float

    def predict(self, X):
        if self.feature < 0:
            return np.full(len(X), self.left)
        return np.where(X[:, self.feature] <= self.threshold, self.left, self.right)


def _presort(X):
    order = np.argsort(X, axis=0, kind="mergesort")
    return order, np.take_along_axis(X, order, axis=0)


def _classification_stump(X, order, xs, ypm, w):
    """Depth-1 tree minimising weighted 0/1 error; leaves output +1 or -1."""
    n, d = X.shape
    wy = w * ypm
    total = wy.sum()
    best = (np.inf, -1, 0.0, 1.0, 1.0)
    # constant stump
    sign = 1.0 if total >= 0 else -1.0
    err = float(w[ypm != sign].sum())
    best = (err, -1, 0.0, sign, sign)
    for f in range(d):
        valid = xs[1:, f] > xs[:-1, f]
        if not valid.any():
            continue
        left = np.cumsum(wy[order[:, f]])[:-1]
        right = total - left
        # error with leaves set to the weighted-majority sign
        left_w = np.cumsum(w[order[:, f]])[:-1]
        right_w = w.sum() - left_w
        e = (left_w - np.abs(left)) / 2 + (right_w - np.abs(right)) / 2
        e = np.where(valid, e, np.inf)
        i = int(np.argmin(e))
        if e[i] < best[0] - 1e-12:
            thr = 0.5 * (xs[i, f] + xs[i + 1, f])
            best = (float(e[i]), f, thr, 1.0 if left[i] >= 0 else -1.0, 1.0 if right[i] >= 0 else -1.0)
    _, f, thr, lv, rv = best
    return Stump(f, thr, lv, rv)


def _regression_stump(X, order, xs, r, h):
    """Depth-1 tree minimising squared error of ``r``; leaves get Newton values sum(r)/sum(h)."""
    n, d = X.shape
    total = r.sum()
    best_gain, best = 0.0, None
    base = total * total / n
    for f in range(d):
        valid = xs[1:, f] > xs[:-1, f]
        if not valid.any():
            continue
        left = np.cumsum(r[order[:, f]])[:-1]
        cnt = np.arange(1, n)
        gain = left**2 / cnt + (total - left) ** 2 / (n - cnt) - base
        gain = np.where(valid, gain, -np.inf)
        i = int(np.argmax(gain))
        if gain[i] > best_gain + 1e-12:
            best_gain = float(gain[i])
            best = (f, 0.5 * (xs[i, f] + xs[i + 1, f]))

    def leaf(mask):
        den = h[mask].sum()
        return float(r[mask].sum() / den) if den > 1e-12 else 0.0

    if best is None:
        return Stump(-1, 0.0, leaf(np.ones(n, bool)), 0.0)
    f, thr = best
    mask = X[:, f] <= thr
    return Stump(f, thr, leaf(mask), leaf(~mask))


class AdaBoostStumps(TrainedModel):
    kind = "adaboost_stumps"

    def __init__(self, feature_names, classes, stumps, alphas):
        super().__init__(feature_names, classes)
        self.stumps_ = stumps
        self.alphas_ = alphas

    def _decision(self, X):
        return sum(a * s.predict(X) for a, s in zip(self.alphas_, self.stumps_))


def _fit_adaboost(X, ypm, n_estimators):
    # SAMME with two classes: alpha = log((1 - err) / err)
    n = len(ypm)
    order, xs = _presort(X)
    w = np.full(n, 1.0 / n)
    stumps, alphas = [], []
    for _ in range(n_estimators):
        stump = _classification_stump(X, order, xs, ypm, w)
        miss = stump.predict(X) != ypm
        err = float(w[miss].sum() / w.sum())
        if err <= 1e-12:
            stumps.append(stump)
            alphas.append(1.0)
            break
        if err >= 0.5:
            if not stumps:
                stumps.append(stump)
                alphas.append(1.0)
            break
        alpha = math.log((1.0 - err) / err)
        stumps.append(stump)
        alphas.append(alpha)
        w = w * np.exp(alpha * miss)
        w /= w.sum()
    return stumps, alphas


class GBDTStumps(ProbabilisticModel):
    kind = "gbdt_stumps"

    def __init__(self, feature_names, classes, init, stumps, learning_rate):
        super().__init__(feature_names, classes)
        self.init_ = init
        self.stumps_ = stumps
        self.learning_rate_ = learning_rate

    def _decision(self, X):
        f = np.full(len(X), self.init_)
        for s in self.stumps_:
            f = f + self.learning_rate_ * s.predict(X)
        return f


def _fit_gbdt(X, y01, n_estimators, learning_rate):
    p = float(y01.mean())
    init = math.log(p / (1.0 - p))
    f = np.full(len(y01), init)
    order, xs = _presort(X)
    stumps = []
    for _ in range(n_estimators):
        prob = _sigmoid(f)
        r = y01 - prob
        h = prob * (1.0 - prob)
        stump = _regression_stump(X, order, xs, r, h)
        stumps.append(stump)
        f = f + learning_rate * stump.predict(X)
    return init, stumps


# ---------------------------------------------------------------- entry points


def fit(spec: ModelSpec, X: pd.DataFrame, y) -> TrainedModel:
    """Train ``spec`` on feature frame ``X`` and labels ``y`` (exactly two classes)."""
    y = np.asarray(y)
    if len(y) != len(X):
        raise TrainingError("X and y have different lengths")
    classes = np.unique(y)
    if len(classes) < 2:
        raise TrainingError(f"training data has a single class: {classes.tolist()}")
    if len(classes) > 2:
        raise TrainingError(f"only binary classification is supported, got {classes.tolist()}")
    M = _as_matrix(X)
    y01 = (y == classes[1]).astype(float)
    ypm = 2.0 * y01 - 1.0
    hp = spec.hyperparameters
    rng = np.random.default_rng(spec.seed)
    names = list(X.columns)

    if spec.kind == "logreg":
        w, n_iter, ok = _fit_logreg(M, y01, hp["lam"], hp["tol"], int(hp["max_iter"]))
        return LogisticRegression(names, classes, w[:-1], float(w[-1]), n_iter, ok)
    if spec.kind == "linear_svm":
        coef, b = _fit_linear_svm(M, ypm, hp["C"], int(hp["epochs"]), rng)
        return LinearSVM(names, classes, coef, b)
    if spec.kind == "gaussian_nb":
        return GaussianNB(names, classes, *_fit_gaussian_nb(M, y01, hp["var_smoothing"]))
    if spec.kind == "random_forest":
        mtry = _resolve_max_features(hp["max_features"], M.shape[1])
        trees = []
        for _ in range(int(hp["n_trees"])):
            boot = rng.integers(0, len(y01), len(y01))
            trees.append(_grow_cart(M[boot], y01[boot], rng, mtry, hp["max_depth"], int(hp["min_samples_leaf"])))
        return RandomForest(names, classes, trees)
    if spec.kind == "adaboost_stumps":
        stumps, alphas = _fit_adaboost(M, ypm, int(hp["n_estimators"]))
        return AdaBoostStumps(names, classes, stumps, alphas)
    init, stumps = _fit_gbdt(M, y01, int(hp["n_estimators"]), hp["learning_rate"])
    return GBDTStumps(names, classes, init, stumps, hp["learning_rate"])


def predict(model: TrainedModel, X: pd.DataFrame) -> np.ndarray:
    return model.predict(X)
