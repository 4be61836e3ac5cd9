"""Descriptive statistics and the Pearson, Shapiro-Wilk and Mann-Whitney U tests."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from statistics import NormalDist
from typing import Sequence

import numpy as np

from credlens.corpus import FAKE, TRUE
from credlens.errors import SampleSizeError, UndefinedCorrelationError

_NORMAL = NormalDist()
EXACT_MWU_MAX_N = 12


@dataclass(frozen=True)
class StatTestResult:
    test: str
    statistic: float | None
    p_value: float | None
    n: tuple
    notes: tuple = ()
    method: str = ""

    def to_dict(self) -> dict:
        d = asdict(self)
        d["n"] = list(self.n)
        d["notes"] = list(self.notes)
        return d


def pearson_r(x: Sequence[float], y: Sequence[float]) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1 or len(x) < 2:
        raise SampleSizeError("pearson_r needs two equal-length series of length >= 2")
    # test constancy directly: x - mean can leave rounding residue on constant input
    if np.ptp(x) == 0.0 or np.ptp(y) == 0.0:
        raise UndefinedCorrelationError("correlation undefined for a zero-variance series")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise UndefinedCorrelationError("correlation undefined for a zero-variance series")
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def pearson(x, y) -> StatTestResult:
    return StatTestResult("pearson", pearson_r(x, y), None, (len(x),), method="sample")


# Royston (1995) polynomial coefficients, lowest order first
_C1 = (0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056)
_C2 = (0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633)
_G = (-2.273, 0.459)
_C3 = (0.5440, -0.39978, 0.025054, -6.714e-4)
_C4 = (1.3822, -0.77857, 0.062767, -0.0020322)
_C5 = (-1.5861, -0.31082, -0.083751, 0.0038915)
_C6 = (-0.4803, -0.082676, 0.0030302)


def _poly(coef, x):
    return sum(c * x**i for i, c in enumerate(coef))


def _shapiro_coefficients(n: int) -> np.ndarray:
    if n == 3:
        return np.array([-math.sqrt(0.5), 0.0, math.sqrt(0.5)])
    m = np.array([_NORMAL.inv_cdf((i - 0.375) / (n + 0.25)) for i in range(1, n + 1)])
    summ2 = float(m @ m)
    u = 1.0 / math.sqrt(n)
    c = m / math.sqrt(summ2)
    a = np.empty(n)
    an = c[-1] + _poly(_C1, u)
    if n > 5:
        an1 = c[-2] + _poly(_C2, u)
        phi = (summ2 - 2 * m[-1] ** 2 - 2 * m[-2] ** 2) / (1 - 2 * an**2 - 2 * an1**2)
        a[2:-2] = m[2:-2] / math.sqrt(phi)
        a[1], a[-2] = -an1, an1
    else:
        phi = (summ2 - 2 * m[-1] ** 2) / (1 - 2 * an**2)
        a[1:-1] = m[1:-1] / math.sqrt(phi)
    a[0], a[-1] = -an, an
    return a


def shapiro_wilk(sample: Sequence[float]) -> StatTestResult:
    """Shapiro-Wilk W and its p-value via Royston's AS R94 approximation."""
    x = np.sort(np.asarray(sample, dtype=float))
    n = len(x)
    if not 3 <= n <= 5000:
        raise SampleSizeError(f"shapiro_wilk requires 3 <= n <= 5000, got {n}")
    ss = float(((x - x.mean()) ** 2).sum())
    if ss == 0.0 or x[-1] - x[0] < 1e-19:
        return StatTestResult("shapiro_wilk", None, None, (n,), ("constant_sample",), "royston_as_r94")
    a = _shapiro_coefficients(n)
    w = float(a @ x) ** 2 / ss
    w = min(w, 1.0)

    if n == 3:
        p = max(0.0, 6.0 / math.pi * (math.asin(math.sqrt(w)) - math.pi / 3.0))
        return StatTestResult("shapiro_wilk", w, min(p, 1.0), (n,), (), "royston_as_r94")

    y = math.log1p(-w) if w < 1.0 else -math.inf
    if n <= 11:
        gamma = _poly(_G, n)
        if y >= gamma:
            return StatTestResult("shapiro_wilk", w, 1e-99, (n,), (), "royston_as_r94")
        y = -math.log(gamma - y)
        mu = _poly(_C3, n)
        sigma = math.exp(_poly(_C4, n))
    else:
        ln = math.log(n)
        mu = _poly(_C5, ln)
        sigma = math.exp(_poly(_C6, ln))
    if y == -math.inf:
        return StatTestResult("shapiro_wilk", w, 1.0, (n,), (), "royston_as_r94")
    z = (y - mu) / sigma
    p = 1.0 - _NORMAL.cdf(z)
    return StatTestResult("shapiro_wilk", w, min(max(p, 0.0), 1.0), (n,), (), "royston_as_r94")


def rankdata(values: Sequence[float]) -> np.ndarray:
    """1-based ranks, tied values sharing their mean rank."""
    v = np.asarray(values, dtype=float)
    order = np.argsort(v, kind="mergesort")
    ranks = np.empty(len(v))
    sv = v[order]
    i = 0
    while i < len(v):
        j = i
        while j + 1 < len(v) and sv[j + 1] == sv[i]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


@lru_cache(maxsize=None)
def _u_counts(m: int, n: int) -> tuple:
    """Number of rank arrangements giving each U value, for group sizes m and n."""
    if m == 0 or n == 0:
        return (1,)
    a = _u_counts(m - 1, n)
    b = _u_counts(m, n - 1)
    out = [0] * (m * n + 1)
    for u, c in enumerate(a):
        out[u + n] += c
    for u, c in enumerate(b):
        out[u] += c
    return tuple(out)


def mwu_exact_p(u_min: float, na: int, nb: int) -> float:
    counts = _u_counts(na, nb)
    total = sum(counts)
    below = sum(c for u, c in enumerate(counts) if u <= u_min + 1e-9)
    return min(1.0, 2.0 * below / total)


def mann_whitney_u(a: Sequence[float], b: Sequence[float], method: str = "auto") -> StatTestResult:
    """Two-sided Mann-Whitney U test; U reported as min(U_a, U_b).

    ``method`` is ``auto`` (exact when n_a + n_b <= 12 without ties, else
    normal), ``exact`` or ``asymptotic``. The normal approximation uses
    tie-corrected variance and a 0.5 continuity correction.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    na, nb = len(a), len(b)
    if na == 0 or nb == 0:
        raise SampleSizeError("mann_whitney_u requires two nonempty samples")
    pooled = np.concatenate([a, b])
    ranks = rankdata(pooled)
    u_a = float(ranks[:na].sum()) - na * (na + 1) / 2.0
    u_b = na * nb - u_a
    u = min(u_a, u_b)
    N = na + nb
    _, tie_sizes = np.unique(pooled, return_counts=True)
    has_ties = bool((tie_sizes > 1).any())
    notes = ["ties"] if has_ties else []

    if method == "auto":
        method = "exact" if N <= EXACT_MWU_MAX_N and not has_ties else "asymptotic"
    if method == "exact":
        if has_ties:
            raise ValueError("exact Mann-Whitney p is only defined without ties")
        return StatTestResult("mann_whitney_u", u, mwu_exact_p(u, na, nb), (na, nb), tuple(notes), "exact")
    if method != "asymptotic":
        raise ValueError(f"unknown method {method!r}")

    tie_term = float((tie_sizes**3 - tie_sizes).sum())
    var = na * nb / 12.0 * ((N + 1) - tie_term / (N * (N - 1))) if N > 1 else 0.0
    if var <= 0.0:
        notes.append("all_ties")
        return StatTestResult("mann_whitney_u", u, 1.0, (na, nb), tuple(notes), "asymptotic")
    z = max(abs(u_a - na * nb / 2.0) - 0.5, 0.0) / math.sqrt(var)
    p = min(1.0, 2.0 * (1.0 - _NORMAL.cdf(z)))
    return StatTestResult("mann_whitney_u", u, p, (na, nb), tuple(notes), "asymptotic")


@dataclass
class GroupComparison:
    feature: str
    fake: dict
    true: dict
    shapiro: dict = field(default_factory=dict)
    mann_whitney: StatTestResult | None = None

    def to_dict(self) -> dict:
        return {
            "feature": self.feature,
            "fake": self.fake,
            "true": self.true,
            "shapiro": {k: (v.to_dict() if v else None) for k, v in self.shapiro.items()},
            "mann_whitney": self.mann_whitney.to_dict() if self.mann_whitney else None,
        }

    def row(self) -> dict:
        """Flat record with one column per summary statistic and p-value."""
        sw = {k: (v.p_value if v else None) for k, v in self.shapiro.items()}
        return {
            "feature": self.feature,
            "fake_mean": self.fake["mean"],
            "fake_median": self.fake["median"],
            "true_mean": self.true["mean"],
            "true_median": self.true["median"],
            "shapiro_p_fake": sw.get(FAKE),
            "shapiro_p_true": sw.get(TRUE),
            "mwu_p": self.mann_whitney.p_value if self.mann_whitney else None,
        }


def describe(values) -> dict:
    v = np.asarray(values, dtype=float)
    return {"n": int(len(v)), "mean": float(v.mean()), "median": float(np.median(v))}


def _safe_shapiro(values) -> StatTestResult | None:
    if len(values) < 3:
        return None
    return shapiro_wilk(values[:5000])


def compare_groups(values: Sequence[float], labels: Sequence[str], feature: str = "") -> GroupComparison:
    values = np.asarray(values, dtype=float)
    labels = np.asarray(labels)
    if len(values) != len(labels):
        raise SampleSizeError("values and labels must have equal length")
    fake = values[labels == FAKE]
    true = values[labels == TRUE]
    if len(fake) == 0 or len(true) == 0:
        raise SampleSizeError("compare_groups needs both fake and true articles")
    return GroupComparison(
        feature=feature,
        fake=describe(fake),
        true=describe(true),
        shapiro={FAKE: _safe_shapiro(fake), TRUE: _safe_shapiro(true)},
        mann_whitney=mann_whitney_u(fake, true),
    )
