"""Monte Carlo standard errors for Markov chain output.

Implements the three windowed long-run-variance estimators this package is
built around:

* batch means (BM): non-overlapping blocks of length b,
  sigma2 = b * sum((Ybar_k - muhat)^2) / (a - 1) with muhat the mean of the
  a block means;
* overlapping batch means (OBM): all a = n - b + 1 sliding windows,
  sigma2 = n * b * sum((Ybar_k - muhat)^2) / ((a - 1) * a);
* subsampling for quantiles: the OBM recipe with the type-1 empirical
  quantile substituted for the window mean.

Every standard error is sqrt(sigma2 / n). Chains shorter than
``MIN_SAMPLES`` do not produce a number: estimators return ``None`` (the
absent-value sentinel; the CLI serializes it as "NA"). Chains shorter
than ``SMALL_SAMPLE_WARN`` are flagged via ``warning=True`` on the result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .distributions import t_quantile

__all__ = [
    "MIN_SAMPLES",
    "SMALL_SAMPLE_WARN",
    "BatchPolicy",
    "McseEstimate",
    "QuantileSeSet",
    "Interval",
    "batch_layout",
    "mcse_bm",
    "mcse_obm",
    "quantile_type1",
    "quantiles_type1",
    "subsample_quantile_se",
    "ci_mean",
    "ci_quantiles",
]

MIN_SAMPLES = 10
SMALL_SAMPLE_WARN = 1000

# "sqroot" | "cuberoot" | an explicit batch size (> 1)
BatchPolicy = Union[str, int, float]

Transform = Optional[Callable[[np.ndarray], np.ndarray]]

# cap on elements per window block when sorting sliding windows
_WINDOW_BLOCK_ELEMS = 4_000_000


@dataclass(frozen=True)
class McseEstimate:
    """Standard error of the chain mean plus the layout that produced it."""

    se: float
    sigma2_hat: float
    b: int
    a: int
    n: int
    method: str
    warning: bool


@dataclass(frozen=True)
class QuantileSeSet:
    """Subsampling standard errors for a set of marginal quantiles."""

    probabilities: tuple
    point_estimates: np.ndarray
    ses: np.ndarray
    b: int
    a: int
    n: int
    warning: bool


@dataclass(frozen=True)
class Interval:
    """Two-sided t interval: center +/- half_width with the stated df."""

    center: float
    se: float
    half_width: float
    lower: float
    upper: float
    df: float
    level: float
    method: str
    probability: Optional[float] = None


def _floor_cbrt(n: int) -> int:
    # integer correction so perfect cubes (1000 -> 10) never round down
    c = int(round(n ** (1.0 / 3.0)))
    while c > 1 and c * c * c > n:
        c -= 1
    while (c + 1) ** 3 <= n:
        c += 1
    return c


def batch_layout(n: int, policy: BatchPolicy = "sqroot") -> tuple[int, int]:
    """Pick (b, a): batch size and batch count for a chain of length n."""
    if n < 1:
        raise ValueError(f"chain length must be positive, got {n}")
    if policy == "sqroot":
        b = math.isqrt(n)
    elif policy == "cuberoot":
        b = _floor_cbrt(n)
    elif isinstance(policy, (int, float)) and not isinstance(policy, bool):
        b = int(math.floor(policy))
        if b <= 1:
            raise ValueError(f"batch size invalid (bs={policy})")
    else:
        raise ValueError(f"unknown batch policy {policy!r}")
    return b, n // b


def _as_values(values) -> np.ndarray:
    x = np.asarray(values, dtype=float)
    if x.ndim != 1:
        raise ValueError(f"expected a one-dimensional chain, got shape {x.shape}")
    return x


def _apply_transform(x: np.ndarray, g: Transform) -> np.ndarray:
    if g is None:
        return x
    gx = np.asarray(g(x), dtype=float)
    if gx.shape != x.shape:
        raise ValueError("transform must be elementwise (shape-preserving)")
    return gx


def mcse_bm(values, policy: BatchPolicy = "sqroot", g: Transform = None) -> Optional[McseEstimate]:
    """Batch-means standard error of mean(g(x)); None when n < MIN_SAMPLES."""
    x = _as_values(values)
    n = x.size
    if n < MIN_SAMPLES:
        return None
    b, a = batch_layout(n, policy)
    if a < 2:
        raise ValueError(f"batch size {b} leaves fewer than two batches for n={n}")
    gx = _apply_transform(x, g)
    batch_means = gx[: a * b].reshape(a, b).mean(axis=1)
    muhat = batch_means.mean()
    sigma2 = b * float(np.sum((batch_means - muhat) ** 2)) / (a - 1)
    return McseEstimate(
        se=math.sqrt(sigma2 / n),
        sigma2_hat=sigma2,
        b=b,
        a=a,
        n=n,
        method="BM",
        warning=n < SMALL_SAMPLE_WARN,
    )


def _window_means(gx: np.ndarray, b: int) -> np.ndarray:
    # means of all n-b+1 sliding windows via prefix sums: O(n) time and memory
    cs = np.concatenate(([0.0], np.cumsum(gx)))
    return (cs[b:] - cs[:-b]) / b


def mcse_obm(values, policy: BatchPolicy = "sqroot", g: Transform = None) -> Optional[McseEstimate]:
    """Overlapping-batch-means standard error; None when n < MIN_SAMPLES."""
    x = _as_values(values)
    n = x.size
    if n < MIN_SAMPLES:
        return None
    b, _ = batch_layout(n, policy)
    if b >= n:
        raise ValueError(f"batch size {b} must be smaller than the chain length {n}")
    a = n - b + 1
    gx = _apply_transform(x, g)
    window_means = _window_means(gx, b)
    muhat = window_means.mean()
    sigma2 = n * b * float(np.sum((window_means - muhat) ** 2)) / ((a - 1) * a)
    return McseEstimate(
        se=math.sqrt(sigma2 / n),
        sigma2_hat=sigma2,
        b=b,
        a=a,
        n=n,
        method="OBM",
        warning=n < SMALL_SAMPLE_WARN,
    )


def _type1_index(n: int, p: float) -> int:
    if not 0.0 < p <= 1.0:
        raise ValueError(f"quantile probability must lie in (0, 1], got {p}")
    return max(1, math.ceil(n * p))


def quantile_type1(values, p: float) -> float:
    """Inverse-empirical-CDF quantile: the ceil(n*p)-th order statistic."""
    x = _as_values(values)
    if x.size == 0:
        raise ValueError("cannot take a quantile of an empty chain")
    j = _type1_index(x.size, p)
    return float(np.partition(x, j - 1)[j - 1])


def quantiles_type1(values, probabilities: Sequence[float]) -> np.ndarray:
    """Type-1 quantiles at several probabilities, sharing one sort."""
    x = _as_values(values)
    if x.size == 0:
        raise ValueError("cannot take a quantile of an empty chain")
    xs = np.sort(x)
    return np.array([xs[_type1_index(x.size, p) - 1] for p in probabilities])


def _window_quantiles(x: np.ndarray, b: int, probabilities) -> np.ndarray:
    """Type-1 quantiles of every length-b sliding window; shape (n-b+1, k)."""
    js = [_type1_index(b, p) for p in probabilities]
    kth = sorted(set(j - 1 for j in js))
    windows = sliding_window_view(x, b)
    a = windows.shape[0]
    out = np.empty((a, len(js)))
    block = max(1, _WINDOW_BLOCK_ELEMS // b)
    cols = [j - 1 for j in js]
    for start in range(0, a, block):
        part = np.partition(windows[start : start + block], kth, axis=1)
        out[start : start + block] = part[:, cols]
    return out


def subsample_quantile_se(values, probabilities: Sequence[float] = (0.25, 0.75)) -> Optional[QuantileSeSet]:
    """Subsampling standard errors for type-1 quantiles (sqroot batch size).

    Windows of length b = floor(sqrt(n)) each contribute their own quantile;
    the OBM dispersion formula applied to those per-window quantiles gives
    sigma2 and se per probability. Point estimates come from the full chain.
    """
    x = _as_values(values)
    n = x.size
    if n < MIN_SAMPLES:
        return None
    probs = tuple(float(p) for p in probabilities)
    if not probs:
        raise ValueError("need at least one probability")
    b = math.isqrt(n)
    a = n - b + 1
    window_q = _window_quantiles(x, b, probs)
    muhat = window_q.mean(axis=0)
    sigma2 = n * b * np.sum((window_q - muhat) ** 2, axis=0) / ((a - 1) * a)
    return QuantileSeSet(
        probabilities=probs,
        point_estimates=quantiles_type1(x, probs),
        ses=np.sqrt(sigma2 / n),
        b=b,
        a=a,
        n=n,
        warning=n < SMALL_SAMPLE_WARN,
    )


def ci_mean(
    values,
    method: str = "OBM",
    level: float = 0.9,
    policy: BatchPolicy = "sqroot",
    g: Transform = None,
) -> Optional[Interval]:
    """Two-sided t interval for the chain mean.

    Degrees of freedom follow the estimator: a - 1 for BM, n - b + 1 for
    OBM. ``level`` is the one-sided t level (0.9 gives an 80% interval).
    """
    x = _as_values(values)
    meth = method.upper()
    if meth == "BM":
        est = mcse_bm(x, policy, g)
    elif meth == "OBM":
        est = mcse_obm(x, policy, g)
    else:
        raise ValueError(f"method specified invalid (meth={method})")
    if est is None:
        return None
    df = est.a - 1 if meth == "BM" else est.n - est.b + 1
    center = float(np.mean(_apply_transform(x, g)))
    half = t_quantile(level, df) * est.se
    return Interval(
        center=center,
        se=est.se,
        half_width=half,
        lower=center - half,
        upper=center + half,
        df=df,
        level=level,
        method=meth,
    )


def ci_quantiles(
    values,
    probabilities: Sequence[float] = (0.25, 0.75),
    level: float = 0.9,
    bonferroni: bool = False,
) -> Optional[list[Interval]]:
    """Per-quantile subsampling t intervals, optionally Bonferroni-adjusted.

    With the adjustment, k simultaneous intervals use the inflated level
    1 - (1 - level)/k (0.975 with k=2 becomes 0.9875).
    """
    qset = subsample_quantile_se(values, probabilities)
    if qset is None:
        return None
    k = len(qset.probabilities)
    adj_level = 1.0 - (1.0 - level) / k if bonferroni else level
    df = qset.n - qset.b + 1
    crit = t_quantile(adj_level, df)
    out = []
    for p, q, se in zip(qset.probabilities, qset.point_estimates, qset.ses):
        half = crit * float(se)
        out.append(
            Interval(
                center=float(q),
                se=float(se),
                half_width=half,
                lower=float(q) - half,
                upper=float(q) + half,
                df=df,
                level=adj_level,
                method="SUB",
                probability=p,
            )
        )
    return out
