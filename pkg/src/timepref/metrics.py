"""Distribution shape and inequality statistics over per-agent values.

Moments are population moments (divide by n) and kurtosis is Pearson's, so a
normal sample gives about 3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

MIN_BINS = 30
MAX_BINS = 1000


@dataclass(frozen=True)
class Histogram:
    edges: np.ndarray
    counts: np.ndarray


@dataclass(frozen=True)
class SummaryStats:
    mean: float
    cv: float
    skewness: float
    kurtosis: float
    gini: float | None
    n: int
    histogram: Histogram

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "mean": self.mean,
            "cv": self.cv,
            "skewness": self.skewness,
            "kurtosis": self.kurtosis,
            "gini": self.gini,
        }


def gini(values) -> float:
    """Gini index via the sorted-rank form of the mean absolute difference."""
    x = np.sort(np.asarray(values, dtype=float))
    if x.size == 0:
        raise DomainError("gini of an empty sample")
    if np.any(x < 0):
        raise DomainError("gini requires non-negative values")
    total = x.sum()
    if total == 0:
        raise DomainError("gini undefined when every value is zero")
    n = x.size
    if x[0] == x[-1]:
        return 0.0
    ranks = np.arange(1, n + 1, dtype=float)
    return float(np.dot(2.0 * ranks - n - 1.0, x) / (n * total))


def histogram(values, min_bins: int = MIN_BINS) -> Histogram:
    """Freedman-Diaconis binning, clipped to ``[min_bins, MAX_BINS]`` bins.

    The cap guards against a near-zero interquartile range on skewed data.
    """
    x = np.asarray(values, dtype=float)
    q75, q25 = np.percentile(x, [75, 25])
    width = 2.0 * (q75 - q25) * x.size ** (-1.0 / 3.0)
    span = float(x.max() - x.min())
    fd_bins = math.ceil(span / width) if width > 0 and span > 0 else min_bins
    counts, edges = np.histogram(x, bins=int(np.clip(fd_bins, min_bins, max(min_bins, MAX_BINS))))
    return Histogram(edges, counts)


def summary(values) -> SummaryStats:
    x = np.asarray(values, dtype=float)
    n = x.size
    if n < 2:
        raise DomainError(f"need at least two values (got {n})")
    if np.all(x == x[0]):
        # exact zeros for constant data; the float mean need not equal x[0]
        mean, var = float(x[0]), 0.0
    else:
        mean = float(x.mean())
        dev = x - mean
        var = float(np.mean(dev**2))
    if var == 0.0:
        skew, kurt = 0.0, 3.0
    else:
        skew = float(np.mean(dev**3) / var**1.5)
        kurt = float(np.mean(dev**4) / var**2)
    if mean == 0.0:
        raise DomainError("coefficient of variation undefined for zero mean")
    cv = float(np.sqrt(var) / abs(mean))
    g = gini(x) if np.all(x >= 0) and np.any(x > 0) else None
    return SummaryStats(mean, cv, skew, kurt, g, n, histogram(x))
