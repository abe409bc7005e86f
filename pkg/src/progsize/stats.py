"""Descriptive statistics and empirical distributions over program sizes."""

from __future__ import annotations

import math
import statistics
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .errors import EmptySample


@dataclass(frozen=True)
class DescriptiveStats:
    n: int
    min: float
    median: float
    max: float
    mode: float
    mean: float
    std_dev: float


@dataclass(frozen=True)
class EmpiricalCdf:
    points: tuple[tuple[float, float], ...]

    @property
    def sizes(self) -> list[float]:
        return [x for x, _ in self.points]

    @property
    def fractions(self) -> list[float]:
        return [f for _, f in self.points]

    def __call__(self, x: float) -> float:
        """F(x): fraction of the sample <= x."""
        lo, hi = 0, len(self.points)
        while lo < hi:
            mid = (lo + hi) // 2
            if self.points[mid][0] <= x:
                lo = mid + 1
            else:
                hi = mid
        return 0.0 if lo == 0 else self.points[lo - 1][1]


def _require(sizes: Sequence[float]) -> None:
    if len(sizes) == 0:
        raise EmptySample()


def describe(sizes: Sequence[float]) -> DescriptiveStats:
    """Table-1 style summary.

    Median averages the two central values for even n, the mode is the
    smallest of the most frequent values and ``std_dev`` is the sample
    (n - 1) standard deviation, 0 for a singleton.
    """
    _require(sizes)
    counts = Counter(sizes)
    top = max(counts.values())
    mode = min(v for v, c in counts.items() if c == top)
    return DescriptiveStats(
        n=len(sizes),
        min=min(sizes),
        median=statistics.median(sizes),
        max=max(sizes),
        mode=mode,
        mean=statistics.fmean(sizes),
        std_dev=statistics.stdev(sizes) if len(sizes) > 1 else 0.0,
    )


def empirical_cdf(sizes: Sequence[float]) -> EmpiricalCdf:
    _require(sizes)
    n = len(sizes)
    counts = sorted(Counter(sizes).items())
    points = []
    running = 0
    for x, c in counts:
        running += c
        points.append((x, running / n))
    return EmpiricalCdf(tuple(points))


def rank_size_curve(sizes: Sequence[float]) -> list[tuple[int, float]]:
    """(rank, size) pairs, largest program first.

    The sort is stable, so pass sizes in id order to keep ties in id order.
    """
    _require(sizes)
    ordered = sorted(sizes, key=lambda s: -s)
    return [(i, s) for i, s in enumerate(ordered, start=1)]


def fraction_below(sizes: Sequence[float], threshold: float) -> float:
    _require(sizes)
    return sum(1 for s in sizes if s < threshold) / len(sizes)


def fraction_above(sizes: Sequence[float], threshold: float) -> float:
    _require(sizes)
    return sum(1 for s in sizes if s > threshold) / len(sizes)


def log2_bin_edges(lo: float, hi: float) -> list[float]:
    """Powers of two spanning [lo, hi]: 2**floor(log2 lo) .. 2**ceil(log2 hi)."""
    if lo <= 0 or hi < lo:
        raise ValueError("need 0 < lo <= hi")
    k0 = math.floor(math.log2(lo))
    k1 = math.ceil(math.log2(hi))
    return [2.0 ** k for k in range(k0, k1 + 1)]
