"""System-size and size-range count estimates from a lognormal size model."""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal

from .errors import BadRange, DomainError
from .fit import LognormalParams, lognormal_cdf

# Mean lognormal parameters over a corpus of 18 large open-source Java systems.
CORPUS_MU = 3.8277
CORPUS_SIGMA = 1.3472
CORPUS_DEFAULTS = LognormalParams(CORPUS_MU, CORPUS_SIGMA)

ACCEPTABLE_MRE = 0.25


def round_half_up(x: float) -> int:
    return int(Decimal(repr(x)).quantize(Decimal(1), rounding=ROUND_HALF_UP))


def expected_program_size(p: LognormalParams) -> float:
    """Mean of the lognormal, exp(mu + sigma^2 / 2)."""
    return math.exp(p.mu + p.sigma * p.sigma / 2.0)


# The corpus rule "size = N * 113.88" uses the mean program size rounded to two
# decimals; it is derived here, not typed in.
CORPUS_MEAN_SIZE = round(expected_program_size(CORPUS_DEFAULTS), 2)
if abs(CORPUS_MEAN_SIZE - 113.88) > 0.01:
    raise RuntimeError(f"corpus mean program size drifted: {CORPUS_MEAN_SIZE}")


def mre(actual: float, estimate: float) -> float:
    """Magnitude of relative error, |actual - estimate| / actual."""
    if not actual > 0:
        raise DomainError(f"MRE needs a positive actual value, got {actual}")
    return abs(actual - estimate) / actual


@dataclass(frozen=True)
class EstimationResult:
    estimate: float
    actual: float | None = None
    mre: float | None = None
    acceptable: bool | None = None

    @property
    def rounded(self) -> int:
        return round_half_up(self.estimate)

    @classmethod
    def build(cls, estimate: float, actual: float | None = None, *, compare_rounded: bool = False) -> EstimationResult:
        if actual is None:
            return cls(estimate)
        against = round_half_up(estimate) if compare_rounded else estimate
        err = mre(actual, against)
        return cls(estimate, actual, err, err <= ACCEPTABLE_MRE)


def estimate_total_size(
    n_programs: int, params: LognormalParams | None = None, actual: float | None = None
) -> EstimationResult:
    """Total LOC expected from ``n_programs`` programs.

    With explicit ``params`` this is ``n * exp(mu + sigma^2/2)``. With
    ``params=None`` the corpus rule ``n * 113.88`` is applied, which is what
    the reference system-size estimates use.
    """
    if n_programs < 1:
        raise DomainError(f"number of programs must be >= 1, got {n_programs}")
    per_program = CORPUS_MEAN_SIZE if params is None else expected_program_size(params)
    return EstimationResult.build(n_programs * per_program, actual)


def estimate_count_in_range(
    n_programs: int,
    x1: float,
    x2: float,
    params: LognormalParams | None = None,
    actual: float | None = None,
) -> EstimationResult:
    """Expected number of programs with size in [x1, x2].

    MRE, when ``actual`` is given, compares against the rounded count.
    """
    if not 0 < x1 < x2:
        raise BadRange(f"need 0 < x1 < x2, got [{x1}, {x2}]")
    if n_programs < 1:
        raise DomainError(f"number of programs must be >= 1, got {n_programs}")
    p = CORPUS_DEFAULTS if params is None else params
    share = lognormal_cdf(x2, p) - lognormal_cdf(x1, p)
    return EstimationResult.build(n_programs * share, actual, compare_rounded=True)
