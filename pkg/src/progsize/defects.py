"""Defect concentration when programs are ranked by size (Alberg diagrams)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import ZeroDefects
from .fit import WeibullFit, fit_weibull
from .ingest import Dataset, DefectKind, ProgramRecord

DEFAULT_PERCENTS = (5, 10, 15, 20, 25)


@dataclass(frozen=True)
class AlbergCurve:
    points: tuple[tuple[float, float], ...]
    defect_kind: DefectKind
    # LOC of the ranked programs, largest first; used to detect ties at a cut
    ranked_loc: tuple[int, ...] = ()

    @property
    def n(self) -> int:
        return len(self.points)

    def straddles_tie(self, k: int) -> bool:
        """True when programs k and k+1 (1-based) have equal LOC."""
        return 0 < k < len(self.ranked_loc) and self.ranked_loc[k - 1] == self.ranked_loc[k]


@dataclass(frozen=True)
class ConcentrationRow:
    top_percent: float
    k: int
    defect_share: float
    tie_at_cut: bool = False


@dataclass(frozen=True)
class ConcentrationTable:
    defect_kind: DefectKind
    n_programs: int
    total_defects: int
    rows: tuple[ConcentrationRow, ...]


def rank_by_size(records: Sequence[ProgramRecord]) -> list[ProgramRecord]:
    """Largest LOC first; equal LOC keeps id order."""
    return sorted(records, key=lambda r: (-r.loc, r.id))


def _ranked_defects(dataset: Dataset, kind: DefectKind) -> tuple[list[ProgramRecord], list[int], int]:
    dataset.require_defects(kind)
    ranked = rank_by_size(dataset.records)
    cumulative = [0]
    for r in ranked:
        cumulative.append(cumulative[-1] + r.defects(kind))
    total = cumulative[-1]
    if total == 0:
        raise ZeroDefects(f"dataset has no {kind}-release defects")
    return ranked, cumulative, total


def alberg_curve(dataset: Dataset, defect_kind: DefectKind) -> AlbergCurve:
    ranked, cumulative, total = _ranked_defects(dataset, defect_kind)
    n = len(ranked)
    points = tuple((k / n, cumulative[k] / total) for k in range(1, n + 1))
    return AlbergCurve(points, defect_kind, tuple(r.loc for r in ranked))


def top_count(percent: float, n: int) -> int:
    """round-half-up(percent * n / 100), computed exactly."""
    scaled = Fraction(str(percent)) * n / 100
    return int(scaled + Fraction(1, 2)) if scaled >= 0 else 0


def concentration_table(
    dataset: Dataset, defect_kind: DefectKind, percents: Sequence[float] = DEFAULT_PERCENTS
) -> ConcentrationTable:
    for p in percents:
        if not 0 < p <= 100:
            raise ValueError(f"percent must be in (0, 100], got {p}")
    ranked, cumulative, total = _ranked_defects(dataset, defect_kind)
    n = len(ranked)
    rows = []
    for p in percents:
        k = top_count(p, n)
        tie = 0 < k < n and ranked[k - 1].loc == ranked[k].loc
        rows.append(ConcentrationRow(p, k, cumulative[k] / total, tie))
    return ConcentrationTable(defect_kind, n, total, tuple(rows))


def fit_defect_weibull(curve: AlbergCurve) -> WeibullFit:
    return fit_weibull(curve.points)


def downsample(points: Sequence[tuple[float, float]], max_points: int = 1000) -> list[tuple[float, float]]:
    """Keep at most ``max_points`` points, evenly spaced by index; the last point is kept."""
    n = len(points)
    if n <= max_points:
        return list(points)
    if max_points < 2:
        return [points[-1]]
    idx = sorted({round(i * (n - 1) / (max_points - 1)) for i in range(max_points)})
    return [points[i] for i in idx]
