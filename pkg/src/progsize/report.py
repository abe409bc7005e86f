"""Whole-pipeline analysis report and its JSON / CSV serialisation."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Sequence

from . import __version__
from .defects import ConcentrationRow, ConcentrationTable, DEFAULT_PERCENTS, alberg_curve, concentration_table, fit_defect_weibull
from .errors import TooFewPoints, ZeroDefects
from .estimate import EstimationResult, estimate_count_in_range, estimate_total_size
from .fit import FitQuality, LognormalParams, WeibullFit, WeibullParams, fit_lognormal_mle, fit_quality_cdf
from .ingest import Dataset
from .stats import DescriptiveStats, describe, fraction_above, fraction_below

SCHEMA = "progsize-report/1"
DEFAULT_RANGES = ((3, 64), (65, 256), (257, 1024), (1025, 2048))
SIZE_THRESHOLDS = {"below": (32, 64), "above": (512, 1024)}


@dataclass(frozen=True)
class RangeEstimate:
    x1: float
    x2: float
    result: EstimationResult


@dataclass(frozen=True)
class DefectSection:
    table: ConcentrationTable
    weibull: WeibullFit | None = None


@dataclass(frozen=True)
class AnalysisReport:
    dataset_name: str
    version_label: str
    n_records: int
    total_loc: int
    stats: DescriptiveStats
    lognormal: LognormalParams | None
    lognormal_quality: FitQuality | None
    size_fractions: dict[str, float]
    total_size: EstimationResult
    ranges: tuple[RangeEstimate, ...]
    defects: dict[str, DefectSection] = field(default_factory=dict)
    tool_version: str = __version__
    timestamp: str = ""


def count_in_range(sizes: Sequence[int], x1: float, x2: float) -> int:
    return sum(1 for s in sizes if x1 <= s <= x2)


def build_report(
    dataset: Dataset,
    percents: Sequence[float] = DEFAULT_PERCENTS,
    ranges: Sequence[tuple[float, float]] = DEFAULT_RANGES,
    fit_weibull: bool = True,
    timestamp: str | None = None,
) -> AnalysisReport:
    sizes = dataset.sizes
    stats = describe(sizes)
    if len(set(sizes)) > 1:
        lognormal = fit_lognormal_mle(sizes)
        try:
            quality = fit_quality_cdf(sizes, lognormal)
        except TooFewPoints:
            quality = None
    else:
        lognormal = quality = None

    fractions = {}
    for t in SIZE_THRESHOLDS["below"]:
        fractions[f"below_{t}"] = fraction_below(sizes, t)
    for t in SIZE_THRESHOLDS["above"]:
        fractions[f"above_{t}"] = fraction_above(sizes, t)

    n = len(sizes)
    # an empty range has no MRE, so its actual count is left out
    range_rows = tuple(
        RangeEstimate(a, b, estimate_count_in_range(n, a, b, actual=count_in_range(sizes, a, b) or None))
        for a, b in ranges
    )

    defects: dict[str, DefectSection] = {}
    for kind in ("pre", "post"):
        if not dataset.has_defects(kind):
            continue
        try:
            table = concentration_table(dataset, kind, percents)
        except ZeroDefects:
            continue
        weibull = fit_defect_weibull(alberg_curve(dataset, kind)) if fit_weibull and n >= 4 else None
        defects[kind] = DefectSection(table, weibull)

    if timestamp is None:
        timestamp = datetime.now(timezone.utc).replace(microsecond=0).isoformat()
    return AnalysisReport(
        dataset_name=dataset.name,
        version_label=dataset.version_label,
        n_records=n,
        total_loc=sum(sizes),
        stats=stats,
        lognormal=lognormal,
        lognormal_quality=quality,
        size_fractions=fractions,
        total_size=estimate_total_size(n, actual=sum(sizes)),
        ranges=range_rows,
        defects=defects,
        timestamp=timestamp,
    )


# --- dict form -------------------------------------------------------------

def _estimation(e: EstimationResult) -> dict[str, Any]:
    d: dict[str, Any] = {"estimate": e.estimate, "rounded": e.rounded}
    if e.actual is not None:
        d.update(actual=e.actual, mre=e.mre, acceptable=e.acceptable)
    return d


def _quality(q: FitQuality) -> dict[str, Any]:
    return {"r_squared": q.r_squared, "se": q.se, "n_points": q.n_points}


def report_to_dict(r: AnalysisReport) -> dict[str, Any]:
    d: dict[str, Any] = {
        "schema": SCHEMA,
        "tool_version": r.tool_version,
        "timestamp": r.timestamp,
        "dataset": {
            "name": r.dataset_name,
            "version_label": r.version_label,
            "n_records": r.n_records,
            "total_loc": r.total_loc,
        },
        "descriptive_stats": {
            k: getattr(r.stats, k) for k in ("n", "min", "median", "max", "mode", "mean", "std_dev")
        },
        "size_fractions": dict(r.size_fractions),
    }
    if r.lognormal is not None:
        d["lognormal"] = {"mu": r.lognormal.mu, "sigma": r.lognormal.sigma}
        if r.lognormal_quality is not None:
            d["lognormal"]["quality"] = _quality(r.lognormal_quality)
    d["size_estimate"] = _estimation(r.total_size)
    d["range_estimates"] = [{"x1": g.x1, "x2": g.x2, **_estimation(g.result)} for g in r.ranges]
    if r.defects:
        d["defects"] = {}
        for kind, sec in r.defects.items():
            entry: dict[str, Any] = {
                "n_programs": sec.table.n_programs,
                "total_defects": sec.table.total_defects,
                "concentration": [
                    {"top_percent": row.top_percent, "k": row.k, "defect_share": row.defect_share, "tie_at_cut": row.tie_at_cut}
                    for row in sec.table.rows
                ],
            }
            if sec.weibull is not None:
                w = sec.weibull
                entry["weibull"] = {
                    "gamma": w.params.gamma,
                    "beta": w.params.beta,
                    "quality": _quality(w.quality),
                    "converged": w.converged,
                    "iterations": w.iterations,
                }
            d["defects"][kind] = entry
    return d


def _estimation_from(d: dict[str, Any]) -> EstimationResult:
    return EstimationResult(d["estimate"], d.get("actual"), d.get("mre"), d.get("acceptable"))


def _quality_from(d: dict[str, Any]) -> FitQuality:
    return FitQuality(d["r_squared"], d["se"], d["n_points"])


def report_from_dict(d: dict[str, Any]) -> AnalysisReport:
    if d.get("schema") != SCHEMA:
        raise ValueError(f"unsupported report schema {d.get('schema')!r}")
    ln = d.get("lognormal")
    defects = {}
    for kind, entry in d.get("defects", {}).items():
        table = ConcentrationTable(
            kind,
            entry["n_programs"],
            entry["total_defects"],
            tuple(ConcentrationRow(r["top_percent"], r["k"], r["defect_share"], r["tie_at_cut"]) for r in entry["concentration"]),
        )
        w = entry.get("weibull")
        fit = None
        if w is not None:
            fit = WeibullFit(WeibullParams(w["gamma"], w["beta"]), _quality_from(w["quality"]), w["converged"], w["iterations"])
        defects[kind] = DefectSection(table, fit)
    return AnalysisReport(
        dataset_name=d["dataset"]["name"],
        version_label=d["dataset"]["version_label"],
        n_records=d["dataset"]["n_records"],
        total_loc=d["dataset"]["total_loc"],
        stats=DescriptiveStats(**d["descriptive_stats"]),
        lognormal=LognormalParams(ln["mu"], ln["sigma"]) if ln else None,
        lognormal_quality=_quality_from(ln["quality"]) if ln and "quality" in ln else None,
        size_fractions=dict(d["size_fractions"]),
        total_size=_estimation_from(d["size_estimate"]),
        ranges=tuple(RangeEstimate(g["x1"], g["x2"], _estimation_from(g)) for g in d["range_estimates"]),
        defects=defects,
        tool_version=d["tool_version"],
        timestamp=d["timestamp"],
    )


# --- documents -------------------------------------------------------------

def _flatten(prefix: str, value: Any, rows: list[tuple[str, str, Any]], section: str) -> None:
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else k, v, rows, section)
    elif isinstance(value, list):
        for i, v in enumerate(value):
            _flatten(f"{prefix}[{i}]", v, rows, section)
    else:
        rows.append((section, prefix, value))


def emit_report(report: AnalysisReport, fmt: str = "json") -> str:
    """Serialise a report. JSON is complete; CSV is a long ``section,key,value`` table."""
    d = report_to_dict(report)
    if fmt == "json":
        return json.dumps(d, indent=2, allow_nan=False) + "\n"
    if fmt == "csv":
        rows: list[tuple[str, str, Any]] = []
        for section in ("dataset", "descriptive_stats", "size_fractions", "lognormal", "size_estimate", "range_estimates", "defects"):
            if section in d:
                _flatten("", d[section], rows, section)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("section", "key", "value"))
        for section, key, value in rows:
            w.writerow((section, key, repr(value) if isinstance(value, float) else value))
        return buf.getvalue()
    raise ValueError(f"unknown report format {fmt!r}")


def load_report(text: str) -> AnalysisReport:
    return report_from_dict(json.loads(text))
