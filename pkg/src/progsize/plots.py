"""Plot data files: a commented CSV plus a static SVG line chart per figure."""

from __future__ import annotations

import math
from dataclasses import dataclass
from html import escape
from pathlib import Path
from typing import Sequence

from .defects import AlbergCurve, downsample
from .fit import LognormalParams, WeibullParams, lognormal_cdf, weibull_cdf
from .stats import EmpiricalCdf

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e")


@dataclass(frozen=True)
class Series:
    label: str
    points: Sequence[tuple[float, float]]
    dashed: bool = False


def _nice_ticks(lo: float, hi: float, target: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / target
    mag = 10 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw)
    start = math.ceil(lo / step - 1e-9) * step
    ticks = []
    v = start
    while v <= hi + step * 1e-9:
        ticks.append(round(v, 10))
        v += step
    return ticks


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _label(v: float) -> str:
    return f"{v:g}"


def render_line_chart(
    series: Sequence[Series],
    title: str,
    x_label: str,
    y_label: str,
    log_x: bool = False,
    log_y: bool = False,
    width: int = 720,
    height: int = 440,
) -> str:
    if not series or not any(s.points for s in series):
        raise ValueError("nothing to plot")
    left, right, top, bottom = 70, 20, 40, 60
    pw, ph = width - left - right, height - top - bottom

    def tx(v: float) -> float:
        return math.log10(v) if log_x else v

    def ty(v: float) -> float:
        return math.log10(v) if log_y else v

    xs = [tx(x) for s in series for x, _ in s.points]
    ys = [ty(y) for s in series for _, y in s.points]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if not log_y:
        y0 = min(y0, 0.0)
    if x1 == x0:
        x1 = x0 + 1
    if y1 == y0:
        y1 = y0 + 1

    def px(v: float) -> float:
        return left + (tx(v) - x0) / (x1 - x0) * pw

    def py(v: float) -> float:
        return top + ph - (ty(v) - y0) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
        f'<text x="{width / 2:.1f}" y="24" text-anchor="middle" font-size="15">{escape(title)}</text>',
    ]
    # ticks and grid
    def decade_ticks(a: float, b: float) -> list[float]:
        return [float(k) for k in range(math.ceil(a - 1e-9), math.floor(b + 1e-9) + 1)]

    xt = decade_ticks(x0, x1) if log_x else _nice_ticks(x0, x1)
    yt = decade_ticks(y0, y1) if log_y else _nice_ticks(y0, y1)
    for t in xt:
        if x0 - 1e-9 <= t <= x1 + 1e-9:
            X = left + (t - x0) / (x1 - x0) * pw
            lab = _label(10 ** t if log_x else t)
            out.append(f'<line x1="{_fmt(X)}" y1="{top}" x2="{_fmt(X)}" y2="{top + ph}" stroke="#e5e5e5"/>')
            out.append(f'<text x="{_fmt(X)}" y="{top + ph + 16}" text-anchor="middle">{lab}</text>')
    for t in yt:
        if y0 - 1e-9 <= t <= y1 + 1e-9:
            Y = top + ph - (t - y0) / (y1 - y0) * ph
            lab = _label(10 ** t if log_y else t)
            out.append(f'<line x1="{left}" y1="{_fmt(Y)}" x2="{left + pw}" y2="{_fmt(Y)}" stroke="#e5e5e5"/>')
            out.append(f'<text x="{left - 6}" y="{_fmt(Y + 4)}" text-anchor="end">{lab}</text>')
    out.append(f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}" stroke="#000000"/>')
    out.append(f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}" stroke="#000000"/>')
    out.append(
        f'<text x="{left + pw / 2:.1f}" y="{height - 18}" text-anchor="middle">{escape(x_label)}</text>'
    )
    out.append(
        f'<text x="16" y="{top + ph / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 16 {top + ph / 2:.1f})">{escape(y_label)}</text>'
    )
    for i, s in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        pts = " ".join(f"{_fmt(px(x))},{_fmt(py(y))}" for x, y in s.points)
        dash = ' stroke-dasharray="6 4"' if s.dashed else ""
        out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"{dash}/>')
        ly = top + 14 + 16 * i
        lx = left + pw - 170
        out.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 24}" y2="{ly - 4}" stroke="{color}" stroke-width="2"{dash}/>')
        out.append(f'<text x="{lx + 30}" y="{ly}">{escape(s.label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_csv(path: Path, comments: Sequence[str], header: Sequence[str], rows: Sequence[Sequence[float]]) -> None:
    lines = [f"# {c}" for c in comments]
    lines.append(",".join(header))
    lines.extend(",".join(repr(v) if isinstance(v, float) else str(v) for v in row) for row in rows)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def emit_rank_size(sizes_ranked: Sequence[tuple[int, float]], out_dir: Path, name: str = "rank_size") -> list[Path]:
    if not sizes_ranked:
        raise ValueError("empty rank-size curve")
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path, svg_path = out_dir / f"{name}.csv", out_dir / f"{name}.svg"
    write_csv(
        csv_path,
        ["rank: 1 = largest program", "loc: program size in lines of code"],
        ["rank", "loc"],
        sizes_ranked,
    )
    plotted = downsample(sizes_ranked)
    svg_path.write_text(
        render_line_chart([Series("program size", plotted)], "Program sizes ranked largest first", "rank", "LOC", log_y=True),
        encoding="utf-8",
    )
    return [csv_path, svg_path]


def emit_cdf(cdf: EmpiricalCdf, out_dir: Path, params: LognormalParams | None = None, name: str = "size_cdf") -> list[Path]:
    if not cdf.points:
        raise ValueError("empty CDF")
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path, svg_path = out_dir / f"{name}.csv", out_dir / f"{name}.svg"
    rows = [(x, f, lognormal_cdf(x, params)) if params else (x, f) for x, f in cdf.points]
    header = ["loc", "empirical_cdf"] + (["lognormal_cdf"] if params else [])
    comments = ["loc: distinct program size", "empirical_cdf: fraction of programs with size <= loc"]
    if params:
        comments.append(f"lognormal_cdf: fitted model, mu={params.mu!r} sigma={params.sigma!r}")
    write_csv(csv_path, comments, header, rows)
    series = [Series("empirical", downsample(cdf.points))]
    if params:
        series.append(Series("lognormal fit", downsample([(x, lognormal_cdf(x, params)) for x, _ in cdf.points]), dashed=True))
    svg_path.write_text(
        render_line_chart(series, "Cumulative distribution of program sizes", "LOC", "fraction of programs", log_x=True),
        encoding="utf-8",
    )
    return [csv_path, svg_path]


def emit_alberg(curve: AlbergCurve, out_dir: Path, params: WeibullParams | None = None, name: str | None = None) -> list[Path]:
    if not curve.points:
        raise ValueError("empty Alberg curve")
    name = name or f"alberg_{curve.defect_kind}"
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path, svg_path = out_dir / f"{name}.csv", out_dir / f"{name}.svg"
    plotted = downsample(curve.points)
    rows = [(x, y, weibull_cdf(x, params)) if params else (x, y) for x, y in plotted]
    header = ["program_fraction", "defect_fraction"] + (["weibull_fit"] if params else [])
    comments = [
        "program_fraction: share of programs taken, largest LOC first",
        f"defect_fraction: cumulative share of {curve.defect_kind}-release defects",
    ]
    if params:
        comments.append(f"weibull_fit: 1 - exp(-(x/gamma)^beta), gamma={params.gamma!r} beta={params.beta!r}")
    if len(plotted) < curve.n:
        comments.append(f"downsampled from {curve.n} points")
    write_csv(csv_path, comments, header, rows)
    series = [Series(f"{curve.defect_kind}-release defects", plotted)]
    if params:
        series.append(Series("Weibull fit", [(x, weibull_cdf(x, params)) for x, _ in plotted], dashed=True))
    svg_path.write_text(
        render_line_chart(series, "Defects with programs ranked by LOC", "fraction of programs", "fraction of defects"),
        encoding="utf-8",
    )
    return [csv_path, svg_path]
