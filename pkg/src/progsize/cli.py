"""``progsize`` command line.

Exit status: 0 on success, 1 on bad input or usage, 2 when a numeric
routine fails (for example a Weibull fit that does not converge and
``--allow-warn`` was not given).
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path
from typing import Sequence

from . import __version__
from .defects import DEFAULT_PERCENTS, alberg_curve, concentration_table, fit_defect_weibull
from .errors import NoConvergence, ProgsizeError
from .estimate import CORPUS_DEFAULTS, CORPUS_MEAN_SIZE, estimate_count_in_range, estimate_total_size, expected_program_size
from .fit import LognormalParams, fit_lognormal_cdf, fit_lognormal_mle, fit_quality_cdf, lognormal_cdf
from .ingest import Dataset, import_eclipse_dataset, load_canonical_csv, write_canonical_csv
from .loc_scanner import scan_tree
from .plots import emit_alberg, emit_cdf, emit_rank_size
from .report import build_report, emit_report
from .stats import describe, empirical_cdf, rank_size_curve

EXIT_INPUT = 1
EXIT_NUMERIC = 2


class NumericFailure(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _pct(x: float) -> str:
    return f"{100 * x:.2f}%"


def _load(args: argparse.Namespace) -> Dataset:
    if args.input_format == "eclipse":
        return import_eclipse_dataset(args.records, args.version_label)
    return load_canonical_csv(args.records, version_label=args.version_label)


def _params(args: argparse.Namespace) -> LognormalParams | None:
    parser = args.parser
    if (args.mu is None) != (args.sigma is None):
        parser.error("--mu and --sigma must be given together" + (" (missing --sigma)" if args.sigma is None else " (missing --mu)"))
    if args.mu is None:
        return None
    try:
        return LognormalParams(args.mu, args.sigma)
    except ProgsizeError as exc:
        parser.error(f"argument --sigma: {exc}")
    return None


def _percent_list(text: str) -> list[float]:
    try:
        values = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated percentages, got {text!r}") from None
    if not values or any(not 0 < v <= 100 for v in values):
        raise argparse.ArgumentTypeError(f"percentages must lie in (0, 100], got {text!r}")
    return [int(v) if v.is_integer() else v for v in values]


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _fmt_value(v: float) -> str:
    if isinstance(v, int) or float(v).is_integer():
        return str(int(v))
    return f"{v:.2f}"


# --- subcommands -----------------------------------------------------------

def cmd_scan(args: argparse.Namespace, out) -> int:
    result = scan_tree(args.root, include=args.include, exclude=args.exclude or (), lang=args.lang, workers=args.workers)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            write_canonical_csv(result.records, fh)
    else:
        write_canonical_csv(result.records, out)
    for rel in result.empty:
        print(f"note: {rel}: no code lines, no record written", file=sys.stderr)
    for rel, msg in result.errors:
        print(f"error: {rel}: {msg}", file=sys.stderr)
    print(f"scanned {len(result.records) + len(result.empty)} files, {sum(r.loc for r in result.records)} LOC", file=sys.stderr)
    return EXIT_INPUT if result.errors else 0


def cmd_stats(args: argparse.Namespace, out) -> int:
    ds = _load(args)
    s = describe(ds.sizes)
    rows = [
        ("programs", s.n), ("min", s.min), ("median", s.median), ("max", s.max),
        ("mode", s.mode), ("mean", s.mean), ("std_dev", s.std_dev),
    ]
    for name, value in rows:
        print(f"{name:<10}{_fmt_value(value)}", file=out)
    if args.rank_size:
        for rank, size in rank_size_curve(ds.sizes):
            print(f"{rank},{size}", file=out)
    return 0


def cmd_fit(args: argparse.Namespace, out) -> int:
    ds = _load(args)
    if args.method == "cdf":
        params, quality = fit_lognormal_cdf(ds.sizes)
    else:
        params = fit_lognormal_mle(ds.sizes)
        quality = fit_quality_cdf(ds.sizes, params)
    print(f"mu        {params.mu:.4f}", file=out)
    print(f"sigma     {params.sigma:.4f}", file=out)
    print(f"R2        {quality.r_squared:.4f}", file=out)
    print(f"Se        {quality.se:.4f}", file=out)
    print(f"points    {quality.n_points}", file=out)
    print(f"mean size {expected_program_size(params):.2f}", file=out)
    if args.params:
        Path(args.params).write_text(
            json.dumps({"mu": params.mu, "sigma": params.sigma, "method": args.method}, indent=2) + "\n", encoding="utf-8"
        )
    return 0


def cmd_estimate_size(args: argparse.Namespace, out) -> int:
    params = _params(args)
    per_program = CORPUS_MEAN_SIZE if params is None else expected_program_size(params)
    res = estimate_total_size(args.n, params, actual=args.actual)
    print(f"expected program size {per_program:.2f}", file=out)
    print(f"estimated size        {res.rounded}", file=out)
    if res.mre is not None:
        print(f"actual size           {_fmt_value(res.actual)}", file=out)
        print(f"MRE                   {_pct(res.mre)} ({'acceptable' if res.acceptable else 'not acceptable'})", file=out)
    return 0


def cmd_estimate_range(args: argparse.Namespace, out) -> int:
    params = _params(args)
    res = estimate_count_in_range(args.n, args.x1, args.x2, params, actual=args.actual)
    p = params or CORPUS_DEFAULTS
    print(f"P(x <= {args.x1:g})  {lognormal_cdf(args.x1, p):.4f}", file=out)
    print(f"P(x <= {args.x2:g})  {lognormal_cdf(args.x2, p):.4f}", file=out)
    print(f"estimated count {res.rounded}", file=out)
    if res.mre is not None:
        print(f"actual count    {_fmt_value(res.actual)}", file=out)
        print(f"MRE             {_pct(res.mre)} ({'acceptable' if res.acceptable else 'not acceptable'})", file=out)
    return 0


def _weibull(curve, allow_warn: bool):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NoConvergence)
        fit = fit_defect_weibull(curve)
    if not fit.converged:
        msg = f"Weibull fit did not converge after {fit.iterations} iterations"
        if not allow_warn:
            raise NumericFailure(msg + " (use --allow-warn to accept the best iterate)")
        print(f"warning: {msg}", file=sys.stderr)
    return fit


def cmd_defects(args: argparse.Namespace, out) -> int:
    ds = _load(args)
    table = concentration_table(ds, args.kind, args.top)
    print(f"{args.kind}-release defects: {table.total_defects} over {table.n_programs} programs", file=out)
    for row in table.rows:
        note = "  (equal-LOC programs straddle the cut)" if row.tie_at_cut else ""
        print(f"top {row.top_percent:g}%\t{_pct(row.defect_share)}\t({row.k} programs){note}", file=out)
    if args.fit_weibull:
        curve = alberg_curve(ds, args.kind)
        fit = _weibull(curve, args.allow_warn)
        print(f"gamma     {fit.params.gamma:.4f}", file=out)
        print(f"beta      {fit.params.beta:.4f}", file=out)
        print(f"R2        {fit.quality.r_squared:.4f}", file=out)
        print(f"Se        {fit.quality.se:.4f}", file=out)
        if args.plots:
            emit_alberg(curve, Path(args.plots), fit.params)
    return 0


def cmd_report(args: argparse.Namespace, out) -> int:
    ds = _load(args)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NoConvergence)
        report = build_report(ds, percents=args.top, timestamp=args.timestamp)
    for kind, sec in report.defects.items():
        if sec.weibull is not None and not sec.weibull.converged:
            msg = f"{kind}-release Weibull fit did not converge"
            if not args.allow_warn:
                raise NumericFailure(msg + " (use --allow-warn to accept the best iterate)")
            print(f"warning: {msg}", file=sys.stderr)
    doc = emit_report(report, args.format)
    if args.output:
        Path(args.output).write_text(doc, encoding="utf-8")
    else:
        out.write(doc)
    if args.plots:
        plot_dir = Path(args.plots)
        emit_rank_size(rank_size_curve(ds.sizes), plot_dir)
        emit_cdf(empirical_cdf(ds.sizes), plot_dir, report.lognormal)
        for kind, sec in report.defects.items():
            emit_alberg(alberg_curve(ds, kind), plot_dir, sec.weibull.params if sec.weibull else None)
    return 0


# --- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="progsize", description="Program-size distribution and size-ranked defect analysis.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def records_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("records", help="records file (canonical CSV, or Eclipse table with --input-format eclipse)")
        p.add_argument("--input-format", choices=("canonical", "eclipse"), default="canonical")
        p.add_argument("--version-label", default="", help="release label stored with the dataset")

    def lognormal_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("--mu", type=float, help="lognormal scale (default: corpus mean 3.8277)")
        p.add_argument("--sigma", type=float, help="lognormal shape (default: corpus mean 1.3472)")
        p.add_argument("--actual", type=float, help="actual value, to report MRE")

    p = sub.add_parser("scan", help="count LOC per source file into a records CSV")
    p.set_defaults(handler=cmd_scan, parser=p)
    p.add_argument("root")
    p.add_argument("--include", action="append", metavar="GLOB")
    p.add_argument("--exclude", action="append", metavar="GLOB")
    p.add_argument("--lang", default="java")
    p.add_argument("--workers", type=_positive_int)
    p.add_argument("-o", "--output")

    p = sub.add_parser("stats", help="descriptive statistics of program sizes")
    p.set_defaults(handler=cmd_stats, parser=p)
    records_args(p)
    p.add_argument("--rank-size", action="store_true", help="also print the rank,size curve")

    p = sub.add_parser("fit", help="fit a lognormal size model")
    p.set_defaults(handler=cmd_fit, parser=p)
    records_args(p)
    p.add_argument("--method", choices=("mle", "cdf"), default="mle")
    p.add_argument("--params", help="write fitted parameters as JSON")

    p = sub.add_parser("estimate-size", help="estimate total LOC from the number of programs")
    p.set_defaults(handler=cmd_estimate_size, parser=p)
    p.add_argument("--n", type=_positive_int, required=True)
    lognormal_args(p)

    p = sub.add_parser("estimate-range", help="estimate the number of programs within [x1, x2] LOC")
    p.set_defaults(handler=cmd_estimate_range, parser=p)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--x1", type=float, required=True)
    p.add_argument("--x2", type=float, required=True)
    lognormal_args(p)

    p = sub.add_parser("defects", help="defect share of the largest programs")
    p.set_defaults(handler=cmd_defects, parser=p)
    records_args(p)
    p.add_argument("--kind", choices=("pre", "post"), required=True)
    p.add_argument("--top", type=_percent_list, default=list(DEFAULT_PERCENTS), metavar="P1,P2,...")
    p.add_argument("--fit-weibull", action="store_true")
    p.add_argument("--allow-warn", action="store_true")
    p.add_argument("--plots", metavar="DIR")

    p = sub.add_parser("report", help="run the whole analysis and write a report")
    p.set_defaults(handler=cmd_report, parser=p)
    records_args(p)
    p.add_argument("-o", "--output")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--plots", metavar="DIR")
    p.add_argument("--top", type=_percent_list, default=list(DEFAULT_PERCENTS), metavar="P1,P2,...")
    p.add_argument("--timestamp", help="pin the report timestamp (for reproducible output)")
    p.add_argument("--allow-warn", action="store_true")
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args, out)
    except NumericFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ProgsizeError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
