"""Command-line front end.

Exit status is 0 on success, 1 when the data are invalid or insufficient and
2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from dataclasses import replace
from typing import Optional, Sequence

from . import report
from .cfm import DEFAULT_MIN_EVENTS, CFMConfig, fit_cfm, parse_modes, restrict_to_mode
from .descriptives import summarize
from .ingest import PUBLISHED_SPECS, IngestConfig, IngestError, generate_fixture, load_csv, write_csv
from .km import fit_km
from .model import AnalysisError, GoalMode, validate_dataset
from .points import minute_histogram, points_comparison

log = logging.getLogger("goalrel")


def parse_grid(text: str) -> tuple[float, ...]:
    """``"1..120"`` (integer steps, inclusive) or a comma list of minutes."""
    text = text.strip()
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            lo_i, hi_i = int(lo), int(hi)
            if hi_i < lo_i:
                raise ValueError
            grid = tuple(float(m) for m in range(lo_i, hi_i + 1))
        else:
            grid = tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid grid {text!r}; use 'A..B' or a comma list") from None
    if not grid or min(grid) < 0:
        raise argparse.ArgumentTypeError("grid must be non-empty and non-negative")
    return grid


def parse_mode_list(text: str):
    try:
        return parse_modes(v for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _confidence(text: str) -> float:
    value = float(text)
    if not 0 < value < 1:
        raise argparse.ArgumentTypeError("confidence must lie in (0, 1)")
    return value


def _non_negative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return value


def _cfm_config(args) -> CFMConfig:
    return CFMConfig(
        included_modes=getattr(args, "modes", None) or None,
        min_events_per_mode=getattr(args, "min_events", DEFAULT_MIN_EVENTS),
        confidence=getattr(args, "confidence", 0.95),
    )


def _load(path, name=None):
    return load_csv(IngestConfig(path, name))


def _emit(args, header, rows, doc):
    out = open(args.out, "w", encoding="utf-8", newline="") if args.out else sys.stdout
    try:
        if args.format == "json":
            out.write(json.dumps(doc, indent=1) + "\n")
        else:
            w = csv.writer(out, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)
    finally:
        if out is not sys.stdout:
            out.close()


def cmd_validate(args) -> int:
    ds = load_csv(IngestConfig(args.input, args.name, strict=False))
    problems = validate_dataset(ds)
    for p in problems:
        print(p)
    if problems:
        return 1
    print(f"{args.input}: OK ({len(ds.observations)} records, {ds.games_played} games)")
    return 0


def cmd_summarize(args) -> int:
    s = summarize(_load(args.input, args.name))
    rows = [
        ("games_played", s.games_played, 100.0),
        ("censored", s.censored_count, s.censored_percentage),
        ("uncensored", s.uncensored_count, s.uncensored_percentage),
        ("total_records", s.total_records, 100.0),
        *((m.slug, s.mode_counts[m], s.mode_percentages[m]) for m in GoalMode),
        ("games_with_goal", s.games_with_goal, s.games_with_goal_percentage),
    ]
    doc = {name: {"frequency": n, "percentage": pct} for name, n, pct in rows}
    doc["goals_per_match"] = s.goals_per_match
    table = [(name, n, f"{pct:.2f}") for name, n, pct in rows]
    table.append(("goals_per_match", f"{s.goals_per_match:.2f}", ""))
    _emit(args, ("variable", "frequency", "percentage"), table, doc)
    return 0


def _curve_table(curve, mode_label=None):
    for k in range(len(curve.times)):
        row = [report._g(curve.times[k]), report._g(curve.estimates[k]), report._g(curve.variances[k]),
               report._g(curve.ci_lower[k]), report._g(curve.ci_upper[k])]
        if hasattr(curve, "n_risk"):
            row += [int(curve.n_risk[k]), int(curve.n_event[k])]
        yield ([mode_label] if mode_label else []) + row


def cmd_km(args) -> int:
    ds = _load(args.input, args.name)
    modes = sorted(args.modes) if args.modes else list(GoalMode)
    rows, doc = [], {}
    for m in modes:
        curve = fit_km(restrict_to_mode(ds, m), args.confidence)
        rows.extend(_curve_table(curve, m.slug))
        doc[m.slug] = report._curve_json(curve)
    _emit(args, ("mode",) + report.CURVE_COLUMNS, rows, doc)
    return 0


def cmd_cfm(args) -> int:
    ds = _load(args.input, args.name)
    curve = fit_cfm(ds, _cfm_config(args))
    log.info("modes combined: %s", ", ".join(m.slug for m in curve.per_mode))
    doc = report._curve_json(curve, with_counts=False)
    doc["modes"] = [m.slug for m in curve.per_mode]
    _emit(args, report.CFM_COLUMNS, list(_curve_table(curve)), doc)
    return 0


def cmd_logrank(args) -> int:
    ds_a, ds_b = _load(args.input_a), _load(args.input_b)
    rows = report._logrank_rows(ds_a, ds_b, _cfm_config(args))
    table, doc = [], []
    for row in rows:
        r = row.result
        if r is None:
            table.append([row.mode.slug, row.status, "", "", "", "", "", ""])
        else:
            table.append([row.mode.slug, row.status, report._g(r.chi_square), r.degrees_freedom,
                          report._g(r.p_value), report._g(r.observed_a), report._g(r.expected_a),
                          report._g(r.variance)])
        doc.append({"mode": row.mode.slug, "status": row.status, "reason": row.reason,
                    "result": None if r is None else vars(r)})
    _emit(args, report.LOGRANK_COLUMNS, table, doc)
    return 0


def cmd_points(args) -> int:
    ha = minute_histogram(_load(args.input_a))
    hb = minute_histogram(_load(args.input_b))
    pts = points_comparison(ha, hb, normalize=args.normalize)
    table = [[s.label, s.points_a, s.points_b, s.draws] for s in pts.segments]
    table.append(["total", pts.points_a_total, pts.points_b_total, pts.draws_total])
    doc = [dict(zip(("segment", "points_a", "points_b", "draws"), r)) for r in table]
    _emit(args, ("segment", "points_a", "points_b", "draws"), table, doc)
    return 0


def cmd_report(args) -> int:
    bundle = report.run_pipeline(args.input_a, args.input_b, _cfm_config(args),
                                 name_a=args.name_a, name_b=args.name_b, grid=args.grid)
    paths = report.export_bundle(bundle, args.out, args.format)
    for row in bundle.logrank_rows:
        if row.result is None:
            log.info("log-rank %s: %s", row.mode.slug, row.reason)
    ov = bundle.overlap
    print(f"CFM interval overlap on {ov.fraction_overlapping:.1%} of grid: {ov.verdict.value}")
    print(f"wrote {len(paths)} files to {args.out}")
    return 0


def cmd_fixture(args) -> int:
    spec = PUBLISHED_SPECS[args.player]
    if args.seed is not None:
        spec = replace(spec, seed=args.seed)
    ds = generate_fixture(spec)
    write_csv(ds, args.out)
    print(f"wrote {len(ds.observations)} records for {ds.player_name} to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="goalrel", description="Goal-scoring reliability analysis.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="Log progress to stderr.")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, help):
        return sub.add_parser(name, help=help, parents=[common])

    def single(p):
        p.add_argument("--input", required=True, help="Duration CSV file.")
        p.add_argument("--name", help="Player name (default: file stem).")

    def pair(p):
        p.add_argument("--input-a", required=True)
        p.add_argument("--input-b", required=True)

    def output(p, default_format="csv"):
        p.add_argument("--format", choices=("csv", "json"), default=default_format)
        p.add_argument("--out", help="Output file (default: stdout).")

    def selection(p):
        p.add_argument("--modes", type=parse_mode_list, help="Comma list of mode names or codes 1-6.")
        p.add_argument("--min-events", type=_non_negative_int, default=DEFAULT_MIN_EVENTS,
                       help="Minimum goals for a mode to be analysed (default: %(default)s).")

    def confidence(p):
        p.add_argument("--confidence", type=_confidence, default=0.95)

    p = command("validate", "Check a data file.")
    single(p)
    p.set_defaults(func=cmd_validate)

    p = command("summarize", "Descriptive statistics of one player.")
    single(p)
    output(p)
    p.set_defaults(func=cmd_summarize)

    p = command("km", "Per-mode reliability curves.")
    single(p)
    p.add_argument("--modes", type=parse_mode_list)
    confidence(p)
    output(p)
    p.set_defaults(func=cmd_km)

    p = command("cfm", "Combined reliability over the selected modes.")
    single(p)
    selection(p)
    confidence(p)
    output(p)
    p.set_defaults(func=cmd_cfm)

    p = command("logrank", "Per-mode log-rank tests of two players.")
    pair(p)
    selection(p)
    output(p)
    p.set_defaults(func=cmd_logrank)

    p = command("points", "Minute-by-minute superiority points.")
    pair(p)
    p.add_argument("--normalize", action="store_true", help="Compare goals per game played.")
    output(p)
    p.set_defaults(func=cmd_points)

    p = command("report", "Full two-player pipeline with file export.")
    pair(p)
    p.add_argument("--name-a")
    p.add_argument("--name-b")
    selection(p)
    confidence(p)
    p.add_argument("--grid", type=parse_grid, default=None, help="Overlap grid (default: 1..120).")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", required=True, help="Output directory.")
    p.set_defaults(func=cmd_report)

    p = command("fixture", "Write a synthetic dataset pinned to published totals.")
    p.add_argument("--player", choices=sorted(PUBLISHED_SPECS), required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_fixture)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (IngestError, AnalysisError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
