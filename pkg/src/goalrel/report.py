"""End-to-end comparison of two players and export of every table and curve.

Export layout (``<p>`` is a player slug, ``<mode>`` a mode slug such as
``penalty_kick``; the extension is ``.csv`` or ``.json``)::

    summary_a, summary_b     variable,frequency,percentage
    km_<p>_<mode>            time,estimate,variance,ci_lower,ci_upper,n_risk,n_event
    cfm_<p>                  time,estimate,variance,ci_lower,ci_upper
    logrank                  mode,status,chi_square,degrees_freedom,p_value,observed_a,expected_a,variance
    overlap                  time,ci_lower_a,ci_upper_a,ci_lower_b,ci_upper_b,overlap
    histogram                minute,count_a,count_b
    points                   segment,points_a,points_b,draws

CSV numbers carry 6 significant digits; JSON keeps full double precision and
adds ``manifest.json`` so :func:`load_bundle` can rebuild the bundle.
"""

from __future__ import annotations

import csv
import io
import json
import os
import re
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .cfm import CFMConfig, CFMCurve, fit_cfm, restrict_to_mode, select_modes
from .compare import LogRankResult, OverlapVerdict, Verdict, ci_overlap, log_rank
from .descriptives import SummaryTable, summarize
from .ingest import IngestConfig, load_csv
from .km import fit_km
from .model import (
    AnalysisError, GoalMode, InsufficientDataError, PlayerDataset, ReliabilityCurve, step_values,
)
from .points import MinuteHistogram, PointsTable, SegmentPoints, minute_histogram, points_comparison

SLOTS = ("a", "b")
CURVE_COLUMNS = ("time", "estimate", "variance", "ci_lower", "ci_upper", "n_risk", "n_event")
CFM_COLUMNS = CURVE_COLUMNS[:5]
LOGRANK_COLUMNS = (
    "mode", "status", "chi_square", "degrees_freedom", "p_value", "observed_a", "expected_a", "variance",
)


@dataclass(frozen=True)
class LogRankRow:
    """Log-rank outcome for one mode; ``result`` is None when not testable."""

    mode: GoalMode
    result: Optional[LogRankResult]
    reason: str = ""

    @property
    def status(self) -> str:
        return "ok" if self.result is not None else "insufficient_data"


@dataclass(frozen=True, eq=False)
class ReportBundle:
    players: tuple[str, str]
    summaries: tuple[SummaryTable, SummaryTable]
    km_curves: tuple[dict, dict]
    cfm_curves: tuple[CFMCurve, CFMCurve]
    logrank_rows: tuple[LogRankRow, ...]
    overlap: OverlapVerdict
    histograms: tuple[MinuteHistogram, MinuteHistogram]
    points: PointsTable
    config: CFMConfig


def slugify(name: str) -> str:
    slug = re.sub(r"[^0-9a-zA-Z]+", "_", name).strip("_").lower()
    return slug or "player"


def _player_slugs(players: Sequence[str]) -> tuple[str, str]:
    a, b = (slugify(p) for p in players)
    if a == b:
        return f"{a}_a", f"{b}_b"
    return a, b


def _logrank_rows(ds_a, ds_b, cfg) -> tuple[LogRankRow, ...]:
    rows = []
    sel_a = _selected(ds_a, cfg)
    sel_b = _selected(ds_b, cfg)
    for mode in GoalMode:
        if mode not in sel_a or mode not in sel_b:
            counts = (ds_a.mode_counts()[mode], ds_b.mode_counts()[mode])
            rows.append(LogRankRow(mode, None, f"too few goals ({counts[0]} vs {counts[1]})"))
            continue
        try:
            result = log_rank(restrict_to_mode(ds_a, mode), restrict_to_mode(ds_b, mode))
        except InsufficientDataError as exc:
            rows.append(LogRankRow(mode, None, str(exc)))
            continue
        rows.append(LogRankRow(mode, result))
    return tuple(rows)


def _selected(ds, cfg) -> frozenset:
    try:
        return select_modes(ds, cfg)
    except AnalysisError:
        return frozenset()


def analyze(ds_a: PlayerDataset, ds_b: PlayerDataset, cfg: Optional[CFMConfig] = None,
            grid: Optional[Iterable[float]] = None) -> ReportBundle:
    """Run every analysis step on two already-loaded datasets."""
    cfg = cfg or CFMConfig()
    datasets = (ds_a, ds_b)
    summaries = tuple(summarize(ds) for ds in datasets)
    km_curves = tuple(
        {m: fit_km(restrict_to_mode(ds, m), cfg.confidence) for m in GoalMode} for ds in datasets
    )
    logrank_rows = _logrank_rows(ds_a, ds_b, cfg)
    cfm_curves = tuple(fit_cfm(ds, cfg) for ds in datasets)
    overlap = ci_overlap(cfm_curves[0], cfm_curves[1], grid)
    histograms = tuple(minute_histogram(ds) for ds in datasets)
    points = points_comparison(*histograms)

    players = (ds_a.player_name, ds_b.player_name)
    return ReportBundle(
        players=players,
        summaries=summaries,
        km_curves=km_curves,
        cfm_curves=cfm_curves,
        logrank_rows=logrank_rows,
        overlap=overlap,
        histograms=histograms,
        points=points,
        config=cfg,
    )


def run_pipeline(path_a, path_b, cfg: Optional[CFMConfig] = None, *, name_a: Optional[str] = None,
                 name_b: Optional[str] = None, grid: Optional[Iterable[float]] = None) -> ReportBundle:
    """Load both files and run :func:`analyze`.

    Ingestion errors propagate as :class:`~goalrel.ingest.IngestError` naming
    file, row and field.  Modes without enough goals become insufficient-data
    log-rank rows instead of failing the run.
    """
    ds_a = load_csv(IngestConfig(str(path_a), name_a))
    ds_b = load_csv(IngestConfig(str(path_b), name_b))
    return analyze(ds_a, ds_b, cfg, grid)


# -- serialisation ---------------------------------------------------------

def _g(x) -> str:
    return format(float(x), ".6g")


def _curve_rows(curve, columns):
    for k in range(len(curve.times)):
        row = [_g(curve.times[k]), _g(curve.estimates[k]), _g(curve.variances[k]),
               _g(curve.ci_lower[k]), _g(curve.ci_upper[k])]
        if len(columns) > 5:
            row += [str(int(curve.n_risk[k])), str(int(curve.n_event[k]))]
        yield row


def _summary_rows(s: SummaryTable):
    yield ["games_played", str(s.games_played), _g(100)]
    yield ["censored", str(s.censored_count), _g(s.censored_percentage)]
    yield ["uncensored", str(s.uncensored_count), _g(s.uncensored_percentage)]
    yield ["total_records", str(s.total_records), _g(100)]
    for m in GoalMode:
        yield [m.slug, str(s.mode_counts[m]), _g(s.mode_percentages[m])]
    yield ["games_with_goal", str(s.games_with_goal), _g(s.games_with_goal_percentage)]
    yield ["goals_per_match", _g(s.goals_per_match), ""]


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _csv_artifacts(bundle: ReportBundle) -> dict[str, str]:
    slugs = _player_slugs(bundle.players)
    files: dict[str, str] = {}
    for slot, summary in zip(SLOTS, bundle.summaries):
        files[f"summary_{slot}.csv"] = _csv_text(("variable", "frequency", "percentage"), _summary_rows(summary))
    for slug, curves in zip(slugs, bundle.km_curves):
        for mode, curve in curves.items():
            files[f"km_{slug}_{mode.slug}.csv"] = _csv_text(CURVE_COLUMNS, _curve_rows(curve, CURVE_COLUMNS))
    for slug, curve in zip(slugs, bundle.cfm_curves):
        files[f"cfm_{slug}.csv"] = _csv_text(CFM_COLUMNS, _curve_rows(curve, CFM_COLUMNS))

    lr = []
    for row in bundle.logrank_rows:
        r = row.result
        if r is None:
            lr.append([row.mode.slug, row.status, "", "", "", "", "", ""])
        else:
            lr.append([row.mode.slug, row.status, _g(r.chi_square), str(r.degrees_freedom), _g(r.p_value),
                       _g(r.observed_a), _g(r.expected_a), _g(r.variance)])
    files["logrank.csv"] = _csv_text(LOGRANK_COLUMNS, lr)

    a, b = bundle.cfm_curves
    grid = bundle.overlap.grid
    bands = [step_values(c.times, arr, grid) for c in (a, b) for arr in (c.ci_lower, c.ci_upper)]
    files["overlap.csv"] = _csv_text(
        ("time", "ci_lower_a", "ci_upper_a", "ci_lower_b", "ci_upper_b", "overlap"),
        ([_g(t), *(_g(band[i]) for band in bands), str(int(f))]
         for i, (t, f) in enumerate(zip(grid, bundle.overlap.overlap_flags))),
    )
    ha, hb = bundle.histograms
    files["histogram.csv"] = _csv_text(
        ("minute", "count_a", "count_b"),
        ([str(m + 1), str(ca), str(cb)] for m, (ca, cb) in enumerate(zip(ha.counts, hb.counts))),
    )
    pts = [[s.label, str(s.points_a), str(s.points_b), str(s.draws)] for s in bundle.points.segments]
    pts.append(["total", str(bundle.points.points_a_total), str(bundle.points.points_b_total),
                str(bundle.points.draws_total)])
    files["points.csv"] = _csv_text(("segment", "points_a", "points_b", "draws"), pts)
    return files


def _curve_json(curve, with_counts=True) -> dict:
    d = {
        "times": [float(x) for x in curve.times],
        "estimates": [float(x) for x in curve.estimates],
        "variances": [float(x) for x in curve.variances],
        "ci_lower": [float(x) for x in curve.ci_lower],
        "ci_upper": [float(x) for x in curve.ci_upper],
        "confidence": curve.confidence,
    }
    if with_counts:
        d["n_risk"] = [int(x) for x in curve.n_risk]
        d["n_event"] = [int(x) for x in curve.n_event]
        d["n_total"] = int(curve.n_total)
    return d


def _summary_json(s: SummaryTable) -> dict:
    return {
        "player_name": s.player_name,
        "games_played": s.games_played,
        "censored_count": s.censored_count,
        "uncensored_count": s.uncensored_count,
        "total_records": s.total_records,
        "games_with_goal": s.games_with_goal,
        "goals_per_match": s.goals_per_match,
        "mode_counts": {m.slug: s.mode_counts[m] for m in GoalMode},
        "mode_percentages": {m.slug: s.mode_percentages[m] for m in GoalMode},
        "censored_percentage": s.censored_percentage,
        "uncensored_percentage": s.uncensored_percentage,
        "games_with_goal_percentage": s.games_with_goal_percentage,
    }


def _json_artifacts(bundle: ReportBundle) -> dict[str, str]:
    slugs = _player_slugs(bundle.players)
    docs: dict[str, object] = {}
    for slot, summary in zip(SLOTS, bundle.summaries):
        docs[f"summary_{slot}.json"] = _summary_json(summary)
    for slug, curves in zip(slugs, bundle.km_curves):
        for mode, curve in curves.items():
            docs[f"km_{slug}_{mode.slug}.json"] = _curve_json(curve)
    for slug, curve in zip(slugs, bundle.cfm_curves):
        doc = _curve_json(curve, with_counts=False)
        doc["modes"] = [m.slug for m in curve.per_mode]
        docs[f"cfm_{slug}.json"] = doc
    docs["logrank.json"] = [
        {"mode": row.mode.slug, "status": row.status, "reason": row.reason,
         "result": None if row.result is None else vars(row.result)}
        for row in bundle.logrank_rows
    ]
    docs["overlap.json"] = {
        "grid": list(bundle.overlap.grid),
        "overlap_flags": list(bundle.overlap.overlap_flags),
        "fraction_overlapping": bundle.overlap.fraction_overlapping,
        "verdict": bundle.overlap.verdict.value,
    }
    docs["histogram.json"] = {
        slot: {"counts": list(h.counts), "games_played": h.games_played}
        for slot, h in zip(SLOTS, bundle.histograms)
    }
    docs["points.json"] = [
        {"label": s.label, "points_a": s.points_a, "points_b": s.points_b, "draws": s.draws}
        for s in bundle.points.segments
    ]
    cfg = bundle.config
    docs["manifest.json"] = {
        "players": list(bundle.players),
        "slugs": list(slugs),
        "config": {
            "included_modes": None if cfg.included_modes is None else sorted(int(m) for m in cfg.included_modes),
            "min_events_per_mode": cfg.min_events_per_mode,
            "confidence": cfg.confidence,
        },
    }
    return {name: json.dumps(doc, indent=1, sort_keys=True) + "\n" for name, doc in docs.items()}


def export_bundle(bundle: ReportBundle, out_dir, format: str = "csv") -> list[str]:
    """Write every artifact to ``out_dir`` and return the written paths."""
    if format == "csv":
        files = _csv_artifacts(bundle)
    elif format == "json":
        files = _json_artifacts(bundle)
    else:
        raise ValueError(f"unknown export format {format!r}")
    out_dir = str(out_dir)
    os.makedirs(out_dir, exist_ok=True)
    if not os.access(out_dir, os.W_OK):
        raise PermissionError(f"output directory {out_dir} is not writable")
    written = []
    for name in sorted(files):
        path = os.path.join(out_dir, name)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(files[name])
        written.append(path)
    return written


def _read_json(out_dir, name):
    with open(os.path.join(out_dir, name), encoding="utf-8") as fh:
        return json.load(fh)


def _curve_from_json(d) -> ReliabilityCurve:
    return ReliabilityCurve(
        times=d["times"], estimates=d["estimates"], variances=d["variances"],
        ci_lower=d["ci_lower"], ci_upper=d["ci_upper"], n_risk=d["n_risk"],
        n_event=d["n_event"], n_total=d["n_total"], confidence=d["confidence"],
    )


def _summary_from_json(d) -> SummaryTable:
    by_slug = {m.slug: m for m in GoalMode}
    return SummaryTable(
        player_name=d["player_name"],
        games_played=d["games_played"],
        censored_count=d["censored_count"],
        uncensored_count=d["uncensored_count"],
        total_records=d["total_records"],
        games_with_goal=d["games_with_goal"],
        goals_per_match=d["goals_per_match"],
        mode_counts={by_slug[k]: v for k, v in d["mode_counts"].items()},
        mode_percentages={by_slug[k]: v for k, v in d["mode_percentages"].items()},
        censored_percentage=d["censored_percentage"],
        uncensored_percentage=d["uncensored_percentage"],
        games_with_goal_percentage=d["games_with_goal_percentage"],
    )


def load_bundle(out_dir) -> ReportBundle:
    """Rebuild a :class:`ReportBundle` from a JSON export."""
    by_slug = {m.slug: m for m in GoalMode}
    manifest = _read_json(out_dir, "manifest.json")
    slugs = manifest["slugs"]
    c = manifest["config"]
    cfg = CFMConfig(
        included_modes=None if c["included_modes"] is None else frozenset(GoalMode(m) for m in c["included_modes"]),
        min_events_per_mode=c["min_events_per_mode"],
        confidence=c["confidence"],
    )
    summaries = tuple(_summary_from_json(_read_json(out_dir, f"summary_{s}.json")) for s in SLOTS)
    km_curves = tuple(
        {m: _curve_from_json(_read_json(out_dir, f"km_{slug}_{m.slug}.json")) for m in GoalMode}
        for slug in slugs
    )
    cfm_curves = []
    for slug, km in zip(slugs, km_curves):
        d = _read_json(out_dir, f"cfm_{slug}.json")
        modes = [by_slug[s] for s in d["modes"]]
        cfm_curves.append(CFMCurve(
            times=d["times"], estimates=d["estimates"], variances=d["variances"],
            ci_lower=d["ci_lower"], ci_upper=d["ci_upper"],
            per_mode={m: km[m] for m in modes}, confidence=d["confidence"],
        ))
    rows = tuple(
        LogRankRow(by_slug[r["mode"]], None if r["result"] is None else LogRankResult(**r["result"]), r["reason"])
        for r in _read_json(out_dir, "logrank.json")
    )
    o = _read_json(out_dir, "overlap.json")
    overlap = OverlapVerdict(
        grid=tuple(o["grid"]), overlap_flags=tuple(o["overlap_flags"]),
        fraction_overlapping=o["fraction_overlapping"], verdict=Verdict(o["verdict"]),
    )
    h = _read_json(out_dir, "histogram.json")
    histograms = tuple(MinuteHistogram(tuple(h[s]["counts"]), h[s]["games_played"]) for s in SLOTS)
    points = PointsTable(tuple(SegmentPoints(**s) for s in _read_json(out_dir, "points.json")))
    return ReportBundle(
        players=tuple(manifest["players"]),
        summaries=summaries,
        km_curves=km_curves,
        cfm_curves=tuple(cfm_curves),
        logrank_rows=rows,
        overlap=overlap,
        histograms=histograms,
        points=points,
        config=cfg,
    )
