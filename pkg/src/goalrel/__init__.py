"""Goal-scoring reliability of football players from censored minute data."""

from .cfm import CFMConfig, CFMCurve, fit_cfm, restrict_to_mode, select_modes
from .compare import LogRankResult, OverlapVerdict, Verdict, chi_square_1df_pvalue, ci_overlap, log_rank
from .descriptives import SummaryTable, summarize
from .ingest import FixtureSpec, IngestConfig, IngestError, generate_fixture, load_csv, write_csv
from .km import KMInput, ci_bounds, fit_km, greenwood_variance
from .model import (
    AnalysisError,
    GoalMode,
    InsufficientDataError,
    Observation,
    PlayerDataset,
    ReliabilityCurve,
    evaluate_curve,
    validate_dataset,
)
from .points import MinuteHistogram, PointsTable, minute_histogram, points_comparison
from .report import ReportBundle, export_bundle, load_bundle, run_pipeline

__version__ = "0.1.0"
