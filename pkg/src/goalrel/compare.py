"""Two-sample comparison of reliability curves.

``log_rank`` is the Mantel-Haenszel log-rank test with one degree of freedom.
``ci_overlap`` checks, on a grid of minutes, whether the pointwise confidence
intervals of two curves overlap; if they overlap everywhere the difference is
read as not significant.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .km import KMInput
from .model import InsufficientDataError, ReliabilityCurve, step_values

DEFAULT_GRID = tuple(float(m) for m in range(1, 121))


@dataclass(frozen=True)
class LogRankResult:
    chi_square: float
    degrees_freedom: int
    p_value: float
    observed_a: float
    expected_a: float
    variance: float


def chi_square_1df_pvalue(x: float) -> float:
    """Upper tail ``P(chi2_1 > x) = 2 (1 - Phi(sqrt(x))) = erfc(sqrt(x / 2))``."""
    if x < 0 or math.isnan(x):
        raise ValueError(f"chi-square statistic must be non-negative, got {x}")
    return math.erfc(math.sqrt(x / 2.0))


def log_rank(a: KMInput, b: KMInput) -> LogRankResult:
    """Log-rank test of two samples.

    At every distinct pooled event time the 2x2 table of events versus records
    at risk is formed; observed and expected events of sample ``a`` and the
    hypergeometric variance are summed over those times.

    Raises
    ------
    InsufficientDataError
        If either sample is empty or the pooled data hold no events.
    """
    if len(a) == 0 or len(b) == 0:
        raise InsufficientDataError("log-rank test needs at least one record per group")
    dur = np.concatenate([np.asarray(a.durations, float), np.asarray(b.durations, float)])
    ev = np.concatenate([np.asarray(a.event_flags, bool), np.asarray(b.event_flags, bool)])
    in_a = np.zeros(len(dur), dtype=bool)
    in_a[: len(a)] = True
    if not ev.any():
        raise InsufficientDataError("no events in the pooled data")

    observed = expected = variance = 0.0
    for t in np.unique(dur[ev]):
        risk = dur >= t
        n = int(risk.sum())
        n_a = int((risk & in_a).sum())
        hit = ev & (dur == t)
        d = int(hit.sum())
        observed += int((hit & in_a).sum())
        frac = n_a / n
        expected += d * frac
        if n > 1:
            variance += d * frac * (1.0 - frac) * (n - d) / (n - 1)

    diff = observed - expected
    if variance == 0.0:
        # V == 0 forces every table to be degenerate, where O == E
        assert abs(diff) < 1e-9, (observed, expected)
        chi = 0.0
    else:
        chi = diff * diff / variance
    return LogRankResult(
        chi_square=chi,
        degrees_freedom=1,
        p_value=chi_square_1df_pvalue(chi),
        observed_a=float(observed),
        expected_a=float(expected),
        variance=float(variance),
    )


class Verdict(str, enum.Enum):
    NotSignificantlyDifferent = "NotSignificantlyDifferent"
    Different = "Different"


@dataclass(frozen=True)
class OverlapVerdict:
    grid: tuple[float, ...]
    overlap_flags: tuple[bool, ...]
    fraction_overlapping: float
    verdict: Verdict


def ci_overlap(
    a: ReliabilityCurve,
    b: ReliabilityCurve,
    grid: Optional[Iterable[float]] = None,
    half_margin: bool = False,
) -> OverlapVerdict:
    """Pointwise confidence-interval overlap of two curves.

    By default two intervals overlap when they share at least one point.  With
    ``half_margin=True`` the stricter rule is used: the overlap must be at
    least half of the average margin of error (half-width) of the two
    intervals.
    """
    grid = DEFAULT_GRID if grid is None else tuple(float(t) for t in grid)
    if not grid:
        raise ValueError("evaluation grid is empty")
    if min(grid) < 0:
        raise ValueError("grid times must be non-negative")

    la, ua = _bands(a, grid)
    lb, ub = _bands(b, grid)
    shared = np.minimum(ua, ub) - np.maximum(la, lb)
    if half_margin:
        margin = ((ua - la) / 2 + (ub - lb) / 2) / 2
        flags = shared >= margin / 2
    else:
        flags = shared >= 0
    flags = tuple(bool(f) for f in flags)
    return OverlapVerdict(
        grid=grid,
        overlap_flags=flags,
        fraction_overlapping=sum(flags) / len(flags),
        verdict=Verdict.NotSignificantlyDifferent if all(flags) else Verdict.Different,
    )


def _bands(curve, grid):
    return step_values(curve.times, curve.ci_lower, grid), step_values(curve.times, curve.ci_upper, grid)
