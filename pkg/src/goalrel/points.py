"""Per-minute goal counts and the minute-by-minute superiority tally.

For every minute of play the player with more goals at that minute gets a
point; equal counts are a draw.  Minutes are grouped into the first half
(1-45), second half (46-90) and extra time (91-120).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .model import PlayerDataset

N_MINUTES = 120
SEGMENTS = (("1-45", 1, 45), ("46-90", 46, 90), ("91-120", 91, 120))


@dataclass(frozen=True)
class MinuteHistogram:
    """Goal counts for minutes 1..120; ``counts[m - 1]`` is minute ``m``."""

    counts: tuple[int, ...]
    games_played: Optional[int] = None

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        if len(counts) != N_MINUTES:
            raise ValueError(f"expected {N_MINUTES} minute counts, got {len(counts)}")
        if any(c < 0 for c in counts):
            raise ValueError("minute counts must be non-negative")
        object.__setattr__(self, "counts", counts)

    def __getitem__(self, minute: int) -> int:
        if not 1 <= minute <= N_MINUTES:
            raise IndexError(minute)
        return self.counts[minute - 1]

    @property
    def total(self) -> int:
        return sum(self.counts)


def minute_of(t: float) -> int:
    """Clock minute of a time: ``t`` in ``(m - 1, m]`` belongs to minute ``m``."""
    return min(max(math.ceil(t), 1), N_MINUTES)


def minute_histogram(ds: PlayerDataset) -> MinuteHistogram:
    counts = [0] * N_MINUTES
    for o in ds.observations:
        if not o.censored:
            counts[minute_of(o.analysis_minutes) - 1] += 1
    return MinuteHistogram(tuple(counts), games_played=ds.games_played)


@dataclass(frozen=True)
class SegmentPoints:
    label: str
    points_a: int
    points_b: int
    draws: int

    @property
    def length(self) -> int:
        return self.points_a + self.points_b + self.draws

    def percentages(self) -> tuple[float, float, float]:
        n = self.length
        return (100 * self.points_a / n, 100 * self.points_b / n, 100 * self.draws / n)


@dataclass(frozen=True)
class PointsTable:
    segments: tuple[SegmentPoints, ...]

    @property
    def points_a_total(self) -> int:
        return sum(s.points_a for s in self.segments)

    @property
    def points_b_total(self) -> int:
        return sum(s.points_b for s in self.segments)

    @property
    def draws_total(self) -> int:
        return sum(s.draws for s in self.segments)


def points_comparison(a: MinuteHistogram, b: MinuteHistogram, normalize: bool = False) -> PointsTable:
    """Award one point per minute to the player with more goals at that minute.

    With ``normalize=True`` counts are divided by games played before the
    comparison (exact rational arithmetic, so draws still need equality).
    """
    if normalize:
        if not a.games_played or not b.games_played:
            raise ValueError("normalizing needs games_played > 0 on both histograms")
        va = [Fraction(c, a.games_played) for c in a.counts]
        vb = [Fraction(c, b.games_played) for c in b.counts]
    else:
        va, vb = a.counts, b.counts

    segments = []
    for label, lo, hi in SEGMENTS:
        pa = pb = draws = 0
        for m in range(lo - 1, hi):
            if va[m] > vb[m]:
                pa += 1
            elif va[m] < vb[m]:
                pb += 1
            else:
                draws += 1
        segments.append(SegmentPoints(label, pa, pb, draws))
    return PointsTable(tuple(segments))
