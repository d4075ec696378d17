"""Summary statistics of a player's duration records."""

from __future__ import annotations

from dataclasses import dataclass

from .model import AnalysisError, GoalMode, PlayerDataset


@dataclass(frozen=True)
class SummaryTable:
    """Counts and shares of one dataset.

    Percentages are kept at full precision; round only when presenting.
    ``mode_percentages`` are relative to the number of goals, the censoring
    shares to the total number of records and ``games_with_goal_percentage``
    to games played.
    """

    player_name: str
    games_played: int
    censored_count: int
    uncensored_count: int
    total_records: int
    games_with_goal: int
    goals_per_match: float
    mode_counts: dict[GoalMode, int]
    mode_percentages: dict[GoalMode, float]
    censored_percentage: float
    uncensored_percentage: float
    games_with_goal_percentage: float


def summarize(ds: PlayerDataset) -> SummaryTable:
    if ds.games_played < 1 or not ds.observations:
        raise AnalysisError(f"cannot summarize {ds.player_name!r}: no games played")
    censored = ds.n_censored
    goals = ds.n_uncensored
    total = len(ds.observations)
    counts = ds.mode_counts()
    pct = {m: (100.0 * c / goals if goals else 0.0) for m, c in counts.items()}
    return SummaryTable(
        player_name=ds.player_name,
        games_played=ds.games_played,
        censored_count=censored,
        uncensored_count=goals,
        total_records=total,
        games_with_goal=ds.games_with_goal,
        goals_per_match=goals / ds.games_played,
        mode_counts=counts,
        mode_percentages=pct,
        censored_percentage=100.0 * censored / total,
        uncensored_percentage=100.0 * goals / total,
        games_with_goal_percentage=100.0 * ds.games_with_goal / ds.games_played,
    )
