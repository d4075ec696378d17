"""Domain types shared by every analysis step.

An :class:`Observation` is one duration record: either the minute a goal was
scored (an event) or the minutes a player spent on the pitch in a goalless
game (a right-censored record).  Durations are counted from the moment the
player entered the pitch.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

MAX_MINUTE = 120.0

_STOPPAGE_RE = re.compile(r"^\s*(\d+)\s*\+\s*(\d+)\s*$")


class AnalysisError(ValueError):
    """Raised when an analysis cannot be carried out on the given data."""


class InsufficientDataError(AnalysisError):
    """Raised when the data hold too few events for the requested analysis."""


class GoalMode(enum.IntEnum):
    """Way a goal was scored, coded 1..6."""

    PenaltyKick = 1
    HeadHeader = 2
    DirectFreeKick = 3
    LongRangeKick = 4
    RightFootedKick = 5
    LeftFootedKick = 6

    @property
    def slug(self) -> str:
        return re.sub(r"(?<!^)(?=[A-Z])", "_", self.name).lower()

    @classmethod
    def parse(cls, value) -> "GoalMode":
        """Accept an integer code, a numeric string or a case-insensitive name.

        Names are matched ignoring case, spaces, dashes and underscores, so
        ``"penalty kick"``, ``"PENALTY_KICK"`` and ``"PenaltyKick"`` all work.
        """
        if isinstance(value, GoalMode):
            return value
        if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
            return cls(int(value))
        text = str(value).strip()
        if text.isdigit():
            return cls(int(text))
        key = re.sub(r"[\s_\-]", "", text).lower()
        for mode in cls:
            if mode.name.lower() == key:
                return mode
        raise ValueError(f"unknown goal mode {value!r}")


def stoppage_base(label: Optional[str]) -> Optional[int]:
    """Return the base minute of a stoppage label such as ``"45+2"``, else None."""
    if not label:
        return None
    m = _STOPPAGE_RE.match(label)
    if m is None:
        return None
    return int(m.group(1))


@dataclass(frozen=True)
class Observation:
    match_id: str
    season: str
    duration_minutes: float
    censored: bool
    mode: Optional[GoalMode] = None
    raw_minute_label: Optional[str] = None

    @property
    def analysis_minutes(self) -> float:
        """Duration used by every analysis: stoppage labels collapse to 45/90."""
        base = stoppage_base(self.raw_minute_label)
        if base is not None:
            return float(base)
        return float(self.duration_minutes)


@dataclass(frozen=True)
class PlayerDataset:
    player_name: str
    observations: tuple[Observation, ...]
    games_played: int
    games_with_goal: int

    def __post_init__(self):
        object.__setattr__(self, "observations", tuple(self.observations))

    @property
    def n_censored(self) -> int:
        return sum(1 for o in self.observations if o.censored)

    @property
    def n_uncensored(self) -> int:
        return sum(1 for o in self.observations if not o.censored)

    def mode_counts(self) -> dict[GoalMode, int]:
        counts = {mode: 0 for mode in GoalMode}
        for o in self.observations:
            if not o.censored and o.mode is not None:
                counts[o.mode] += 1
        return counts


@dataclass(frozen=True)
class Violation:
    """One broken invariant; ``index`` is the record position or None."""

    index: Optional[int]
    field: str
    message: str

    def __str__(self) -> str:
        where = "dataset" if self.index is None else f"record {self.index}"
        return f"{where}: {self.field}: {self.message}"


def validate_dataset(ds: PlayerDataset) -> list[Violation]:
    """Check every record- and dataset-level invariant.

    Returns an empty list for a valid dataset.  Violations are reported, not
    raised, so a caller can show all problems at once.
    """
    out: list[Violation] = []
    for i, obs in enumerate(ds.observations):
        d = obs.duration_minutes
        if not isinstance(d, (int, float, np.number)) or not np.isfinite(d):
            out.append(Violation(i, "duration_minutes", f"not a finite number: {d!r}"))
        elif not 0 < d <= MAX_MINUTE:
            out.append(Violation(i, "duration_minutes", f"{d} outside (0, {MAX_MINUTE:g}]"))
        if obs.censored and obs.mode is not None:
            out.append(Violation(i, "mode", f"censored record carries mode {obs.mode.name}"))
        if not obs.censored and obs.mode is None:
            out.append(Violation(i, "mode", "goal record has no mode"))

    if ds.games_played < 0:
        out.append(Violation(None, "games_played", f"negative: {ds.games_played}"))
    if ds.games_with_goal < 0:
        out.append(Violation(None, "games_with_goal", f"negative: {ds.games_with_goal}"))
    if ds.games_with_goal > ds.games_played:
        out.append(Violation(
            None, "games_with_goal",
            f"{ds.games_with_goal} exceeds games_played {ds.games_played}",
        ))
    expected = ds.games_played - ds.games_with_goal
    if ds.n_censored != expected:
        out.append(Violation(
            None, "observations",
            f"{ds.n_censored} censored records, expected one per goalless game ({expected})",
        ))
    return out


def _frozen(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype).reshape(-1)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ReliabilityCurve:
    """Right-continuous step function fitted at the distinct event times.

    All per-time arrays share the length of ``times`` and are read-only.
    Before the first stored time the curve is 1 with a degenerate interval.
    """

    times: np.ndarray
    estimates: np.ndarray
    variances: np.ndarray
    ci_lower: np.ndarray
    ci_upper: np.ndarray
    n_risk: np.ndarray
    n_event: np.ndarray
    n_total: int
    confidence: float = 0.95

    def __post_init__(self):
        for name in ("times", "estimates", "variances", "ci_lower", "ci_upper"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))
        for name in ("n_risk", "n_event"):
            object.__setattr__(self, name, _frozen(getattr(self, name), dtype=np.int64))
        n = len(self.times)
        for name in ("estimates", "variances", "ci_lower", "ci_upper", "n_risk", "n_event"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"{name} has length {len(getattr(self, name))}, expected {n}")

    def __len__(self) -> int:
        return len(self.times)

    def __call__(self, t):
        return evaluate_curve(self, t)[0]


def evaluate_curve(curve: ReliabilityCurve, t: float) -> tuple[float, float, float]:
    """Return ``(estimate, ci_lower, ci_upper)`` at time ``t``.

    The value is taken at the largest stored time ``<= t``; before the first
    event time the curve is ``(1, 1, 1)``.
    """
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    k = int(np.searchsorted(curve.times, t, side="right")) - 1
    if k < 0:
        return 1.0, 1.0, 1.0
    return float(curve.estimates[k]), float(curve.ci_lower[k]), float(curve.ci_upper[k])


def step_values(times: np.ndarray, values: np.ndarray, at: Sequence[float], before: float = 1.0) -> np.ndarray:
    """Vectorised right-continuous lookup of ``values`` at each point of ``at``."""
    idx = np.searchsorted(times, np.asarray(at, dtype=float), side="right") - 1
    padded = np.concatenate(([before], np.asarray(values, dtype=float)))
    return padded[idx + 1]
