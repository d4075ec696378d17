"""Reading and writing duration files, and synthetic datasets.

File format (UTF-8, header required)::

    match_id,season,minute,censored,mode,raw_minute_label

``censored`` is 1 for a goalless game (the row records minutes played) and 0
for a goal (the row records the minute it was scored).  ``mode`` is the goal
code 1..6 or a mode name, blank on censored rows.  ``raw_minute_label`` keeps
the original clock notation such as ``45+2``.
"""

from __future__ import annotations

import csv
import io
import logging
import os
import random
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from .model import MAX_MINUTE, GoalMode, Observation, PlayerDataset, validate_dataset

log = logging.getLogger(__name__)

HEADER = ("match_id", "season", "minute", "censored", "mode", "raw_minute_label")


class IngestError(ValueError):
    """A data file could not be turned into a valid dataset."""

    def __init__(self, message: str, path=None, row: Optional[int] = None,
                 field: Optional[str] = None, errors: Sequence["IngestError"] = ()):
        self.path = None if path is None else str(path)
        self.row = row
        self.field = field
        self.errors = list(errors)
        self.message = message
        super().__init__(self._render())

    def _render(self) -> str:
        parts = []
        if self.path:
            parts.append(self.path)
        if self.row is not None:
            parts.append(f"row {self.row}")
        if self.field:
            parts.append(f"field {self.field!r}")
        prefix = ": ".join(parts)
        text = f"{prefix}: {self.message}" if prefix else self.message
        if self.errors:
            text += "".join(f"\n  {e}" for e in self.errors)
        return text


@dataclass(frozen=True)
class IngestConfig:
    input_path: str
    player_name: Optional[str] = None
    strict: bool = True

    def __post_init__(self):
        if not str(self.input_path):
            raise ValueError("input_path must be non-empty")


def _parse_row(values, path, rownum):
    if len(values) != len(HEADER):
        raise IngestError(f"expected {len(HEADER)} columns, got {len(values)}", path, rownum, "row")
    match_id, season, minute, censored, mode, label = (v.strip() for v in values)
    if not match_id:
        raise IngestError("empty match id", path, rownum, "match_id")
    try:
        duration = float(minute)
    except ValueError:
        raise IngestError(f"non-numeric minute {minute!r}", path, rownum, "minute") from None
    if not 0 < duration <= MAX_MINUTE:
        raise IngestError(f"minute {minute} outside (0, {MAX_MINUTE:g}]", path, rownum, "minute")
    if censored not in ("0", "1"):
        raise IngestError(f"censored must be 0 or 1, got {censored!r}", path, rownum, "censored")
    is_censored = censored == "1"
    goal_mode = None
    if mode:
        try:
            goal_mode = GoalMode.parse(mode)
        except ValueError:
            raise IngestError(f"unknown mode {mode!r}", path, rownum, "mode") from None
    if is_censored and goal_mode is not None:
        raise IngestError("censored row carries a mode", path, rownum, "mode")
    if not is_censored and goal_mode is None:
        raise IngestError("goal row has no mode", path, rownum, "mode")
    return Observation(match_id, season, duration, is_censored, goal_mode, label or None)


def read_csv_text(text: str, player_name: str, path=None, strict: bool = True) -> PlayerDataset:
    """Parse file contents; see :func:`load_csv`."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise IngestError("file is empty, header row required", path, 1, "header") from None
    if header and header[0].startswith("\ufeff"):
        header[0] = header[0][1:]
    if tuple(h.strip() for h in header) != HEADER:
        raise IngestError(f"header must be {','.join(HEADER)}", path, 1, "header")

    errors: list[IngestError] = []
    observations: list[Observation] = []
    rownums: list[int] = []
    for rownum, values in enumerate(reader, start=2):
        if not values or all(not v.strip() for v in values):
            continue
        try:
            observations.append(_parse_row(values, path, rownum))
            rownums.append(rownum)
        except IngestError as exc:
            if strict:
                raise
            errors.append(exc)

    scoring = {o.match_id for o in observations if not o.censored}
    censored_seen: dict[str, int] = {}
    for obs, rownum in zip(observations, rownums):
        if not obs.censored:
            continue
        exc = None
        if obs.match_id in censored_seen:
            exc = IngestError(
                f"duplicate censored record for match {obs.match_id} (first at row {censored_seen[obs.match_id]})",
                path, rownum, "match_id",
            )
        elif obs.match_id in scoring:
            exc = IngestError(
                f"censored record for match {obs.match_id}, which has goals", path, rownum, "censored"
            )
        else:
            censored_seen[obs.match_id] = rownum
        if exc is not None:
            if strict:
                raise exc
            errors.append(exc)

    if errors:
        raise IngestError(f"{len(errors)} invalid row(s)", path, errors=errors)

    all_matches = {o.match_id for o in observations}
    ds = PlayerDataset(player_name, tuple(observations), len(all_matches), len(scoring))
    problems = validate_dataset(ds)
    if problems:
        raise IngestError("; ".join(str(p) for p in problems), path)
    return ds


def load_csv(cfg: IngestConfig) -> PlayerDataset:
    """Load a duration file into a validated :class:`PlayerDataset`.

    Row order is preserved.  ``games_played`` is the number of distinct match
    ids and ``games_with_goal`` the number of those with at least one goal.
    With ``strict=False`` every bad row is collected and reported together.
    """
    path = cfg.input_path
    name = cfg.player_name or os.path.splitext(os.path.basename(path))[0]
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            text = fh.read()
    except FileNotFoundError:
        raise IngestError("file not found", path) from None
    except UnicodeDecodeError as exc:
        raise IngestError(f"not valid UTF-8 ({exc.reason})", path) from None
    ds = read_csv_text(text, name, path=path, strict=cfg.strict)
    log.debug("loaded %d records (%d games) from %s", len(ds.observations), ds.games_played, path)
    return ds


def format_minute(value: float) -> str:
    value = float(value)
    return str(int(value)) if value.is_integer() else repr(value)


def dataset_to_csv(ds: PlayerDataset) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(HEADER)
    for o in ds.observations:
        writer.writerow([
            o.match_id,
            o.season,
            format_minute(o.duration_minutes),
            "1" if o.censored else "0",
            "" if o.mode is None else str(int(o.mode)),
            o.raw_minute_label or "",
        ])
    return buf.getvalue()


def write_csv(ds: PlayerDataset, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(dataset_to_csv(ds))


def _default_seasons(first: int = 2002, last: int = 2020) -> tuple[str, ...]:
    return tuple(f"{y}-{(y + 1) % 100:02d}" for y in range(first, last + 1))


@dataclass(frozen=True)
class FixtureSpec:
    """Marginal counts a synthetic dataset must hit exactly.

    Goal minutes come from ``goal_minute_distribution`` (minute -> weight) or
    uniformly from 1..90.  Goalless games last ``censored_minute_distribution``
    minutes, or 90 when no distribution is given.
    """

    games_played: int
    games_with_goal: int
    goals_by_mode: Mapping[GoalMode, int]
    goal_minute_distribution: Optional[Mapping[int, float]] = None
    seed: int = 0
    player_name: str = "fixture"
    censored_minute_distribution: Optional[Mapping[int, float]] = None
    seasons: tuple[str, ...] = field(default_factory=_default_seasons)

    @property
    def total_goals(self) -> int:
        return sum(self.goals_by_mode.values())


def _check_feasible(spec: FixtureSpec) -> None:
    if spec.games_played < 0 or spec.games_with_goal < 0:
        raise ValueError("game counts must be non-negative")
    if spec.games_with_goal > spec.games_played:
        raise ValueError(
            f"games_with_goal ({spec.games_with_goal}) exceeds games_played ({spec.games_played})"
        )
    if any(c < 0 for c in spec.goals_by_mode.values()):
        raise ValueError("goal counts must be non-negative")
    goals = spec.total_goals
    if goals < spec.games_with_goal:
        raise ValueError(f"{goals} goals cannot cover {spec.games_with_goal} scoring games")
    if goals > 0 and spec.games_with_goal == 0:
        raise ValueError("goals present but no scoring games")
    for dist in (spec.goal_minute_distribution, spec.censored_minute_distribution):
        if dist is None:
            continue
        if not dist or any(not 1 <= int(m) <= MAX_MINUTE for m in dist) or sum(dist.values()) <= 0:
            raise ValueError("minute distributions need minutes in 1..120 and positive total weight")
    if not spec.seasons:
        raise ValueError("at least one season label is required")


def _sampler(rng: random.Random, dist: Optional[Mapping[int, float]], default):
    if dist is None:
        return default
    minutes = sorted(int(m) for m in dist)
    weights = [float(dist[m]) for m in minutes]
    return lambda: rng.choices(minutes, weights)[0]


def generate_fixture(spec: FixtureSpec) -> PlayerDataset:
    """Deterministic synthetic dataset matching ``spec``'s marginals exactly."""
    _check_feasible(spec)
    rng = random.Random(spec.seed)
    goal_minute = _sampler(rng, spec.goal_minute_distribution, lambda: rng.randint(1, 90))
    idle_minutes = _sampler(rng, spec.censored_minute_distribution, lambda: 90)

    goals_per_game = [1] * spec.games_with_goal
    for _ in range(spec.total_goals - spec.games_with_goal):
        goals_per_game[rng.randrange(spec.games_with_goal)] += 1
    modes = [GoalMode.parse(m) for m, c in sorted(spec.goals_by_mode.items()) for _ in range(c)]
    rng.shuffle(modes)

    outcomes = [True] * spec.games_with_goal + [False] * (spec.games_played - spec.games_with_goal)
    rng.shuffle(outcomes)

    width = max(4, len(str(spec.games_played)))
    n_seasons = len(spec.seasons)
    observations = []
    next_scoring = 0
    for g, scored in enumerate(outcomes):
        match_id = f"M{g + 1:0{width}d}"
        season = spec.seasons[g * n_seasons // max(spec.games_played, 1)]
        if not scored:
            observations.append(Observation(match_id, season, float(idle_minutes()), True))
            continue
        k = goals_per_game[next_scoring]
        next_scoring += 1
        for minute in sorted(goal_minute() for _ in range(k)):
            observations.append(Observation(match_id, season, float(minute), False, modes.pop()))

    return PlayerDataset(spec.player_name, tuple(observations), spec.games_played, spec.games_with_goal)


def _by_code(counts: Sequence[int]) -> dict[GoalMode, int]:
    return {GoalMode(i + 1): c for i, c in enumerate(counts)}


# published career totals, 2002-03 to 2020-21
RONALDO_SPEC = FixtureSpec(
    games_played=1089,
    games_with_goal=525,
    goals_by_mode=_by_code([137, 136, 57, 11, 303, 143]),
    seed=7,
    player_name="Cristiano Ronaldo",
)
MESSI_SPEC = FixtureSpec(
    games_played=941,
    games_with_goal=492,
    goals_by_mode=_by_code([99, 28, 57, 1, 92, 477]),
    seed=10,
    player_name="Lionel Messi",
    seasons=_default_seasons(2004, 2020),
)

PUBLISHED_SPECS = {"ronaldo": RONALDO_SPEC, "messi": MESSI_SPEC}
