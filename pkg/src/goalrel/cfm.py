"""Competing failure modes: one reliability curve per way of scoring, combined
by multiplication.

For a given mode every record is kept; a record is an event only if it is a
goal scored that way.  Goals scored another way are censored at their minute.
The combined reliability is the product of the per-mode curves, and its
variance is propagated on the log scale assuming independent modes:

    Var(ln R_cfm) = sum_i Var(R_i) / R_i^2,   Var(R_cfm) = R_cfm^2 * Var(ln R_cfm).

The combined band applies the same logit transform as the per-mode band.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

import numpy as np

from .km import KMInput, ci_band, fit_km, z_value
from .model import AnalysisError, GoalMode, PlayerDataset, ReliabilityCurve, _frozen, step_values

DEFAULT_MIN_EVENTS = 20


@dataclass(frozen=True)
class CFMConfig:
    included_modes: Optional[frozenset[GoalMode]] = None
    min_events_per_mode: int = DEFAULT_MIN_EVENTS
    confidence: float = 0.95

    def __post_init__(self):
        if self.included_modes is not None:
            modes = frozenset(GoalMode.parse(m) for m in self.included_modes)
            if not modes:
                raise ValueError("included_modes, when given, must be non-empty")
            object.__setattr__(self, "included_modes", modes)
        if self.min_events_per_mode < 0:
            raise ValueError("min_events_per_mode must be non-negative")
        z_value(self.confidence)


@dataclass(frozen=True, eq=False)
class CFMCurve:
    times: np.ndarray
    estimates: np.ndarray
    variances: np.ndarray
    ci_lower: np.ndarray
    ci_upper: np.ndarray
    per_mode: Mapping[GoalMode, ReliabilityCurve]
    confidence: float = 0.95

    def __post_init__(self):
        for name in ("times", "estimates", "variances", "ci_lower", "ci_upper"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))
        object.__setattr__(self, "per_mode", dict(sorted(self.per_mode.items())))

    def __len__(self) -> int:
        return len(self.times)


def restrict_to_mode(ds: PlayerDataset, mode: GoalMode) -> KMInput:
    """Durations of every record, with events only for goals of ``mode``."""
    mode = GoalMode.parse(mode)
    durations = [o.analysis_minutes for o in ds.observations]
    flags = [(not o.censored) and o.mode == mode for o in ds.observations]
    return KMInput(tuple(durations), tuple(flags))


def any_goal_input(ds: PlayerDataset) -> KMInput:
    """Pooled input where every goal is an event regardless of mode."""
    return KMInput(
        tuple(o.analysis_minutes for o in ds.observations),
        tuple(not o.censored for o in ds.observations),
    )


def select_modes(ds: PlayerDataset, cfg: CFMConfig) -> frozenset[GoalMode]:
    if cfg.included_modes is not None:
        return cfg.included_modes
    counts = ds.mode_counts()
    chosen = frozenset(m for m in GoalMode if counts[m] >= cfg.min_events_per_mode)
    if not chosen:
        raise AnalysisError(
            f"no goal mode of {ds.player_name!r} has at least {cfg.min_events_per_mode} goals"
        )
    return chosen


def combine(per_mode: Mapping[GoalMode, ReliabilityCurve], confidence: float = 0.95) -> CFMCurve:
    """Multiply per-mode curves into one combined curve."""
    if not per_mode:
        raise AnalysisError("nothing to combine")
    curves = list(per_mode.values())
    times = np.unique(np.concatenate([c.times for c in curves] + [np.zeros(0)]))

    estimate = np.ones(len(times))
    log_var = np.zeros(len(times))
    dead = np.zeros(len(times), dtype=bool)
    for c in curves:
        r = step_values(c.times, c.estimates, times)
        v = step_values(c.times, c.variances, times, before=0.0)
        estimate = estimate * r
        zero = r <= 0.0
        dead |= zero
        with np.errstate(divide="ignore", invalid="ignore"):
            log_var += np.where(zero, 0.0, v / np.where(zero, 1.0, r) ** 2)

    variance = np.where(dead, 0.0, estimate**2 * log_var)
    estimate = np.where(dead, 0.0, estimate)
    lower, upper = ci_band(estimate, variance, confidence)
    return CFMCurve(
        times=times,
        estimates=estimate,
        variances=variance,
        ci_lower=lower,
        ci_upper=upper,
        per_mode=per_mode,
        confidence=confidence,
    )


def fit_cfm(ds: PlayerDataset, cfg: Optional[CFMConfig] = None) -> CFMCurve:
    cfg = cfg or CFMConfig()
    modes = select_modes(ds, cfg)
    per_mode = {m: fit_km(restrict_to_mode(ds, m), cfg.confidence) for m in sorted(modes)}
    return combine(per_mode, cfg.confidence)


def evaluate_cfm(curve: CFMCurve, t: float) -> tuple[float, float, float]:
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    est = step_values(curve.times, curve.estimates, [t])[0]
    lo = step_values(curve.times, curve.ci_lower, [t])[0]
    hi = step_values(curve.times, curve.ci_upper, [t])[0]
    return float(est), float(lo), float(hi)


def parse_modes(values: Iterable) -> frozenset[GoalMode]:
    """Parse names or codes (e.g. from a comma list) into a set of modes."""
    return frozenset(GoalMode.parse(v) for v in values)
