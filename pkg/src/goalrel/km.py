"""Product-limit (Kaplan-Meier) reliability estimation.

The reliability ``R(t)`` is the probability that a player has not yet scored
by minute ``t`` of play.  At each distinct event time ``t_j`` with ``r_j``
events among ``n_j`` records still at risk the estimate is multiplied by
``1 - r_j / n_j``.

Ties: events at ``t_j`` are counted against the full risk set, and records
censored at ``t_j`` are still part of that risk set (they leave afterwards).

Variance uses Greenwood's formula and the confidence band is the logit
transform

    lower = R / (R + (1 - R) * exp(w)),   upper = R / (R + (1 - R) / exp(w)),
    w = z * sqrt(Var) / (R * (1 - R)).

``z`` is the two-sided standard-normal quantile of the confidence level
(1.959964 at 95%, often rounded to 1.96).
"""

from __future__ import annotations

import math
from itertools import groupby
from operator import itemgetter
from dataclasses import dataclass
from statistics import NormalDist

import numpy as np

from .model import ReliabilityCurve


@dataclass(frozen=True)
class KMInput:
    """Durations with event flags (True = event, False = right-censored)."""

    durations: tuple[float, ...]
    event_flags: tuple[bool, ...]

    def __post_init__(self):
        durations = tuple(float(d) for d in self.durations)
        flags = tuple(bool(f) for f in self.event_flags)
        if len(durations) != len(flags):
            raise ValueError(
                f"durations ({len(durations)}) and event_flags ({len(flags)}) differ in length"
            )
        if any(not d > 0 or not math.isfinite(d) for d in durations):
            raise ValueError("all durations must be positive and finite")
        object.__setattr__(self, "durations", durations)
        object.__setattr__(self, "event_flags", flags)

    def __len__(self) -> int:
        return len(self.durations)

    @property
    def n_events(self) -> int:
        return sum(self.event_flags)


def z_value(confidence: float) -> float:
    """Two-sided standard-normal quantile for ``confidence``."""
    if not 0 < confidence < 1:
        raise ValueError(f"confidence must lie in (0, 1), got {confidence}")
    return NormalDist().inv_cdf((1 + confidence) / 2)


def greenwood_variance(estimates, n_risk, n_event) -> np.ndarray:
    """Greenwood variance ``R(t)^2 * sum_{t_j <= t} r_j / (n_j (n_j - r_j))``.

    Once the risk set is exhausted (``n_j == r_j``) the estimate is exactly 0
    and the variance is reported as 0 from that time on.
    """
    out = []
    total = 0.0
    exhausted = False
    for est, n, r in zip(estimates, n_risk, n_event):
        exhausted = exhausted or n == r
        if exhausted:
            out.append(0.0)
            continue
        total += r / (n * (n - r))
        out.append(est * est * total)
    return np.array(out, dtype=float)


def ci_bounds(estimate: float, variance: float, confidence: float = 0.95) -> tuple[float, float]:
    """Logit-transformed confidence interval for one reliability value.

    Boundary estimates (0 or 1) and zero variance give the degenerate
    interval ``(estimate, estimate)``.
    """
    if variance < 0:
        raise ValueError(f"variance must be non-negative, got {variance}")
    return _band(float(estimate), float(variance), z_value(confidence))


def ci_band(estimates, variances, confidence: float = 0.95) -> tuple[np.ndarray, np.ndarray]:
    """:func:`ci_bounds` applied elementwise; returns ``(lower, upper)`` arrays."""
    z = z_value(confidence)
    lower, upper = [], []
    for est, var in zip(np.asarray(estimates, dtype=float).tolist(), np.asarray(variances, dtype=float).tolist()):
        if var < 0:
            raise ValueError(f"variance must be non-negative, got {var}")
        lo, hi = _band(est, var, z)
        lower.append(lo)
        upper.append(hi)
    return np.array(lower, dtype=float), np.array(upper, dtype=float)


def _band(estimate: float, variance: float, z: float) -> tuple[float, float]:
    if estimate <= 0.0 or estimate >= 1.0 or variance == 0.0:
        return estimate, estimate
    w = z * math.sqrt(variance) / (estimate * (1.0 - estimate))
    # logit(R) -/+ w mapped back; numerically the same as the ratio form
    # but free of overflow for large w
    logit = math.log(estimate) - math.log1p(-estimate)
    # clamp away last-ulp round-off from the logit round trip
    return min(_expit(logit - w), estimate), max(_expit(logit + w), estimate)


def _expit(x: float) -> float:
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def fit_km(data: KMInput, confidence: float = 0.95) -> ReliabilityCurve:
    """Fit the product-limit reliability curve.

    Parameters
    ----------
    data : KMInput
        Durations and event flags; must hold at least one record.
    confidence : float, optional (default: 0.95)
        Confidence level of the pointwise band.

    Returns
    -------
    ReliabilityCurve
        One entry per distinct duration that carries at least one event.
        With no events at all the curve is empty and evaluates to 1.
    """
    if len(data) == 0:
        raise ValueError("cannot fit a reliability curve to zero records")
    z_value(confidence)

    # one pass over the records sorted by duration; data sizes here are small
    # enough that plain Python beats per-call numpy overhead
    times, n_risk, n_event, estimates = [], [], [], []
    at_risk = len(data)
    estimate = 1.0
    for t, group in groupby(sorted(zip(data.durations, data.event_flags)), key=itemgetter(0)):
        flags = [f for _, f in group]
        r = sum(flags)
        if r:
            # an exhausted risk set gives exactly zero
            estimate = 0.0 if r == at_risk else estimate * (1.0 - r / at_risk)
            times.append(t)
            n_risk.append(at_risk)
            n_event.append(r)
            estimates.append(estimate)
        at_risk -= len(flags)

    variances = greenwood_variance(estimates, n_risk, n_event)
    lower, upper = ci_band(estimates, variances, confidence)
    return ReliabilityCurve(
        times=times,
        estimates=estimates,
        variances=variances,
        ci_lower=lower,
        ci_upper=upper,
        n_risk=n_risk,
        n_event=n_event,
        n_total=len(data),
        confidence=confidence,
    )
