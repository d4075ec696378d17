"""Independent reference computations used by the tests.

Nothing here imports the package's estimators; every function is a literal,
slow transcription of the textbook definition.
"""

import math
import random
from collections import Counter


def km_literal(durations, events, t):
    """Product over distinct event times t_j <= t of (1 - r_j / n_j)."""
    value = 1.0
    for tj in sorted({d for d, e in zip(durations, events) if e}):
        if tj > t:
            break
        n = sum(1 for d in durations if d >= tj)
        r = sum(1 for d, e in zip(durations, events) if e and d == tj)
        value *= 1.0 - r / n
    return value


def greenwood_literal(durations, events, t):
    r_hat = km_literal(durations, events, t)
    if r_hat == 0.0:
        return 0.0
    total = 0.0
    for tj in sorted({d for d, e in zip(durations, events) if e}):
        if tj > t:
            break
        n = sum(1 for d in durations if d >= tj)
        r = sum(1 for d, e in zip(durations, events) if e and d == tj)
        total += r / (n * (n - r))
    return r_hat * r_hat * total


def logit_band_literal(r, var, z):
    """The two closed-form bound expressions, written out as printed."""
    expo = math.exp(z * math.sqrt(var) / (r * (1 - r)))
    lower = r / (r + (1 - r) * expo)
    upper = r / (r + (1 - r) / expo)
    return lower, upper


def chi2_1df_tail_quadrature(x):
    """P(chi2_1 > x) by numerical integration of the density."""
    from scipy.integrate import quad

    def density(u):
        return u ** -0.5 * math.exp(-u / 2) / math.sqrt(2 * math.pi)

    if x == 0:
        return 1.0
    head, _ = quad(density, 0, x, limit=200)
    return 1.0 - head


def log_rank_tables(dur_a, ev_a, dur_b, ev_b):
    """O_a, E_a, V summed over per-time 2x2 tables, built record by record."""
    records = [(d, e, "a") for d, e in zip(dur_a, ev_a)] + [(d, e, "b") for d, e in zip(dur_b, ev_b)]
    o = e_sum = v = 0.0
    for t in sorted({d for d, e, _ in records if e}):
        at_risk = [rec for rec in records if rec[0] >= t]
        n = len(at_risk)
        n_a = sum(1 for rec in at_risk if rec[2] == "a")
        d = sum(1 for rec in at_risk if rec[0] == t and rec[1])
        o += sum(1 for rec in at_risk if rec[0] == t and rec[1] and rec[2] == "a")
        e_sum += d * n_a / n
        if n > 1:
            v += d * (n_a / n) * (1 - n_a / n) * (n - d) / (n - 1)
    return o, e_sum, v


def permutation_pvalue(statistic, durations, events, labels, shuffles, seed):
    """Monte-Carlo label-permutation p-value and its standard error.

    ``statistic(dur_a, ev_a, dur_b, ev_b)`` is recomputed on every shuffle of
    the group labels; the p-value is the share at least as extreme as the
    observed value.
    """
    def split(lab):
        a = [(d, e) for d, e, g in zip(durations, events, lab) if g]
        b = [(d, e) for d, e, g in zip(durations, events, lab) if not g]
        return [x[0] for x in a], [x[1] for x in a], [x[0] for x in b], [x[1] for x in b]

    observed = statistic(*split(labels))
    rng = random.Random(seed)
    lab = list(labels)
    hits = 0
    for _ in range(shuffles):
        rng.shuffle(lab)
        if statistic(*split(lab)) >= observed - 1e-12:
            hits += 1
    p = hits / shuffles
    return p, math.sqrt(p * (1 - p) / shuffles)


def points_bruteforce(counts_a, counts_b):
    """Per-segment (a, b, draw) tallies, one minute at a time."""
    out = []
    for lo, hi in ((1, 45), (46, 90), (91, 120)):
        tally = Counter()
        for minute in range(lo, hi + 1):
            ca, cb = counts_a[minute - 1], counts_b[minute - 1]
            tally["a" if ca > cb else "b" if cb > ca else "draw"] += 1
        out.append((tally["a"], tally["b"], tally["draw"]))
    return out
