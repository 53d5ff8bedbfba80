#! /usr/bin/env python
########################################################################
# dbarw
# Copyright (C) 2024, the dbarw developers.
# SPDX-License-Identifier: MIT
########################################################################

"""Lyapunov drift of the inversion count and recurrence statistics.

The exact drift of f_cd comes from full transition enumeration.  Three
closed forms cover its parts: the interface-flip part (unweighted, so
the walk contribution is alpha1 times it), the nearest-neighbour
branching part and the long-range branching part.  Their sum must
reproduce the enumeration."""

import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .constants import (CLOSED_FORM_RTOL, DEFAULT_BURN_IN,
                        DEFAULT_EVENT_BUDGET, DRIFT_SLACK,
                        EVENT_LONG_BRANCH, EVENT_RW_LEFT, EVENT_RW_RIGHT,
                        MINUS, PLUS)
from .engine import _enumerate_rates, enumerate_transitions, evolve
from .errors import NoReturnObserved
from .lattice import f_cd, is_careful, to_height
from .rates import pq_view
from .rng import create_rng


logger = logging.getLogger(__name__)


########################################################################
# Generator applied to f_cd.

def generator_parts(model, config):
    """Return the exact drift of f_cd split by transition kind.

    Keys are "rw", "branch" and "long"; each value is the weighted sum
    of rate times the change of f_cd."""
    base = f_cd(config)
    parts = {"rw": [], "branch": [], "long": []}
    for t in enumerate_transitions(model, config):
        if t.kind in (EVENT_RW_LEFT, EVENT_RW_RIGHT):
            key = "rw"
        elif t.kind == EVENT_LONG_BRANCH:
            key = "long"
        else:
            key = "branch"
        parts[key].append(t.rate * (f_cd(t.successor) - base))
    return {k: math.fsum(v) for k, v in parts.items()}


def generator_fcd_exact(model, config):
    """Return (G f_cd)(config) by enumerating every transition."""
    return math.fsum(generator_parts(model, config).values())


def _s_value(config, h):
    """kappa-valued sites left of h minus (1 - kappa)-valued sites
    right of h, for encoded half-integer site h."""
    positions = config.positions
    below = above = 0
    for m in range(len(positions) - 1):
        a, b = positions[m], positions[m + 1]
        if m % 2 == 0:
            below += max(0, min(b, h) - a)
        else:
            above += max(0, b - max(a, h + 1))
    return below - above


def flip_drift_closed_form(model, config):
    """Interface-flip drift of f_cd, without the alpha1 weight.

    Sums (p_h + q_{h+1}) S(h), signed by whether the height at h is
    kappa, over the sites next to a particle."""
    height = to_height(config)
    kappa = config.kappa
    sites = sorted(set(config.positions)
                   | {p - 1 for p in config.positions})
    total = []
    for h in sites:
        rate = pq_view(model, config, h).p + pq_view(model, config, h + 1).q
        if rate == 0:
            continue
        sign = 1 if height.value_at(h) == kappa else -1
        total.append(sign * rate * _s_value(config, h))
    return math.fsum(total)


def excl_drift_closed_form(model, config):
    """Nearest-neighbour branching drift: alpha2 ch [sum b+ - sum b-]."""
    if not model.alpha2:
        return 0.0
    rates = model.branch.bulk_rates(config)
    signed = math.fsum(s * b for s, b in zip(config.signs, rates))
    return model.alpha2 * config.charge * signed


def long_drift_closed_form(model, config):
    """Long-range branching drift: ch sum_l l^2 [sum b+_l - sum b-_l]
    over particles that may branch carefully to distance l."""
    if model.long_range is None:
        return 0.0
    rates = model.long_range.bulk_rates(config)
    terms = []
    for (site, sign), row in zip(config, rates):
        for distance, b in enumerate(row, start=2):
            if b and is_careful(config, site, distance):
                terms.append(sign * distance * distance * b)
    return config.charge * math.fsum(terms)


########################################################################
# Drift audit.

@dataclass
class DriftCase:
    config: object
    count: int
    exact: float
    flip_cf: float
    excl_cf: float
    long_cf: float
    bound: float

    @property
    def ok(self):
        return self.exact <= self.bound + DRIFT_SLACK

    def closed_form(self, alpha1):
        return alpha1 * self.flip_cf + self.excl_cf + self.long_cf

    def to_descriptor(self, alpha1):
        return {"config": self.config.to_literal(), "count": self.count,
                "exact": self.exact, "flip_cf": self.flip_cf,
                "excl_cf": self.excl_cf, "long_cf": self.long_cf,
                "bound": self.bound, "ok": self.ok,
                "consistent": _consistent(self.exact,
                                          self.closed_form(alpha1))}


def _consistent(exact, closed):
    return math.isclose(exact, closed, rel_tol=CLOSED_FORM_RTOL,
                        abs_tol=DRIFT_SLACK)


@dataclass
class DriftReport:
    """Drift of f_cd against C - c|y| (C_bar for long-range models)."""

    model: object
    cases: list = field(default_factory=list)

    @property
    def constants(self):
        m = self.model
        return {"C": m.C, "c": m.c, "C_bar": m.C_bar,
                "s_lower": m.constants.s_lower,
                "d_bar": m.constants.d_bar}

    @property
    def violations(self):
        return [case for case in self.cases if not case.ok]

    @property
    def mismatches(self):
        a = self.model.alpha1
        return [case for case in self.cases
                if not _consistent(case.exact, case.closed_form(a))]

    @property
    def passed(self):
        return not self.violations and not self.mismatches

    def to_descriptor(self):
        a = self.model.alpha1
        return {"constants": self.constants,
                "cases": [case.to_descriptor(a) for case in self.cases],
                "pass": self.passed}


def drift_case(model, config):
    """Evaluate the exact drift, closed forms and bound at config."""
    bound = model.C_bar - model.c * config.count
    return DriftCase(config, config.count,
                     generator_fcd_exact(model, config),
                     flip_drift_closed_form(model, config),
                     excl_drift_closed_form(model, config),
                     long_drift_closed_form(model, config), bound)


def drift_audit(model, sampler, n, rng):
    """Audit the drift bound on n sampled configurations.

    Raises ConstantsInvalidError unless alpha1 s_lower > 2 alpha2 d_bar."""
    model.require_recurrent()
    report = DriftReport(model)
    for _ in range(n):
        report.cases.append(drift_case(model, sampler(rng)))
    logger.info("Drift audit over %d configurations: %d violations, "
                "%d closed-form mismatches", n, len(report.violations),
                len(report.mismatches))
    return report


########################################################################
# Recurrence.

def total_variation(p, q):
    """Total-variation distance of two histograms given as dicts."""
    keys = set(p) | set(q)
    return 0.5 * math.fsum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)


def _overlap(a, b, lo, hi):
    return max(0.0, min(b, hi) - max(a, lo))


def _normalised(weights):
    total = math.fsum(weights.values())
    if total <= 0:
        return {}
    return {k: v / total for k, v in sorted(weights.items())}


def default_grid(horizon):
    """Powers of ten up to horizon, or horizon itself if below 1."""
    grid = []
    t = 1.0
    while t <= horizon:
        grid.append(t)
        t *= 10
    return grid or [horizon]


def cesaro_stable(averages, tolerance=0.1):
    """True if the last two running averages differ by at most
    tolerance, relative to the last."""
    if len(averages) < 2:
        return True
    a, b = averages[-2], averages[-1]
    return abs(b - a) <= tolerance * max(abs(b), 1e-300)


@dataclass
class RecurrenceStats:
    """Statistics of one long run."""

    horizon: float
    burn_in: float
    return_times: list
    first_hit: Optional[float]
    width_histogram: dict
    time_avg_count: float
    width_curve: list
    windows: list
    window_histograms: list
    cesaro: list
    n_events: int

    @property
    def returned(self):
        return self.first_hit is not None

    @property
    def tightness_tv(self):
        if len(self.window_histograms) < 2:
            return None
        return total_variation(self.window_histograms[0],
                               self.window_histograms[1])

    def to_descriptor(self):
        return {"horizon": self.horizon, "burn_in": self.burn_in,
                "return_times": self.return_times,
                "first_hit": self.first_hit,
                "width_histogram": {str(k): v for k, v in
                                    self.width_histogram.items()},
                "time_avg_count": self.time_avg_count,
                "width_curve": self.width_curve,
                "windows": self.windows,
                "tightness_tv": self.tightness_tv,
                "cesaro": self.cesaro, "n_events": self.n_events}


def recurrence_study(model, initial, horizon, rng, burn_in=DEFAULT_BURN_IN,
                     grid=None, windows=None,
                     event_budget=DEFAULT_EVENT_BUDGET):
    """Run once to horizon and collect recurrence statistics.

    :param burn_in: Fraction of horizon if below 1, else a time.
    :param grid: Times at which W(t)/t is recorded.
    :param windows: Two (start, stop) windows for the tightness check.

    Return times are the gaps between successive entries into the
    singleton state.  A run that never enters it emits NoReturnObserved
    as a warning."""
    model.require_recurrent()
    burn = burn_in * horizon if burn_in < 1 else float(burn_in)
    if grid is None:
        grid = default_grid(horizon)
    if windows is None:
        windows = [(0.1 * horizon, 0.5 * horizon), (0.5 * horizon, horizon)]
    checkpoints = [horizon / 2 ** k for k in range(4, -1, -1)]

    weights = {}
    window_weights = [{} for _ in windows]
    checkpoint_area = [0.0] * len(checkpoints)
    area = 0.0
    curve = []
    pending = sorted(grid)
    entries = [0.0] if initial.is_singleton else []

    def interval(config, a, b):
        nonlocal area
        w = config.width
        span = _overlap(a, b, burn, horizon)
        if span:
            weights[w] = weights.get(w, 0.0) + span
            area += config.count * span
        for k, (lo, hi) in enumerate(windows):
            span = _overlap(a, b, lo, hi)
            if span:
                window_weights[k][w] = window_weights[k].get(w, 0.0) + span
        for k, c in enumerate(checkpoints):
            checkpoint_area[k] += config.count * _overlap(a, b, 0.0, c)
        while pending and pending[0] < b:
            g = pending.pop(0)
            if g > 0:
                curve.append((g, w / g))

    t = 0.0
    config = initial
    n = 0
    for event in evolve(model, initial, rng, horizon, event_budget):
        interval(config, t, event.time)
        if event.configuration.is_singleton and not config.is_singleton:
            entries.append(event.time)
        t = event.time
        config = event.configuration
        n += 1
    interval(config, t, math.inf)

    if not entries:
        warnings.warn(NoReturnObserved(
            f"No visit to the singleton state before t={horizon!r}"))
    span = horizon - burn
    stats = RecurrenceStats(
        horizon=horizon, burn_in=burn,
        return_times=list(np.diff(entries)) if len(entries) > 1 else [],
        first_hit=entries[0] if entries else None,
        width_histogram=_normalised(weights),
        time_avg_count=area / span if span > 0 else float(config.count),
        width_curve=curve, windows=[list(w) for w in windows],
        window_histograms=[_normalised(w) for w in window_weights],
        cesaro=[(c, a / c) for c, a in zip(checkpoints, checkpoint_area)
                if c > 0],
        n_events=n)
    logger.info("Recurrence run to t=%r: %d events, %d singleton entries, "
                "time-average count %r", horizon, n, len(entries),
                stats.time_avg_count)
    return stats


@dataclass
class RecurrenceSummary:
    """Replica statistics merged by concatenation and averaging."""

    replicas: int
    all_returned: bool
    return_times: list
    time_avg_count: float
    time_avg_stderr: float
    bound: Optional[float]
    width_histogram: dict
    tightness_tv: list
    width_curve: list
    cesaro: list

    @property
    def within_band(self):
        """Mean time-average count at most bound + 3 standard errors."""
        if self.bound is None:
            return True
        return self.time_avg_count <= self.bound + 3 * self.time_avg_stderr

    @property
    def cesaro_stable(self):
        return cesaro_stable([a for _, a in self.cesaro])

    def to_descriptor(self):
        return {"replicas": self.replicas,
                "all_returned": self.all_returned,
                "return_times": self.return_times,
                "time_avg_count": self.time_avg_count,
                "time_avg_stderr": self.time_avg_stderr,
                "bound": self.bound, "within_band": self.within_band,
                "width_histogram": {str(k): v for k, v in
                                    self.width_histogram.items()},
                "tightness_tv": self.tightness_tv,
                "width_curve": self.width_curve,
                "cesaro": self.cesaro, "cesaro_stable": self.cesaro_stable}


def _mean_pairs(rows):
    """Average lists of (t, value) pairs sharing the same t."""
    if not rows:
        return []
    width = min(len(r) for r in rows)
    return [(rows[0][k][0],
             float(np.mean([r[k][1] for r in rows])))
            for k in range(width)]


def merge_recurrence(stats, bound=None):
    """Merge RecurrenceStats from replicas.

    :param bound: Stationary bound on the mean count, usually C / c."""
    stats = list(stats)
    averages = np.array([s.time_avg_count for s in stats])
    stderr = (float(np.std(averages, ddof=1) / math.sqrt(len(averages)))
              if len(averages) > 1 else math.inf)
    widths = set()
    for s in stats:
        widths.update(s.width_histogram)
    histogram = {w: float(np.mean([s.width_histogram.get(w, 0.0)
                                   for s in stats]))
                 for w in sorted(widths)}
    return RecurrenceSummary(
        replicas=len(stats),
        all_returned=all(s.returned for s in stats),
        return_times=[float(x) for s in stats for x in s.return_times],
        time_avg_count=float(np.mean(averages)),
        time_avg_stderr=stderr, bound=bound,
        width_histogram=histogram,
        tightness_tv=[s.tightness_tv for s in stats],
        width_curve=_mean_pairs([s.width_curve for s in stats]),
        cesaro=_mean_pairs([s.cesaro for s in stats]))


@dataclass
class WidthGrowthReport:
    """Ensemble mean width against 2 + f_cd(X0) + C t."""

    grid: list
    mean_width: list
    stderr: list
    bound: list

    @property
    def passed(self):
        return all(m <= b + 3 * s for m, s, b in
                   zip(self.mean_width, self.stderr, self.bound))

    @classmethod
    def from_samples(cls, model, initial, grid, samples):
        """Build from an array of widths, one row per replica."""
        samples = np.atleast_2d(np.asarray(samples, dtype=float))
        replicas = samples.shape[0]
        mean = samples.mean(axis=0)
        if replicas > 1:
            err = samples.std(axis=0, ddof=1) / math.sqrt(replicas)
        else:
            err = np.full(len(grid), math.inf)
        start = 2 + f_cd(initial)
        report = cls(list(grid), [float(x) for x in mean],
                     [float(x) for x in err],
                     [start + model.C * t for t in grid])
        logger.info("Width growth over %d replicas: %s", replicas,
                    "within bound" if report.passed else "EXCEEDS bound")
        return report

    def to_descriptor(self):
        return {"grid": self.grid, "mean_width": self.mean_width,
                "stderr": self.stderr, "bound": self.bound,
                "pass": self.passed}


def widths_at(initial, times, widths, grid):
    """Return W at each grid time, given event times and the widths
    after each event."""
    values = np.concatenate(([initial.width], np.asarray(widths)))
    return values[np.searchsorted(times, grid, side="right")]


def width_growth_check(model, initial, horizon, seed, replicas, grid=None,
                       event_budget=DEFAULT_EVENT_BUDGET):
    """Estimate E[W(t)] on a grid over replicas seeded seed ^ k."""
    if grid is None:
        grid = default_grid(horizon)
    grid = sorted(grid)
    samples = np.zeros((replicas, len(grid)))
    for k in range(replicas):
        rng = create_rng(seed, k)
        times, widths = [], []
        for event in evolve(model, initial, rng, grid[-1], event_budget):
            times.append(event.time)
            widths.append(event.post_width)
        samples[k] = widths_at(initial, times, widths, grid)
    return WidthGrowthReport.from_samples(model, initial, grid, samples)


########################################################################
