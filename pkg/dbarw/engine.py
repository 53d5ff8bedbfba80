#! /usr/bin/env python
########################################################################
# dbarw
# Copyright (C) 2024, the dbarw developers.
# SPDX-License-Identifier: MIT
########################################################################

"""Exact continuous-time simulation.

Transitions are enumerated with sites ascending, kinds in the order
rw_left, rw_right, branch, long_branch, and long-branch distances
ascending.  A step draws the holding time first, then one uniform
variate that selects a transition by cumulative-sum inversion over that
order; logs are reproducible for a fixed seed."""

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .constants import (DEFAULT_EVENT_BUDGET, DRIFT_SLACK, EVENT_BRANCH,
                        EVENT_LONG_BRANCH, EVENT_RW_LEFT, EVENT_RW_RIGHT,
                        LEFT, Q_SATURATION, RECORD_EVENTS, RECORD_SUMMARY,
                        RIGHT, STOP_HORIZON, STOP_SINGLETON)
from .dominators import DominatorParams, branch_bound_table
from .errors import (DominationViolatedError, EventBudgetExceededError,
                     ModelInvalidError)
from .lattice import apply_branch, apply_long_branch, apply_rw, f_cd


logger = logging.getLogger(__name__)

STOP_MAX_EVENTS = "max_events"


@dataclass(frozen=True)
class Transition:
    """One enabled jump out of a configuration."""

    kind: str
    site: int
    rate: float
    successor: object
    distance: int = 1


@dataclass(frozen=True)
class Event:
    """A transition that fired, with before and after observables."""

    time: float
    transition: Transition
    pre_count: int
    post_count: int
    pre_width: int
    post_width: int
    post_fcd: int
    charge: int

    @property
    def kind(self):
        return self.transition.kind

    @property
    def site(self):
        return self.transition.site

    @property
    def distance(self):
        return self.transition.distance

    @property
    def configuration(self):
        """Configuration after the event."""
        return self.transition.successor


@dataclass(frozen=True)
class Snapshot:
    """Observables after an event, kept in summary mode."""

    time: float
    count: int
    width: int
    fcd: int
    charge: int


@dataclass(frozen=True)
class StopRule:
    """When to end a run: at horizon, after max_events events, or on
    reaching a singleton, whichever comes first."""

    horizon: float = math.inf
    max_events: Optional[int] = None
    singleton: bool = False

    def __post_init__(self):
        if self.horizon < 0:
            raise ValueError(f"Horizon {self.horizon} is negative")
        if self.max_events is not None and self.max_events < 1:
            raise ValueError("max_events must be at least 1")
        if (math.isinf(self.horizon) and self.max_events is None
                and not self.singleton):
            raise ValueError("Stop rule never fires")


@dataclass
class Trajectory:
    """Result of simulate()."""

    initial: object
    final: object
    seed: Optional[int]
    horizon: float
    stop_reason: str
    record: str = RECORD_EVENTS
    events: list = field(default_factory=list)
    snapshots: list = field(default_factory=list)
    n_events: int = 0
    hit_singleton_time: Optional[float] = None
    max_width: int = 1
    time_avg_count: float = 0.0

    def summary(self):
        """Return the summary record as a dict."""
        out = {"seed": self.seed, "n_events": self.n_events,
               "final_count": self.final.count,
               "max_width": self.max_width,
               "time_avg_count": self.time_avg_count,
               "end_time": self.horizon, "stop_reason": self.stop_reason}
        if self.hit_singleton_time is not None:
            out["hit_singleton_time"] = self.hit_singleton_time
        return out


########################################################################
# Transitions.

def _checked_rate(rate, kind, site):
    if not 0 <= rate < math.inf:
        raise ModelInvalidError(
            f"Rate {rate!r} of {kind} at site {site} is not a finite "
            f"nonnegative number")
    return rate


def _enumerate_rates(model, config):
    """Return (kind, site, distance, rate) for every enabled transition,
    without building successors."""
    entries = []
    walk = model.walk.bulk_rates(config) if model.alpha1 else None
    branch = model.branch.bulk_rates(config) if model.alpha2 else None
    long_range = (model.long_range.bulk_rates(config)
                  if model.long_range is not None else None)
    positions = config.positions
    n = len(positions)
    for k, site in enumerate(positions):
        if walk is not None:
            r, l = walk[k]
            rate = _checked_rate(model.alpha1 * l, EVENT_RW_LEFT, site)
            if rate > 0:
                entries.append((EVENT_RW_LEFT, site, 1, rate))
            rate = _checked_rate(model.alpha1 * r, EVENT_RW_RIGHT, site)
            if rate > 0:
                entries.append((EVENT_RW_RIGHT, site, 1, rate))
        if branch is not None:
            rate = _checked_rate(model.alpha2 * branch[k], EVENT_BRANCH,
                                 site)
            if rate > 0:
                entries.append((EVENT_BRANCH, site, 1, rate))
        if long_range is not None:
            room = min(site - positions[k - 1] if k > 0 else math.inf,
                       positions[k + 1] - site if k + 1 < n else math.inf)
            for distance, b in enumerate(long_range[k], start=2):
                if distance > room:
                    break
                rate = _checked_rate(b, EVENT_LONG_BRANCH, site)
                if rate > 0:
                    entries.append((EVENT_LONG_BRANCH, site, distance, rate))
    return entries


def _apply(config, kind, site, distance):
    if kind == EVENT_RW_LEFT:
        return apply_rw(config, site, LEFT)
    if kind == EVENT_RW_RIGHT:
        return apply_rw(config, site, RIGHT)
    if kind == EVENT_BRANCH:
        return apply_branch(config, site)
    return apply_long_branch(config, site, distance)


def enumerate_transitions(model, config):
    """Return every enabled Transition of config, in enumeration order."""
    return [Transition(kind, site, rate,
                       _apply(config, kind, site, distance), distance)
            for kind, site, distance, rate in _enumerate_rates(model, config)]


def total_rate(model, config):
    """Return the sign-resolved total jump rate of config."""
    return math.fsum(e[3] for e in _enumerate_rates(model, config))


def _choose(entries, rng):
    """Draw a holding time and pick an entry; returns (dt, entry)."""
    rates = np.fromiter((e[3] for e in entries), dtype=float,
                        count=len(entries))
    cumulative = np.cumsum(rates)
    total = cumulative[-1]
    dt = rng.exponential(1.0 / total)
    u = rng.random() * total
    k = min(int(np.searchsorted(cumulative, u, side="right")),
            len(entries) - 1)
    return dt, entries[k]


def _make_event(time, pre, kind, site, distance, rate):
    post = _apply(pre, kind, site, distance)
    assert post.charge == pre.charge, "charge changed"
    assert post.count % 2 == 1, "even particle count"
    assert abs(post.count - pre.count) in (0, 2), "count jumped"
    transition = Transition(kind, site, rate, post, distance)
    return Event(time, transition, pre.count, post.count, pre.width,
                 post.width, f_cd(post), post.charge)


def step(config, model, rng, time=0.0):
    """Advance one event.

    :returns: (dt, Event, successor).  A configuration with no enabled
    transition returns (inf, None, config)."""
    entries = _enumerate_rates(model, config)
    if not entries:
        return math.inf, None, config
    dt, (kind, site, distance, rate) = _choose(entries, rng)
    event = _make_event(time + dt, config, kind, site, distance, rate)
    return dt, event, event.configuration


def evolve(model, initial, rng, horizon=math.inf,
           event_budget=DEFAULT_EVENT_BUDGET):
    """Yield events until the next one would pass horizon, or the
    configuration has no enabled transition.

    Raises EventBudgetExceededError before the event past the budget."""
    t = 0.0
    config = initial
    count = 0
    while True:
        dt, event, successor = step(config, model, rng, t)
        if event is None or t + dt > horizon:
            return
        if count >= event_budget:
            raise EventBudgetExceededError(event_budget, t)
        count += 1
        t = event.time
        config = successor
        logger.debug("t=%r %s at %d -> %d particles", t, event.kind,
                     event.site, event.post_count)
        yield event


def simulate(model, initial, stop, rng, record=RECORD_EVENTS, seed=None,
             event_budget=DEFAULT_EVENT_BUDGET):
    """Run the process from initial until the stop rule fires.

    :param stop: StopRule.
    :param record: "events" keeps every Event, "summary" keeps only
    Snapshot records.
    :param seed: Seed recorded in the trajectory (not used to draw).
    :returns: Trajectory."""
    if record not in (RECORD_EVENTS, RECORD_SUMMARY):
        raise ValueError(f"Unknown record mode {record!r}")
    logger.info("Simulating from %d particles, seed %r, stop %r",
                initial.count, seed, stop)
    t = 0.0
    config = initial
    area = 0.0
    n = 0
    events = []
    snapshots = []
    max_width = initial.width
    hit = 0.0 if initial.is_singleton else None
    reason = None
    if stop.singleton and initial.is_singleton:
        reason = STOP_SINGLETON
    else:
        for event in evolve(model, initial, rng, stop.horizon, event_budget):
            area += config.count * (event.time - t)
            t = event.time
            config = event.configuration
            n += 1
            if record == RECORD_EVENTS:
                events.append(event)
            else:
                snapshots.append(Snapshot(t, event.post_count,
                                          event.post_width, event.post_fcd,
                                          event.charge))
            max_width = max(max_width, event.post_width)
            if hit is None and config.is_singleton:
                hit = t
            if stop.singleton and config.is_singleton:
                reason = STOP_SINGLETON
                break
            if stop.max_events is not None and n >= stop.max_events:
                reason = STOP_MAX_EVENTS
                break
        else:
            if math.isinf(stop.horizon):
                raise ModelInvalidError(
                    f"Configuration {config!r} has no enabled transition "
                    f"and the stop rule has no horizon")
            area += config.count * (stop.horizon - t)
            t = stop.horizon
            reason = STOP_HORIZON
    average = area / t if t > 0 else float(initial.count)
    logger.info("Stopped (%s) at t=%r after %d events, %d particles",
                reason, t, n, config.count)
    return Trajectory(initial=initial, final=config, seed=seed, horizon=t,
                      stop_reason=reason, record=record, events=events,
                      snapshots=snapshots, n_events=n,
                      hit_singleton_time=hit, max_width=max_width,
                      time_avg_count=average)


########################################################################
# Couplings.

@dataclass
class WidthCoupling:
    """Width W and maximum width process Q at every event."""

    times: list
    widths: list
    dominating: list
    K: float
    horizon: float

    @property
    def saturated(self):
        return math.isinf(self.dominating[-1])


@dataclass
class StepCoupling:
    """Jump times of the process and of the step-counting process.

    The n-th dominating jump never comes after the n-th process jump,
    so N(t) <= N~(t) at all times."""

    times: list
    dominating_times: list
    horizon: float

    def counts_at(self, t):
        """Return (N(t), lower bound on N~(t))."""
        n = int(np.searchsorted(self.times, t, side="right")) - 1
        m = int(np.searchsorted(self.dominating_times, t,
                                side="right")) - 1
        return n, m


def _require_nearest(model):
    if model.long_range is not None:
        raise ModelInvalidError(
            "Coupled runs need a nearest-neighbour model")


def _capacity(model, config, bound, t):
    envelope = model.total_rate_envelope(config)
    if envelope > bound + DRIFT_SLACK * max(1.0, bound):
        raise DominationViolatedError("capacity", t, envelope, bound)


def _extra_births(q, rate, K, span, rng):
    """Births of Q over span beyond those embedding process events."""
    if math.isinf(q) or span <= 0:
        return q
    m = q + 1 - rate / K
    if m <= 0:
        return q
    if K * span > math.log(Q_SATURATION / max(m, 1.0)) - 4:
        return math.inf
    births = int(rng.negative_binomial(m, math.exp(-K * span)))
    q += births
    return math.inf if q > Q_SATURATION else q


def simulate_coupled_width(model, initial, K, horizon, rng,
                           event_budget=DEFAULT_EVENT_BUDGET, params=None):
    """Run the process with the maximum width process Q on one stream.

    Every process event is embedded in a jump of Q; Q has extra births
    at rate K (Q + 1) minus the process rate between events.  Raises
    DominationViolatedError if W exceeds Q, or if the both-signs rate
    envelope exceeds K (Q + 1).

    :param params: Precomputed DominatorParams, to skip the N0 scan."""
    _require_nearest(model)
    if math.isinf(horizon):
        raise ValueError("Coupled runs need a finite horizon")
    if params is None:
        params = DominatorParams.from_model(model, initial, K)
    if not K > params.K_bound:
        logger.warning("K=%r does not exceed the bound %r", K,
                       params.K_bound)
    t = 0.0
    y = initial
    q = initial.width
    times, widths, qs = [0.0], [y.width], [q]
    if not math.isinf(q):
        _capacity(model, y, K * (q + 1), t)
    count = 0
    while True:
        entries = _enumerate_rates(model, y)
        rate = math.fsum(e[3] for e in entries)
        if entries:
            tau, (kind, site, distance, _) = _choose(entries, rng)
        else:
            tau = math.inf
        q = _extra_births(q, rate, K, min(tau, horizon - t), rng)
        if t + tau > horizon:
            break
        if count >= event_budget:
            raise EventBudgetExceededError(event_budget, t)
        count += 1
        t += tau
        y = _apply(y, kind, site, distance)
        q = q + 1 if q < Q_SATURATION else math.inf
        times.append(t)
        widths.append(y.width)
        qs.append(q)
        if y.width > q:
            raise DominationViolatedError("order", t, y.width, q)
        if not math.isinf(q):
            _capacity(model, y, K * (q + 1), t)
    if math.isinf(q):
        logger.warning("Q saturated before t=%r", horizon)
    return WidthCoupling(times, widths, qs, float(K), horizon)


def simulate_coupled_steps(model, initial, horizon, rng,
                           event_budget=DEFAULT_EVENT_BUDGET):
    """Run the process with the step-counting dominator on one stream.

    The n-th holding times of both share one unit exponential; the
    dominator's rate is alpha1 (n0 + 2n) + alpha2 B(n0 + 2n).  Raises
    DominationViolatedError if the rate envelope exceeds it or a
    dominator jump falls behind."""
    _require_nearest(model)
    if math.isinf(horizon):
        raise ValueError("Coupled runs need a finite horizon")
    b_n = model.constants.b_n
    table = branch_bound_table(b_n, initial.count + 2)
    t = 0.0
    shadow = 0.0
    y = initial
    times, shadows = [0.0], [0.0]
    n = 0
    while True:
        n += 1
        size = initial.count + 2 * n
        if size > len(table):
            table = branch_bound_table(b_n, 2 * size)
        lam = model.alpha1 * size + model.alpha2 * table[size - 1]
        _capacity(model, y, lam, t)
        entries = _enumerate_rates(model, y)
        e = rng.exponential()
        rate = math.fsum(x[3] for x in entries)
        hold = e / rate if rate > 0 else math.inf
        shadow += e / lam
        if t + hold > horizon:
            break
        if n > event_budget:
            raise EventBudgetExceededError(event_budget, t)
        u = rng.random() * rate
        cumulative = np.cumsum([x[3] for x in entries])
        k = min(int(np.searchsorted(cumulative, u, side="right")),
                len(entries) - 1)
        kind, site, distance, _ = entries[k]
        t += hold
        y = _apply(y, kind, site, distance)
        times.append(t)
        shadows.append(shadow)
        if shadow > t:
            raise DominationViolatedError("order", t, n, n - 1)
    return StepCoupling(times, shadows, horizon)


########################################################################
