#! /usr/bin/env python
########################################################################
# dbarw
# Copyright (C) 2024, the dbarw developers.
# SPDX-License-Identifier: MIT
########################################################################

"""Dominating processes and their parameter arithmetic.

The maximum width process Q and the long-range width chain H bound the
width of the particle system; the step-counting process bounds the
number of events.  They are available as standalone samplers so their
moments can be estimated directly."""

import logging
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional

import numpy as np

from .constants import (DEFAULT_EVENT_BUDGET, DEFAULT_N_AUDIT,
                        DIVERGENCE_FLOOR, EVENT_H_DOUBLE, EVENT_H_STEP,
                        EVENT_Q_BIRTH, Q_SATURATION)
from .errors import ConstantsInvalidError, InvalidParameterError
from .profiles import Profile


logger = logging.getLogger(__name__)


########################################################################
# B(N) arithmetic.

def branch_bound_table(b_n, limit):
    """Return B(N) = max_{n <= N} n B_n for N = 1 .. limit.

    Entry 0 holds B(1)."""
    n = np.arange(1, limit + 1, dtype=float)
    values = np.array([b_n(k) for k in range(1, limit + 1)], dtype=float)
    return np.maximum.accumulate(n * values)


def B_of(b_n, N):
    """Return B(N) for the branching bound b_n."""
    if N < 1:
        raise ValueError(f"B(N) needs N >= 1, not {N}")
    return float(branch_bound_table(b_n, N)[-1])


def condensed_tail(terms):
    """Cauchy-condensed tail of a nonincreasing series.

    terms[0] is the first term.  With K = floor(log2(len(terms))),
    returns the sum of 2^k terms[2^k - 1] for K/2 <= k <= K.  A tail
    that does not shrink with K marks a divergent series."""
    K = int(math.log2(len(terms)))
    return float(sum(2 ** k * terms[2 ** k - 1]
                     for k in range(K // 2, K + 1)))


def threshold_N0(b_n, D_bar, limit=DEFAULT_N_AUDIT):
    """Smallest N0 >= 1 with max_{n <= N} B_n <= D_bar N for all
    N0 < N <= limit.

    Raises ConstantsInvalidError if the bound fails at the limit."""
    values = np.array([b_n(k) for k in range(1, limit + 1)], dtype=float)
    running = np.maximum.accumulate(values)
    bad = np.nonzero(running > D_bar * np.arange(1, limit + 1))[0]
    if len(bad) == 0:
        return 1
    last = int(bad[-1]) + 1
    if last >= limit:
        raise ConstantsInvalidError(
            f"max B_n / N still exceeds D_bar={D_bar} at N={limit}")
    return last


########################################################################

@dataclass(frozen=True)
class DominatorParams:
    """Constants shared by the dominating processes."""

    w0: int
    n0: int
    K: float
    alpha1: float
    alpha2: float
    b_n: Profile
    D_bar: float
    D: float = 0.0
    B_bar: Optional[float] = None
    N0: int = 1

    @classmethod
    def from_model(cls, model, initial, K=None, limit=DEFAULT_N_AUDIT):
        """Build from a ModelSpec and initial configuration.

        K defaults to the smallest integer above the lower bound."""
        constants = model.constants
        N0 = threshold_N0(constants.b_n, constants.D_bar, limit)
        D = 0.0
        if model.long_range is not None and constants.b_tilde is not None:
            D = sum(constants.b_tilde(d)
                    for d in range(2, model.max_range + 1))
        params = cls(w0=initial.width, n0=initial.count, K=0.0,
                     alpha1=model.alpha1, alpha2=model.alpha2,
                     b_n=constants.b_n, D_bar=constants.D_bar, D=D,
                     B_bar=constants.B_bar, N0=N0)
        if K is None:
            K = math.floor(params.K_bound) + 1
        return replace(params, K=float(K))

    @property
    def K_bound(self):
        """Lower bound that K must exceed."""
        top = max(self.b_n(i) for i in range(1, self.N0 + 1))
        return max(2 * self.alpha1 + 2 * self.alpha2 * top,
                   2 * self.alpha1 + 2 * self.alpha2 * self.D_bar)

    @property
    def K_valid(self):
        return self.K > self.K_bound

    def step_mean(self, n):
        """Mean holding time of the n-th step of the counting process."""
        size = self.n0 + 2 * n
        return 1.0 / (self.alpha1 * size
                      + self.alpha2 * B_of(self.b_n, size))


########################################################################
# Paths.

@dataclass
class DominatorPath:
    """Piecewise-constant path: values[k] holds from times[k] on.

    kinds[k] names the jump that led to values[k]; kinds[0] is None."""

    times: list
    values: list
    kinds: list
    horizon: float
    truncated: bool = False

    def value_at(self, t):
        """Return the path value at time t."""
        k = int(np.searchsorted(self.times, t, side="right")) - 1
        return self.values[max(k, 0)]

    @property
    def final(self):
        return self.values[-1]

    def rows(self):
        """Yield (time, kind, value) for every jump."""
        for t, kind, v in zip(self.times[1:], self.kinds[1:],
                              self.values[1:]):
            yield t, kind, v


def _saturate(value):
    return math.inf if value > Q_SATURATION else value


def sample_Q(params, horizon, rng, max_jumps=DEFAULT_EVENT_BUDGET):
    """Sample the maximum width process up to horizon.

    Pure birth chain from w0; the n-th holding time is exponential with
    rate K (w0 + n).  Stops early, marking the path truncated, after
    max_jumps jumps."""
    times = [0.0]
    values = [params.w0]
    kinds = [None]
    t = 0.0
    q = params.w0
    truncated = False
    while True:
        if len(times) > max_jumps:
            truncated = True
            logger.warning("Q path truncated after %d jumps at t=%r",
                           max_jumps, t)
            break
        t += rng.exponential(1.0 / (params.K * (q + 1)))
        if t > horizon:
            break
        q += 1
        times.append(t)
        values.append(q)
        kinds.append(EVENT_Q_BIRTH)
    return DominatorPath(times, values, kinds, horizon, truncated)


def sample_H(w0, alpha1, D, horizon, rng, alpha2=0.0, B_bar=0.0,
             rate=None, max_jumps=DEFAULT_EVENT_BUDGET):
    """Sample the long-range width chain up to horizon.

    At each event the value doubles with probability D / (alpha1 + D)
    and otherwise grows by one.  Holding times are exponential with the
    given rate, by default 2 (alpha1 + alpha2 B_bar + D).  Values above
    the saturation level are reported as infinite."""
    if alpha1 + D <= 0:
        raise ValueError("sample_H needs alpha1 + D > 0")
    if rate is None:
        rate = 2.0 * (alpha1 + alpha2 * (B_bar or 0.0) + D)
    if not rate > 0:
        raise InvalidParameterError(f"Event rate {rate} must be positive")
    p_double = D / (alpha1 + D)
    times = [0.0]
    values = [w0]
    kinds = [None]
    t = 0.0
    h = w0
    truncated = False
    while True:
        if len(times) > max_jumps:
            truncated = True
            logger.warning("H path truncated after %d jumps", max_jumps)
            break
        t += rng.exponential(1.0 / rate)
        if t > horizon:
            break
        if rng.random() < p_double:
            h = _saturate(2 * h)
            kinds.append(EVENT_H_DOUBLE)
        else:
            h = _saturate(h + 1)
            kinds.append(EVENT_H_STEP)
        times.append(t)
        values.append(h)
        if math.isinf(h):
            logger.warning("H saturated at t=%r", t)
            break
    return DominatorPath(times, values, kinds, horizon, truncated)


########################################################################
# Moments and divergence.

def moment_estimate(values, r):
    """Return (mean, standard error) of the r-th moment of values."""
    x = np.asarray(values, dtype=float) ** r
    if len(x) < 2:
        return float(np.mean(x)), math.inf
    return float(np.mean(x)), float(np.std(x, ddof=1) / math.sqrt(len(x)))


def step_means(params, count):
    """Return the first count mean holding times of the step-counting
    process as an array."""
    sizes = params.n0 + 2 * np.arange(1, count + 1)
    table = branch_bound_table(params.b_n, int(sizes[-1]))
    return 1.0 / (params.alpha1 * sizes + params.alpha2 * table[sizes - 1])


@dataclass
class DivergenceReport:
    """Finite-horizon comparison of the step-mean series with the
    reciprocal series of B(N)."""

    n_audit: int
    step_tail: float
    reciprocal_tail: float

    @property
    def step_diverges(self):
        return self.step_tail >= DIVERGENCE_FLOOR

    @property
    def reciprocal_diverges(self):
        return self.reciprocal_tail >= DIVERGENCE_FLOOR

    @property
    def consistent(self):
        return self.step_diverges == self.reciprocal_diverges

    def to_descriptor(self):
        return {"n_audit": self.n_audit, "step_tail": self.step_tail,
                "reciprocal_tail": self.reciprocal_tail,
                "step_diverges": self.step_diverges,
                "reciprocal_diverges": self.reciprocal_diverges,
                "consistent": self.consistent}


def divergence_report(params, n_audit=DEFAULT_N_AUDIT):
    """Compare the condensed tails of the step means and of 1/B(N)."""
    means = step_means(params, n_audit)
    reciprocal = 1.0 / branch_bound_table(params.b_n, n_audit)
    return DivergenceReport(n_audit, condensed_tail(means),
                            condensed_tail(reciprocal))


def staircase_check(profile, limit):
    """Return (start, stop, mass) for each staircase plateau starting at
    or below limit, mass being the exact sum of 1/B(N) over it."""
    out = []
    for start, stop in profile.plateaus(limit):
        if start > limit:
            break
        mass = Fraction(stop - start, start * 2 ** start)
        out.append((start, stop, mass))
    return out


########################################################################
