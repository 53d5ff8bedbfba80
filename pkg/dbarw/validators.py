#! /usr/bin/env python
########################################################################
# dbarw
# Copyright (C) 2024, the dbarw developers.
# SPDX-License-Identifier: MIT
########################################################################

"""Sampled checks of the model assumptions.

Each validator draws configurations, evaluates the rates and compares
them with the model's declared constants.  A failed check comes with a
witness configuration and disproves the assumption; a pass is evidence
only, bounded by the audit horizons recorded in the report."""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .constants import (DEFAULT_AUDIT_COUNT, DEFAULT_AUDIT_WIDTH,
                        DEFAULT_L_GRID, DEFAULT_N_AUDIT, DEFAULT_SAMPLES,
                        DIVERGENCE_FLOOR, MINUS, PLUS)
from .dominators import branch_bound_table, condensed_tail
from .rates import BRANCH, WALK
from .sampling import alternating, random_configuration


logger = logging.getLogger(__name__)

# Point at which a declared envelope H(L) is expected to have decayed.
ENVELOPE_TAIL_POINT = 2 ** 40
ENVELOPE_TAIL_TOLERANCE = 1e-6


@dataclass
class AssumptionReport:
    """Outcome of one assumption check.

    margin is the smallest slack observed; negative means violated."""

    assumption: str
    passed: bool
    audited_samples: int
    worst_witness: object = None
    margin: float = math.inf
    details: dict = field(default_factory=dict)

    def to_descriptor(self):
        return {"assumption": self.assumption, "pass": self.passed,
                "audited_samples": self.audited_samples,
                "worst_witness": self.worst_witness,
                "margin": self.margin, "details": self.details}


class _Worst:
    """Tracks the smallest margin seen and its witness."""

    def __init__(self):
        self.margin = math.inf
        self.witness = None

    def update(self, margin, config, **info):
        if margin < self.margin:
            self.margin = float(margin)
            self.witness = {"config": config.to_literal(), **info}


def _report(name, passed, samples, worst, details):
    report = AssumptionReport(name, bool(passed), samples, worst.witness,
                              worst.margin, details)
    logger.info("%s %s over %d samples (margin %r)", name,
                "passed" if passed else "FAILED", samples, report.margin)
    return report


def _family_rates(family, config, site, sign):
    """Return every rate the family assigns to the particle at site
    under the given sign, as a flat tuple."""
    if family.kind == WALK:
        return tuple(family.rw_rates(config, site, sign))
    if family.kind == BRANCH:
        return (family.branch_rate(config, site, sign),)
    return tuple(family.long_branch_rate(config, site, d, sign)
                 for d in range(2, family.max_range + 1))


def _all_rates(model, config, site, sign):
    """r, l, b and the long-range rates of one particle and sign."""
    rates = _family_rates(model.walk, config, site, sign)
    rates += _family_rates(model.branch, config, site, sign)
    if model.long_range is not None:
        rates += _family_rates(model.long_range, config, site, sign)
    return rates


########################################################################

def validate_A0(family, n, width, rng, max_count=DEFAULT_AUDIT_COUNT):
    """Translation invariance: rates are unchanged by a unit shift.

    :param family: RateFamily of any kind.
    :param n: Number of sampled configurations.
    :param width: Largest sampled width.
    :param rng: numpy Generator."""
    if n < 1:
        raise ValueError("Sample size must be at least 1")
    worst = _Worst()
    largest = 0.0
    for _ in range(n):
        origin = int(rng.integers(-width, width + 1))
        config = random_configuration(rng, max_count, width, origin=origin)
        shifted = config.translate(1)
        for site in config.positions:
            for sign in (PLUS, MINUS):
                before = _family_rates(family, config, site, sign)
                after = _family_rates(family, shifted, site + 1, sign)
                gap = max(abs(a - b) for a, b in zip(before, after))
                largest = max(largest, gap)
                worst.update(-gap, config, site=site, sign=sign)
    details = {"family": family.family_id, "max_discrepancy": largest,
               "width": width}
    return _report("A0", largest == 0, n, worst, details)


def validate_A1(model, sampler, rng, samples=DEFAULT_SAMPLES):
    """Random-walk rate bounds: lower sum at least s_lower, four-rate
    sum at most one."""
    s_lower = model.constants.s_lower
    worst = _Worst()
    lowest = math.inf
    highest = 0.0
    for _ in range(samples):
        config = sampler(rng)
        for site in config.positions:
            rp, lp = model.walk.rw_rates(config, site, PLUS)
            rm, lm = model.walk.rw_rates(config, site, MINUS)
            low = min(rp, lp) + min(rm, lm)
            high = rp + lp + rm + lm
            lowest = min(lowest, low)
            highest = max(highest, high)
            worst.update(min(low - s_lower, 1.0 - high), config, site=site)
    passed = 0 < s_lower < 1 and lowest >= s_lower and highest <= 1.0
    details = {"s_lower": s_lower, "observed_lower": lowest,
               "observed_upper": highest}
    return _report("A1", passed, samples, worst, details)


def validate_A2(model, sampler, rng, samples=DEFAULT_SAMPLES,
                n_audit=DEFAULT_N_AUDIT):
    """Branching rate bounds, the drift sum and the growth of B(N)."""
    constants = model.constants
    worst = _Worst()
    smallest = math.inf
    bound_ok = drift_ok = True
    for _ in range(samples):
        config = sampler(rng)
        b_n = constants.b_n(config.count)
        drift = 0.0
        for site, own in config:
            both = (model.branch.branch_rate(config, site, PLUS)
                    + model.branch.branch_rate(config, site, MINUS))
            smallest = min(smallest, both)
            if not 0 < both <= b_n:
                bound_ok = False
            worst.update(min(b_n - both, both), config, site=site,
                         check="b_n")
            drift += own * model.branch.branch_rate(config, site, own)
        drift *= config.charge
        limit = constants.d_bar * config.count
        if drift > limit:
            drift_ok = False
        worst.update(limit - drift, config, check="drift")

    table = branch_bound_table(constants.b_n, n_audit)
    reciprocal = 1.0 / table
    tail = condensed_tail(reciprocal)
    diverges = tail >= DIVERGENCE_FLOOR
    values = np.array([constants.b_n(k) for k in range(1, n_audit + 1)])
    ratio = float(np.max(values)) / n_audit
    ratio_ok = ratio < constants.D_bar
    details = {"min_branch_sum": smallest, "n_audit": n_audit,
               "reciprocal_sum": float(np.sum(reciprocal)),
               "condensed_tail": tail, "diverges": bool(diverges),
               "max_b_over_n": ratio, "D_bar": constants.D_bar,
               "bounds_ok": bound_ok, "drift_ok": drift_ok}
    passed = bound_ok and drift_ok and diverges and ratio_ok
    return _report("A2", passed, samples, worst, details)


def _padded(rng, config, L, spread):
    """Return config with plus-minus pairs added beyond distance L
    behind its anchoring end particle."""
    pairs = int(rng.integers(1, 3))
    offsets = rng.choice(spread, size=2 * pairs, replace=False)
    offsets = sorted(L + 1 + int(o) for o in offsets)
    if config.charge == PLUS:
        extra = [config.left - o for o in offsets]
    else:
        extra = [config.right + o for o in offsets]
    positions = sorted(list(config.positions) + extra)
    return alternating(positions, config.charge)


def validate_A3(model, sampler, rng, samples=DEFAULT_SAMPLES,
                l_grid=DEFAULT_L_GRID, spread=8):
    """Far-away changes behind the anchoring end particle move the
    rates of the inner particles by at most H(L).

    An undeclared envelope is read as H = 0."""
    envelope = model.constants.envelope
    worst = _Worst()
    largest = {}
    for _ in range(samples):
        config = sampler(rng)
        for L in l_grid:
            h = 0.0 if envelope is None else envelope(L)
            other = _padded(rng, config, L, spread)
            for site in config.positions:
                for sign in (PLUS, MINUS):
                    mine = _all_rates(model, config, site, sign)
                    theirs = _all_rates(model, other, site, sign)
                    gap = sum(abs(a - b) for a, b in zip(mine, theirs))
                    largest[L] = max(largest.get(L, 0.0), gap)
                    worst.update(h - gap, config, site=site, sign=sign,
                                 L=L, other=other.to_literal())

    grid = [0.0 if envelope is None else envelope(L) for L in l_grid]
    monotone = all(b <= a for a, b in zip(grid, grid[1:]))
    tail = 0.0 if envelope is None else envelope(ENVELOPE_TAIL_POINT)
    decays = monotone and tail <= ENVELOPE_TAIL_TOLERANCE * max(
        1.0, grid[0])
    details = {"l_grid": list(l_grid), "envelope": grid,
               "envelope_tail": tail, "decays": decays,
               "max_discrepancy": {str(k): v for k, v in largest.items()}}
    passed = worst.margin >= 0 and decays
    return _report("A3", passed, samples, worst, details)


def _a4_checks(model, config):
    """Return (variant a slack, variant b slack, extremality ok) for one
    configuration.  Slacks are minima over the checked pairs."""
    rates = model.walk.bulk_rates(config)
    slack_a = slack_b = math.inf
    for m in range(config.count - 1):
        (r0, l0), (r1, l1) = rates[m], rates[m + 1]
        if not (r0 and l0 and r1 and l1):
            continue
        slack = (r0 + l1) - (l0 + r1)
        slack_a = min(slack_a, slack)
        if config.signs[m] == PLUS:
            slack_b = min(slack_b, slack)

    ps = [r for r, _ in rates if r]
    qs = [l for _, l in rates if l]
    if config.charge == PLUS:
        p, q = rates[-1]
        extreme = (not ps or p == min(ps)) and (not qs or q == max(qs))
    else:
        p, q = rates[0]
        extreme = (not ps or p == max(ps)) and (not qs or q == min(qs))
    return slack_a, slack_b, extreme


def validate_A4(model, sampler, rng, samples=DEFAULT_SAMPLES):
    """Attraction between neighbouring walkers.

    Both variants are evaluated; the declared variant decides."""
    variant = model.constants.a4_variant
    worst_a = _Worst()
    worst_b = _Worst()
    extreme_ok = True
    witness_extreme = None
    for _ in range(samples):
        config = sampler(rng)
        slack_a, slack_b, extreme = _a4_checks(model, config)
        worst_a.update(slack_a, config)
        worst_b.update(slack_b, config)
        if not extreme and extreme_ok:
            extreme_ok = False
            witness_extreme = config.to_literal()
    holds_a = worst_a.margin >= 0
    holds_b = worst_b.margin >= 0 and extreme_ok
    details = {"variant": variant, "a_holds": holds_a, "b_holds": holds_b,
               "a_margin": worst_a.margin, "b_margin": worst_b.margin,
               "extremality_holds": extreme_ok,
               "a_witness": worst_a.witness,
               "extremality_witness": witness_extreme}
    if variant == "a":
        return _report("A4", holds_a, samples, worst_a, details)
    worst = worst_b
    if not extreme_ok and worst.witness is None:
        worst.witness = {"config": witness_extreme}
    return _report("A4", holds_b, samples, worst, details)


def validate_A5(model, sampler, rng, samples=DEFAULT_SAMPLES):
    """Long-range branching rates below B~(l) with summable l^2 B~(l).

    Models without long-range branching pass trivially."""
    family = model.long_range
    worst = _Worst()
    if family is None:
        return _report("A5", True, 0, worst, {"long_range": False})
    b_tilde = model.constants.b_tilde
    if b_tilde is None:
        return _report("A5", False, 0, worst,
                       {"long_range": True, "b_tilde": None})
    symmetric = True
    for _ in range(samples):
        config = sampler(rng)
        for site in config.positions:
            for d in range(2, family.max_range + 1):
                plus = family.long_branch_rate(config, site, d, PLUS)
                minus = family.long_branch_rate(config, site, d, MINUS)
                symmetric = symmetric and plus == minus
                worst.update(b_tilde(d) - max(plus, minus), config,
                             site=site, distance=d)
    moment = model.long_range_constant()
    finite = math.isfinite(moment)
    details = {"long_range": True, "max_range": family.max_range,
               "moment_sum": moment, "finite": finite,
               "sign_symmetric": symmetric,
               "D": sum(b_tilde(d) for d in range(2, family.max_range + 1))}
    passed = worst.margin >= 0 and finite and symmetric
    return _report("A5", passed, samples, worst, details)


def validate_all(model, sampler, rng, samples=DEFAULT_SAMPLES,
                 width=DEFAULT_AUDIT_WIDTH, n_audit=DEFAULT_N_AUDIT,
                 l_grid=DEFAULT_L_GRID):
    """Run every validator; A0 covers each of the model's families."""
    reports = []
    families = [model.walk, model.branch]
    if model.long_range is not None:
        families.append(model.long_range)
    a0 = [validate_A0(f, samples, width, rng) for f in families]
    merged = _Worst()
    for r in a0:
        if r.margin < merged.margin:
            merged.margin, merged.witness = r.margin, r.worst_witness
    reports.append(AssumptionReport(
        "A0", all(r.passed for r in a0), samples * len(a0),
        merged.witness, merged.margin,
        {"families": [r.details for r in a0]}))
    reports.append(validate_A1(model, sampler, rng, samples))
    reports.append(validate_A2(model, sampler, rng, samples, n_audit))
    reports.append(validate_A3(model, sampler, rng, samples, l_grid))
    reports.append(validate_A4(model, sampler, rng, samples))
    reports.append(validate_A5(model, sampler, rng, samples))
    return reports


########################################################################
