#! /usr/bin/env python
########################################################################
# dbarw
# Copyright (C) 2024, the dbarw developers.
# SPDX-License-Identifier: MIT
########################################################################

"""Full-scale acceptance runs.

Each check runs at the scale the unit tests avoid and prints one line
with its outcome and wall time.  Exit status is 0 only if every
selected check passes.

    env PYTHONPATH=. python tools/acceptance.py [--only N ...] [--seed S]
"""

import argparse
import collections
import logging
import math
import sys
import time

from dbarw import errors
from dbarw.catalog import long_range_reference_model, reference_model
from dbarw.codec import trajectory_csv
from dbarw.constants import EVENT_LONG_BRANCH
from dbarw.diagnostics import (drift_audit, drift_case, merge_recurrence,
                               recurrence_study)
from dbarw.engine import (StopRule, enumerate_transitions, evolve, simulate,
                          simulate_coupled_steps, simulate_coupled_width)
from dbarw.lattice import f_cd, is_careful, to_height, to_interface
from dbarw.profiles import ConstantProfile
from dbarw.rates import DeclaredConstants, ModelSpec, catalog_build
from dbarw.rng import create_rng
from dbarw.sampling import (CyclingSampler, RandomSampler, alternating,
                            exhaustive_configurations, random_configuration)
from dbarw.validators import validate_A4


FIVE = alternating((0, 1, 2, 3, 4), 1)


def transposition_distance(values, kappa):
    """Breadth-first distance to the profile with every 1 - kappa before
    every kappa, moving by adjacent transpositions."""
    start = tuple(values)
    target = tuple(sorted(start, key=lambda v: v == kappa))
    seen = {start: 0}
    queue = collections.deque([start])
    while queue:
        state = queue.popleft()
        if state == target:
            return seen[state]
        for i in range(len(state) - 1):
            if state[i] != state[i + 1]:
                nxt = state[:i] + (state[i + 1], state[i]) + state[i + 2:]
                if nxt not in seen:
                    seen[nxt] = seen[state] + 1
                    queue.append(nxt)
    raise AssertionError("target unreachable")


########################################################################

def check_duality(seed):
    rng = create_rng(seed)
    for _ in range(1000):
        y = random_configuration(rng, max_count=63, max_width=64)
        if to_interface(to_height(y)) != y:
            return False, f"round trip fails at {y.to_literal()}"
    return True, "1000 configurations"


def check_fcd_oracle(seed):
    n = 0
    for y in exhaustive_configurations(8):
        window = to_height(y).values(y.left, y.right)
        if f_cd(y) != transposition_distance(window, y.kappa):
            return False, f"f_cd differs at {y.to_literal()}"
        n += 1
    return True, f"{n} configurations"


def check_closed_forms(seed):
    rng = create_rng(seed)
    sampler = RandomSampler()
    for model in (reference_model(), long_range_reference_model()):
        for _ in range(500):
            case = drift_case(model, sampler(rng))
            closed = case.closed_form(model.alpha1)
            if not math.isclose(case.exact, closed, rel_tol=1e-9,
                                abs_tol=1e-12):
                return False, (f"{case.config.to_literal()}: exact "
                               f"{case.exact} closed {closed}")
    return True, "500 configurations per model"


def check_drift(seed):
    report = drift_audit(reference_model(), RandomSampler(), 200,
                         create_rng(seed))
    single = drift_case(reference_model(), alternating((0,), 1))
    triple = drift_case(reference_model(), alternating((0, 1, 2), 1))
    spots = (math.isclose(single.exact, 0.1)
             and math.isclose(triple.exact, -0.4))
    return (report.passed and spots,
            f"{len(report.violations)} violations; singleton "
            f"{single.exact:.3g}, triple {triple.exact:.3g}")


def check_domination(seed):
    model = reference_model()
    for k in range(100):
        rng = create_rng(seed, k)
        try:
            simulate_coupled_width(model, FIVE, 3, 50.0, rng)
            simulate_coupled_steps(model, FIVE, 50.0, rng)
        except errors.DominationViolatedError as e:
            return False, f"replica {k}: {e}"
    return True, "100 replicas to t=50"


def check_conservation(seed):
    model = long_range_reference_model()
    n = 0
    k = 0
    while n < 10 ** 6:
        for event in evolve(model, FIVE, create_rng(seed, k), 1e3):
            y = event.configuration
            if y.charge != 1 or y.count % 2 != 1:
                return False, f"event {n}: {y.to_literal()}"
            if any(a == b for a, b in zip(y.signs, y.signs[1:])):
                return False, f"event {n}: signs do not alternate"
            n += 1
        k += 1
    return True, f"{n} events"


def check_recurrence(seed):
    model = reference_model()
    windows = [(1e3, 5e3), (5e3, 1e4)]
    stats = [recurrence_study(model, FIVE, 1e4, create_rng(seed, k),
                              windows=windows)
             for k in range(100)]
    summary = merge_recurrence(stats, bound=model.C / model.c)
    tv = max(s.tightness_tv for s in stats)
    ok = summary.all_returned and summary.within_band and tv < 0.05
    return ok, (f"mean count {summary.time_avg_count:.4g} "
                f"+/- {summary.time_avg_stderr:.2g}, worst TV {tv:.3g}")


def check_long_range(seed):
    model = long_range_reference_model()
    report = drift_audit(model, RandomSampler(), 200, create_rng(seed))
    for case in report.cases:
        y = case.config
        for t in enumerate_transitions(model, y):
            if (t.kind == EVENT_LONG_BRANCH
                    and not is_careful(y, t.site, t.distance)):
                return False, f"careless branch at {y.to_literal()}"
    return report.passed, (f"C_bar {model.C_bar:.6g}, "
                           f"{len(report.violations)} violations")


def check_reproducible(seed):
    a = simulate(reference_model(), FIVE, StopRule(horizon=10.0),
                 create_rng(seed), seed=seed)
    b = simulate(reference_model(), FIVE, StopRule(horizon=10.0),
                 create_rng(seed), seed=seed)
    return trajectory_csv(a) == trajectory_csv(b), f"{a.n_events} events"


def check_falsification(seed):
    ref = reference_model()
    repulsive = ModelSpec(
        alpha1=1.0, alpha2=0.1,
        walk=catalog_build("gap_rank_g", {"g_rank": [0.4, 0.3, 0.2, 0.1],
                                          "scale": 0.5}),
        branch=ref.branch,
        constants=DeclaredConstants(s_lower=0.5, d_bar=1.0,
                                    b_n=ConstantProfile(2.0), D_bar=2.0))
    sampler = CyclingSampler([alternating((0, 2, 4, 6, 8), 1)])
    a4 = validate_A4(repulsive, sampler, create_rng(seed), 3)
    dense = alternating(tuple(range(9)), 1)
    try:
        simulate_coupled_width(ref, dense, 1, 10.0, create_rng(seed))
        violated = False
    except errors.DominationViolatedError:
        violated = True
    return (not a4.passed and violated,
            f"A4 witness {a4.worst_witness is not None}, K=1 "
            f"violation {violated}")


CHECKS = {
    1: ("duality round trip", check_duality),
    2: ("f_cd oracle", check_fcd_oracle),
    3: ("closed-form consistency", check_closed_forms),
    4: ("drift inequality", check_drift),
    5: ("pathwise domination", check_domination),
    6: ("conservation", check_conservation),
    7: ("positive recurrence", check_recurrence),
    8: ("long-range drift", check_long_range),
    9: ("reproducibility", check_reproducible),
    10: ("falsification", check_falsification),
}


########################################################################

if __name__ == "__main__":

    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--only", type=int, nargs="+", choices=CHECKS,
                        help="run only these checks")
    parser.add_argument("--seed", type=int, default=20240101)
    parser.add_argument("-v", "--verbose", action="store_true")
    args = parser.parse_args()
    logging.basicConfig(level=logging.INFO if args.verbose
                        else logging.WARNING)

    failed = 0
    for number in args.only or sorted(CHECKS):
        name, check = CHECKS[number]
        start = time.perf_counter()
        ok, detail = check(args.seed)
        elapsed = time.perf_counter() - start
        failed += not ok
        print(f"{number:2d} {name:28s} {'PASS' if ok else 'FAIL'} "
              f"{elapsed:8.1f}s  {detail}")

    sys.exit(1 if failed else 0)


########################################################################
