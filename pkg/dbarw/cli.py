#! /usr/bin/env python
########################################################################
# dbarw
# Copyright (C) 2024, the dbarw developers.
# SPDX-License-Identifier: MIT
########################################################################

"""Command-line interface.

    dbarw {simulate,ensemble,validate,drift-audit,recurrence,dominate}
          --config PATH [--jobs N] [--out DIR] [--seed U64] [-v|-q]

Replica k of a run with seed s draws from PCG64 seeded with s XOR k.
Replicas may run in worker processes; all files are written by the
parent after every replica has finished."""

import argparse
import functools
import logging
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .codec import dumps, histogram_csv, path_csv, trajectory_csv
from .config import load_config
from .constants import (EVENT_Q_BIRTH, EXIT_BUDGET, EXIT_CONFIG,
                        EXIT_DOMINATION, EXIT_FAILED, EXIT_MODEL, EXIT_OK,
                        RECORD_SUMMARY, STOP_SINGLETON)
from .diagnostics import (WidthGrowthReport, default_grid, drift_audit,
                          merge_recurrence, recurrence_study, widths_at)
from .dominators import (DominatorParams, DominatorPath, divergence_report,
                         moment_estimate, sample_H)
from .engine import (StopRule, simulate, simulate_coupled_steps,
                     simulate_coupled_width)
from .errors import (ConfigParseError, DbarwError, DominationViolatedError,
                     EventBudgetExceededError, ModelError)
from .rng import create_rng, derive_seed, get_seed
from .sampling import RandomSampler
from .validators import validate_all


logger = logging.getLogger(__name__)


########################################################################
# Output.

def _write(config, name, text):
    kind = "csv" if name.endswith(".csv") else "json"
    if kind not in config.formats:
        return None
    os.makedirs(config.out_dir, exist_ok=True)
    path = os.path.join(config.out_dir, name)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(text)
    logger.info("Wrote %s", path)
    return path


def _seed(config):
    if config.seed is not None:
        return config.seed
    seed = get_seed()
    logger.warning("No seed configured; drew %d", seed)
    return seed


def _stop_rule(config):
    return StopRule(horizon=config.horizon, max_events=config.max_events,
                    singleton=config.stop == STOP_SINGLETON)


def _replicas(jobs, fn, count):
    """Call fn(k) for k in range(count), in order."""
    if jobs <= 1 or count <= 1:
        return [fn(k) for k in range(count)]
    with ProcessPoolExecutor(max_workers=min(jobs, count)) as pool:
        return list(pool.map(fn, range(count)))


def _mean_stderr(values):
    x = np.asarray(values, dtype=float)
    if len(x) < 2:
        return float(x.mean()), math.inf
    return float(x.mean()), float(x.std(ddof=1) / math.sqrt(len(x)))


########################################################################
# Workers.  Module-level so worker processes can unpickle them.

def _ensemble_worker(model, initial, stop, seed, budget, grid, k):
    rng = create_rng(seed, k)
    trajectory = simulate(model, initial, stop, rng, record=RECORD_SUMMARY,
                          seed=derive_seed(seed, k), event_budget=budget)
    snapshots = trajectory.snapshots
    widths = widths_at(initial, [s.time for s in snapshots],
                       [s.width for s in snapshots], grid)
    return trajectory.summary(), [float(w) for w in widths]


def _recurrence_worker(model, initial, config, seed, k):
    return recurrence_study(model, initial, config.horizon,
                            create_rng(seed, k), config.burn_in,
                            config.grid, config.windows,
                            config.event_budget)


def _dominate_worker(model, initial, params, horizon, seed, budget, k):
    rng = create_rng(seed, k)
    width = simulate_coupled_width(model, initial, params.K, horizon, rng,
                                   budget, params=params)
    steps = simulate_coupled_steps(model, initial, horizon, rng, budget)
    path = DominatorPath(width.times, width.dominating,
                         [None] + [EVENT_Q_BIRTH] * (len(width.times) - 1),
                         horizon)
    return {"events": len(width.times) - 1,
            "max_width": max(width.widths),
            "final_Q": width.dominating[-1],
            "saturated": width.saturated,
            "steps": len(steps.times) - 1}, path


def _h_worker(model, initial, params, horizon, seed, budget, k):
    rng = create_rng(seed, k)
    return sample_H(initial.width, model.alpha1, params.D, horizon, rng,
                    model.alpha2, params.B_bar, max_jumps=budget)


########################################################################
# Commands.

def cmd_simulate(args, config):
    """Run one trajectory; write trajectory.csv and summary.json."""
    seed = _seed(config)
    trajectory = simulate(config.model, config.initial, _stop_rule(config),
                          create_rng(seed), config.mode, seed,
                          config.event_budget)
    _write(config, "trajectory.csv", trajectory_csv(trajectory))
    _write(config, "summary.json", dumps(trajectory.summary()))
    return EXIT_OK


def cmd_ensemble(args, config):
    """Run replicas in summary mode; write merged statistics and the
    width-growth check."""
    seed = _seed(config)
    stop = _stop_rule(config)
    top = config.horizon if math.isfinite(config.horizon) else 1.0
    grid = sorted(config.grid) if config.grid else default_grid(top)
    fn = functools.partial(_ensemble_worker, config.model, config.initial,
                           stop, seed, config.event_budget, grid)
    results = _replicas(args.jobs, fn, config.replicas)
    summaries = [s for s, _ in results]
    growth = WidthGrowthReport.from_samples(
        config.model, config.initial, grid, [w for _, w in results])
    avg, avg_err = _mean_stderr([s["time_avg_count"] for s in summaries])
    final, final_err = _mean_stderr([s["final_count"] for s in summaries])
    hits = sum("hit_singleton_time" in s for s in summaries)
    report = {"seed": seed, "replicas": config.replicas,
              "time_avg_count": avg, "time_avg_stderr": avg_err,
              "final_count": final, "final_count_stderr": final_err,
              "hit_singleton_fraction": hits / len(summaries),
              "width_growth": growth.to_descriptor(),
              "summaries": summaries}
    _write(config, "ensemble.json", dumps(report))
    return EXIT_OK if growth.passed else EXIT_FAILED


def cmd_validate(args, config):
    """Write one report per assumption; fail unless all pass."""
    rng = create_rng(_seed(config))
    sampler = RandomSampler(config.max_count, config.width)
    reports = validate_all(config.model, sampler, rng, config.samples,
                           config.width, config.n_audit, config.l_grid)
    for report in reports:
        _write(config, f"{report.assumption}.json",
               dumps(report.to_descriptor()))
    failed = [r.assumption for r in reports if not r.passed]
    if failed:
        logger.error("Assumptions failed: %s", ", ".join(failed))
        return EXIT_FAILED
    return EXIT_OK


def cmd_drift_audit(args, config):
    """Audit the drift bound; fail on any violation or mismatch."""
    rng = create_rng(_seed(config))
    sampler = RandomSampler(config.max_count, config.width)
    report = drift_audit(config.model, sampler, config.samples, rng)
    _write(config, "drift_report.json", dumps(report.to_descriptor()))
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_recurrence(args, config):
    """Replicated long runs; fail if the time-average count leaves the
    stationary band."""
    config.model.require_recurrent()
    if not math.isfinite(config.horizon):
        raise ConfigParseError("'run.horizon' must be finite for recurrence")
    seed = _seed(config)
    fn = functools.partial(_recurrence_worker, config.model,
                           config.initial, config, seed)
    stats = _replicas(args.jobs, fn, config.replicas)
    model = config.model
    summary = merge_recurrence(stats, bound=model.C_bar / model.c)
    _write(config, "recurrence.json", dumps(
        {"seed": seed, "summary": summary.to_descriptor(),
         "replicas": [s.to_descriptor() for s in stats]}))
    _write(config, "width_histogram.csv",
           histogram_csv(summary.width_histogram))
    if not summary.all_returned:
        logger.warning("Not every replica returned to the singleton")
    return EXIT_OK if summary.within_band else EXIT_FAILED


def cmd_dominate(args, config):
    """Coupled runs against the dominating processes.

    Nearest-neighbour models run the width and step couplings; long-range
    models sample the long-range width chain.  Any violation exits
    with the domination code."""
    if not math.isfinite(config.horizon):
        raise ConfigParseError("'run.horizon' must be finite for dominate")
    model = config.model
    seed = _seed(config)
    params = DominatorParams.from_model(model, config.initial, config.K,
                                        config.n_audit)
    report = {"seed": seed, "replicas": config.replicas, "K": params.K,
              "K_bound": params.K_bound, "K_valid": params.K_valid,
              "N0": params.N0,
              "divergence": divergence_report(params,
                                              config.n_audit).to_descriptor()}
    if model.long_range is None:
        fn = functools.partial(_dominate_worker, model, config.initial,
                               params, config.horizon, seed,
                               config.event_budget)
        results = _replicas(args.jobs, fn, config.replicas)
        runs = [r for r, _ in results]
        finals = [r["final_Q"] for r in runs if not r["saturated"]]
        report.update(
            violations=0, runs=runs,
            saturated=sum(r["saturated"] for r in runs),
            Q_moments=({str(r): moment_estimate(finals, r) for r in (1, 2)}
                       if finals else None))
        _write(config, "q_path.csv", path_csv(results[0][1]))
    else:
        fn = functools.partial(_h_worker, model, config.initial, params,
                               config.horizon, seed, config.event_budget)
        paths = _replicas(args.jobs, fn, config.replicas)
        finals = [p.final for p in paths]
        report.update(
            D=params.D,
            saturated=sum(math.isinf(v) for v in finals),
            H_moments={str(r): moment_estimate(finals, r) for r in (1, 2)})
        _write(config, "h_path.csv", path_csv(paths[0]))
    _write(config, "domination.json", dumps(report))
    return EXIT_OK


COMMANDS = {
    "simulate": cmd_simulate,
    "ensemble": cmd_ensemble,
    "validate": cmd_validate,
    "drift-audit": cmd_drift_audit,
    "recurrence": cmd_recurrence,
    "dominate": cmd_dominate,
}


########################################################################

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, metavar="PATH",
                        help="run configuration JSON file")
    common.add_argument("--jobs", type=int, default=1, metavar="N",
                        help="worker processes for replicas (default 1)")
    common.add_argument("--out", metavar="DIR",
                        help="output directory (default ./out)")
    common.add_argument("--seed", type=int, metavar="U64",
                        help="seed, overriding the configuration")
    common.add_argument("--replicas", type=int, metavar="N",
                        help="replica count, overriding the configuration")
    common.add_argument("--samples", type=int, metavar="N",
                        help="audit sample count")
    common.add_argument("--width", type=int, metavar="W",
                        help="audit window width")
    common.add_argument("--K", type=float, dest="K",
                        help="maximum width process rate constant")
    common.add_argument("-v", "--verbose", action="count", default=0,
                        help="more logging; repeat for debug")
    common.add_argument("-q", "--quiet", action="store_true",
                        help="log errors only")

    parser = argparse.ArgumentParser(
        prog="dbarw",
        description="Double branching annihilating random walk laboratory")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True
    for name, fn in COMMANDS.items():
        sub.add_parser(name, parents=[common],
                       help=fn.__doc__.splitlines()[0])
    return parser


def _configure_logging(args):
    if args.quiet:
        level = logging.ERROR
    else:
        level = [logging.WARNING, logging.INFO,
                 logging.DEBUG][min(args.verbose, 2)]
    logging.basicConfig(level=level, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def main(argv=None):
    """Entry point; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_CONFIG if e.code else EXIT_OK
    _configure_logging(args)
    try:
        if args.jobs < 1:
            raise ConfigParseError("--jobs must be at least 1")
        config = load_config(args.config, out_dir=args.out, seed=args.seed,
                             replicas=args.replicas, samples=args.samples,
                             width=args.width, K=args.K)
        return COMMANDS[args.command](args, config)
    except ConfigParseError as e:
        logger.error("%s", e)
        return EXIT_CONFIG
    except ModelError as e:
        logger.error("%s", e)
        return EXIT_MODEL
    except EventBudgetExceededError as e:
        logger.error("%s", e)
        return EXIT_BUDGET
    except DominationViolatedError as e:
        logger.error("%s", e)
        return EXIT_DOMINATION
    except DbarwError as e:
        logger.error("%s", e)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())


########################################################################
