#! /usr/bin/env python
########################################################################
# dbarw
# Copyright (C) 2024, the dbarw developers.
# SPDX-License-Identifier: MIT
########################################################################

import math
import unittest

from dbarw import errors
from dbarw.catalog import long_range_reference_model, reference_model
from dbarw.constants import (EVENT_BRANCH, EVENT_LONG_BRANCH, EVENT_RW_LEFT,
                             EVENT_RW_RIGHT, RECORD_SUMMARY, STOP_HORIZON,
                             STOP_SINGLETON)
from dbarw.engine import (STOP_MAX_EVENTS, StopRule, enumerate_transitions,
                          evolve, simulate, simulate_coupled_steps,
                          simulate_coupled_width, step, total_rate)
from dbarw.lattice import f_cd, from_particles, is_careful, singleton
from dbarw.rates import ModelSpec, catalog_build
from dbarw.rng import create_rng
from dbarw.sampling import alternating


FIVE = alternating((0, 1, 2, 3, 4), 1)


class EnumerationTests(unittest.TestCase):

    def test_singleton_transitions(self):
        """Test the enabled jumps of a reference singleton."""
        ts = enumerate_transitions(reference_model(), singleton(0))
        self.assertEqual([EVENT_RW_LEFT, EVENT_RW_RIGHT, EVENT_BRANCH],
                         [t.kind for t in ts])
        self.assertEqual([0.25, 0.25, 0.1], [t.rate for t in ts])
        self.assertEqual(3, ts[2].successor.count)
        self.assertAlmostEqual(0.6, total_rate(reference_model(),
                                               singleton(0)))

    def test_order(self):
        """Test transitions are listed by site, then kind."""
        y = from_particles([(0, 1), (3, -1), (7, 1)])
        ts = enumerate_transitions(reference_model(), y)
        sites = [t.site for t in ts]
        self.assertEqual(sorted(sites), sites)
        self.assertEqual(9, len(ts))

    def test_long_range_careful(self):
        """Test long-range jumps respect the empty interior."""
        model = long_range_reference_model()
        y = from_particles([(0, 1), (3, -1), (10, 1)])
        ts = enumerate_transitions(model, y)
        long = [t for t in ts if t.kind == EVENT_LONG_BRANCH]
        self.assertTrue(long)
        for t in long:
            self.assertTrue(is_careful(y, t.site, t.distance))
        at_zero = [t.distance for t in long if t.site == 0]
        self.assertEqual([2, 3], at_zero)
        at_ten = [t.distance for t in long if t.site == 10]
        self.assertEqual(list(range(2, 8)), at_ten)
        self.assertAlmostEqual(0.5 * 2 ** -4, long[0].rate)

    def test_negative_rate(self):
        """Test a family returning a negative rate is refused."""
        ref = reference_model()
        walk = catalog_build("const_symmetric")
        walk.table[1] = (-0.1, 0.25)
        model = ModelSpec(1.0, 0.1, walk, ref.branch, ref.constants)
        with self.assertRaises(errors.ModelInvalidError):
            enumerate_transitions(model, singleton(0))


class StepTests(unittest.TestCase):

    def test_reproducible(self):
        """Test a fixed seed gives the same step."""
        model = reference_model()
        a = step(singleton(0), model, create_rng(42))
        b = step(singleton(0), model, create_rng(42))
        self.assertEqual(a[0], b[0])
        self.assertEqual(a[1].kind, b[1].kind)
        self.assertGreater(a[0], 0)

    def test_event_observables(self):
        """Test event fields describe the successor."""
        dt, event, y = step(FIVE, reference_model(), create_rng(1), 2.0)
        self.assertEqual(2.0 + dt, event.time)
        self.assertEqual(5, event.pre_count)
        self.assertEqual(y.count, event.post_count)
        self.assertEqual(y.width, event.post_width)
        self.assertEqual(f_cd(y), event.post_fcd)
        self.assertEqual(y.charge, event.charge)

    def test_no_transitions(self):
        """Test a frozen configuration returns no event."""
        ref = reference_model()
        frozen = ModelSpec(0.0, 0.0, ref.walk, ref.branch, ref.constants)
        dt, event, y = step(singleton(0), frozen, create_rng(1))
        self.assertTrue(math.isinf(dt))
        self.assertIsNone(event)
        self.assertEqual(singleton(0), y)


class SimulateTests(unittest.TestCase):

    def test_horizon(self):
        """Test a run stops at its horizon with increasing times."""
        traj = simulate(reference_model(), FIVE, StopRule(horizon=20.0),
                        create_rng(7), seed=7)
        self.assertEqual(STOP_HORIZON, traj.stop_reason)
        self.assertEqual(20.0, traj.horizon)
        times = [e.time for e in traj.events]
        self.assertEqual(sorted(times), times)
        self.assertTrue(all(t <= 20.0 for t in times))
        self.assertEqual(len(traj.events), traj.n_events)
        self.assertEqual(traj.events[-1].configuration, traj.final)

    def test_conservation(self):
        """Test charge and odd parity at every event."""
        model = long_range_reference_model()
        for event in evolve(model, FIVE, create_rng(3), horizon=50.0):
            y = event.configuration
            self.assertEqual(1, y.charge)
            self.assertEqual(1, y.count % 2)
            self.assertEqual(y.count, len(set(y.positions)))
            for a, b in zip(y.signs, y.signs[1:]):
                self.assertNotEqual(a, b)

    def test_reproducible(self):
        """Test equal seeds give equal trajectories."""
        model = reference_model()
        a = simulate(model, FIVE, StopRule(horizon=10.0), create_rng(42))
        b = simulate(model, FIVE, StopRule(horizon=10.0), create_rng(42))
        self.assertEqual([(e.time, e.kind, e.site) for e in a.events],
                         [(e.time, e.kind, e.site) for e in b.events])

    def test_max_events(self):
        """Test the event cap of a stop rule."""
        traj = simulate(reference_model(), FIVE, StopRule(max_events=5),
                        create_rng(1))
        self.assertEqual(STOP_MAX_EVENTS, traj.stop_reason)
        self.assertEqual(5, traj.n_events)

    def test_singleton_stop(self):
        """Test stopping on the first singleton."""
        traj = simulate(reference_model(), FIVE,
                        StopRule(horizon=1e4, singleton=True), create_rng(5))
        self.assertEqual(STOP_SINGLETON, traj.stop_reason)
        self.assertTrue(traj.final.is_singleton)
        self.assertEqual(traj.horizon, traj.hit_singleton_time)

    def test_summary_mode(self):
        """Test summary mode keeps snapshots only."""
        traj = simulate(reference_model(), FIVE, StopRule(horizon=5.0),
                        create_rng(2), record=RECORD_SUMMARY, seed=2)
        self.assertEqual([], traj.events)
        self.assertEqual(traj.n_events, len(traj.snapshots))
        summary = traj.summary()
        self.assertEqual(2, summary["seed"])
        self.assertEqual(traj.final.count, summary["final_count"])
        self.assertGreaterEqual(summary["max_width"], FIVE.width)

    def test_time_average(self):
        """Test a frozen run averages its constant count."""
        ref = reference_model()
        frozen = ModelSpec(0.0, 0.0, ref.walk, ref.branch, ref.constants)
        traj = simulate(frozen, FIVE, StopRule(horizon=3.0), create_rng(1))
        self.assertEqual(5.0, traj.time_avg_count)
        with self.assertRaises(errors.ModelInvalidError):
            simulate(frozen, FIVE, StopRule(max_events=3), create_rng(1))

    def test_budget(self):
        """Test the event budget is enforced."""
        with self.assertRaises(errors.EventBudgetExceededError) as cm:
            simulate(reference_model(), FIVE, StopRule(horizon=1e6),
                     create_rng(1), event_budget=10)
        self.assertEqual(10, cm.exception.budget)

    def test_stop_rule_validation(self):
        """Test a stop rule must be able to fire."""
        with self.assertRaises(ValueError):
            StopRule()
        with self.assertRaises(ValueError):
            StopRule(horizon=-1.0)
        with self.assertRaises(ValueError):
            StopRule(max_events=0)


class CouplingTests(unittest.TestCase):

    def test_width_dominated(self):
        """Test W <= Q along coupled reference runs."""
        model = reference_model()
        for k in range(5):
            c = simulate_coupled_width(model, FIVE, 3, 50.0,
                                       create_rng(100, k))
            for w, q in zip(c.widths, c.dominating):
                self.assertLessEqual(w, q)

    def test_steps_dominated(self):
        """Test the step-counting process jumps first."""
        model = reference_model()
        for k in range(5):
            c = simulate_coupled_steps(model, FIVE, 50.0, create_rng(200, k))
            for t, s in zip(c.times, c.dominating_times):
                self.assertLessEqual(s, t)
            n, m = c.counts_at(25.0)
            self.assertLessEqual(n, m)

    def test_undersized_K(self):
        """Test K = 1 from a dense start violates capacity."""
        dense = alternating(tuple(range(9)), 1)
        with self.assertRaises(errors.DominationViolatedError) as cm:
            simulate_coupled_width(reference_model(), dense, 1, 10.0,
                                   create_rng(1))
        self.assertEqual("capacity", cm.exception.reason)

    def test_long_range_refused(self):
        """Test couplings need nearest-neighbour models."""
        with self.assertRaises(errors.ModelInvalidError):
            simulate_coupled_width(long_range_reference_model(), FIVE, 3,
                                   1.0, create_rng(1))


if __name__ == "__main__":
    unittest.main()


########################################################################
