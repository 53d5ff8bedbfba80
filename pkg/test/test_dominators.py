#! /usr/bin/env python
########################################################################
# dbarw
# Copyright (C) 2024, the dbarw developers.
# SPDX-License-Identifier: MIT
########################################################################

import math
import unittest
from fractions import Fraction

import numpy as np

from dbarw import errors
from dbarw.catalog import long_range_reference_model, reference_model
from dbarw.constants import EVENT_H_DOUBLE, EVENT_H_STEP, EVENT_Q_BIRTH
from dbarw.dominators import (B_of, DominatorParams, branch_bound_table,
                              condensed_tail, divergence_report,
                              moment_estimate, sample_H, sample_Q,
                              staircase_check, step_means, threshold_N0)
from dbarw.profiles import (TAIL_HOLD, ConstantProfile, PowerProfile,
                            StaircaseProfile, TableProfile)
from dbarw.rng import create_rng
from dbarw.sampling import alternating


FIVE = alternating((0, 1, 2, 3, 4), 1)


class ArithmeticTests(unittest.TestCase):

    def test_branch_bound_table(self):
        """Test the running maximum of n B_n."""
        table = branch_bound_table(TableProfile([5, 1, 1, 2], start=1,
                                                tail=TAIL_HOLD), 6)
        self.assertEqual([5, 5, 5, 8, 10, 12], list(table))
        self.assertEqual(12, B_of(ConstantProfile(2.0), 6))
        with self.assertRaises(ValueError):
            B_of(ConstantProfile(2.0), 0)

    def test_condensed_tail(self):
        """Test the condensed tail of the reference reciprocal series."""
        terms = 1.0 / branch_bound_table(ConstantProfile(2.0), 2 ** 16)
        self.assertAlmostEqual(4.5, condensed_tail(terms))

    def test_threshold(self):
        """Test the smallest N0 beyond which B_n <= D_bar N."""
        self.assertEqual(1, threshold_N0(ConstantProfile(2.0), 2.0, 64))
        self.assertEqual(4, threshold_N0(ConstantProfile(10.0), 2.0, 64))
        with self.assertRaises(errors.ConstantsInvalidError):
            threshold_N0(ConstantProfile(10.0), 0.001, 64)


class ParamsTests(unittest.TestCase):

    def test_reference_bound(self):
        """Test K must exceed 2.4 for the reference model."""
        params = DominatorParams.from_model(reference_model(), FIVE)
        self.assertAlmostEqual(2.4, params.K_bound)
        self.assertEqual(3.0, params.K)
        self.assertTrue(params.K_valid)
        self.assertEqual(5, params.w0)
        self.assertEqual(5, params.n0)
        small = DominatorParams.from_model(reference_model(), FIVE, K=2)
        self.assertFalse(small.K_valid)

    def test_step_mean(self):
        """Test holding-time means of the step-counting process."""
        params = DominatorParams.from_model(reference_model(), FIVE)
        self.assertAlmostEqual(1 / 8.4, params.step_mean(1))
        means = step_means(params, 10)
        for n in range(1, 11):
            self.assertAlmostEqual(params.step_mean(n), means[n - 1])

    def test_long_range_D(self):
        """Test D sums B~ over the long-range support."""
        params = DominatorParams.from_model(long_range_reference_model(),
                                            FIVE)
        self.assertAlmostEqual(sum(l ** -4 for l in range(2, 9)), params.D)


class PathTests(unittest.TestCase):

    def test_Q_path(self):
        """Test Q is a unit-step birth process from w0."""
        params = DominatorParams.from_model(reference_model(), FIVE)
        path = sample_Q(params, 0.5, create_rng(1))
        self.assertEqual(5, path.values[0])
        for a, b in zip(path.values, path.values[1:]):
            self.assertEqual(a + 1, b)
        self.assertEqual(sorted(path.times), path.times)
        self.assertTrue(all(k == EVENT_Q_BIRTH for k in path.kinds[1:]))
        self.assertEqual(path.final, path.value_at(0.5))
        self.assertEqual(5, path.value_at(0.0))

    def test_Q_mean(self):
        """Test E[Q(t) + 1] = (w0 + 1) exp(K t)."""
        params = DominatorParams.from_model(reference_model(), FIVE)
        rng = create_rng(2)
        finals = [sample_Q(params, 0.2, rng).final for _ in range(2000)]
        mean, err = moment_estimate(finals, 1)
        self.assertAlmostEqual(6 * math.exp(0.6) - 1, mean, delta=0.3)
        self.assertLess(err, 0.1)

    def test_Q_truncated(self):
        """Test the jump cap truncates the path."""
        params = DominatorParams.from_model(reference_model(), FIVE)
        path = sample_Q(params, 100.0, create_rng(3), max_jumps=20)
        self.assertTrue(path.truncated)

    def test_H_steps(self):
        """Test H only steps by one without long-range mass."""
        path = sample_H(3, 1.0, 0.0, 5.0, create_rng(4))
        self.assertTrue(all(k == EVENT_H_STEP for k in path.kinds[1:]))
        self.assertEqual(3 + len(path.times) - 1, path.final)

    def test_H_doubles(self):
        """Test doubling saturates to infinity."""
        path = sample_H(3, 1e-9, 1.0, 1e3, create_rng(5))
        self.assertIn(EVENT_H_DOUBLE, path.kinds)
        self.assertTrue(math.isinf(path.final))

    def test_H_invalid(self):
        """Test H needs alpha1 + D > 0."""
        with self.assertRaises(ValueError):
            sample_H(3, 0.0, 0.0, 1.0, create_rng(6))

    def test_path_rows(self):
        """Test path rows skip the starting value."""
        params = DominatorParams.from_model(reference_model(), FIVE)
        path = sample_Q(params, 0.5, create_rng(7))
        rows = list(path.rows())
        self.assertEqual(len(path.times) - 1, len(rows))


class MomentTests(unittest.TestCase):

    def test_moment_estimate(self):
        """Test mean and standard error of a moment."""
        mean, err = moment_estimate([1, 2, 3], 1)
        self.assertEqual(2.0, mean)
        self.assertAlmostEqual(1 / math.sqrt(3), err)
        mean, err = moment_estimate([1, 2, 3], 2)
        self.assertAlmostEqual(14 / 3, mean)
        mean, err = moment_estimate([4], 1)
        self.assertTrue(math.isinf(err))


class DivergenceTests(unittest.TestCase):

    def test_reference_diverges(self):
        """Test both series diverge for the reference model."""
        params = DominatorParams.from_model(reference_model(), FIVE)
        report = divergence_report(params, 2 ** 14)
        self.assertTrue(report.step_diverges)
        self.assertTrue(report.reciprocal_diverges)
        self.assertTrue(report.consistent)

    def test_quadratic_converges(self):
        """Test both series converge for B(N) = N^2."""
        params = DominatorParams(w0=1, n0=1, K=3.0, alpha1=1.0, alpha2=1.0,
                                 b_n=PowerProfile(1.0, -1.0),
                                 D_bar=math.inf)
        report = divergence_report(params, 2 ** 14)
        self.assertFalse(report.step_diverges)
        self.assertFalse(report.reciprocal_diverges)
        self.assertTrue(report.consistent)
        self.assertIn("consistent", report.to_descriptor())

    def test_staircase(self):
        """Test every staircase plateau carries unit reciprocal mass."""
        plateaus = staircase_check(StaircaseProfile(2), 100)
        self.assertEqual([(2, 10, Fraction(1)), (10, 10250, Fraction(1))],
                         plateaus)
        table = branch_bound_table(StaircaseProfile(2), 9)
        self.assertAlmostEqual(1.0, float(np.sum(1.0 / table[1:])))


if __name__ == "__main__":
    unittest.main()


########################################################################
