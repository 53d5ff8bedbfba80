#! /usr/bin/env python
########################################################################
# dbarw
# Copyright (C) 2024, the dbarw developers.
# SPDX-License-Identifier: MIT
########################################################################

import math
import unittest

from dbarw import errors
from dbarw.profiles import (TAIL_HOLD, ConstantProfile, ExpProfile,
                            FunctionProfile, IteratedLogProfile, LogProfile,
                            LogisticProfile, PowerProfile, StaircaseProfile,
                            TableProfile, profile_from_descriptor)


class ProfileTests(unittest.TestCase):

    def test_number(self):
        """Test a bare number is a constant profile."""
        p = profile_from_descriptor(2)
        self.assertIsInstance(p, ConstantProfile)
        self.assertEqual(2.0, p(100))
        self.assertEqual(math.inf, p.total())

    def test_table_tails(self):
        """Test table tails hold or vanish."""
        zero = profile_from_descriptor([3, 2, 1], start=1)
        hold = profile_from_descriptor([3, 2, 1], start=1, tail=TAIL_HOLD)
        self.assertEqual(3.0, zero(1))
        self.assertEqual(0.0, zero(4))
        self.assertEqual(1.0, hold(4))
        self.assertEqual(6.0, zero.total(1))
        self.assertEqual(math.inf, hold.total(1))

    def test_kind_dict(self):
        """Test kind descriptors build the matching profile."""
        p = profile_from_descriptor({"kind": "power", "exponent": 4})
        self.assertIsInstance(p, PowerProfile)
        self.assertAlmostEqual(1 / 16, p(2))
        self.assertEqual(0.0, p(0))

    def test_unknown_kind(self):
        """Test unknown kinds are rejected."""
        with self.assertRaises(errors.InvalidParameterError):
            profile_from_descriptor({"kind": "wiggle"})
        with self.assertRaises(errors.InvalidParameterError):
            profile_from_descriptor({"kind": "power", "power": 2})
        with self.assertRaises(errors.InvalidParameterError):
            profile_from_descriptor(True)
        with self.assertRaises(errors.InvalidParameterError):
            profile_from_descriptor("two")

    def test_power_total(self):
        """Test the power-law sum bound."""
        p = PowerProfile(exponent=2.0)
        self.assertGreaterEqual(p.total(1), math.pi ** 2 / 6)
        self.assertLess(p.total(1), math.pi ** 2 / 6 + 1e-3)
        self.assertEqual(math.inf, PowerProfile(exponent=1.0).total(1))

    def test_exp_total(self):
        """Test the geometric sum."""
        p = ExpProfile(rate=math.log(2))
        self.assertAlmostEqual(2.0, p.total(0))

    def test_log(self):
        """Test the log profile is clamped at zero."""
        p = LogProfile()
        self.assertEqual(0.0, p(1))
        self.assertAlmostEqual(math.log(10), p(10))

    def test_iterated_log_nonincreasing(self):
        """Test iterated-log profiles never increase."""
        for depth in range(4):
            p = IteratedLogProfile(depth)
            values = [p(n) for n in range(1, 200)]
            for a, b in zip(values, values[1:]):
                self.assertGreaterEqual(a, b)

    def test_logistic_range(self):
        """Test the logistic map stays inside its band."""
        p = LogisticProfile(epsilon=0.1)
        for u in (-1e6, -3.0, 0.0, 3.0, 1e6):
            self.assertGreaterEqual(p(u), 0.1)
            self.assertLessEqual(p(u), 0.9)
        with self.assertRaises(errors.InvalidParameterError):
            LogisticProfile(epsilon=0.5)

    def test_staircase(self):
        """Test the staircase running product and its plateaus."""
        p = StaircaseProfile(start=2)
        self.assertEqual([(2, 10), (10, 10250)], p.plateaus(100))
        self.assertEqual(8.0, p.product(2))
        self.assertEqual(8.0, p.product(9))
        self.assertEqual(10 * 2 ** 10, p.product(10))
        self.assertAlmostEqual(8.0 / 5, p(5))

    def test_function(self):
        """Test callables are wrapped."""
        p = profile_from_descriptor(lambda n: n + 1)
        self.assertIsInstance(p, FunctionProfile)
        self.assertEqual(3.0, p(2))

    def test_round_trip(self):
        """Test descriptors rebuild equal profiles."""
        for p in (TableProfile([1, 2], start=1, tail=TAIL_HOLD),
                  PowerProfile(2.0, 3.0, 1, 5.0), ExpProfile(1.0, 0.5),
                  StaircaseProfile(3), IteratedLogProfile(2)):
            again = profile_from_descriptor(p.to_descriptor())
            self.assertEqual(p.to_descriptor(), again.to_descriptor())
            self.assertEqual(p(7), again(7))


if __name__ == "__main__":
    unittest.main()


########################################################################
