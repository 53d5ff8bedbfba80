#! /usr/bin/env python
########################################################################
# dbarw
# Copyright (C) 2024, the dbarw developers.
# SPDX-License-Identifier: MIT
########################################################################

import collections
import itertools
import unittest

from dbarw import errors
from dbarw.constants import LEFT, MINUS, PLUS, POSITION_MAX, RIGHT
from dbarw.lattice import (HeightFunction, apply_branch, apply_long_branch,
                           apply_rw, f_cd, from_particles, is_careful,
                           singleton, to_height, to_interface)
from dbarw.sampling import exhaustive_configurations


def bfs_distance(values, kappa):
    """Adjacent transpositions needed to sort a height window so every
    1 - kappa precedes every kappa."""
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
                nxt = list(state)
                nxt[i], nxt[i + 1] = nxt[i + 1], nxt[i]
                nxt = tuple(nxt)
                if nxt not in seen:
                    seen[nxt] = seen[state] + 1
                    queue.append(nxt)
    raise AssertionError("target unreachable")


class ConfigurationTests(unittest.TestCase):

    def test_sorted_on_build(self):
        """Test particles are sorted by position."""
        y = from_particles([(5, 1), (0, 1), (2, -1)])
        self.assertEqual((0, 2, 5), y.positions)
        self.assertEqual((1, -1, 1), y.signs)

    def test_observables(self):
        """Test count, charge, width and kappa."""
        y = from_particles([(0, -1), (3, 1), (4, -1)])
        self.assertEqual(3, y.count)
        self.assertEqual(MINUS, y.charge)
        self.assertEqual(5, y.width)
        self.assertEqual(0, y.kappa)
        self.assertFalse(y.is_singleton)
        self.assertTrue(singleton(7).is_singleton)

    def test_even_count_rejected(self):
        """Test an even particle count is rejected."""
        with self.assertRaises(errors.EvenCountError):
            from_particles([(0, 1), (1, -1)])

    def test_empty_rejected(self):
        """Test the empty configuration is rejected."""
        with self.assertRaises(errors.EvenCountError):
            from_particles([])

    def test_non_alternating_rejected(self):
        """Test neighbouring like signs are rejected."""
        with self.assertRaises(errors.NonAlternatingError):
            from_particles([(0, 1), (1, 1), (2, -1)])

    def test_duplicate_rejected(self):
        """Test a doubly occupied site is rejected."""
        with self.assertRaises(errors.DuplicatePositionError):
            from_particles([(0, 1), (0, -1), (2, 1)])

    def test_bad_sign_rejected(self):
        """Test a sign other than +-1 is rejected."""
        with self.assertRaises(errors.InvalidSignError):
            from_particles([(0, 2)])

    def test_overflow_rejected(self):
        """Test positions beyond 64 bits are rejected."""
        with self.assertRaises(errors.PositionOverflowError):
            from_particles([(POSITION_MAX + 1, 1)])

    def test_errors_are_value_errors(self):
        """Test configuration errors can be caught as ValueError."""
        with self.assertRaises(ValueError):
            from_particles([(0, 1), (1, 1), (2, -1)])

    def test_translate_and_anchor(self):
        """Test translation and anchoring round-trip."""
        y = from_particles([(3, 1), (4, -1), (9, 1)])
        anchored = y.anchored()
        self.assertEqual((0, 1, 6), anchored.offsets)
        self.assertEqual(3, anchored.offset)
        self.assertEqual(y, anchored.restore())
        self.assertEqual(y.translate(2), anchored.restore(5))
        self.assertEqual(anchored, y.translate(-40).anchored())

    def test_ranks_follow_charge(self):
        """Test ranks count from the right for charge +1."""
        plus = from_particles([(0, 1), (2, -1), (5, 1)])
        minus = from_particles([(0, -1), (2, 1), (5, -1)])
        self.assertEqual((3, 2, 1), plus.ranks)
        self.assertEqual((5, 2, 0), plus.rank_positions)
        self.assertEqual((1, 2, 3), minus.ranks)
        self.assertEqual((0, 2, 5), minus.rank_positions)

    def test_gaps(self):
        """Test gaps carry infinite sentinels at both ends."""
        y = from_particles([(0, 1), (2, -1), (5, 1)])
        gaps = y.gaps
        self.assertEqual(float("inf"), gaps[0])
        self.assertEqual((3, 2), gaps[1:3])
        self.assertEqual(float("inf"), gaps[3])

    def test_literal(self):
        """Test the literal form."""
        y = from_particles([(0, 1), (2, -1), (5, 1)])
        self.assertEqual([[0, 1], [2, -1], [5, 1]], y.to_literal())


class HeightTests(unittest.TestCase):

    def test_singleton_plus(self):
        """Test the height of a plus singleton steps up at it."""
        x = to_height(singleton(0, PLUS))
        self.assertEqual(0, x.left_limit)
        self.assertEqual(0, x.value_at(-1))
        self.assertEqual(1, x.value_at(0))
        self.assertEqual(1, x.right_limit)

    def test_segments(self):
        """Test runs between consecutive flips."""
        x = to_height(from_particles([(0, 1), (2, -1), (5, 1)]))
        self.assertEqual([(0, 2, 1), (2, 5, 0)], x.segments())
        self.assertEqual([0, 1, 1, 0, 0, 0, 1], x.values(-1, 6))

    def test_round_trip(self):
        """Test to_interface inverts to_height."""
        for y in exhaustive_configurations(6):
            self.assertEqual(y, to_interface(to_height(y)))

    def test_bad_height_rejected(self):
        """Test invalid height descriptions are rejected."""
        with self.assertRaises(errors.HeightFunctionError):
            HeightFunction(2, [0])
        with self.assertRaises(errors.HeightFunctionError):
            HeightFunction(0, [0, 1])
        with self.assertRaises(errors.HeightFunctionError):
            HeightFunction(0, [3, 1, 5])


class InversionCountTests(unittest.TestCase):

    def test_singleton(self):
        """Test a singleton has no wrongly ordered pairs."""
        self.assertEqual(0, f_cd(singleton(3, MINUS)))

    def test_three_particles(self):
        """Test a plus-minus-plus triple."""
        self.assertEqual(1, f_cd(from_particles([(0, 1), (1, -1), (2, 1)])))
        self.assertEqual(6, f_cd(from_particles([(0, 1), (2, -1), (5, 1)])))

    def test_width_bound(self):
        """Test f_cd is at least the width minus two."""
        for y in exhaustive_configurations(7):
            self.assertGreaterEqual(f_cd(y), y.width - 2)

    def test_matches_transposition_distance(self):
        """Test f_cd equals the adjacent-transposition distance to the
        step profile."""
        for y in exhaustive_configurations(8):
            x = to_height(y)
            window = x.values(y.left, y.right)
            self.assertEqual(bfs_distance(window, y.kappa), f_cd(y), y)


class UpdateTests(unittest.TestCase):

    def test_walk(self):
        """Test a free jump keeps every particle."""
        y = from_particles([(0, 1), (3, -1), (6, 1)])
        z = apply_rw(y, 3, LEFT)
        self.assertEqual((0, 2, 6), z.positions)
        self.assertEqual(y.signs, z.signs)

    def test_walk_annihilates(self):
        """Test jumping onto a neighbour removes both."""
        y = from_particles([(0, 1), (1, -1), (6, 1)])
        z = apply_rw(y, 0, RIGHT)
        self.assertEqual(singleton(6, PLUS), z)

    def test_walk_empty_site(self):
        """Test moving from an empty site fails."""
        with self.assertRaises(errors.EmptySiteError):
            apply_rw(singleton(0), 1, LEFT)

    def test_walk_bad_direction(self):
        """Test an unknown direction fails."""
        with self.assertRaises(ValueError):
            apply_rw(singleton(0), 0, "up")

    def test_branch_singleton(self):
        """Test branching a singleton makes a triple."""
        z = apply_branch(singleton(0, PLUS), 0)
        self.assertEqual(from_particles([(-1, 1), (0, -1), (1, 1)]), z)

    def test_branch_annihilates(self):
        """Test offspring landing on opposite particles annihilate."""
        y = from_particles([(0, 1), (1, -1), (2, 1)])
        z = apply_branch(y, 1)
        self.assertEqual(singleton(1, PLUS), z)

    def test_long_branch(self):
        """Test long-range branching to an empty neighbourhood."""
        z = apply_long_branch(singleton(0, MINUS), 0, 3)
        self.assertEqual(from_particles([(-3, -1), (0, 1), (3, -1)]), z)

    def test_long_branch_annihilates_at_range(self):
        """Test offspring may land on the nearest particle."""
        y = from_particles([(0, 1), (3, -1), (9, 1)])
        self.assertTrue(is_careful(y, 0, 3))
        z = apply_long_branch(y, 0, 3)
        self.assertEqual(from_particles([(-3, 1), (0, -1), (9, 1)]), z)

    def test_long_branch_requires_empty_interior(self):
        """Test a particle inside the range blocks the branch."""
        y = from_particles([(0, 1), (2, -1), (9, 1)])
        self.assertFalse(is_careful(y, 0, 3))
        with self.assertRaises(errors.InteriorOccupiedError):
            apply_long_branch(y, 0, 3)

    def test_long_branch_range(self):
        """Test range 1 is not a long-range branch."""
        with self.assertRaises(errors.InvalidRangeError):
            apply_long_branch(singleton(0), 0, 1)

    def test_parity_and_charge_conserved(self):
        """Test every transition keeps charge and odd count."""
        for y in itertools.islice(exhaustive_configurations(6), 200):
            for site in y.positions:
                for z in (apply_rw(y, site, LEFT), apply_rw(y, site, RIGHT),
                          apply_branch(y, site)):
                    self.assertEqual(y.charge, z.charge)
                    self.assertEqual(1, z.count % 2)
                    self.assertIn(z.count - y.count, (-2, 0, 2))


if __name__ == "__main__":
    unittest.main()


########################################################################
