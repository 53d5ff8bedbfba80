#! /usr/bin/env python
########################################################################
# dbarw
# Copyright (C) 2024, the dbarw developers.
# SPDX-License-Identifier: MIT
########################################################################

import unittest

from dbarw.catalog import long_range_reference_model, reference_model
from dbarw.constants import MINUS, PLUS
from dbarw.profiles import ConstantProfile, PowerProfile
from dbarw.rates import (WALK, DeclaredConstants, ModelSpec, RateFamily,
                         catalog_build, family_ids, register_family)
from dbarw.rng import create_rng
from dbarw.sampling import CyclingSampler, RandomSampler, alternating
from dbarw.validators import (validate_A0, validate_A1, validate_A2,
                              validate_A3, validate_A4, validate_A5,
                              validate_all)


def repulsive_model(variant="a"):
    """Gap-rank walk whose rank weights decrease."""
    ref = reference_model()
    constants = DeclaredConstants(
        s_lower=0.5, d_bar=1.0, b_n=ConstantProfile(2.0), D_bar=2.0,
        a4_variant=variant)
    return ModelSpec(
        alpha1=1.0, alpha2=0.1,
        walk=catalog_build("gap_rank_g",
                           {"g_rank": [0.4, 0.3, 0.2, 0.1],
                            "scale": 0.5}),
        branch=ref.branch, constants=constants)


def evenly_spaced():
    return CyclingSampler([alternating((0, 2, 4, 6, 8), PLUS)])


@register_family("absolute_site_walk")
class AbsoluteSiteWalk(RateFamily):
    kind = WALK
    translation_invariant = False

    def rw_rates(self, config, site, sign=None):
        return float(abs(site)), 0.0


def attraction_model(walk):
    ref = reference_model()
    constants = DeclaredConstants(
        s_lower=0.5, d_bar=1.0, b_n=ConstantProfile(2.0), D_bar=2.0,
        a4_variant="b")
    return ModelSpec(alpha1=1.0, alpha2=0.1, walk=catalog_build(walk),
                     branch=ref.branch, constants=constants)


class ReferenceTests(unittest.TestCase):

    def test_all_pass(self):
        """Test the reference model satisfies every assumption."""
        reports = validate_all(reference_model(), RandomSampler(),
                               create_rng(1), samples=50, n_audit=2 ** 12)
        self.assertEqual(["A0", "A1", "A2", "A3", "A4", "A5"],
                         [r.assumption for r in reports])
        for report in reports:
            self.assertTrue(report.passed, report.to_descriptor())

    def test_long_range_passes(self):
        """Test the long-range reference model passes A5."""
        report = validate_A5(long_range_reference_model(), RandomSampler(),
                             create_rng(2), samples=30)
        self.assertTrue(report.passed)
        self.assertGreaterEqual(report.margin, 0)

    def test_descriptor(self):
        """Test the report descriptor fields."""
        report = validate_A1(reference_model(), RandomSampler(),
                             create_rng(3), samples=10)
        desc = report.to_descriptor()
        for key in ("assumption", "pass", "audited_samples",
                    "worst_witness", "margin"):
            self.assertIn(key, desc)
        self.assertEqual(10, desc["audited_samples"])

    def test_a0_walk(self):
        """Test a translation-invariant family has no discrepancy."""
        report = validate_A0(catalog_build("zero_drift_long_range"), 20, 16,
                             create_rng(4))
        self.assertTrue(report.passed)
        self.assertEqual(0, report.details["max_discrepancy"])

    def test_a0_catalog(self):
        """Test every catalog family is translation invariant."""
        for family_id in family_ids():
            family = catalog_build(family_id)
            if type(family).__module__ != "dbarw.catalog":
                continue
            report = validate_A0(family, 10, 16, create_rng(12))
            self.assertTrue(family.translation_invariant)
            self.assertTrue(report.passed, family_id)
            self.assertEqual(0, report.details["max_discrepancy"])

    def test_a4_extremality(self):
        """Test both attraction families keep the outermost particle
        extremal for either charge."""
        for walk in ("psi_attraction", "midpoint_attraction"):
            for charge in (PLUS, MINUS):
                report = validate_A4(attraction_model(walk),
                                     RandomSampler(9, 24, charge),
                                     create_rng(13), samples=100)
                self.assertTrue(report.details["extremality_holds"],
                                (walk, charge))
                self.assertTrue(report.passed, (walk, charge))


class FalsificationTests(unittest.TestCase):

    def test_a0_position_dependent(self):
        """Test rates that depend on the absolute site fail A0."""
        report = validate_A0(AbsoluteSiteWalk(), 5, 16, create_rng(14))
        self.assertFalse(report.passed)
        self.assertEqual(1.0, report.details["max_discrepancy"])
        self.assertEqual(-1.0, report.margin)
        self.assertIn("site", report.worst_witness)

    def test_a1_too_fast(self):
        """Test rates summing above one fail A1."""
        ref = reference_model()
        model = ModelSpec(alpha1=1.0, alpha2=0.1,
                          walk=catalog_build("const_symmetric",
                                             {"rate": 0.3}),
                          branch=ref.branch, constants=ref.constants)
        report = validate_A1(model, RandomSampler(), create_rng(5), 10)
        self.assertFalse(report.passed)
        self.assertLess(report.margin, 0)
        self.assertIsNotNone(report.worst_witness)

    def test_a2_bound_exceeded(self):
        """Test a branching rate above B_n fails A2."""
        ref = reference_model()
        model = ModelSpec(alpha1=1.0, alpha2=0.1, walk=ref.walk,
                          branch=catalog_build("const_branch",
                                               {"beta": 2.0}),
                          constants=ref.constants)
        report = validate_A2(model, RandomSampler(), create_rng(6), 10,
                             n_audit=2 ** 10)
        self.assertFalse(report.passed)
        self.assertFalse(report.details["bounds_ok"])

    def test_a2_convergent_series(self):
        """Test a fast-growing B_n fails the divergence check."""
        ref = reference_model()
        constants = DeclaredConstants(
            s_lower=0.5, d_bar=1.0, b_n=PowerProfile(2.0, -1.0))
        model = ModelSpec(alpha1=1.0, alpha2=0.1, walk=ref.walk,
                          branch=ref.branch, constants=constants)
        report = validate_A2(model, RandomSampler(), create_rng(7), 10,
                             n_audit=2 ** 12)
        self.assertFalse(report.details["diverges"])
        self.assertFalse(report.passed)

    def test_a3_envelope_too_small(self):
        """Test rates that feel far particles exceed a zero envelope."""
        ref = reference_model()
        model = ModelSpec(alpha1=1.0, alpha2=0.1,
                          walk=catalog_build("zero_drift_long_range"),
                          branch=ref.branch, constants=ref.constants)
        report = validate_A3(model, RandomSampler(), create_rng(8), 10)
        self.assertFalse(report.passed)

    def test_a4_repulsion(self):
        """Test decreasing rank weights fail A4a but hold A4b."""
        report = validate_A4(repulsive_model("a"), evenly_spaced(),
                             create_rng(9), samples=3)
        self.assertFalse(report.passed)
        self.assertLess(report.margin, 0)
        self.assertEqual([[0, 1], [2, -1], [4, 1], [6, -1], [8, 1]],
                         report.worst_witness["config"])
        self.assertTrue(report.details["b_holds"])
        report = validate_A4(repulsive_model("b"), evenly_spaced(),
                             create_rng(9), samples=3)
        self.assertTrue(report.passed)

    def test_a5_missing_bound(self):
        """Test a long-range family without declared B~ fails A5."""
        lr = long_range_reference_model()
        ref = reference_model()
        model = ModelSpec(alpha1=1.0, alpha2=0.1, walk=ref.walk,
                          branch=ref.branch, constants=ref.constants,
                          long_range=lr.long_range)
        report = validate_A5(model, RandomSampler(), create_rng(10), 5)
        self.assertFalse(report.passed)

    def test_a5_rates_above_bound(self):
        """Test long-range rates above B~ fail A5."""
        lr = long_range_reference_model()
        model = ModelSpec(
            alpha1=1.0, alpha2=0.1, walk=lr.walk, branch=lr.branch,
            constants=lr.constants,
            long_range=catalog_build("long_range_branch",
                                     {"max_range": 8, "beta2": 2.0}))
        report = validate_A5(model, RandomSampler(), create_rng(11), 5)
        self.assertFalse(report.passed)
        self.assertLess(report.margin, 0)


if __name__ == "__main__":
    unittest.main()


########################################################################
