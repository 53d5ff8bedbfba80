#! /usr/bin/env python
########################################################################
# dbarw
# Copyright (C) 2024, the dbarw developers.
# SPDX-License-Identifier: MIT
########################################################################

import json
import math
import os
import tempfile
import unittest

from dbarw import errors
from dbarw.config import load_config, model_from_descriptor, parse_config
from dbarw.constants import (DEFAULT_EVENT_BUDGET, RECORD_SUMMARY,
                             STOP_SINGLETON)
from dbarw.lattice import singleton


def base(**run):
    desc = {"spec_version": 1, "model": "reference",
            "initial": [[0, 1]], "run": {"seed": 7, "horizon": 10}}
    desc["run"].update(run)
    return desc


def explicit_model():
    return {"alpha1": 1.0, "alpha2": 0.1,
            "walk": {"id": "const_symmetric", "params": {"rate": 0.25}},
            "branch": {"id": "const_branch", "params": {"beta": 1.0}},
            "constants": {"s_lower": 0.5, "d_bar": 1.0, "b_n": 2.0,
                          "D_bar": 2.0}}


class ParseTests(unittest.TestCase):

    def test_minimal(self):
        """Test a minimal configuration and its defaults."""
        config = parse_config(base(), env={})
        self.assertEqual(singleton(0), config.initial)
        self.assertEqual(7, config.seed)
        self.assertEqual(10.0, config.horizon)
        self.assertEqual(1, config.replicas)
        self.assertEqual(DEFAULT_EVENT_BUDGET, config.event_budget)
        self.assertEqual(("csv", "json"), config.formats)
        self.assertAlmostEqual(0.15, config.model.c)

    def test_named_models(self):
        """Test both named models."""
        self.assertIsNone(model_from_descriptor("reference").long_range)
        lr = model_from_descriptor("long_range_reference")
        self.assertEqual(8, lr.max_range)
        with self.assertRaises(errors.ConfigParseError):
            model_from_descriptor("nonesuch")

    def test_explicit_model(self):
        """Test a model built from family descriptors."""
        desc = base()
        desc["model"] = explicit_model()
        model = parse_config(desc, env={}).model
        self.assertEqual("const_branch", model.branch.family_id)
        self.assertAlmostEqual(0.1, model.alpha2)

    def test_model_errors(self):
        """Test structural and catalog errors in the model."""
        model = explicit_model()
        del model["walk"]
        with self.assertRaises(errors.ConfigParseError) as cm:
            model_from_descriptor(model)
        self.assertIn("model.walk", str(cm.exception))
        model = explicit_model()
        model["branch"] = "const_branch"
        with self.assertRaises(errors.ConfigParseError):
            model_from_descriptor(model)
        model = explicit_model()
        model["walk"]["id"] = "teleport"
        with self.assertRaises(errors.UnknownFamilyError):
            model_from_descriptor(model)

    def test_summary_mode(self):
        """Test summary mode needs no seed."""
        desc = base(mode="summary", stop="singleton")
        del desc["run"]["seed"]
        config = parse_config(desc, env={})
        self.assertEqual(RECORD_SUMMARY, config.mode)
        self.assertEqual(STOP_SINGLETON, config.stop)
        self.assertIsNone(config.seed)

    def test_windows_and_grid(self):
        """Test windows and grid are read as floats."""
        config = parse_config(base(windows=[[1, 5], [5, 10]],
                                   grid=[1, 10]), env={})
        self.assertEqual([(1.0, 5.0), (5.0, 10.0)], config.windows)
        self.assertEqual([1.0, 10.0], config.grid)
        with self.assertRaises(errors.ConfigParseError):
            parse_config(base(windows=[1, 5]), env={})

    def test_infinite_horizon(self):
        """Test the horizon defaults to infinity."""
        desc = base(max_events=100)
        del desc["run"]["horizon"]
        config = parse_config(desc, env={})
        self.assertTrue(math.isinf(config.horizon))
        self.assertEqual(100, config.max_events)


class RejectTests(unittest.TestCase):

    def assertRejected(self, desc, fragment=None):
        with self.assertRaises(errors.ConfigParseError) as cm:
            parse_config(desc, env={})
        if fragment:
            self.assertIn(fragment, str(cm.exception))

    def test_missing_seed(self):
        """Test events mode needs a seed."""
        desc = base()
        del desc["run"]["seed"]
        self.assertRejected(desc, "run.seed")

    def test_seed_range(self):
        """Test seeds must be unsigned 64-bit."""
        self.assertRejected(base(seed=-1), "run.seed")
        self.assertRejected(base(seed=2 ** 64), "run.seed")
        self.assertEqual(2 ** 64 - 1,
                         parse_config(base(seed=2 ** 64 - 1), env={}).seed)

    def test_counts(self):
        """Test replica and sample counts must be positive."""
        self.assertRejected(base(replicas=0), "run.replicas")
        desc = base()
        desc["audit"] = {"samples": 0}
        self.assertRejected(desc, "audit.samples")
        desc["audit"] = {"n_audit": 1}
        self.assertRejected(desc, "audit.n_audit")

    def test_version(self):
        """Test the spec_version field."""
        desc = base()
        desc["spec_version"] = 2
        self.assertRejected(desc, "spec_version")
        del desc["spec_version"]
        self.assertRejected(desc, "spec_version")

    def test_missing_sections(self):
        """Test model and initial are required."""
        desc = base()
        del desc["model"]
        self.assertRejected(desc, "model")
        desc = base()
        del desc["initial"]
        self.assertRejected(desc, "initial")

    def test_bad_initial(self):
        """Test an invalid initial configuration."""
        desc = base()
        desc["initial"] = [[0, 1], [1, 1], [2, 1]]
        self.assertRejected(desc, "initial")

    def test_bad_values(self):
        """Test malformed run values."""
        self.assertRejected(base(horizon="soon"), "run.horizon")
        self.assertRejected(base(horizon=-1))
        self.assertRejected(base(mode="verbose"), "run.mode")
        self.assertRejected(base(stop="never"), "run.stop")
        desc = base()
        desc["output"] = {"formats": ["xml"]}
        self.assertRejected(desc, "output.formats")
        desc = base()
        desc["run"] = [1, 2]
        self.assertRejected(desc, "run")
        self.assertRejected([base()])


class OverrideTests(unittest.TestCase):

    def test_env_budget(self):
        """Test the event budget comes from the environment."""
        config = parse_config(base(event_budget=50),
                              env={"DBARW_EVENT_BUDGET": "1000"})
        self.assertEqual(1000, config.event_budget)
        self.assertEqual(50, parse_config(base(event_budget=50),
                                          env={}).event_budget)
        with self.assertRaises(errors.ConfigParseError):
            parse_config(base(), env={"DBARW_EVENT_BUDGET": "lots"})

    def test_overrides(self):
        """Test keyword overrides beat the file."""
        config = parse_config(base(), env={}, seed=99, replicas=4,
                              out_dir="elsewhere", K=None)
        self.assertEqual(99, config.seed)
        self.assertEqual(4, config.replicas)
        self.assertEqual("elsewhere", config.out_dir)
        self.assertIsNone(config.K)
        with self.assertRaises(errors.ConfigParseError):
            parse_config(base(), env={}, replicas=0)

    def test_load(self):
        """Test reading a configuration file."""
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "run.json")
            with open(path, "w", encoding="utf-8") as f:
                json.dump(base(), f)
            self.assertEqual(7, load_config(path, env={}).seed)
            with open(path, "w", encoding="utf-8") as f:
                f.write("{not json")
            with self.assertRaises(errors.ConfigParseError):
                load_config(path, env={})
            with self.assertRaises(errors.ConfigParseError):
                load_config(os.path.join(tmp, "missing.json"), env={})


if __name__ == "__main__":
    unittest.main()


########################################################################
