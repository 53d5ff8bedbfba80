#! /usr/bin/env python
########################################################################
# dbarw
# Copyright (C) 2024, the dbarw developers.
# SPDX-License-Identifier: MIT
########################################################################

"""Pinned constants."""

PLUS = 1
MINUS = -1

# Signed 64-bit lattice.
POSITION_MIN = -(2 ** 63)
POSITION_MAX = 2 ** 63 - 1

# Seeds are unsigned 64-bit.
SEED_MAX = 2 ** 64 - 1

# Event kinds, in enumeration order.
EVENT_RW_LEFT = "rw_left"
EVENT_RW_RIGHT = "rw_right"
EVENT_BRANCH = "branch"
EVENT_LONG_BRANCH = "long_branch"
EVENT_KINDS = (EVENT_RW_LEFT, EVENT_RW_RIGHT, EVENT_BRANCH, EVENT_LONG_BRANCH)

# Summary-mode rows.
EVENT_SNAPSHOT = "snapshot"

# Dominator path rows.
EVENT_Q_BIRTH = "q_birth"
EVENT_H_DOUBLE = "h_double"
EVENT_H_STEP = "h_step"

LEFT = "left"
RIGHT = "right"

TRAJECTORY_HEADER = ("time", "event_kind", "site", "range", "pre_count",
                     "post_count", "post_width", "post_fcd", "charge")

# Run configuration.
SPEC_VERSION = 1
DEFAULT_EVENT_BUDGET = 10 ** 7
EVENT_BUDGET_ENV = "DBARW_EVENT_BUDGET"
DEFAULT_BURN_IN = 0.1
DEFAULT_OUT_DIR = "./out"

RECORD_EVENTS = "events"
RECORD_SUMMARY = "summary"

STOP_HORIZON = "horizon"
STOP_SINGLETON = "singleton"

# Exit codes.
EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2
EXIT_MODEL = 3
EXIT_BUDGET = 4
EXIT_DOMINATION = 5

# Audits.
DEFAULT_SAMPLES = 200
DEFAULT_AUDIT_WIDTH = 24
DEFAULT_AUDIT_COUNT = 9
DEFAULT_N_AUDIT = 2 ** 16
DEFAULT_L_GRID = (1, 2, 4, 8, 16, 32)
DRIFT_SLACK = 1e-12
CLOSED_FORM_RTOL = 1e-9
DIVERGENCE_FLOOR = 0.05

# Q values past this are reported as +inf.
Q_SATURATION = 2 ** 62

# Reference model.
REF_ALPHA1 = 1.0
REF_ALPHA2 = 0.1
REF_WALK_RATE = 0.25
REF_BRANCH_RATE = 1.0
REF_S_LOWER = 0.5
REF_D_BAR = 1.0
REF_B_N = 2.0


########################################################################
