#! /usr/bin/env python
########################################################################
# dbarw
# Copyright (C) 2024, the dbarw developers.
# SPDX-License-Identifier: MIT
########################################################################

"""Double branching annihilating random walks: exact simulation,
height-function duality, assumption checks, dominating processes and
drift diagnostics."""

from .catalog import long_range_reference_model, reference_model
from .config import RunConfig, load_config, model_from_descriptor
from .constants import *
from .diagnostics import (drift_audit, generator_fcd_exact,
                          merge_recurrence, recurrence_study,
                          width_growth_check)
from .dominators import DominatorParams, sample_H, sample_Q
from .engine import (StopRule, enumerate_transitions, evolve, simulate,
                     simulate_coupled_steps, simulate_coupled_width, step)
from .errors import *
from .lattice import (Configuration, HeightFunction, f_cd, from_particles,
                      singleton, to_height, to_interface)
from .rates import ModelSpec, catalog_build, pq_view, register_family
from .rng import create_rng
from .validators import validate_all


def pretty_print(config, empty='.'):
    """Render a configuration as a string of '+', '-' and empty sites.

    :param config: Configuration to render.
    :param empty: Character used for empty sites, default is '.'.
    :returns: String spanning the leftmost to the rightmost particle."""

    cooked = [empty] * config.width
    for site, sign in config:
        cooked[site - config.left] = '+' if sign == PLUS else '-'
    return ''.join(cooked)


########################################################################
