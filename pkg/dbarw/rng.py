#! /usr/bin/env python
########################################################################
# dbarw
# Copyright (C) 2024, the dbarw developers.
# SPDX-License-Identifier: MIT
########################################################################

"""Random number streams.

Every run draws from numpy's Generator over the PCG64 bit generator.
Replica k of a run seeded with s uses the stream seeded with s XOR k,
so replica 0 reproduces the single-run stream."""

import numpy as np

from .constants import SEED_MAX


def derive_seed(seed, replica=0):
    """Return the seed of a replica stream."""
    seed = int(seed)
    replica = int(replica)
    if not 0 <= seed <= SEED_MAX:
        raise ValueError(f"Seed {seed} is not an unsigned 64-bit integer")
    if not 0 <= replica <= SEED_MAX:
        raise ValueError(f"Replica index {replica} out of range")
    return seed ^ replica


def create_rng(seed, replica=0):
    """Return the generator for a replica of a seeded run."""
    return np.random.Generator(np.random.PCG64(derive_seed(seed, replica)))


def get_seed(rng=None):
    """Draw a fresh 64-bit seed, from rng if given, else from entropy."""
    if rng is None:
        rng = np.random.Generator(np.random.PCG64())
    return int(rng.integers(0, SEED_MAX, endpoint=True, dtype=np.uint64))


########################################################################
