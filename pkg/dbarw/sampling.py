#! /usr/bin/env python
########################################################################
# dbarw
# Copyright (C) 2024, the dbarw developers.
# SPDX-License-Identifier: MIT
########################################################################

"""Configuration samplers for audits and validators.

A sampler is any callable taking a numpy Generator and returning a
Configuration."""

import itertools

from .constants import (DEFAULT_AUDIT_COUNT, DEFAULT_AUDIT_WIDTH, MINUS,
                        PLUS)
from .lattice import Configuration, singleton


def alternating(positions, charge):
    """Return the configuration with the given sorted positions whose
    outermost particles carry the sign charge."""
    signs = tuple(charge if k % 2 == 0 else -charge
                  for k in range(len(positions)))
    return Configuration(tuple(positions), signs)


def random_configuration(rng, max_count=DEFAULT_AUDIT_COUNT,
                         max_width=DEFAULT_AUDIT_WIDTH, charge=None,
                         origin=0):
    """Draw a configuration with at most max_count particles inside
    max_width sites starting at origin.

    The particle count is uniform over the admissible odd values and
    the occupied sites are a uniform subset of the window."""
    if max_count < 1 or max_width < 1:
        raise ValueError("max_count and max_width must be positive")
    top = min(max_count, max_width)
    count = 2 * int(rng.integers(0, (top + 1) // 2)) + 1
    sites = rng.choice(max_width, size=count, replace=False)
    positions = sorted(origin + int(s) for s in sites)
    if charge is None:
        charge = PLUS if rng.random() < 0.5 else MINUS
    return alternating(positions, charge)


class RandomSampler:
    """Callable sampler wrapping random_configuration()."""

    def __init__(self, max_count=DEFAULT_AUDIT_COUNT,
                 max_width=DEFAULT_AUDIT_WIDTH, charge=None):
        self.max_count = max_count
        self.max_width = max_width
        self.charge = charge

    def __call__(self, rng):
        return random_configuration(rng, self.max_count, self.max_width,
                                    self.charge)

    def __repr__(self):
        return (f"RandomSampler(max_count={self.max_count}, "
                f"max_width={self.max_width}, charge={self.charge})")


class SingletonSampler:
    """Always returns a singleton at site 0, of random or fixed sign."""

    def __init__(self, charge=None):
        self.charge = charge

    def __call__(self, rng):
        charge = self.charge
        if charge is None:
            charge = PLUS if rng.random() < 0.5 else MINUS
        return singleton(0, charge)


class CyclingSampler:
    """Returns the given configurations in turn; ignores the rng."""

    def __init__(self, configurations):
        self.configurations = list(configurations)
        if not self.configurations:
            raise ValueError("CyclingSampler needs configurations")
        self._cycle = itertools.cycle(self.configurations)

    def __call__(self, rng):
        return next(self._cycle)


def exhaustive_configurations(max_width):
    """Yield every configuration anchored at site 0 with width at most
    max_width, both charges."""
    for width in range(1, max_width + 1):
        if width == 1:
            for charge in (PLUS, MINUS):
                yield alternating((0,), charge)
            continue
        inner = range(1, width - 1)
        for k in range(1, width - 1, 2):
            for chosen in itertools.combinations(inner, k):
                positions = (0,) + chosen + (width - 1,)
                for charge in (PLUS, MINUS):
                    yield alternating(positions, charge)


########################################################################
