#! /usr/bin/env python
########################################################################
# dbarw
# Copyright (C) 2024, the dbarw developers.
# SPDX-License-Identifier: MIT
########################################################################

"""Particle configurations, height functions and transitions.

A configuration is a finite set of signed particles on the integer
lattice whose signs alternate along the line and whose count is odd.
Its dual height function is a {0,1}-valued profile on the half-integer
sites, changing value exactly at the particles.  Half-integer site
k + 1/2 is encoded throughout by the integer k.
"""

import bisect
import math
import operator
from functools import cached_property

from .constants import LEFT, RIGHT, MINUS, PLUS, POSITION_MAX, POSITION_MIN
from .errors import (ConfigurationError, DuplicatePositionError,
                     EmptySiteError, EvenCountError, HeightFunctionError,
                     InteriorOccupiedError, InvalidRangeError,
                     InvalidSignError, NonAlternatingError,
                     PositionOverflowError)


class Configuration:
    """Finite alternating-sign particle configuration.

    Instances are immutable.  Use from_particles() to build one from
    raw input: the constructor trusts its arguments."""

    def __init__(self, positions, signs):
        """Initialise from validated, position-sorted tuples.

        :param positions: Strictly increasing tuple of integer sites.
        :param signs: Tuple of +1/-1 values, same length."""
        self._positions = tuple(positions)
        self._signs = tuple(signs)

    @property
    def positions(self):
        """Occupied sites, left to right."""
        return self._positions

    @property
    def signs(self):
        """Particle signs, aligned with positions."""
        return self._signs

    @property
    def count(self):
        """Number of particles, |y|."""
        return len(self._positions)

    @property
    def charge(self):
        """Sum of signs: +1 or -1."""
        return self._signs[0]

    @property
    def left(self):
        """Leftmost occupied site."""
        return self._positions[0]

    @property
    def right(self):
        """Rightmost occupied site."""
        return self._positions[-1]

    @property
    def width(self):
        """Number of sites from leftmost to rightmost particle."""
        return self._positions[-1] - self._positions[0] + 1

    @property
    def kappa(self):
        """Height value to the right of the rightmost particle."""
        return (1 + self.charge) // 2

    @property
    def is_singleton(self):
        return len(self._positions) == 1

    def index_of(self, site):
        """Return the particle index at site, or None if it is empty."""
        i = bisect.bisect_left(self._positions, site)
        if i < len(self._positions) and self._positions[i] == site:
            return i
        return None

    def sign_at(self, site):
        """Return the sign at site, 0 if empty."""
        i = self.index_of(site)
        return 0 if i is None else self._signs[i]

    def particles(self):
        """Return list of (position, sign) pairs."""
        return list(zip(self._positions, self._signs))

    def translate(self, offset):
        """Return a copy shifted by offset sites."""
        return Configuration(tuple(_checked_site(p + offset)
                                   for p in self._positions),
                             self._signs)

    def anchored(self):
        """Return the configuration as seen from its leftmost particle."""
        return AnchoredConfiguration(self)

    @cached_property
    def ranks(self):
        """Rank of each particle, aligned with positions.

        Ranks count from the right for charge +1 and from the left for
        charge -1, starting at 1."""
        n = len(self._positions)
        if self.charge == PLUS:
            return tuple(range(n, 0, -1))
        return tuple(range(1, n + 1))

    @cached_property
    def rank_positions(self):
        """Positions ordered by rank; index 0 holds rank 1."""
        if self.charge == PLUS:
            return tuple(reversed(self._positions))
        return self._positions

    @cached_property
    def gaps(self):
        """Gap L_j between ranks j and j + 1, for j = 0 .. |y|.

        The two end entries are infinite."""
        by_rank = self.rank_positions
        inner = tuple(abs(by_rank[j] - by_rank[j - 1])
                      for j in range(1, len(by_rank)))
        return (math.inf,) + inner + (math.inf,)

    def to_literal(self):
        """Return the JSON literal form, a list of [position, sign]."""
        return [[p, s] for p, s in zip(self._positions, self._signs)]

    def __len__(self):
        return len(self._positions)

    def __iter__(self):
        return iter(zip(self._positions, self._signs))

    def __eq__(self, other):
        if not isinstance(other, Configuration):
            return NotImplemented
        return (self._positions == other._positions
                and self._signs == other._signs)

    def __hash__(self):
        return hash((self._positions, self._signs))

    def __repr__(self):
        return f"Configuration({self.to_literal()!r})"


class HeightFunction:
    """Dual height profile of a configuration.

    Stores the value far to the left and the sites at which the profile
    changes value."""

    def __init__(self, left_limit, flips):
        """Initialise and validate.

        :param left_limit: Value (0 or 1) to the left of every flip.
        :param flips: Strictly increasing integer sites of the flips."""
        if left_limit not in (0, 1):
            raise HeightFunctionError(
                f"Left limit must be 0 or 1, not {left_limit!r}")
        flips = tuple(flips)
        if len(flips) % 2 == 0:
            raise HeightFunctionError(
                f"Height function needs an odd number of flips, "
                f"got {len(flips)}")
        for a, b in zip(flips, flips[1:]):
            if b <= a:
                raise HeightFunctionError(
                    f"Flip sites must strictly increase: {a} then {b}")
        self.left_limit = left_limit
        self.flips = flips

    @property
    def right_limit(self):
        return 1 - self.left_limit

    def value_at(self, site):
        """Return the height at half-integer site (site + 1/2)."""
        n = bisect.bisect_right(self.flips, site)
        return self.left_limit ^ (n & 1)

    def values(self, start, stop):
        """Return heights at encoded sites start .. stop - 1."""
        return [self.value_at(k) for k in range(start, stop)]

    def segments(self):
        """Return (start, stop, value) runs between consecutive flips."""
        runs = []
        value = self.left_limit
        for a, b in zip(self.flips, self.flips[1:]):
            value = 1 - value
            runs.append((a, b, value))
        return runs

    def __eq__(self, other):
        if not isinstance(other, HeightFunction):
            return NotImplemented
        return (self.left_limit == other.left_limit
                and self.flips == other.flips)

    def __hash__(self):
        return hash((self.left_limit, self.flips))

    def __repr__(self):
        return f"HeightFunction({self.left_limit}, {list(self.flips)!r})"


class AnchoredConfiguration:
    """Configuration translated so its leftmost particle is at 0."""

    def __init__(self, configuration):
        self.offset = configuration.left
        self.configuration = configuration.translate(-self.offset)

    @property
    def offsets(self):
        return self.configuration.positions

    @property
    def signs(self):
        return self.configuration.signs

    @property
    def is_singleton(self):
        return self.configuration.is_singleton

    def restore(self, offset=None):
        """Return the configuration placed back at offset."""
        if offset is None:
            offset = self.offset
        return self.configuration.translate(offset)

    def __eq__(self, other):
        if not isinstance(other, AnchoredConfiguration):
            return NotImplemented
        return self.configuration == other.configuration

    def __hash__(self):
        return hash(self.configuration)

    def __repr__(self):
        return f"AnchoredConfiguration({self.configuration.to_literal()!r})"


########################################################################

def _checked_site(site):
    if site < POSITION_MIN or site > POSITION_MAX:
        raise PositionOverflowError(
            f"Site {site} is outside the signed 64-bit range")
    return site


def from_particles(particles):
    """Build a validated Configuration.

    :param particles: Iterable of (position, sign) pairs, any order.
    :returns: Configuration with positions sorted.

    Raises EvenCountError, NonAlternatingError, DuplicatePositionError,
    InvalidSignError or PositionOverflowError."""

    items = []
    for entry in particles:
        try:
            position, sign = entry
            position = operator.index(position)
            sign = operator.index(sign)
        except (TypeError, ValueError) as e:
            raise ConfigurationError(
                f"Particle entry {entry!r} is not an integer "
                f"(position, sign) pair") from e
        if sign not in (PLUS, MINUS):
            raise InvalidSignError(
                f"Sign at site {position} must be +1 or -1, not {sign}")
        items.append((_checked_site(position), sign))

    items.sort()
    for (a, _), (b, _) in zip(items, items[1:]):
        if a == b:
            raise DuplicatePositionError(f"Site {a} occupied twice")

    if len(items) % 2 == 0:
        raise EvenCountError(
            f"Particle count must be odd, got {len(items)}")

    for (a, s), (b, t) in zip(items, items[1:]):
        if s == t:
            raise NonAlternatingError(
                f"Neighbouring particles at {a} and {b} share sign {s:+d}")

    return Configuration(tuple(p for p, _ in items),
                         tuple(s for _, s in items))


def singleton(site=0, sign=PLUS):
    """Return a single particle at site."""
    return from_particles([(site, sign)])


def to_height(config):
    """Return the height function dual to config."""
    return HeightFunction((1 - config.charge) // 2, config.positions)


def to_interface(height):
    """Return the configuration whose interfaces are height's flips."""
    particles = []
    value = height.left_limit
    for site in height.flips:
        particles.append((site, PLUS if value == 0 else MINUS))
        value = 1 - value
    return from_particles(particles)


def f_cd(config):
    """Count wrongly ordered pairs of the height profile.

    A pair k < l of half-integer sites is wrongly ordered when the
    height at k is kappa and at l is 1 - kappa.  Only the runs between
    the outermost particles can take part, so the count is finite."""

    positions = config.positions
    kappa_sites = 0
    total = 0
    for m in range(len(positions) - 1):
        length = positions[m + 1] - positions[m]
        if m % 2 == 0:
            kappa_sites += length
        else:
            total += kappa_sites * length
    return total


def is_careful(config, site, distance):
    """True if no particle lies within distance of site, site excluded."""
    i = config.index_of(site)
    if i is None:
        raise EmptySiteError(f"No particle at site {site}")
    positions = config.positions
    if i > 0 and positions[i - 1] > site - distance:
        return False
    if i + 1 < len(positions) and positions[i + 1] < site + distance:
        return False
    return True


def _occupied_values(config, site):
    values = dict(zip(config.positions, config.signs))
    if site not in values:
        raise EmptySiteError(f"No particle at site {site}")
    return values


def _deposit(values, site, sign):
    """Add sign at site, annihilating an opposite particle."""
    total = values.get(site, 0) + sign
    if total == 0:
        del values[site]
    elif abs(total) > 1:
        raise NonAlternatingError(
            f"Offspring {sign:+d} landed on a like particle at {site}")
    else:
        values[site] = total


def _rebuild(values):
    return from_particles(values.items())


def apply_rw(config, site, direction):
    """Move the particle at site one step left or right.

    A particle arriving on an occupied site annihilates with it."""
    values = _occupied_values(config, site)
    if direction == LEFT:
        target = _checked_site(site - 1)
    elif direction == RIGHT:
        target = _checked_site(site + 1)
    else:
        raise ValueError(f"Direction must be {LEFT!r} or {RIGHT!r}, "
                         f"not {direction!r}")
    sign = values.pop(site)
    _deposit(values, target, sign)
    return _rebuild(values)


def apply_branch(config, site):
    """Branch the particle at site to both neighbours.

    The particle flips its sign and leaves a copy of its old sign on
    each neighbouring site."""
    return _branch(config, site, 1)


def apply_long_branch(config, site, distance):
    """Branch the particle at site to sites at the given distance.

    Every site strictly within distance of site, other than site
    itself, must be empty."""
    if distance < 2:
        raise InvalidRangeError(
            f"Long-range branch needs distance >= 2, not {distance}")
    if not is_careful(config, site, distance):
        raise InteriorOccupiedError(
            f"Sites within {distance} of {site} are not all empty")
    return _branch(config, site, distance)


def _branch(config, site, distance):
    values = _occupied_values(config, site)
    lo = _checked_site(site - distance)
    hi = _checked_site(site + distance)
    sign = values[site]
    values[site] = -sign
    _deposit(values, lo, sign)
    _deposit(values, hi, sign)
    return _rebuild(values)


########################################################################
