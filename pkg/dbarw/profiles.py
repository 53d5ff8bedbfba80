#! /usr/bin/env python
########################################################################
# dbarw
# Copyright (C) 2024, the dbarw developers.
# SPDX-License-Identifier: MIT
########################################################################

"""Scalar profiles: sequences and functions named in config files.

Rate families and declared model constants are parameterised by
functions such as a kernel psi(n), a branching bound B_n or a
saturating map h(u).  A profile is a callable built from a descriptor:

* a number: constant profile;
* a list: table, indexed from a caller-chosen start;
* a dict with a "kind" key and keyword parameters, e.g.
  ``{"kind": "power", "scale": 1.0, "exponent": 4}``.
"""

import math

from .errors import InvalidParameterError


TAIL_ZERO = "zero"
TAIL_HOLD = "hold"

# Terms summed explicitly before a tail bound takes over.
_EXPLICIT_TERMS = 4096


class Profile:
    """Base class for profiles."""

    kind = None

    def __call__(self, n):
        raise NotImplementedError

    def total(self, start=0):
        """Upper bound on the sum of the profile over n >= start.

        Returns math.inf if the sum is not known to converge."""
        return math.inf

    def to_descriptor(self):
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}({self.to_descriptor()!r})"


class ConstantProfile(Profile):
    kind = "constant"

    def __init__(self, value):
        self.value = float(value)

    def __call__(self, n):
        return self.value

    def total(self, start=0):
        return 0.0 if self.value == 0 else math.inf

    def to_descriptor(self):
        return self.value


class TableProfile(Profile):
    """Tabulated values from index start; beyond the table the last
    value is held or zero is returned, depending on tail."""

    kind = "table"

    def __init__(self, values, start=0, tail=TAIL_ZERO):
        if not values:
            raise InvalidParameterError("Table profile needs values")
        if tail not in (TAIL_ZERO, TAIL_HOLD):
            raise InvalidParameterError(f"Unknown table tail {tail!r}")
        self.values = tuple(float(v) for v in values)
        self.start = int(start)
        self.tail = tail

    def __call__(self, n):
        i = int(n) - self.start
        if i < 0:
            return self.values[0] if self.tail == TAIL_HOLD else 0.0
        if i < len(self.values):
            return self.values[i]
        return self.values[-1] if self.tail == TAIL_HOLD else 0.0

    def total(self, start=0):
        if self.tail == TAIL_HOLD and self.values[-1] != 0:
            return math.inf
        return sum(abs(self(n)) for n in range(
            start, max(start, self.start + len(self.values))))

    def to_descriptor(self):
        return {"kind": self.kind, "values": list(self.values),
                "start": self.start, "tail": self.tail}


class PowerProfile(Profile):
    """scale * (n + offset) ** -exponent; at n + offset <= 0 returns
    origin."""

    kind = "power"

    def __init__(self, scale=1.0, exponent=1.0, offset=0, origin=0.0):
        self.scale = float(scale)
        self.exponent = float(exponent)
        self.offset = float(offset)
        self.origin = float(origin)

    def __call__(self, n):
        x = n + self.offset
        if x <= 0:
            return self.origin
        return self.scale * x ** -self.exponent

    def total(self, start=0):
        if self.scale == 0:
            return abs(self.origin) if start + self.offset <= 0 else 0.0
        if self.exponent <= 1:
            return math.inf
        explicit = sum(abs(self(n))
                       for n in range(start, start + _EXPLICIT_TERMS))
        # Integral bound on the remaining terms.
        x = start + _EXPLICIT_TERMS + self.offset - 1
        tail = abs(self.scale) * x ** (1 - self.exponent) / (
            self.exponent - 1)
        return explicit + tail

    def to_descriptor(self):
        return {"kind": self.kind, "scale": self.scale,
                "exponent": self.exponent, "offset": self.offset,
                "origin": self.origin}


class ExpProfile(Profile):
    """scale * exp(-rate * n)."""

    kind = "exp"

    def __init__(self, scale=1.0, rate=1.0):
        if rate < 0:
            raise InvalidParameterError(f"Decay rate {rate} is negative")
        self.scale = float(scale)
        self.rate = float(rate)

    def __call__(self, n):
        return self.scale * math.exp(-self.rate * n)

    def total(self, start=0):
        if self.scale == 0:
            return 0.0
        if self.rate == 0:
            return math.inf
        return abs(self.scale) * math.exp(-self.rate * start) / (
            1 - math.exp(-self.rate))

    def to_descriptor(self):
        return {"kind": self.kind, "scale": self.scale, "rate": self.rate}


class LogProfile(Profile):
    """scale * log(n + offset), clamped at 0 below n + offset = 1."""

    kind = "log"

    def __init__(self, scale=1.0, offset=0):
        self.scale = float(scale)
        self.offset = float(offset)

    def __call__(self, n):
        x = n + self.offset
        if x <= 1:
            return 0.0
        return self.scale * math.log(x)

    def to_descriptor(self):
        return {"kind": self.kind, "scale": self.scale,
                "offset": self.offset}


class IteratedLogProfile(Profile):
    """1 / (n log n log log n ...) with depth logarithmic factors.

    Below the point where every factor exceeds 1 the profile is held at
    its first admissible value, so it stays nonincreasing."""

    kind = "iterated_log"

    def __init__(self, depth=1, scale=1.0):
        depth = int(depth)
        if depth < 0 or depth > 3:
            raise InvalidParameterError(
                f"Iterated-log depth must be 0..3, not {depth}")
        self.depth = depth
        self.scale = float(scale)
        threshold = 0.0
        for _ in range(depth):
            threshold = math.exp(threshold)
        self.first = math.floor(threshold) + 1
        self._plateau = self._raw(self.first)

    def _raw(self, n):
        value = float(n)
        x = float(n)
        for _ in range(self.depth):
            x = math.log(x)
            value *= x
        return self.scale / value

    def __call__(self, n):
        if n <= self.first:
            return self._plateau
        return self._raw(n)

    def to_descriptor(self):
        return {"kind": self.kind, "depth": self.depth, "scale": self.scale}


class StaircaseProfile(Profile):
    """Branching bound whose running product B(N) = N * B_N is a staircase.

    With iota(x) = x (1 + 2^x) and x_0 = start, x_{j+1} = iota(x_j),
    B(N) equals x_j 2^x_j on [x_j, x_{j+1}), so each plateau carries
    reciprocal mass exactly one.  The profile value is B(N) / N."""

    kind = "staircase"

    def __init__(self, start=2):
        start = int(start)
        if start < 1:
            raise InvalidParameterError("Staircase start must be >= 1")
        self.start = start

    def plateaus(self, limit):
        """Return (x_j, x_{j+1}) pairs covering 1 .. limit."""
        out = []
        x = self.start
        while True:
            nxt = x * (1 + 2 ** x)
            out.append((x, nxt))
            if nxt > limit:
                return out
            x = nxt

    def product(self, n):
        """Return B(n)."""
        x = self.start
        while True:
            nxt = x * (1 + 2 ** x)
            if n < nxt:
                return _as_float(x * 2 ** x)
            x = nxt

    def __call__(self, n):
        n = max(int(n), 1)
        return self.product(n) / n

    def to_descriptor(self):
        return {"kind": self.kind, "start": self.start}


class LogisticProfile(Profile):
    """Smooth monotone map of the real line into (epsilon, 1 - epsilon)."""

    kind = "logistic"

    def __init__(self, epsilon=0.1, slope=1.0, center=0.0):
        if not 0 < epsilon < 0.5:
            raise InvalidParameterError(
                f"Logistic epsilon must lie in (0, 1/2), not {epsilon}")
        self.epsilon = float(epsilon)
        self.slope = float(slope)
        self.center = float(center)

    def __call__(self, u):
        z = -self.slope * (u - self.center)
        if z > 700:
            s = 0.0
        else:
            s = 1.0 / (1.0 + math.exp(z))
        return self.epsilon + (1 - 2 * self.epsilon) * s

    def to_descriptor(self):
        return {"kind": self.kind, "epsilon": self.epsilon,
                "slope": self.slope, "center": self.center}


class FunctionProfile(Profile):
    """Wraps a Python callable (API use only; not serialisable)."""

    kind = "function"

    def __init__(self, function, total=math.inf):
        self.function = function
        self._total = total

    def __call__(self, n):
        return float(self.function(n))

    def total(self, start=0):
        return self._total

    def to_descriptor(self):
        return {"kind": self.kind,
                "name": getattr(self.function, "__name__", "?")}


def _as_float(value):
    try:
        return float(value)
    except OverflowError:
        return math.inf


_KINDS = {cls.kind: cls for cls in (
    ConstantProfile, TableProfile, PowerProfile, ExpProfile, LogProfile,
    IteratedLogProfile, StaircaseProfile, LogisticProfile)}


def profile_from_descriptor(descriptor, start=0, tail=TAIL_ZERO):
    """Build a Profile.

    :param descriptor: Number, list, dict with "kind", callable or Profile.
    :param start: First index of a bare list.
    :param tail: Tail rule of a bare list.
    :returns: Profile instance."""

    if isinstance(descriptor, Profile):
        return descriptor
    if isinstance(descriptor, bool):
        raise InvalidParameterError(
            f"Profile descriptor {descriptor!r} is not a number")
    if isinstance(descriptor, (int, float)):
        return ConstantProfile(descriptor)
    if isinstance(descriptor, (list, tuple)):
        return TableProfile(descriptor, start=start, tail=tail)
    if isinstance(descriptor, dict):
        params = dict(descriptor)
        kind = params.pop("kind", None)
        cls = _KINDS.get(kind)
        if cls is None:
            raise InvalidParameterError(f"Unknown profile kind {kind!r}")
        if cls is TableProfile:
            params.setdefault("start", start)
            params.setdefault("tail", tail)
        try:
            return cls(**params)
        except TypeError as e:
            raise InvalidParameterError(
                f"Bad parameters for {kind!r} profile: {e}") from e
    if callable(descriptor):
        return FunctionProfile(descriptor)
    raise InvalidParameterError(
        f"Profile descriptor {descriptor!r} not understood")


########################################################################
