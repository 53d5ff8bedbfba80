#! /usr/bin/env python
########################################################################
# dbarw
# Copyright (C) 2024, the dbarw developers.
# SPDX-License-Identifier: MIT
########################################################################

"""Rate families, model specifications and interface rates."""

import logging
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from .constants import MINUS, PLUS
from .errors import (ConstantsInvalidError, EmptySiteError,
                     InvalidParameterError, ModelInvalidError,
                     UnknownFamilyError)
from .profiles import TAIL_HOLD, Profile, profile_from_descriptor


logger = logging.getLogger(__name__)

WALK = "walk"
BRANCH = "branch"
LONG_RANGE = "long_range"


class RateFamily:
    """Base class for rate families.

    A family supplies sign-resolved rates for the particle at an
    occupied site.  The sign argument defaults to the particle's own
    sign; passing the other sign evaluates the rate the particle would
    have if its sign were flipped, which the assumption checks need.

    Families must be pure: the same configuration always gives the same
    rates."""

    family_id = None
    kind = None

    #: Family declares translation invariance.
    translation_invariant = True

    #: Largest long-range branching distance; 0 for other kinds.
    max_range = 0

    def __init__(self, **params):
        self.params = params

    def rw_rates(self, config, site, sign=None):
        """Return (r, l) jump rates of the particle at site."""
        raise ModelInvalidError(
            f"Family {self.family_id!r} has no random-walk rates")

    def branch_rate(self, config, site, sign=None):
        """Return the nearest-neighbour branching rate at site."""
        raise ModelInvalidError(
            f"Family {self.family_id!r} has no branching rate")

    def long_branch_rate(self, config, site, distance, sign=None):
        """Return the branching rate to the given distance (>= 2)."""
        return 0.0

    def bulk_rates(self, config):
        """Return rates for every particle, in position order.

        Walk families return (r, l) pairs, branch families numbers and
        long-range families tuples indexed by distance - 2.  Subclasses
        may override this with a faster equivalent."""
        if self.kind == WALK:
            return [self.rw_rates(config, p) for p in config.positions]
        if self.kind == BRANCH:
            return [self.branch_rate(config, p) for p in config.positions]
        return [tuple(self.long_branch_rate(config, p, d)
                      for d in range(2, self.max_range + 1))
                for p in config.positions]

    def to_descriptor(self):
        return {"id": self.family_id, "params": _plain(self.params)}

    def __repr__(self):
        return f"{type(self).__name__}({self.params!r})"


def _plain(value):
    if isinstance(value, Profile):
        return value.to_descriptor()
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def resolve(config, site, sign=None):
    """Return (index, sign) of the particle at site.

    :param sign: Override for the particle's sign, or None."""
    index = config.index_of(site)
    if index is None:
        raise EmptySiteError(f"No particle at site {site}")
    if sign is None:
        sign = config.signs[index]
    elif sign not in (PLUS, MINUS):
        raise InvalidParameterError(f"Sign must be +1 or -1, not {sign}")
    return index, sign


########################################################################
# Registry.

_FAMILIES = {}


def register_family(family_id):
    """Class decorator adding a RateFamily subclass to the catalog."""
    def decorate(cls):
        if family_id in _FAMILIES and _FAMILIES[family_id] is not cls:
            raise ValueError(f"Family {family_id!r} already registered")
        cls.family_id = family_id
        _FAMILIES[family_id] = cls
        return cls
    return decorate


def family_ids(kind=None):
    """Return sorted registered identifiers, optionally of one kind."""
    _load_catalog()
    return sorted(k for k, cls in _FAMILIES.items()
                  if kind is None or cls.kind == kind)


def catalog_build(family_id, params=None):
    """Build a rate family from its identifier and parameters.

    :param family_id: Registered identifier, e.g. "const_symmetric".
    :param params: Dict of parameters; profiles may be descriptors.
    :returns: RateFamily instance.

    Raises UnknownFamilyError or InvalidParameterError."""
    _load_catalog()
    cls = _FAMILIES.get(family_id)
    if cls is None:
        raise UnknownFamilyError(f"Unknown rate family {family_id!r}")
    try:
        return cls(**(params or {}))
    except TypeError as e:
        raise InvalidParameterError(
            f"Bad parameters for family {family_id!r}: {e}") from e


def _load_catalog():
    # The catalog registers itself on import.
    from . import catalog  # noqa: F401


########################################################################
# Models.

@dataclass(frozen=True)
class DeclaredConstants:
    """Author-declared assumption constants.

    b_n is B_n indexed from 1; b_tilde is B~(l) indexed by distance;
    envelope is H(N, L) as a function of L, uniform in N."""

    s_lower: float
    d_bar: float
    b_n: Profile
    D_bar: float = math.inf
    b_tilde: Optional[Profile] = None
    envelope: Optional[Profile] = None
    B_bar: Optional[float] = None
    a4_variant: str = "a"

    @classmethod
    def from_descriptor(cls, desc):
        """Build from a JSON-style dict."""
        try:
            s_lower = float(desc["s_lower"])
            d_bar = float(desc["d_bar"])
            b_n = profile_from_descriptor(desc["b_n"], start=1,
                                          tail=TAIL_HOLD)
        except KeyError as e:
            raise InvalidParameterError(
                f"Missing declared constant {e.args[0]!r}") from e
        b_tilde = desc.get("b_tilde")
        envelope = desc.get("envelope")
        variant = desc.get("a4_variant", "a")
        if variant not in ("a", "b"):
            raise InvalidParameterError(
                f"a4_variant must be 'a' or 'b', not {variant!r}")
        B_bar = desc.get("B_bar")
        return cls(s_lower=s_lower, d_bar=d_bar, b_n=b_n,
                   D_bar=float(desc.get("D_bar", math.inf)),
                   b_tilde=(None if b_tilde is None else
                            profile_from_descriptor(b_tilde, start=2)),
                   envelope=(None if envelope is None else
                             profile_from_descriptor(envelope, start=0)),
                   B_bar=None if B_bar is None else float(B_bar),
                   a4_variant=variant)

    def to_descriptor(self):
        out = {"s_lower": self.s_lower, "d_bar": self.d_bar,
               "b_n": self.b_n.to_descriptor(), "D_bar": self.D_bar,
               "a4_variant": self.a4_variant}
        if self.b_tilde is not None:
            out["b_tilde"] = self.b_tilde.to_descriptor()
        if self.envelope is not None:
            out["envelope"] = self.envelope.to_descriptor()
        if self.B_bar is not None:
            out["B_bar"] = self.B_bar
        return out


@dataclass(frozen=True)
class ModelSpec:
    """Generator weights, rate families and declared constants."""

    alpha1: float
    alpha2: float
    walk: RateFamily
    branch: RateFamily
    constants: DeclaredConstants
    long_range: Optional[RateFamily] = field(default=None)

    def __post_init__(self):
        if self.alpha1 < 0 or self.alpha2 < 0:
            raise InvalidParameterError(
                f"Weights must be nonnegative, got alpha1={self.alpha1}, "
                f"alpha2={self.alpha2}")
        for family, kind in ((self.walk, WALK), (self.branch, BRANCH),
                             (self.long_range, LONG_RANGE)):
            if family is not None and family.kind != kind:
                raise ModelInvalidError(
                    f"Family {family.family_id!r} is a {family.kind} "
                    f"family, expected {kind}")

    @property
    def C(self):
        """Constant term of the drift bound."""
        return self.alpha1 * self.constants.s_lower

    @property
    def c(self):
        """Per-particle slope of the drift bound."""
        return (self.alpha1 * self.constants.s_lower / 2
                - self.alpha2 * self.constants.d_bar)

    @property
    def max_range(self):
        return 0 if self.long_range is None else self.long_range.max_range

    def long_range_constant(self):
        """Return the sum of l^2 B~(l) over 2 <= l <= max_range."""
        if self.long_range is None:
            return 0.0
        if self.constants.b_tilde is None:
            raise ConstantsInvalidError(
                "Long-range model needs declared b_tilde")
        return sum(d * d * self.constants.b_tilde(d)
                   for d in range(2, self.max_range + 1))

    @property
    def C_bar(self):
        return self.C + self.long_range_constant()

    def require_recurrent(self):
        """Raise ConstantsInvalidError unless alpha1 s > 2 alpha2 d."""
        if not self.c > 0:
            raise ConstantsInvalidError(
                f"Positive recurrence requires alpha1*s_lower > "
                f"2*alpha2*d_bar; got {self.alpha1}*"
                f"{self.constants.s_lower} <= 2*{self.alpha2}*"
                f"{self.constants.d_bar}")

    def total_rate_envelope(self, config):
        """Return the rate total with both signs' rates at every particle."""
        total = 0.0
        for site in config.positions:
            for sign in (PLUS, MINUS):
                r, l = self.walk.rw_rates(config, site, sign)
                total += self.alpha1 * (r + l)
                total += self.alpha2 * self.branch.branch_rate(
                    config, site, sign)
                if self.long_range is not None:
                    total += sum(self.long_range.long_branch_rate(
                        config, site, d, sign)
                        for d in range(2, self.max_range + 1))
        return total

    def to_descriptor(self):
        out = {"alpha1": self.alpha1, "alpha2": self.alpha2,
               "walk": self.walk.to_descriptor(),
               "branch": self.branch.to_descriptor(),
               "constants": self.constants.to_descriptor()}
        if self.long_range is not None:
            out["long_range"] = self.long_range.to_descriptor()
        return out


class PQView(NamedTuple):
    """Interface jump rates at a half-integer site."""

    p: float
    q: float

    @property
    def drift(self):
        return self.p - self.q


def pq_view(model, config, site):
    """Return p, q at half-integer site site + 1/2.

    p is the rate at which the interface just left of the site moves
    right across it; q is the left-jump rate of that same interface.
    Both vanish where the heights on either side agree."""
    index = config.index_of(site)
    if index is None:
        return PQView(0.0, 0.0)
    r, l = model.walk.rw_rates(config, site, config.signs[index])
    return PQView(r, l)


########################################################################
