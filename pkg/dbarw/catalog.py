#! /usr/bin/env python
########################################################################
# dbarw
# Copyright (C) 2024, the dbarw developers.
# SPDX-License-Identifier: MIT
########################################################################

"""Catalog of rate families.

Each family is registered under a string identifier and built with
catalog_build(identifier, params).  Ranks follow Configuration.ranks:
counted from the right for charge +1, from the left for charge -1.
Families written as r = 1 - l take a ``scale`` factor multiplying both
rates, so the unit bound on the four-rate sum can be met by rescaling
time.
"""

import math

from .constants import (MINUS, PLUS, REF_ALPHA1, REF_ALPHA2, REF_B_N,
                        REF_BRANCH_RATE, REF_D_BAR, REF_S_LOWER,
                        REF_WALK_RATE)
from .errors import InvalidParameterError
from .profiles import (TAIL_HOLD, ConstantProfile, PowerProfile,
                       profile_from_descriptor)
from .rates import (BRANCH, LONG_RANGE, WALK, DeclaredConstants, ModelSpec,
                    RateFamily, catalog_build, register_family, resolve)


# Grid of arguments on which monotonicity and range constraints are
# spot-checked at construction.
_CHECK_POINTS = range(0, 65)


def _positive(name, value):
    value = float(value)
    if not value > 0:
        raise InvalidParameterError(f"{name} must be positive, not {value}")
    return value


def _nonnegative(name, value):
    value = float(value)
    if value < 0 or math.isnan(value):
        raise InvalidParameterError(
            f"{name} must be nonnegative, not {value}")
    return value


def _profile(name, desc, start=0, tail="zero"):
    try:
        return profile_from_descriptor(desc, start=start, tail=tail)
    except InvalidParameterError as e:
        raise InvalidParameterError(f"{name}: {e}") from e


def _summable(name, profile, start=0):
    total = profile.total(start)
    if not math.isfinite(total):
        raise InvalidParameterError(f"{name} must be summable")
    return total


def _within(name, profile, lo, hi, points=_CHECK_POINTS):
    for n in points:
        v = profile(n)
        if not lo < v < hi:
            raise InvalidParameterError(
                f"{name}({n}) = {v} is outside ({lo}, {hi})")


def _monotone(name, profile, increasing, points=_CHECK_POINTS):
    values = [profile(n) for n in points]
    pairs = zip(values, values[1:])
    if increasing:
        ok = all(b >= a for a, b in pairs)
    else:
        ok = all(b <= a for a, b in pairs)
    if not ok:
        direction = "nondecreasing" if increasing else "nonincreasing"
        raise InvalidParameterError(f"{name} must be {direction}")


def _kernel_sum(config, site, kernel, skip_self=False):
    """Sum kernel(|site - i|) over occupied sites i."""
    total = 0.0
    for p in config.positions:
        if skip_self and p == site:
            continue
        total += kernel(abs(p - site))
    return total


def _zeta_bound(exponent):
    """Upper bound on sum_{n >= 1} n^-exponent, exponent > 1."""
    return 1.0 + 1.0 / (exponent - 1.0)


########################################################################
# Random walks.

class WalkFamily(RateFamily):
    kind = WALK

    def rw_rates(self, config, site, sign=None):
        index, sign = resolve(config, site, sign)
        return self._rates(config, index, sign)

    def _rates(self, config, index, sign):
        raise NotImplementedError


@register_family("const_symmetric")
class ConstSymmetricWalk(WalkFamily):
    """Constant jump rates, by default r = l = rate for both signs."""

    def __init__(self, rate=0.25, r_plus=None, l_plus=None, r_minus=None,
                 l_minus=None):
        super().__init__(rate=rate, r_plus=r_plus, l_plus=l_plus,
                         r_minus=r_minus, l_minus=l_minus)
        rate = _nonnegative("rate", rate)

        def pick(name, value):
            return rate if value is None else _nonnegative(name, value)

        self.table = {
            PLUS: (pick("r_plus", r_plus), pick("l_plus", l_plus)),
            MINUS: (pick("r_minus", r_minus), pick("l_minus", l_minus)),
        }

    def _rates(self, config, index, sign):
        return self.table[sign]

    def bulk_rates(self, config):
        return [self.table[s] for s in config.signs]


@register_family("zero_drift_long_range")
class ZeroDriftLongRangeWalk(WalkFamily):
    """r = l = alpha * sum_i |y_i| (|i_j - i| + 1)^-gamma."""

    def __init__(self, alpha=0.05, gamma=2.0):
        super().__init__(alpha=alpha, gamma=gamma)
        self.alpha = _positive("alpha", alpha)
        self.gamma = float(gamma)
        if not self.gamma > 1:
            raise InvalidParameterError("gamma must exceed 1")

    def _rates(self, config, index, sign):
        site = config.positions[index]
        rate = self.alpha * _kernel_sum(
            config, site, lambda d: (d + 1.0) ** -self.gamma)
        return rate, rate


@register_family("const_drift")
class ConstDriftWalk(WalkFamily):
    """r = f / Z, l = g / Z with Z = f - g, so r - l is constant.

    Either constant f, g are given, or f, g are built from the
    configuration: f = beta + sum_{i > i_j} |y_i| d^-gamma and
    g = sum_{i < i_j} |y_i| d^-gamma, d = |i - i_j|.  With no
    parameters f = 0.6 and g = 0.2."""

    def __init__(self, f=None, g=None, beta=None, gamma=2.0, scale=1.0):
        if f is None and g is None and beta is None:
            f, g = 0.6, 0.2
        super().__init__(f=f, g=g, beta=beta, gamma=gamma, scale=scale)
        self.scale = _positive("scale", scale)
        if f is not None or g is not None:
            if f is None or g is None or beta is not None:
                raise InvalidParameterError(
                    "Give both f and g, or beta and gamma")
            self.f = _nonnegative("f", f)
            self.g = _nonnegative("g", g)
            if not self.f > self.g:
                raise InvalidParameterError("f must exceed g")
            self.beta = None
        else:
            if beta is None:
                raise InvalidParameterError(
                    "Give both f and g, or beta and gamma")
            self.beta = _positive("beta", beta)
            self.gamma = float(gamma)
            if not self.gamma > 1:
                raise InvalidParameterError("gamma must exceed 1")
            if not self.beta > _zeta_bound(self.gamma):
                raise InvalidParameterError(
                    f"beta must exceed {_zeta_bound(self.gamma)} so that "
                    f"g stays below f")

    def _rates(self, config, index, sign):
        if self.beta is None:
            f, g = self.f, self.g
        else:
            site = config.positions[index]
            f = self.beta
            g = 0.0
            for p in config.positions:
                if p > site:
                    f += (p - site) ** -self.gamma
                elif p < site:
                    g += (site - p) ** -self.gamma
        z = f - g
        return self.scale * f / z, self.scale * g / z


@register_family("rank_g_h")
class RankGHWalk(WalkFamily):
    """r = g(j) h(|i_1 - i_j|) = 1 - l."""

    def __init__(self, g=0.5, h=0.5, epsilon=0.0, scale=1.0):
        super().__init__(g=g, h=h, epsilon=epsilon, scale=scale)
        self.g = _profile("g", g, start=1, tail=TAIL_HOLD)
        self.h = _profile("h", h, start=0, tail=TAIL_HOLD)
        self.scale = _positive("scale", scale)
        eps = _nonnegative("epsilon", epsilon)
        _within("g", self.g, eps, 1 - eps, range(1, 65))
        _within("h", self.h, eps, 1 - eps)

    def _rates(self, config, index, sign):
        j = config.ranks[index]
        first = config.rank_positions[0]
        u = self.g(j) * self.h(abs(first - config.positions[index]))
        return self.scale * u, self.scale * (1.0 - u)


@register_family("rank_potential")
class RankPotentialWalk(WalkFamily):
    """Rank-weighted potential of the particles on either side in rank.

    r = alpha - ch sum_{j' > j} j'^-gamma P(j'),
    l = alpha + s ch sum_{j' < j} j'^-gamma P(j'),
    P(j') = sum_{i != i_j} psi(|i_j' - i|) |y_i|, s = left_sign."""

    def __init__(self, alpha=1.0, gamma=2.0, psi=None, left_sign=1):
        super().__init__(alpha=alpha, gamma=gamma, psi=psi,
                         left_sign=left_sign)
        self.alpha = _positive("alpha", alpha)
        self.gamma = float(gamma)
        if not self.gamma > 1:
            raise InvalidParameterError("gamma must exceed 1")
        if psi is None:
            psi = {"kind": "power", "scale": 0.1, "exponent": 2,
                   "origin": 0.1}
        self.psi = _profile("psi", psi)
        if left_sign not in (1, -1):
            raise InvalidParameterError("left_sign must be +1 or -1")
        self.left_sign = left_sign
        bound = _zeta_bound(self.gamma) * (
            abs(self.psi(0)) + 2 * _summable("psi", self.psi, 1))
        if not self.alpha > bound:
            raise InvalidParameterError(
                f"alpha must exceed {bound} to keep rates positive")

    def _rates(self, config, index, sign):
        site = config.positions[index]
        j = config.ranks[index]
        by_rank = config.rank_positions
        right = left = 0.0
        for k, anchor in enumerate(by_rank, start=1):
            if k == j:
                continue
            potential = 0.0
            for p in config.positions:
                if p != site:
                    potential += self.psi(abs(anchor - p))
            weighted = k ** -self.gamma * potential
            if k > j:
                right += weighted
            else:
                left += weighted
        ch = config.charge
        return (self.alpha - ch * right,
                self.alpha + self.left_sign * ch * left)


@register_family("dist_potential")
class DistPotentialWalk(WalkFamily):
    """r = h(sum_{j' <= j} phi(|i_j - i_j'|)) = 1 - l."""

    def __init__(self, phi=None, h=None, scale=1.0):
        super().__init__(phi=phi, h=h, scale=scale)
        self.phi = _profile("phi", 0.1 if phi is None else phi)
        _monotone("phi", self.phi, increasing=True)
        self.h = _profile("h", h if h is not None else
                          {"kind": "logistic", "epsilon": 0.1})
        self.scale = _positive("scale", scale)

    def _rates(self, config, index, sign):
        j = config.ranks[index]
        site = config.positions[index]
        u = sum(self.phi(abs(site - p))
                for p in config.rank_positions[:j])
        v = self.h(u)
        return self.scale * v, self.scale * (1.0 - v)


@register_family("dist_gaps")
class DistGapsWalk(WalkFamily):
    """r = h(sum_{j' < j} g(L_j')) = 1 - l."""

    def __init__(self, g=None, h=None, scale=1.0):
        super().__init__(g=g, h=h, scale=scale)
        self.g = _profile("g", g if g is not None else
                          {"kind": "power", "scale": 1.0, "exponent": 1})
        self.h = _profile("h", h if h is not None else
                          {"kind": "logistic", "epsilon": 0.1})
        self.scale = _positive("scale", scale)

    def _rates(self, config, index, sign):
        j = config.ranks[index]
        gaps = config.gaps
        u = sum(self.g(gaps[k]) for k in range(1, j))
        v = self.h(u)
        return self.scale * v, self.scale * (1.0 - v)


@register_family("dist_first_pull")
class DistFirstPullWalk(WalkFamily):
    """Potential centred on the rank-1 particle.

    r = alpha + ch S, l = alpha - ch S, S = sum_{1 < j' <= j}
    psi(|i_j' - i_1|)."""

    def __init__(self, alpha=0.3, psi=None):
        super().__init__(alpha=alpha, psi=psi)
        self.alpha = _positive("alpha", alpha)
        self.psi = _profile("psi", psi if psi is not None else
                            {"kind": "power", "scale": 0.1, "exponent": 2})
        if not self.alpha > _summable("psi", self.psi, 1):
            raise InvalidParameterError(
                "alpha must exceed the sum of psi")

    def _rates(self, config, index, sign):
        j = config.ranks[index]
        by_rank = config.rank_positions
        s = sum(self.psi(abs(by_rank[k] - by_rank[0]))
                for k in range(1, j))
        ch = config.charge
        return self.alpha + ch * s, self.alpha - ch * s


@register_family("gap_rank_g")
class GapRankWalk(WalkFamily):
    """Sign-dependent rates 1/2 +- g(L, n) on neighbouring gaps.

    g(L, n) = g_distance(L) * g_rank(n), with g vanishing at L = inf.
    For charge +1, a rank-decreasing g_rank makes neighbouring minus-plus
    pairs repel."""

    def __init__(self, g_rank=0.25, g_distance=1.0, scale=1.0):
        super().__init__(g_rank=g_rank, g_distance=g_distance, scale=scale)
        self.g_rank = _profile("g_rank", g_rank, start=1, tail=TAIL_HOLD)
        self.g_distance = _profile("g_distance", g_distance, start=1,
                                   tail=TAIL_HOLD)
        self.scale = _positive("scale", scale)
        points = range(1, 65)
        if any(self.g_distance(n) <= 0 for n in points):
            raise InvalidParameterError("g_distance must be positive")
        top = max(self.g_distance(n) for n in points)
        for n in points:
            if not 0 < self.g_rank(n) * top < 0.5:
                raise InvalidParameterError(
                    f"g(L, {n}) must lie in (0, 1/2)")

    def _g(self, distance, n):
        if n == 0 or math.isinf(distance):
            return 0.0
        return self.g_distance(distance) * self.g_rank(n)

    def _rates(self, config, index, sign):
        j = config.ranks[index]
        gaps = config.gaps
        before = self._g(gaps[j - 1], j - 1)
        after = self._g(gaps[j], j)
        if config.charge == PLUS:
            r = 0.5 + (before if sign == PLUS else after)
        else:
            r = 0.5 - (after if sign == PLUS else before)
        return self.scale * r, self.scale * (1.0 - r)


@register_family("psi_attraction")
class PsiAttractionWalk(WalkFamily):
    """Attraction of each particle towards higher ranks.

    s = sum of psi(|i_j - i_j'|) over ranks j' beyond j (plus:
    j' > j + (1 - ch)/2, minus: j' > j + (1 + ch)/2), and r = 1/2 + ch s;
    r = l = 1/2 at the outermost particles."""

    def __init__(self, psi=None, scale=1.0):
        super().__init__(psi=psi, scale=scale)
        self.psi = _profile("psi", psi if psi is not None else
                            {"kind": "power", "scale": 0.1, "exponent": 3})
        self.scale = _positive("scale", scale)
        _monotone("psi", self.psi, increasing=False, points=range(1, 65))
        if not _summable("psi", self.psi, 1) < 0.5:
            raise InvalidParameterError("Sum of psi must be below 1/2")

    def _rates(self, config, index, sign):
        if index == 0 or index == config.count - 1:
            return 0.5 * self.scale, 0.5 * self.scale
        j = config.ranks[index]
        site = config.positions[index]
        ch = config.charge
        skip = (1 - ch) // 2 if sign == PLUS else (1 + ch) // 2
        by_rank = config.rank_positions
        s = sum(self.psi(abs(site - by_rank[k - 1]))
                for k in range(j + skip + 1, config.count + 1))
        r = 0.5 + ch * s
        return self.scale * r, self.scale * (1.0 - r)


@register_family("midpoint_attraction")
class MidpointAttractionWalk(WalkFamily):
    """Potential measured from the midpoints to the rank neighbours.

    psi is evaluated at integer and half-integer distances."""

    def __init__(self, psi=None, scale=1.0):
        super().__init__(psi=psi, scale=scale)
        self.psi = _profile("psi", psi if psi is not None else
                            {"kind": "power", "scale": 0.02,
                             "exponent": 3})
        self.scale = _positive("scale", scale)
        half_steps = sum(self.psi(k / 2) for k in range(1, 8193))
        total = half_steps + 2 * _summable("psi", self.psi, 4096)
        if not total < 0.5:
            raise InvalidParameterError(
                "Sum of psi over positive integers and half-integers "
                "must be below 1/2")

    def _midpoint_sum(self, config, site, a, b):
        if a is None or b is None:
            return 0.0
        m = (a + b) / 2
        return sum(self.psi(abs(m - p))
                   for p in config.positions if p != site)

    def _rates(self, config, index, sign):
        j = config.ranks[index]
        site = config.positions[index]
        by_rank = config.rank_positions
        prev = by_rank[j - 2] if j >= 2 else None
        nxt = by_rank[j] if j < config.count else None
        lower = self._midpoint_sum(config, site, prev, site)
        upper = self._midpoint_sum(config, site, site, nxt)
        if config.charge == PLUS:
            r = 0.5 + (lower if sign == PLUS else upper)
        else:
            r = 0.5 - (upper if sign == PLUS else lower)
        return self.scale * r, self.scale * (1.0 - r)


########################################################################
# Nearest-neighbour branching.

class BranchFamily(RateFamily):
    kind = BRANCH

    def branch_rate(self, config, site, sign=None):
        index, sign = resolve(config, site, sign)
        return self._rate(config, index, sign)

    def _rate(self, config, index, sign):
        raise NotImplementedError


@register_family("const_branch")
class ConstBranch(BranchFamily):
    """b = beta, optionally different per sign."""

    def __init__(self, beta=1.0, beta_plus=None, beta_minus=None):
        super().__init__(beta=beta, beta_plus=beta_plus,
                         beta_minus=beta_minus)
        beta = _positive("beta", beta)
        self.table = {
            PLUS: beta if beta_plus is None else _positive("beta_plus",
                                                           beta_plus),
            MINUS: beta if beta_minus is None else _positive("beta_minus",
                                                             beta_minus),
        }

    def _rate(self, config, index, sign):
        return self.table[sign]

    def bulk_rates(self, config):
        return [self.table[s] for s in config.signs]


@register_family("lone_branch")
class LoneBranch(BranchFamily):
    """b = beta1 + beta2 1{both neighbouring sites empty}."""

    def __init__(self, beta1=0.5, beta2=0.5):
        super().__init__(beta1=beta1, beta2=beta2)
        self.beta1 = _positive("beta1", beta1)
        self.beta2 = _nonnegative("beta2", beta2)

    def _rate(self, config, index, sign):
        site = config.positions[index]
        lonely = (config.sign_at(site - 1) == 0
                  and config.sign_at(site + 1) == 0)
        return self.beta1 + (self.beta2 if lonely else 0.0)


@register_family("signed_exp_branch")
class SignedExpBranch(BranchFamily):
    """b = exp(y_{i_j} sum_{|d| <= L} f(d, y_{i_j + d})).

    f is given per neighbour value (f_plus, f_minus, f_empty) as tables
    over d = -L .. L, or as constants."""

    def __init__(self, L=1, f_plus=0.1, f_minus=-0.1, f_empty=0.0):
        super().__init__(L=L, f_plus=f_plus, f_minus=f_minus,
                         f_empty=f_empty)
        self.L = int(L)
        if self.L < 0:
            raise InvalidParameterError("L must be nonnegative")
        self.f = {PLUS: self._table("f_plus", f_plus),
                  MINUS: self._table("f_minus", f_minus),
                  0: self._table("f_empty", f_empty)}

    def _table(self, name, value):
        size = 2 * self.L + 1
        if isinstance(value, (int, float)):
            return (float(value),) * size
        value = tuple(float(v) for v in value)
        if len(value) != size:
            raise InvalidParameterError(
                f"{name} needs {size} entries, got {len(value)}")
        return value

    def _rate(self, config, index, sign):
        site = config.positions[index]
        u = 0.0
        for d in range(-self.L, self.L + 1):
            neighbour = sign if d == 0 else config.sign_at(site + d)
            u += self.f[neighbour][d + self.L]
        return math.exp(sign * u)


@register_family("summable_kernel_branch")
class SummableKernelBranch(BranchFamily):
    """b = beta1 + beta2 sum_i psi(|i_j - i|) |y_i|, psi summable."""

    def __init__(self, beta1=0.5, beta2=0.5, psi=None):
        super().__init__(beta1=beta1, beta2=beta2, psi=psi)
        self.beta1 = _positive("beta1", beta1)
        self.beta2 = _nonnegative("beta2", beta2)
        self.psi = _profile("psi", psi if psi is not None else
                            {"kind": "exp", "scale": 1.0, "rate": 1.0})
        _summable("psi", self.psi)
        if any(self.psi(n) < 0 for n in _CHECK_POINTS):
            raise InvalidParameterError("psi must be nonnegative")

    def _rate(self, config, index, sign):
        site = config.positions[index]
        return self.beta1 + self.beta2 * _kernel_sum(config, site, self.psi)


@register_family("holder_kernel_branch")
class HolderKernelBranch(BranchFamily):
    """b = beta1 + beta2 (1 + |sum_i psi(|i_j - i|) y_i y_{i_j}|)^theta.

    The outer map is theta-Hoelder with 0 < theta <= 1."""

    def __init__(self, beta1=0.5, beta2=0.5, psi=None, theta=0.5):
        super().__init__(beta1=beta1, beta2=beta2, psi=psi, theta=theta)
        self.beta1 = _positive("beta1", beta1)
        self.beta2 = _nonnegative("beta2", beta2)
        self.theta = float(theta)
        if not 0 < self.theta <= 1:
            raise InvalidParameterError("theta must lie in (0, 1]")
        self.psi = _profile("psi", psi if psi is not None else
                            {"kind": "power", "scale": 1.0, "exponent": 2,
                             "origin": 1.0})
        _summable("psi", self.psi)

    def _rate(self, config, index, sign):
        site = config.positions[index]
        u = 0.0
        for p, s in config:
            u += self.psi(abs(p - site)) * s * sign
        return self.beta1 + self.beta2 * (1.0 + abs(u)) ** self.theta


@register_family("power_decay_branch")
class PowerDecayBranch(BranchFamily):
    """b = beta (1 + sum_i psi |y_i|)^-(beta1 + beta2 lambda),
    lambda = sum_i E(|i_j - i|) |y_i|."""

    def __init__(self, beta=1.0, beta1=0.5, beta2=0.5, psi=None, E=None):
        super().__init__(beta=beta, beta1=beta1, beta2=beta2, psi=psi, E=E)
        self.beta = _positive("beta", beta)
        self.beta1 = _nonnegative("beta1", beta1)
        self.beta2 = _nonnegative("beta2", beta2)
        self.psi = _profile("psi", psi if psi is not None else
                            {"kind": "exp", "scale": 1.0, "rate": 0.5})
        self.E = _profile("E", E if E is not None else
                          {"kind": "exp", "scale": 1.0, "rate": 1.0})
        _summable("psi", self.psi)
        _summable("E", self.E)

    def _rate(self, config, index, sign):
        site = config.positions[index]
        base = 1.0 + _kernel_sum(config, site, self.psi)
        lam = _kernel_sum(config, site, self.E)
        return self.beta * base ** -(self.beta1 + self.beta2 * lam)


@register_family("rank_kernel_branch")
class RankKernelBranch(BranchFamily):
    """b = beta + beta1 sum_{j' <= j} g1(|i_j - i_j'|, j')
    + beta2 sum_{j' >= j} g2(|i_j - i_j'|, j'),
    with g(n, m) = distance(n) m^-rank_exponent."""

    def __init__(self, beta=1.0, beta1=1.0, beta2=1.0, g1_distance=None,
                 g1_rank_exponent=2.0, g2_distance=None,
                 g2_rank_exponent=2.0):
        super().__init__(beta=beta, beta1=beta1, beta2=beta2,
                         g1_distance=g1_distance,
                         g1_rank_exponent=g1_rank_exponent,
                         g2_distance=g2_distance,
                         g2_rank_exponent=g2_rank_exponent)
        self.beta = _positive("beta", beta)
        self.beta1 = _nonnegative("beta1", beta1)
        self.beta2 = _nonnegative("beta2", beta2)
        self.g1 = _profile("g1_distance",
                           [1.0] if g1_distance is None else g1_distance)
        self.g2 = _profile("g2_distance",
                           [1.0] if g2_distance is None else g2_distance)
        self.p1 = float(g1_rank_exponent)
        self.p2 = float(g2_rank_exponent)
        for name, g in (("g1_distance", self.g1), ("g2_distance", self.g2)):
            _summable(name, g)
            if any(g(n) < 0 for n in _CHECK_POINTS):
                raise InvalidParameterError(f"{name} must be nonnegative")

    def _rate(self, config, index, sign):
        j = config.ranks[index]
        site = config.positions[index]
        by_rank = config.rank_positions
        lower = sum(self.g1(abs(site - by_rank[k - 1])) * k ** -self.p1
                    for k in range(1, j + 1))
        upper = sum(self.g2(abs(site - by_rank[k - 1])) * k ** -self.p2
                    for k in range(j, config.count + 1))
        return self.beta + self.beta1 * lower + self.beta2 * upper


@register_family("log_kernel_branch")
class LogKernelBranch(BranchFamily):
    """b = f sum_i psi(|i_j - i|) |y_i| with psi nonincreasing and
    partial sums growing at most logarithmically."""

    def __init__(self, psi=None, f=1.0):
        super().__init__(psi=psi, f=f)
        self.psi = _profile("psi", psi if psi is not None else
                            {"kind": "iterated_log", "depth": 1})
        self.f = _positive("f", f)
        _monotone("psi", self.psi, increasing=False)
        if not self.psi(0) > 0:
            raise InvalidParameterError("psi(0) must be positive")

    def _rate(self, config, index, sign):
        site = config.positions[index]
        return self.f * _kernel_sum(config, site, self.psi)


@register_family("one_sided_potential_branch")
class OneSidedPotentialBranch(BranchFamily):
    """b = offset + scale log(sum_{j' <= j} phi(|i_j - i_j'|)),
    phi nondecreasing with phi(0) = 1."""

    def __init__(self, phi=None, offset=1.0, scale=1.0):
        super().__init__(phi=phi, offset=offset, scale=scale)
        self.phi = _profile("phi", phi if phi is not None else
                            {"kind": "power", "scale": 1.0,
                             "exponent": -0.5, "offset": 1.0})
        self.offset = _positive("offset", offset)
        self.scale = _nonnegative("scale", scale)
        _monotone("phi", self.phi, increasing=True)
        if self.phi(0) != 1.0:
            raise InvalidParameterError("phi(0) must equal 1")

    def _rate(self, config, index, sign):
        j = config.ranks[index]
        site = config.positions[index]
        u = sum(self.phi(abs(site - p))
                for p in config.rank_positions[:j])
        return self.offset + self.scale * math.log(u)


@register_family("signed_power_branch")
class SignedPowerBranch(BranchFamily):
    """b = beta (sum_i psi(|i_j - i|) |y_i|)^(-y_{i_j} lambda),
    lambda = ch sum_i E(|i_j - i|) |y_i|, psi(0) = 1."""

    def __init__(self, beta=1.0, psi=None, E=None):
        super().__init__(beta=beta, psi=psi, E=E)
        self.beta = _positive("beta", beta)
        self.psi = _profile("psi", psi if psi is not None else
                            {"kind": "exp", "scale": 1.0, "rate": 1.0})
        self.E = _profile("E", E if E is not None else
                          {"kind": "exp", "scale": 0.1, "rate": 1.0})
        if self.psi(0) != 1.0:
            raise InvalidParameterError("psi(0) must equal 1")
        if any(self.psi(n) < 0 for n in _CHECK_POINTS):
            raise InvalidParameterError("psi must be nonnegative")

    def _rate(self, config, index, sign):
        site = config.positions[index]
        base = _kernel_sum(config, site, self.psi)
        lam = config.charge * _kernel_sum(config, site, self.E)
        return self.beta * base ** (-sign * lam)


@register_family("log_rank_branch")
class LogRankBranch(BranchFamily):
    """b = beta + beta1 g1(j) + beta2 g2(j) sum_{j' <= j} phi(|i_j - i_j'|).

    The defaults give b = beta + beta1 log j."""

    def __init__(self, beta=1.0, beta1=1.0, beta2=0.0, g1=None, g2=None,
                 phi=None):
        super().__init__(beta=beta, beta1=beta1, beta2=beta2, g1=g1, g2=g2,
                         phi=phi)
        self.beta = _positive("beta", beta)
        self.beta1 = _nonnegative("beta1", beta1)
        self.beta2 = _nonnegative("beta2", beta2)
        self.g1 = _profile("g1", g1 if g1 is not None else
                           {"kind": "log"}, start=1, tail=TAIL_HOLD)
        self.g2 = _profile("g2", g2 if g2 is not None else 0.0,
                           start=1, tail=TAIL_HOLD)
        self.phi = _profile("phi", phi if phi is not None else 1.0)
        for name, prof in (("g1", self.g1), ("g2", self.g2),
                           ("phi", self.phi)):
            if any(prof(n) < 0 for n in range(1, 65)):
                raise InvalidParameterError(f"{name} must be nonnegative")

    def _rate(self, config, index, sign):
        j = config.ranks[index]
        site = config.positions[index]
        rate = self.beta + self.beta1 * self.g1(j)
        if self.beta2:
            rate += self.beta2 * self.g2(j) * sum(
                self.phi(abs(site - p))
                for p in config.rank_positions[:j])
        return rate


########################################################################
# Long-range branching.

@register_family("long_range_branch")
class LongRangeBranch(RateFamily):
    """b_l = beta1 e^-l sum_{|d| <= L} f(y_{i_j + d})
    + beta2 sum_i psi_l(|i_j - i|) |y_i|,
    psi_l(n) = scale l^-exponent kernel(n), for 2 <= l <= max_range.

    The rate does not depend on the particle's sign."""

    kind = LONG_RANGE

    def __init__(self, max_range=8, beta1=0.0, beta2=1.0, L=1,
                 f_occupied=1.0, f_empty=0.0, scale=1.0, exponent=4.0,
                 kernel=None):
        super().__init__(max_range=max_range, beta1=beta1, beta2=beta2, L=L,
                         f_occupied=f_occupied, f_empty=f_empty,
                         scale=scale, exponent=exponent, kernel=kernel)
        if max_range is None or not math.isfinite(float(max_range)):
            raise InvalidParameterError(
                "Long-range branching needs a finite max_range")
        self.max_range = int(max_range)
        if self.max_range < 2:
            raise InvalidParameterError("max_range must be at least 2")
        self.beta1 = _nonnegative("beta1", beta1)
        self.beta2 = _nonnegative("beta2", beta2)
        self.L = int(L)
        self.f_occupied = _nonnegative("f_occupied", f_occupied)
        self.f_empty = _nonnegative("f_empty", f_empty)
        self.scale = _nonnegative("scale", scale)
        self.exponent = float(exponent)
        if not self.exponent > 3:
            raise InvalidParameterError("exponent must exceed 3")
        self.kernel = _profile("kernel", [1.0] if kernel is None else kernel)
        self.kernel_mass = abs(self.kernel(0)) + 2 * _summable(
            "kernel", self.kernel, 1)

    def bound(self, distance):
        """Return a uniform bound on b_l implied by the parameters."""
        window = (2 * self.L + 1) * max(self.f_occupied, self.f_empty)
        return (self.beta1 * math.exp(-distance) * window
                + self.beta2 * self.scale * distance ** -self.exponent
                * self.kernel_mass)

    def long_branch_rate(self, config, site, distance, sign=None):
        resolve(config, site, sign)
        if distance < 2 or distance > self.max_range:
            return 0.0
        rate = 0.0
        if self.beta1:
            local = 0.0
            for d in range(-self.L, self.L + 1):
                local += (self.f_occupied if config.sign_at(site + d)
                          else self.f_empty)
            rate += self.beta1 * math.exp(-distance) * local
        if self.beta2:
            rate += (self.beta2 * self.scale * distance ** -self.exponent
                     * _kernel_sum(config, site, self.kernel))
        return rate


########################################################################

def reference_model():
    """Return the reference model: symmetric walks, constant branching."""
    constants = DeclaredConstants(
        s_lower=REF_S_LOWER, d_bar=REF_D_BAR,
        b_n=ConstantProfile(REF_B_N), D_bar=REF_B_N)
    return ModelSpec(
        alpha1=REF_ALPHA1, alpha2=REF_ALPHA2,
        walk=catalog_build("const_symmetric", {"rate": REF_WALK_RATE}),
        branch=catalog_build("const_branch", {"beta": REF_BRANCH_RATE}),
        constants=constants)


def long_range_reference_model(max_range=8, beta2=0.5):
    """Return the reference model plus long-range branching with
    b_l = beta2 l^-4, declared against B~(l) = l^-4."""
    ref = reference_model()
    constants = DeclaredConstants(
        s_lower=REF_S_LOWER, d_bar=REF_D_BAR,
        b_n=ConstantProfile(REF_B_N), D_bar=REF_B_N,
        b_tilde=PowerProfile(scale=1.0, exponent=4.0),
        B_bar=REF_B_N)
    long_range = catalog_build("long_range_branch", {
        "max_range": max_range, "beta1": 0.0, "beta2": beta2,
        "exponent": 4.0})
    return ModelSpec(alpha1=ref.alpha1, alpha2=ref.alpha2, walk=ref.walk,
                     branch=ref.branch, constants=constants,
                     long_range=long_range)


########################################################################
