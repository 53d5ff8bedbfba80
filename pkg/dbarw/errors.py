#! /usr/bin/env python
########################################################################
# dbarw
# Copyright (C) 2024, the dbarw developers.
# SPDX-License-Identifier: MIT
########################################################################

"""Exceptions."""


class DbarwError(Exception):
    """Base class for all dbarw errors."""


########################################################################
# Configurations.

class ConfigurationError(DbarwError, ValueError):
    """Particle configuration is not a member of the state space."""


class EvenCountError(ConfigurationError):
    """Configuration has an even (or zero) number of particles."""


class NonAlternatingError(ConfigurationError):
    """Two neighbouring particles carry the same sign."""


class DuplicatePositionError(ConfigurationError):
    """Two particles share a lattice site."""


class InvalidSignError(ConfigurationError):
    """Particle sign is not +1 or -1."""


class EmptySiteError(ConfigurationError):
    """Operation addressed a site with no particle."""


class InteriorOccupiedError(ConfigurationError):
    """Long-range branch interval holds another particle."""


class InvalidRangeError(ConfigurationError):
    """Long-range branch range is below 2."""


class PositionOverflowError(ConfigurationError, OverflowError):
    """Particle position left the signed 64-bit range."""


class HeightFunctionError(ConfigurationError):
    """Height profile is not the dual of a valid configuration."""


########################################################################
# Models.

class ModelError(DbarwError, ValueError):
    """Base class for model construction errors."""


class UnknownFamilyError(ModelError, KeyError):
    """Rate family identifier is not registered."""

    def __str__(self):
        # KeyError quotes its argument; keep the plain message.
        return str(self.args[0]) if self.args else ""


class InvalidParameterError(ModelError):
    """Rate family parameter violates a documented constraint."""


class ConstantsInvalidError(ModelError):
    """Declared model constants do not give a positive drift margin."""


class ModelInvalidError(ModelError):
    """Model cannot be used for the requested operation."""


########################################################################
# Runs.

class ConfigParseError(DbarwError, ValueError):
    """Run configuration file is malformed or incomplete."""


class EventBudgetExceededError(DbarwError, RuntimeError):
    """Simulation reached its safety cap on the number of events."""

    def __init__(self, budget, time):
        super().__init__(f"Event budget of {budget} exhausted at "
                         f"time {time!r}")
        self.budget = budget
        self.time = time

    def __reduce__(self):
        return type(self), (self.budget, self.time)


class DominationViolatedError(DbarwError, RuntimeError):
    """Coupled dominating process fell below the dominated statistic."""

    def __init__(self, reason, time, dominated, dominating):
        super().__init__(f"Domination violated ({reason}) at time {time!r}: "
                         f"{dominated!r} > {dominating!r}")
        self.reason = reason
        self.time = time
        self.dominated = dominated
        self.dominating = dominating

    def __reduce__(self):
        return type(self), (self.reason, self.time, self.dominated,
                            self.dominating)


class TrajectoryParseError(DbarwError, ValueError):
    """Trajectory CSV record could not be decoded."""


class NoReturnObserved(UserWarning):
    """Recurrence run ended without visiting the singleton state."""


########################################################################
