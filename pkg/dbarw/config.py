#! /usr/bin/env python
########################################################################
# dbarw
# Copyright (C) 2024, the dbarw developers.
# SPDX-License-Identifier: MIT
########################################################################

"""Run configuration files.

A run configuration is one JSON object with "spec_version": 1 and the
sections model, initial, run, output and (optionally) audit.  The
model section may also be the string "reference" or
"long_range_reference"."""

import json
import logging
import math
import os
from dataclasses import dataclass, field, replace
from typing import Optional

from .catalog import long_range_reference_model, reference_model
from .constants import (DEFAULT_AUDIT_COUNT, DEFAULT_AUDIT_WIDTH,
                        DEFAULT_BURN_IN, DEFAULT_EVENT_BUDGET,
                        DEFAULT_L_GRID, DEFAULT_N_AUDIT, DEFAULT_OUT_DIR,
                        DEFAULT_SAMPLES, EVENT_BUDGET_ENV, RECORD_EVENTS,
                        RECORD_SUMMARY, SEED_MAX, SPEC_VERSION,
                        STOP_HORIZON, STOP_SINGLETON)
from .codec import parse_configuration
from .errors import ConfigParseError, ConfigurationError
from .rates import DeclaredConstants, ModelSpec, catalog_build


logger = logging.getLogger(__name__)

FORMATS = ("csv", "json")

_NAMED_MODELS = {
    "reference": reference_model,
    "long_range_reference": long_range_reference_model,
}


def model_from_descriptor(desc):
    """Build a ModelSpec from its JSON descriptor.

    Raises ConfigParseError for structural problems and the catalog's
    ModelError subclasses for unknown families or bad parameters."""
    if isinstance(desc, str):
        factory = _NAMED_MODELS.get(desc)
        if factory is None:
            raise ConfigParseError(f"Unknown named model {desc!r}")
        return factory()
    if not isinstance(desc, dict):
        raise ConfigParseError("'model' must be an object or a model name")
    try:
        alpha1 = float(desc["alpha1"])
        alpha2 = float(desc["alpha2"])
        walk = desc["walk"]
        branch = desc["branch"]
        constants = desc["constants"]
    except KeyError as e:
        raise ConfigParseError(
            f"Missing field 'model.{e.args[0]}'") from e
    except (TypeError, ValueError) as e:
        raise ConfigParseError(f"Bad model weight: {e}") from e

    def family(name, d):
        if not isinstance(d, dict) or "id" not in d:
            raise ConfigParseError(
                f"'model.{name}' must be {{\"id\": ..., \"params\": ...}}")
        return catalog_build(d["id"], d.get("params"))

    long_range = desc.get("long_range")
    return ModelSpec(
        alpha1=alpha1, alpha2=alpha2, walk=family("walk", walk),
        branch=family("branch", branch),
        constants=DeclaredConstants.from_descriptor(constants),
        long_range=(None if long_range is None
                    else family("long_range", long_range)))


@dataclass
class RunConfig:
    """Validated run configuration."""

    model: ModelSpec
    initial: object
    mode: str = RECORD_EVENTS
    horizon: float = math.inf
    max_events: Optional[int] = None
    stop: str = STOP_HORIZON
    seed: Optional[int] = None
    replicas: int = 1
    burn_in: float = DEFAULT_BURN_IN
    K: Optional[float] = None
    grid: Optional[list] = None
    windows: Optional[list] = None
    event_budget: int = DEFAULT_EVENT_BUDGET
    samples: int = DEFAULT_SAMPLES
    width: int = DEFAULT_AUDIT_WIDTH
    max_count: int = DEFAULT_AUDIT_COUNT
    n_audit: int = DEFAULT_N_AUDIT
    l_grid: tuple = DEFAULT_L_GRID
    out_dir: str = DEFAULT_OUT_DIR
    formats: tuple = FORMATS
    source: dict = field(default_factory=dict, repr=False)

    def check(self):
        """Raise ConfigParseError if the settings are inconsistent."""
        if self.mode not in (RECORD_EVENTS, RECORD_SUMMARY):
            raise ConfigParseError(
                f"'run.mode' must be 'events' or 'summary', not "
                f"{self.mode!r}")
        if self.stop not in (STOP_HORIZON, STOP_SINGLETON):
            raise ConfigParseError(
                f"'run.stop' must be 'horizon' or 'singleton', not "
                f"{self.stop!r}")
        if self.mode == RECORD_EVENTS and self.seed is None:
            raise ConfigParseError(
                "'run.seed' is required when 'run.mode' is 'events'")
        if self.seed is not None and not 0 <= self.seed <= SEED_MAX:
            raise ConfigParseError(
                f"'run.seed' {self.seed} is not an unsigned 64-bit integer")
        if self.replicas < 1:
            raise ConfigParseError(
                f"'run.replicas' must be at least 1, not {self.replicas}")
        if self.horizon < 0 or math.isnan(self.horizon):
            raise ConfigParseError(f"'run.horizon' {self.horizon} is invalid")
        if self.max_events is not None and self.max_events < 1:
            raise ConfigParseError("'run.max_events' must be at least 1")
        if self.burn_in < 0:
            raise ConfigParseError("'run.burn_in' must be nonnegative")
        if self.event_budget < 1:
            raise ConfigParseError("Event budget must be at least 1")
        if self.samples < 1:
            raise ConfigParseError(
                f"'audit.samples' must be at least 1, not {self.samples}")
        if self.width < 1 or self.max_count < 1:
            raise ConfigParseError(
                "'audit.width' and 'audit.max_count' must be positive")
        if self.n_audit < 2:
            raise ConfigParseError("'audit.n_audit' must be at least 2")
        bad = set(self.formats) - set(FORMATS)
        if bad:
            raise ConfigParseError(
                f"'output.formats' has unknown entries {sorted(bad)}")
        return self

    def override(self, **changes):
        """Return a checked copy with the non-None changes applied."""
        changes = {k: v for k, v in changes.items() if v is not None}
        return replace(self, **changes).check()


def _section(desc, name):
    value = desc.get(name, {})
    if not isinstance(value, dict):
        raise ConfigParseError(f"'{name}' must be an object")
    return value


def _number(section, name, key, cast, default):
    if key not in section or section[key] is None:
        return default
    try:
        return cast(section[key])
    except (TypeError, ValueError) as e:
        raise ConfigParseError(
            f"'{name}.{key}' has bad value {section[key]!r}") from e


def _budget(env, default):
    text = env.get(EVENT_BUDGET_ENV)
    if text is None:
        return default
    try:
        return int(text)
    except ValueError as e:
        raise ConfigParseError(
            f"{EVENT_BUDGET_ENV}={text!r} is not an integer") from e


def parse_config(desc, env=None, **overrides):
    """Build a RunConfig from a decoded JSON object.

    :param env: Mapping consulted for DBARW_EVENT_BUDGET; defaults to
    os.environ.
    :param overrides: RunConfig fields that take precedence over the
    file and the environment; None values are ignored."""
    if env is None:
        env = os.environ
    if not isinstance(desc, dict):
        raise ConfigParseError("Configuration must be a JSON object")
    version = desc.get("spec_version")
    if version != SPEC_VERSION:
        raise ConfigParseError(
            f"'spec_version' must be {SPEC_VERSION}, not {version!r}")
    if "model" not in desc:
        raise ConfigParseError("Missing field 'model'")
    if "initial" not in desc:
        raise ConfigParseError("Missing field 'initial'")
    try:
        initial = parse_configuration(desc["initial"])
    except ConfigurationError as e:
        raise ConfigParseError(f"'initial': {e}") from e

    run = _section(desc, "run")
    audit = _section(desc, "audit")
    output = _section(desc, "output")
    seed = _number(run, "run", "seed", int, None)
    budget = _number(run, "run", "event_budget", int, DEFAULT_EVENT_BUDGET)
    windows = run.get("windows")
    if windows is not None:
        try:
            windows = [(float(a), float(b)) for a, b in windows]
        except (TypeError, ValueError) as e:
            raise ConfigParseError(
                "'run.windows' must be a list of [start, stop]") from e
    grid = run.get("grid")
    if grid is not None:
        grid = [_number({"grid": g}, "run", "grid", float, None)
                for g in grid]

    config = RunConfig(
        model=model_from_descriptor(desc["model"]),
        initial=initial,
        mode=run.get("mode", run.get("record", RECORD_EVENTS)),
        horizon=_number(run, "run", "horizon", float, math.inf),
        max_events=_number(run, "run", "max_events", int, None),
        stop=run.get("stop", STOP_HORIZON),
        seed=seed,
        replicas=_number(run, "run", "replicas", int, 1),
        burn_in=_number(run, "run", "burn_in", float, DEFAULT_BURN_IN),
        K=_number(run, "run", "K", float, None),
        grid=grid, windows=windows,
        event_budget=_budget(env, budget),
        samples=_number(audit, "audit", "samples", int, DEFAULT_SAMPLES),
        width=_number(audit, "audit", "width", int, DEFAULT_AUDIT_WIDTH),
        max_count=_number(audit, "audit", "max_count", int,
                          DEFAULT_AUDIT_COUNT),
        n_audit=_number(audit, "audit", "n_audit", int, DEFAULT_N_AUDIT),
        l_grid=tuple(audit.get("l_grid", DEFAULT_L_GRID)),
        out_dir=output.get("directory", DEFAULT_OUT_DIR),
        formats=tuple(output.get("formats", FORMATS)),
        source=desc)
    return config.override(**overrides)


def load_config(path, env=None, **overrides):
    """Read and parse a configuration file."""
    try:
        with open(path, encoding="utf-8") as f:
            desc = json.load(f)
    except OSError as e:
        raise ConfigParseError(f"Cannot read {path}: {e.strerror}") from e
    except ValueError as e:
        raise ConfigParseError(f"{path} is not valid JSON: {e}") from e
    logger.info("Loaded configuration %s", path)
    return parse_config(desc, env, **overrides)


########################################################################
