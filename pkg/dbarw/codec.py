#! /usr/bin/env python
########################################################################
# dbarw
# Copyright (C) 2024, the dbarw developers.
# SPDX-License-Identifier: MIT
########################################################################

"""Configuration literals, trajectory CSV and JSON reports.

Floats are written with 17 significant digits in CSV and with repr in
JSON, so every emitted file reads back to the same values."""

import csv
import io
import json
import logging
import math
from typing import NamedTuple, Optional

from .constants import (EVENT_BRANCH, EVENT_H_DOUBLE, EVENT_H_STEP,
                        EVENT_KINDS, EVENT_LONG_BRANCH, EVENT_Q_BIRTH,
                        EVENT_RW_LEFT, EVENT_RW_RIGHT, EVENT_SNAPSHOT, LEFT,
                        RIGHT, TRAJECTORY_HEADER)
from .errors import ConfigurationError, DbarwError, TrajectoryParseError
from .lattice import (apply_branch, apply_long_branch, apply_rw, f_cd,
                      from_particles)


logger = logging.getLogger(__name__)

PATH_KINDS = (EVENT_Q_BIRTH, EVENT_H_DOUBLE, EVENT_H_STEP)

_NEWLINE = "\n"


########################################################################
# Configuration literals.

def parse_configuration(literal):
    """Build a Configuration from its literal form.

    :param literal: List of [position, sign] pairs, or a JSON string
    holding one."""
    if isinstance(literal, (bytes, str)):
        try:
            literal = json.loads(literal)
        except ValueError as e:
            raise ConfigurationError(
                f"Configuration literal is not JSON: {e}") from e
    if not isinstance(literal, list):
        raise ConfigurationError(
            "Configuration literal must be a list of [position, sign]")
    return from_particles(literal)


def format_configuration(config):
    """Return the compact JSON literal of config."""
    return json.dumps(config.to_literal(), separators=(",", ":"))


def format_float(value):
    """Format a float with 17 significant digits."""
    return "%.17g" % value


########################################################################
# Trajectory CSV.

def _cell(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return format_float(value)
    return str(value)


class TrajectoryWriter:
    """Write trajectory rows to a text stream.

    The header is written on construction.  Event, snapshot and
    dominator-path rows share the same columns; columns a row kind does
    not define are left empty."""

    def __init__(self, stream):
        self.stream = stream
        self.writer = csv.writer(stream, lineterminator=_NEWLINE)
        self.rows = 0
        self.writer.writerow(TRAJECTORY_HEADER)

    def _write(self, *cells):
        self.writer.writerow([_cell(c) for c in cells])
        self.rows += 1

    def write_event(self, event):
        self._write(float(event.time), event.kind, event.site,
                    event.distance, event.pre_count, event.post_count,
                    event.post_width, event.post_fcd, event.charge)

    def write_snapshot(self, snapshot):
        self._write(float(snapshot.time), EVENT_SNAPSHOT, None, None, None,
                    snapshot.count, snapshot.width, snapshot.fcd,
                    snapshot.charge)

    def write_trajectory(self, trajectory):
        for event in trajectory.events:
            self.write_event(event)
        for snapshot in trajectory.snapshots:
            self.write_snapshot(snapshot)

    def write_path(self, path):
        """Write a dominator path; its value goes in post_width."""
        for t, kind, value in path.rows():
            self._write(float(t), kind, None, None, None, None,
                        float(value) if math.isinf(value) else value,
                        None, None)


def trajectory_csv(trajectory):
    """Return the trajectory CSV as a string."""
    out = io.StringIO()
    TrajectoryWriter(out).write_trajectory(trajectory)
    return out.getvalue()


def path_csv(path):
    """Return a dominator path as trajectory-schema CSV."""
    out = io.StringIO()
    TrajectoryWriter(out).write_path(path)
    return out.getvalue()


class EventRecord(NamedTuple):
    """One parsed trajectory row; absent columns are None."""

    time: float
    kind: str
    site: Optional[int]
    distance: Optional[int]
    pre_count: Optional[int]
    post_count: Optional[int]
    post_width: Optional[float]
    post_fcd: Optional[int]
    charge: Optional[int]


def _int(name, text):
    if text == "":
        return None
    try:
        return int(text)
    except ValueError as e:
        raise TrajectoryParseError(
            f"Column {name!r} value {text!r} is not an integer") from e


def _record(cells):
    if len(cells) != len(TRAJECTORY_HEADER):
        raise TrajectoryParseError(
            f"Expected {len(TRAJECTORY_HEADER)} columns, got {len(cells)}")
    time, kind, site, distance, pre, post, width, fcd, charge = cells
    if kind not in EVENT_KINDS + PATH_KINDS + (EVENT_SNAPSHOT,):
        raise TrajectoryParseError(f"Unknown event kind {kind!r}")
    try:
        time = float(time)
    except ValueError as e:
        raise TrajectoryParseError(f"Bad time {time!r}") from e
    if kind in PATH_KINDS:
        try:
            width = float(width)
        except ValueError as e:
            raise TrajectoryParseError(f"Bad path value {width!r}") from e
        if not math.isinf(width):
            width = int(width)
    else:
        width = _int("post_width", width)
    return EventRecord(time, kind, _int("site", site),
                       _int("range", distance), _int("pre_count", pre),
                       _int("post_count", post), width,
                       _int("post_fcd", fcd), _int("charge", charge))


class EventParser:
    """Incremental trajectory CSV parser.

    Text can be appended in fragments of any size, as it is read from a
    file or pipe; each call to get_record() removes one complete row
    from the head of the buffer.  The first row must be the header."""

    def __init__(self, require_header=True):
        """Constructor.

        :param require_header: If set, the first line must be the
        trajectory header, and it is consumed silently."""
        self.buf = ""
        self.require_header = require_header
        self.seen_header = not require_header
        self.line_number = 0

    def reset(self):
        """Discard buffered text and expect a header again."""
        self.buf = ""
        self.seen_header = not self.require_header
        self.line_number = 0

    def append_buffer(self, buf):
        """Append text (or UTF-8 bytes) to the parser buffer."""
        if isinstance(buf, bytes):
            buf = buf.decode("utf-8")
        self.buf += buf

    def get_buffer(self):
        """Return the unparsed remainder of the buffer."""
        return self.buf

    def _next_line(self):
        point = self.buf.find(_NEWLINE)
        if point < 0:
            return None
        line = self.buf[:point].rstrip("\r")
        self.buf = self.buf[point + 1:]
        self.line_number += 1
        return line

    def get_record(self):
        """Return the next EventRecord, or None if no complete row is
        buffered yet."""
        while True:
            line = self._next_line()
            if line is None:
                return None
            if line == "":
                continue
            cells = next(csv.reader([line]))
            if not self.seen_header:
                if tuple(cells) != TRAJECTORY_HEADER:
                    raise TrajectoryParseError(
                        f"Line {self.line_number}: expected header "
                        f"{','.join(TRAJECTORY_HEADER)!r}")
                self.seen_header = True
                continue
            try:
                return _record(cells)
            except TrajectoryParseError as e:
                raise TrajectoryParseError(
                    f"Line {self.line_number}: {e}") from e


def read_events(stream, chunk_size=65536):
    """Yield EventRecords from a text stream."""
    parser = EventParser()
    while True:
        chunk = stream.read(chunk_size)
        if not chunk:
            break
        parser.append_buffer(chunk)
        while (record := parser.get_record()) is not None:
            yield record
    parser.append_buffer(_NEWLINE)
    while (record := parser.get_record()) is not None:
        yield record


def _replay_one(config, record):
    kind = record.kind
    if kind == EVENT_RW_LEFT:
        return apply_rw(config, record.site, LEFT)
    if kind == EVENT_RW_RIGHT:
        return apply_rw(config, record.site, RIGHT)
    if kind == EVENT_BRANCH:
        return apply_branch(config, record.site)
    if kind == EVENT_LONG_BRANCH:
        return apply_long_branch(config, record.site, record.distance)
    raise TrajectoryParseError(f"Cannot replay a {kind!r} row")


def replay_records(initial, records):
    """Replay event rows from initial, checking every logged observable.

    :returns: The final Configuration.

    Raises TrajectoryParseError on the first row whose logged values
    disagree with the replayed successor, or whose time does not
    increase."""
    config = initial
    last = -math.inf
    n = 0
    for n, record in enumerate(records, start=1):
        if not record.time > last:
            raise TrajectoryParseError(
                f"Row {n}: time {record.time!r} does not increase")
        last = record.time
        if record.pre_count != config.count:
            raise TrajectoryParseError(
                f"Row {n}: pre_count {record.pre_count} but replay has "
                f"{config.count} particles")
        try:
            config = _replay_one(config, record)
        except (ConfigurationError, TypeError) as e:
            raise TrajectoryParseError(f"Row {n}: {e}") from e
        observed = (record.post_count, record.post_width, record.post_fcd,
                    record.charge)
        expected = (config.count, config.width, f_cd(config),
                    config.charge)
        if observed != expected:
            raise TrajectoryParseError(
                f"Row {n}: logged (count, width, fcd, charge) {observed} "
                f"but replay gives {expected}")
    logger.info("Replayed %d events to %d particles", n, config.count)
    return config


########################################################################
# JSON.

def _finite(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    return obj


def _encode(obj):
    if hasattr(obj, "to_descriptor"):
        return _finite(obj.to_descriptor())
    if hasattr(obj, "to_literal"):
        return obj.to_literal()
    if hasattr(obj, "tolist"):
        return _finite(obj.tolist())
    raise TypeError(f"Cannot encode {type(obj).__name__} as JSON")


def dumps(obj):
    """Serialise a report to JSON text, keys sorted.

    Non-finite floats are written as the strings "inf", "-inf" and
    "nan"."""
    return json.dumps(_finite(obj), default=_encode, sort_keys=True,
                      indent=2, allow_nan=False) + "\n"


def loads(text):
    """Parse JSON text written by dumps()."""
    try:
        return json.loads(text)
    except ValueError as e:
        raise DbarwError(f"Malformed JSON report: {e}") from e


def histogram_csv(histogram, key="width"):
    """Return a {value: probability} histogram as two-column CSV."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator=_NEWLINE)
    writer.writerow((key, "probability"))
    for value, p in sorted(histogram.items()):
        writer.writerow((value, format_float(float(p))))
    return out.getvalue()


def parse_histogram(text):
    """Parse histogram_csv() output back into a dict."""
    rows = list(csv.reader(io.StringIO(text)))
    return {int(k): float(p) for k, p in rows[1:] if k}


########################################################################
