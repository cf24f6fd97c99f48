"""CASAS-style whitespace-delimited event logs.

Line grammar::

    <YYYY-MM-DD> <HH:MM:SS> <sensor> <ON|OFF|value> [value] [user]

``#`` starts a comment line. A bare value in the status column changes the
attribute of an already running service (closing the previous segment).
Use ``-`` as a placeholder value when only a user column is needed.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from datetime import datetime, timedelta
from typing import Iterable, Mapping, Optional, Union

from .core import ServiceEvent, TimeInterval, split_at_midnight

log = logging.getLogger(__name__)

DEFAULT_MAX_DURATION = timedelta(hours=4)
DEFAULT_LOCATION = "home"
DEFAULT_ATTRIBUTE = "value"
PLACEHOLDER = "-"


@dataclass(frozen=True)
class SensorInfo:
    """Where a sensor lives and which attribute its value column sets."""
    service_id: str
    location: str = DEFAULT_LOCATION
    attribute: str = DEFAULT_ATTRIBUTE


@dataclass(frozen=True)
class RawLogRecord:
    timestamp: datetime
    sensor: str
    status: str
    value: Optional[str] = None
    user: Optional[str] = None
    line_no: int = 0

    @property
    def date(self):
        return self.timestamp.date()

    @property
    def time(self):
        return self.timestamp.time()


@dataclass(frozen=True)
class LogIssue:
    line_no: int
    kind: str
    text: str


@dataclass
class ParsedLog:
    events: list = field(default_factory=list)
    issues: list = field(default_factory=list)

    def __iter__(self):
        return iter(self.events)

    def __len__(self):
        return len(self.events)


def coerce_value(text: str):
    """Numeric strings become int/float so they can be binned later."""
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def parse_records(lines: Iterable[str], issues: list) -> list:
    records = []
    for no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if not 4 <= len(parts) <= 6:
            issues.append(LogIssue(no, "malformed", line))
            continue
        try:
            ts = datetime.fromisoformat(parts[0] + " " + parts[1])
        except ValueError:
            issues.append(LogIssue(no, "malformed", line))
            continue
        value = parts[4] if len(parts) >= 5 and parts[4] != PLACEHOLDER else None
        user = parts[5] if len(parts) == 6 else None
        records.append(RawLogRecord(ts, parts[2], parts[3], value, user, no))
    records.sort(key=lambda r: (r.timestamp, r.line_no))
    return records


def parse_log(lines: Union[str, Iterable[str]],
              sensors: Optional[Mapping[str, SensorInfo]] = None,
              resident: str = "R1",
              max_duration: timedelta = DEFAULT_MAX_DURATION) -> ParsedLog:
    """Pair ON/OFF records into day-split ServiceEvents.

    ``resident`` is used for lines without a user column.
    """
    if isinstance(lines, str):
        lines = lines.splitlines()
    sensors = sensors or {}
    result = ParsedLog()
    records = parse_records(lines, result.issues)

    # (sensor, user) -> (start, value, flags)
    open_: dict[tuple, tuple] = {}

    def emit(sensor, user, start, end, value, flags):
        info = sensors.get(sensor) or SensorInfo(sensor)
        attrs = {info.attribute: value} if value is not None else {}
        if not start < end:
            result.issues.append(LogIssue(0, "zero-length", "%s %s %s" % (sensor, user, start)))
            return
        for piece in split_at_midnight(TimeInterval(start, end)):
            fl = flags + (("split",) if piece != TimeInterval(start, end) else ())
            result.events.append(ServiceEvent(info.service_id, attrs, piece,
                                              info.location, user, fl))

    for rec in records:
        user = rec.user or resident
        key = (rec.sensor, user)
        status = rec.status.upper()
        if status == "ON":
            if key in open_:
                start, value, flags = open_.pop(key)
                emit(rec.sensor, user, start, rec.timestamp, value, flags + ("restarted",))
                result.issues.append(LogIssue(rec.line_no, "duplicate-on",
                                              "%s %s" % (rec.sensor, rec.timestamp)))
            open_[key] = (rec.timestamp, coerce_value(rec.value) if rec.value else None, ())
        elif status == "OFF":
            if key not in open_:
                result.issues.append(LogIssue(rec.line_no, "off-without-on",
                                              "%s %s" % (rec.sensor, rec.timestamp)))
                continue
            start, value, flags = open_.pop(key)
            end = rec.timestamp
            if end - start > max_duration:
                end = start + max_duration
                flags = flags + ("capped",)
            emit(rec.sensor, user, start, end, value, flags)
        else:
            if key not in open_:
                result.issues.append(LogIssue(rec.line_no, "value-without-on",
                                              "%s %s %s" % (rec.sensor, rec.timestamp, rec.status)))
                continue
            start, value, flags = open_.pop(key)
            emit(rec.sensor, user, start, rec.timestamp, value, flags)
            open_[key] = (rec.timestamp, coerce_value(rec.status), ())

    for (sensor, user), (start, value, flags) in sorted(open_.items(), key=lambda kv: kv[1][0]):
        emit(sensor, user, start, start + max_duration, value, flags + ("unclosed",))
        result.issues.append(LogIssue(0, "unclosed", "%s %s %s" % (sensor, user, start)))

    result.events.sort(key=event_sort_key)
    if result.issues:
        log.info("parsed %d events with %d issues", len(result.events), len(result.issues))
    return result


def event_sort_key(e: ServiceEvent):
    return (e.start, e.end, e.service_id, e.user_id, e.location)


def _fmt_ts(t: datetime) -> str:
    return t.strftime("%Y-%m-%d %H:%M:%S")


def format_log(events: Iterable[ServiceEvent], sensors: Optional[Mapping[str, SensorInfo]] = None) -> str:
    """Render events as ON/OFF line pairs, each carrying value and user columns.

    Each event must carry at most one attribute. ``sensors`` maps sensor name
    to SensorInfo; the inverse is used to recover the sensor name from
    (service, location, attribute). Events touching midnight are written as
    separate pairs and parse back as separate events.
    """
    reverse = {}
    for name, info in (sensors or {}).items():
        reverse[(info.service_id, info.location)] = name
    rows = []
    for e in events:
        if len(e.attribute_values) > 1:
            raise ValueError("log lines carry at most one attribute per event")
        sensor = reverse.get((e.service_id, e.location), e.service_id)
        value = next(iter(e.attribute_values.values()), None)
        vtxt = PLACEHOLDER if value is None else str(value)
        if any(c.isspace() for c in vtxt) or any(c.isspace() for c in e.user_id):
            raise ValueError("values and user ids may not contain whitespace")
        rows.append((e.start, 1, "%s %s ON %s %s" % (_fmt_ts(e.start), sensor, vtxt, e.user_id)))
        rows.append((e.end, 0, "%s %s OFF %s %s" % (_fmt_ts(e.end), sensor, PLACEHOLDER, e.user_id)))
    rows.sort(key=lambda r: (r[0], r[1]))
    return "".join(r[2] + "\n" for r in rows)
