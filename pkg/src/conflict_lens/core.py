"""Domain types shared by every stage: services, events, intervals.

Interval endpoints may be any totally ordered type supporting subtraction
(``datetime`` for logged events, ``float`` minutes-of-day for habit windows).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from datetime import datetime, timedelta
from typing import Any, Iterable, Mapping, Optional, Union

AttributeValue = Union[str, int, float]


@dataclass(frozen=True)
class ServiceDescriptor:
    service_id: str
    service_name: str
    functions: frozenset
    qos_attributes: frozenset

    def __post_init__(self):
        for name in ("functions", "qos_attributes"):
            raw = getattr(self, name)
            items = list(raw)
            if not items:
                raise ValueError("%s of service %r must be non-empty" % (name, self.service_id))
            if len(set(items)) != len(items):
                raise ValueError("%s of service %r contains duplicates" % (name, self.service_id))
            object.__setattr__(self, name, frozenset(items))

    @property
    def attributes(self) -> frozenset:
        return self.functions | self.qos_attributes


class ServiceCatalog:
    """Set of known services, keyed by id."""

    def __init__(self, descriptors: Iterable[ServiceDescriptor] = ()):
        self._by_id: dict[str, ServiceDescriptor] = {}
        for d in descriptors:
            self.add(d)

    def add(self, descriptor: ServiceDescriptor) -> None:
        if descriptor.service_id in self._by_id:
            raise ValueError("duplicate service_id %r" % descriptor.service_id)
        self._by_id[descriptor.service_id] = descriptor

    def __getitem__(self, service_id: str) -> ServiceDescriptor:
        return self._by_id[service_id]

    def __contains__(self, service_id) -> bool:
        return service_id in self._by_id

    def __len__(self) -> int:
        return len(self._by_id)

    def validate_event(self, event: "ServiceEvent") -> None:
        if event.service_id not in self._by_id:
            raise ValueError("event refers to unknown service %r" % event.service_id)
        unknown = set(event.attribute_values) - self._by_id[event.service_id].attributes
        if unknown:
            raise ValueError("attributes %s are not offered by service %r"
                             % (sorted(unknown), event.service_id))


@dataclass(frozen=True, order=True)
class TimeInterval:
    start: Any
    end: Any

    def __post_init__(self):
        if not self.start < self.end:
            raise ValueError("interval start must precede end: %r >= %r" % (self.start, self.end))

    @property
    def duration(self):
        return self.end - self.start

    def contains(self, t) -> bool:
        return self.start <= t <= self.end


class AllenRelation(enum.Enum):
    BEFORE = "before"
    AFTER = "after"
    MEETS = "meets"
    MET_BY = "met_by"
    OVERLAPS = "overlaps"
    OVERLAPPED_BY = "overlapped_by"
    STARTS = "starts"
    STARTED_BY = "started_by"
    DURING = "during"
    CONTAINS = "contains"
    FINISHES = "finishes"
    FINISHED_BY = "finished_by"
    EQUALS = "equals"

    @property
    def inverse(self) -> "AllenRelation":
        return _INVERSE[self]

    @property
    def intersects(self) -> bool:
        """True when intervals in this relation share a positive-length stretch."""
        return self not in (AllenRelation.BEFORE, AllenRelation.AFTER,
                            AllenRelation.MEETS, AllenRelation.MET_BY)


_INVERSE = {
    AllenRelation.BEFORE: AllenRelation.AFTER,
    AllenRelation.MEETS: AllenRelation.MET_BY,
    AllenRelation.OVERLAPS: AllenRelation.OVERLAPPED_BY,
    AllenRelation.STARTS: AllenRelation.STARTED_BY,
    AllenRelation.DURING: AllenRelation.CONTAINS,
    AllenRelation.FINISHES: AllenRelation.FINISHED_BY,
    AllenRelation.EQUALS: AllenRelation.EQUALS,
}
_INVERSE.update({v: k for k, v in list(_INVERSE.items())})


def allen_relation(a: TimeInterval, b: TimeInterval) -> AllenRelation:
    """Relation of ``a`` with respect to ``b``."""
    R = AllenRelation
    if a.end < b.start:
        return R.BEFORE
    if b.end < a.start:
        return R.AFTER
    if a.end == b.start:
        return R.MEETS
    if b.end == a.start:
        return R.MET_BY
    if a.start == b.start:
        if a.end == b.end:
            return R.EQUALS
        return R.STARTS if a.end < b.end else R.STARTED_BY
    if a.end == b.end:
        return R.FINISHES if a.start > b.start else R.FINISHED_BY
    if a.start < b.start:
        return R.OVERLAPS if a.end < b.end else R.CONTAINS
    return R.DURING if a.end < b.end else R.OVERLAPPED_BY


def temporal_intersection(a: TimeInterval, b: TimeInterval) -> Optional[TimeInterval]:
    start = max(a.start, b.start)
    end = min(a.end, b.end)
    if start < end:
        return TimeInterval(start, end)
    return None


@dataclass(frozen=True)
class ServiceEvent:
    service_id: str
    attribute_values: Mapping[str, AttributeValue]
    interval: TimeInterval
    location: str
    user_id: str
    flags: tuple = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "attribute_values", dict(self.attribute_values))

    @property
    def start(self):
        return self.interval.start

    @property
    def end(self):
        return self.interval.end


def _next_midnight(t: datetime) -> datetime:
    return datetime.combine(t.date(), datetime.min.time()) + timedelta(days=1)


def split_at_midnight(interval: TimeInterval) -> list[TimeInterval]:
    """Cut a datetime interval at every day boundary it crosses."""
    pieces = []
    start = interval.start
    while True:
        midnight = _next_midnight(start)
        if interval.end <= midnight:
            pieces.append(TimeInterval(start, interval.end))
            return pieces
        pieces.append(TimeInterval(start, midnight))
        start = midnight


def minute_of_day(t: datetime, day_start: Optional[datetime] = None) -> float:
    """Minutes elapsed since ``day_start`` (default: midnight of ``t``'s date)."""
    if day_start is None:
        day_start = datetime.combine(t.date(), datetime.min.time())
    return (t - day_start).total_seconds() / 60.0


def format_minute(m: float) -> str:
    total = int(round(m))
    return "%02d:%02d" % divmod(total, 60)


def parse_minute(text: str) -> float:
    hh, mm = text.split(":")
    return int(hh) * 60 + float(mm)
