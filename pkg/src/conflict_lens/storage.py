"""JSON documents for events, habit databases, conflict reports and ground truth.

Every document carries ``schema_version``; floats are written with Python's
shortest round-trip repr so load(save(x)) reproduces scores bit for bit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime
from typing import Iterable, Optional

from .core import ServiceEvent, TimeInterval
from .engine import ConflictClass, ConflictReport, ConsistencyTable, make_group
from .errors import DocumentError, SchemaVersionError
from .habits import FuzzyServiceAttribute, ServiceUsageHabit

SCHEMA_VERSION = "1"


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _load(text: str, kind: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError("%s document is not valid JSON: %s" % (kind, exc)) from exc
    if not isinstance(doc, dict):
        raise DocumentError("%s document must be a JSON object" % kind)
    found = doc.get("schema_version")
    if found != SCHEMA_VERSION:
        raise SchemaVersionError(SCHEMA_VERSION, found)
    return doc


def _checked(build, kind):
    try:
        return build()
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, SchemaVersionError):
            raise
        raise DocumentError("invalid %s entry: %s" % (kind, exc)) from exc


# events

def event_to_dict(e: ServiceEvent) -> dict:
    return {
        "service_id": e.service_id,
        "attributes": dict(e.attribute_values),
        "start": e.start.isoformat(),
        "end": e.end.isoformat(),
        "location": e.location,
        "user_id": e.user_id,
        "flags": list(e.flags),
    }


def event_from_dict(d: dict) -> ServiceEvent:
    return ServiceEvent(
        d["service_id"], d.get("attributes", {}),
        TimeInterval(datetime.fromisoformat(d["start"]), datetime.fromisoformat(d["end"])),
        d["location"], d["user_id"], tuple(d.get("flags", ())))


def save_events(events: Iterable[ServiceEvent]) -> str:
    return _dump({"schema_version": SCHEMA_VERSION,
                  "events": [event_to_dict(e) for e in events]})


def load_events(text: str) -> list:
    doc = _load(text, "events")
    return [_checked(lambda d=d: event_from_dict(d), "event") for d in doc.get("events", [])]


# habits

def fsa_to_dict(f: FuzzyServiceAttribute) -> dict:
    return {"fsa_id": f.fsa_id, "name": f.name, "service_id": f.service_id,
            "values": dict(f.values)}


def habit_to_dict(h: ServiceUsageHabit) -> dict:
    return {
        "habit_id": h.habit_id,
        "user_id": h.user_id,
        "location": h.location,
        "window_start": h.window_start,
        "start_tolerance": h.start_tolerance,
        "window_end": h.window_end,
        "end_tolerance": h.end_tolerance,
        "support": h.support,
        "fsas": [fsa_to_dict(f) for f in h.fsas],
    }


def habit_from_dict(d: dict) -> ServiceUsageHabit:
    fsas = tuple(FuzzyServiceAttribute(f["fsa_id"], f["name"], f["service_id"],
                                       {k: float(v) for k, v in f["values"].items()})
                 for f in d["fsas"])
    return ServiceUsageHabit(
        habit_id=d["habit_id"], user_id=d["user_id"], fsas=fsas,
        window_start=float(d["window_start"]), start_tolerance=float(d["start_tolerance"]),
        window_end=float(d["window_end"]), end_tolerance=float(d["end_tolerance"]),
        location=d["location"], support=int(d["support"]))


def save_habits(habits: Iterable[ServiceUsageHabit]) -> str:
    return _dump({"schema_version": SCHEMA_VERSION,
                  "habits": [habit_to_dict(h) for h in habits]})


def load_habits(text: str, min_support: Optional[int] = None) -> list:
    doc = _load(text, "habit")
    habits = [_checked(lambda d=d: habit_from_dict(d), "habit") for d in doc.get("habits", [])]
    if min_support is not None:
        low = [h.habit_id for h in habits if h.support < min_support]
        if low:
            raise DocumentError("habits below minimum support %d: %s" % (min_support, low))
    return habits


# reports

def report_to_dict(r: ConflictReport) -> dict:
    g = r.group
    d = {
        "location": g.location,
        "service_id": g.service_id,
        "attribute": g.attribute,
        "users": list(g.users),
        "span": [g.span.start, g.span.end],
        "symbols": [[s.habit.habit_id, "+" if s.positive else "-", s.time] for s in g.symbols],
        "habits": [habit_to_dict(h) for h in g.habits],
        "proximity": r.proximity,
        "class": r.conflict_class.value,
        "entropy": r.entropy,
        "max_entropy": r.max_entropy,
        "gain": r.gain,
        "table": None,
    }
    if r.table is not None:
        d["table"] = {"users": list(r.table.users), "values": list(r.table.value_universe),
                      "rows": [list(row) for row in r.table.rows]}
    return d


def report_from_dict(d: dict) -> ConflictReport:
    habits = [habit_from_dict(h) for h in d["habits"]]
    group = make_group(habits, d["service_id"], d["attribute"])
    table = None
    if d.get("table"):
        t = d["table"]
        table = ConsistencyTable(tuple(t["users"]), tuple(t["values"]),
                                 tuple(tuple(r) for r in t["rows"]))
    return ConflictReport(group, float(d["proximity"]), ConflictClass(d["class"]),
                          entropy=d.get("entropy"), max_entropy=d.get("max_entropy"),
                          gain=d.get("gain"), table=table)


def save_reports(reports: Iterable[ConflictReport], mu: Optional[float] = None) -> str:
    return _dump({"schema_version": SCHEMA_VERSION, "mu": mu,
                  "reports": [report_to_dict(r) for r in reports]})


def load_reports(text: str) -> list:
    doc = _load(text, "report")
    return [_checked(lambda d=d: report_from_dict(d), "report") for d in doc.get("reports", [])]


REPORT_COLUMNS = ("location", "service_id", "attribute", "users", "span_start", "span_end",
                  "proximity", "class", "entropy", "max_entropy", "gain", "n_values")


def _cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return "%.6f" % x
    return str(x)


def reports_tsv(reports: Iterable[ConflictReport]) -> str:
    lines = ["\t".join(REPORT_COLUMNS)]
    for r in reports:
        g = r.group
        lines.append("\t".join(_cell(x) for x in (
            g.location, g.service_id, g.attribute, ",".join(g.users), g.span.start, g.span.end,
            r.proximity, r.conflict_class.value, r.entropy, r.max_entropy, r.gain, r.n_values)))
    return "\n".join(lines) + "\n"


# ground truth

@dataclass(frozen=True)
class TruthEntry:
    location: str
    service_id: str
    attribute: str
    users: frozenset
    conflict_class: ConflictClass
    gain: Optional[float] = None

    @property
    def key(self) -> tuple:
        return (self.location, self.service_id, self.attribute, frozenset(self.users))


def truth_to_dict(t: TruthEntry) -> dict:
    return {"location": t.location, "service_id": t.service_id, "attribute": t.attribute,
            "users": sorted(t.users), "class": t.conflict_class.value, "gain": t.gain}


def save_truth(entries: Iterable[TruthEntry]) -> str:
    return _dump({"schema_version": SCHEMA_VERSION,
                  "conflicts": [truth_to_dict(t) for t in entries]})


def load_truth(text: str) -> list:
    doc = _load(text, "truth")
    out = []
    for d in doc.get("conflicts", []):
        out.append(_checked(lambda d=d: TruthEntry(
            d["location"], d["service_id"], d["attribute"], frozenset(d["users"]),
            ConflictClass(d["class"]), d.get("gain")), "truth"))
    return out
