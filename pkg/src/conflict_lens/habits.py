"""Per-resident service usage habits with fuzzy attribute consistency scores."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .core import ServiceEvent, minute_of_day, format_minute
from .errors import InvalidDistribution

SCORE_TOLERANCE = 1e-9
# attribute recorded for events that carry no attribute values (plain ON/OFF logs)
STATUS_ATTRIBUTE = "status"


@dataclass(frozen=True)
class FuzzyServiceAttribute:
    fsa_id: str
    name: str
    service_id: str
    values: Mapping[str, float]

    def __post_init__(self):
        vals = dict(self.values)
        if not vals:
            raise InvalidDistribution("FSA %r has no values" % self.fsa_id)
        if any(not s > 0 for s in vals.values()):
            raise InvalidDistribution("FSA %r has non-positive scores" % self.fsa_id)
        total = sum(vals.values())
        if abs(total - 1.0) > SCORE_TOLERANCE:
            raise InvalidDistribution(
                "FSA %r scores sum to %.12g, not 1" % (self.fsa_id, total))
        object.__setattr__(self, "values", vals)

    @property
    def key(self) -> tuple:
        return (self.service_id, self.name)


@dataclass(frozen=True)
class ServiceUsageHabit:
    habit_id: str
    user_id: str
    fsas: tuple
    window_start: float
    start_tolerance: float
    window_end: float
    end_tolerance: float
    location: str
    support: int

    def __post_init__(self):
        object.__setattr__(self, "fsas", tuple(self.fsas))
        if not self.fsas:
            raise ValueError("habit %r carries no FSA" % self.habit_id)
        if not self.window_start < self.window_end:
            raise ValueError("habit %r window start must precede end" % self.habit_id)
        if self.start_tolerance < 0 or self.end_tolerance < 0:
            raise ValueError("habit %r has negative tolerance" % self.habit_id)
        keys = [f.key for f in self.fsas]
        if len(set(keys)) != len(keys):
            raise ValueError("habit %r has more than one FSA per attribute" % self.habit_id)

    def fsa_for(self, service_id: str, name: str):
        for f in self.fsas:
            if f.key == (service_id, name):
                return f
        return None

    @property
    def services(self) -> tuple:
        return tuple(sorted({f.service_id for f in self.fsas}))

    def describe(self) -> str:
        return "<%s, %s, {%s±%g, %s±%g}, %s>" % (
            self.user_id,
            "; ".join("%s=%s" % (f.name, dict(f.values)) for f in self.fsas),
            format_minute(self.window_start), self.start_tolerance,
            format_minute(self.window_end), self.end_tolerance, self.location)


@dataclass(frozen=True)
class MiningParams:
    gap_minutes: float = 60.0
    min_support: int = 5
    complex_merge_overlap: float = 0.8


def mine_fsa(values: Sequence, name: str, service_id: str, fsa_id: str = "") -> FuzzyServiceAttribute:
    """Relative frequency of each observed value.

    ``values`` may be raw attribute values or ServiceEvents (then ``name`` is
    looked up in each event's attribute map).
    """
    if not values:
        raise ValueError("cannot mine an FSA from zero observations")
    observed = [v.attribute_values[name] if isinstance(v, ServiceEvent) else v
                for v in values]
    counts = Counter(str(v) for v in observed)
    n = len(observed)
    scores = {val: c / n for val, c in sorted(counts.items())}
    return FuzzyServiceAttribute(fsa_id or "%s.%s" % (service_id, name), name, service_id, scores)


def _gap_clusters(items, gap):
    """Group (start_minute, ...) tuples sorted by start: new cluster when the
    next start lies more than ``gap`` after the running cluster mean."""
    clusters = []
    cur, total = [], 0.0
    for it in items:
        if cur and it[0] - total / len(cur) > gap:
            clusters.append(cur)
            cur, total = [], 0.0
        cur.append(it)
        total += it[0]
    if cur:
        clusters.append(cur)
    return clusters


def _habit_from_cluster(cluster, user, service, location, idx):
    starts = [c[0] for c in cluster]
    ends = [c[1] for c in cluster]
    events = [c[2] for c in cluster]
    ws = sum(starts) / len(starts)
    we = sum(ends) / len(ends)
    names = sorted({n for e in events for n in e.attribute_values})
    fsas = []
    hid = "%s/%s/%s/%d" % (user, service, location, idx)
    if names:
        for name in names:
            carrying = [e.attribute_values[name] for e in events if name in e.attribute_values]
            fsas.append(mine_fsa(carrying, name, service, fsa_id="%s/%s" % (hid, name)))
    else:
        fsas.append(mine_fsa(["ON"] * len(events), STATUS_ATTRIBUTE, service,
                             fsa_id="%s/%s" % (hid, STATUS_ATTRIBUTE)))
    return ServiceUsageHabit(
        habit_id=hid, user_id=user, fsas=tuple(fsas),
        window_start=ws, start_tolerance=max(abs(s - ws) for s in starts),
        window_end=we, end_tolerance=max(abs(e - we) for e in ends),
        location=location, support=len(cluster))


def window_overlap_ratio(a: ServiceUsageHabit, b: ServiceUsageHabit) -> float:
    inter = min(a.window_end, b.window_end) - max(a.window_start, b.window_start)
    union = max(a.window_end, b.window_end) - min(a.window_start, b.window_start)
    return max(inter, 0.0) / union


def merge_complex(habits: Sequence[ServiceUsageHabit], threshold: float) -> list:
    """Fuse same-user, same-location habits of different services whose
    windows overlap (intersection over union) by at least ``threshold``."""
    if threshold > 1.0:
        return list(habits)
    merged: list[list] = []
    for h in sorted(habits, key=lambda h: (h.user_id, h.location, h.window_start, h.habit_id)):
        for grp in merged:
            g0 = grp[0]
            if (g0.user_id, g0.location) != (h.user_id, h.location):
                continue
            keys = {f.key for m in grp for f in m.fsas}
            if keys & {f.key for f in h.fsas}:
                continue
            if all(window_overlap_ratio(m, h) >= threshold for m in grp):
                grp.append(h)
                break
        else:
            merged.append([h])

    out = []
    for grp in merged:
        if len(grp) == 1:
            out.append(grp[0])
            continue
        w = sum(m.support for m in grp)
        ws = sum(m.window_start * m.support for m in grp) / w
        we = sum(m.window_end * m.support for m in grp) / w
        out.append(ServiceUsageHabit(
            habit_id="+".join(m.habit_id for m in grp),
            user_id=grp[0].user_id,
            fsas=tuple(f for m in grp for f in m.fsas),
            window_start=ws,
            start_tolerance=max(abs(m.window_start - ws) + m.start_tolerance for m in grp),
            window_end=we,
            end_tolerance=max(abs(m.window_end - we) + m.end_tolerance for m in grp),
            location=grp[0].location,
            support=min(m.support for m in grp)))
    return out


def mine_habits(events: Sequence[ServiceEvent], params: MiningParams = MiningParams()) -> list:
    """Build habits from preprocessed (stabilized, binned, day-split) events."""
    streams: dict[tuple, list] = {}
    for e in events:
        day_start = e.start.replace(hour=0, minute=0, second=0, microsecond=0)
        item = (minute_of_day(e.start, day_start), minute_of_day(e.end, day_start), e)
        streams.setdefault((e.user_id, e.service_id, e.location), []).append(item)

    habits = []
    for (user, service, location), items in sorted(streams.items()):
        items.sort(key=lambda it: (it[0], it[1], it[2].start))
        idx = 0
        for cluster in _gap_clusters(items, params.gap_minutes):
            if len(cluster) < params.min_support:
                continue
            habits.append(_habit_from_cluster(cluster, user, service, location, idx))
            idx += 1
    habits = merge_complex(habits, params.complex_merge_overlap)
    habits.sort(key=lambda h: (h.location, h.user_id, h.window_start, h.habit_id))
    return habits
