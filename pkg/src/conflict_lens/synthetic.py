"""Synthetic multi-resident event streams with planted conflicts.

Each resident follows habit templates that fire once per simulated day with
optional start/end jitter and skip noise. Attribute values are allocated by
quota over the active days (largest remainder, then shuffled), so a noise-free
template reproduces its distribution exactly whenever ``p * days`` is integral.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from datetime import date, datetime, timedelta
from typing import Mapping, Optional, Sequence

from .core import ServiceEvent, TimeInterval
from .engine import ConflictClass, ConsistencyTable, classify, gain, max_entropy
from .logs import coerce_value
from .storage import TruthEntry

MINUTES_PER_DAY = 1440


@dataclass(frozen=True)
class HabitTemplate:
    resident: str
    service_id: str
    location: str
    start: float
    end: float
    distributions: Mapping[str, Mapping]

    def __post_init__(self):
        if not (0 <= self.start < self.end <= MINUTES_PER_DAY):
            raise ValueError("template window %r-%r of %s lies outside 00:00-24:00 or is empty"
                             % (self.start, self.end, self.resident))
        for attr, dist in self.distributions.items():
            if abs(sum(dist.values()) - 1.0) > 1e-9 or any(p < 0 for p in dist.values()):
                raise ValueError("distribution of %s.%s for %s is not a probability vector"
                                 % (self.service_id, attr, self.resident))


@dataclass(frozen=True)
class PlantedConflict:
    location: str
    service_id: str
    attribute: str
    residents: frozenset
    intended: ConflictClass

    @property
    def key(self) -> tuple:
        return (self.location, self.service_id, self.attribute, frozenset(self.residents))


@dataclass
class SyntheticProfile:
    residents: Sequence[str]
    templates: Sequence[HabitTemplate]
    planted: Sequence[PlantedConflict] = ()
    days: int = 20
    jitter_minutes: int = 0
    skip_probability: float = 0.0
    seed: int = 0
    start_date: date = date(2011, 6, 15)

    def restricted_to(self, residents: Sequence[str]) -> "SyntheticProfile":
        """Sub-profile keeping only ``residents`` and the conflicts among them."""
        keep = set(residents)
        return SyntheticProfile(
            residents=[r for r in self.residents if r in keep],
            templates=[t for t in self.templates if t.resident in keep],
            planted=[p for p in self.planted if p.residents <= keep],
            days=self.days, jitter_minutes=self.jitter_minutes,
            skip_probability=self.skip_probability, seed=self.seed,
            start_date=self.start_date)


def template_table(profile: SyntheticProfile, planted: PlantedConflict) -> ConsistencyTable:
    dists = {}
    for t in profile.templates:
        if (t.resident in planted.residents and t.location == planted.location
                and t.service_id == planted.service_id and planted.attribute in t.distributions):
            dists[t.resident] = {str(v): p for v, p in t.distributions[planted.attribute].items()
                                 if p > 0}
    missing = set(planted.residents) - set(dists)
    if missing:
        raise ValueError("planted conflict at %s references residents without a template: %s"
                         % (planted.location, sorted(missing)))
    return ConsistencyTable.from_distributions(dists)


def verify_planted(profile: SyntheticProfile) -> list:
    """Score each planted conflict with the engine and check its intended class."""
    truth = []
    for p in profile.planted:
        table = template_table(profile, p)
        g = gain(table)
        got = classify(g, max_entropy(table.n), table.n)
        if got is not p.intended:
            raise ValueError("planted conflict %s/%s.%s among %s is %s by its templates, not %s"
                             % (p.location, p.service_id, p.attribute, sorted(p.residents),
                                got.value, p.intended.value))
        truth.append(TruthEntry(p.location, p.service_id, p.attribute,
                                frozenset(p.residents), p.intended, g))
    return truth


def _quota(dist: Mapping, n: int, rng: random.Random) -> list:
    items = sorted(dist.items(), key=lambda kv: str(kv[0]))
    raw = [(v, p * n) for v, p in items]
    counts = {v: int(x) for v, x in raw}
    left = n - sum(counts.values())
    by_rem = sorted(raw, key=lambda vx: (-(vx[1] - int(vx[1])), str(vx[0])))
    for v, _ in by_rem[:left]:
        counts[v] += 1
    out = [v for v, _ in items for _ in range(counts[v])]
    rng.shuffle(out)
    return out


def generate_synthetic(profile: SyntheticProfile):
    """Return ``(events, truth)``; identical profiles give identical output."""
    truth = verify_planted(profile)
    rng = random.Random(profile.seed)
    events = []
    order = sorted(profile.templates, key=lambda t: (t.resident, t.location, t.service_id, t.start))
    for t in order:
        active_days = [d for d in range(profile.days)
                       if not (profile.skip_probability and rng.random() < profile.skip_probability)]
        values = {a: _quota(dist, len(active_days), rng) for a, dist in sorted(t.distributions.items())}
        for i, d in enumerate(active_days):
            s, e = t.start, t.end
            if profile.jitter_minutes:
                s += rng.randint(-profile.jitter_minutes, profile.jitter_minutes)
                e += rng.randint(-profile.jitter_minutes, profile.jitter_minutes)
                s = min(max(s, 0), MINUTES_PER_DAY - 1)
                e = min(max(e, s + 1), MINUTES_PER_DAY)
            day = datetime.combine(profile.start_date, datetime.min.time()) + timedelta(days=d)
            attrs = {a: vals[i] for a, vals in values.items()}
            events.append(ServiceEvent(
                t.service_id, attrs,
                TimeInterval(day + timedelta(minutes=s), day + timedelta(minutes=e)),
                t.location, t.resident))
    events.sort(key=lambda ev: (ev.start, ev.end, ev.service_id, ev.user_id, ev.location))
    return events, truth


# profile documents

def profile_to_dict(p: SyntheticProfile) -> dict:
    return {
        "residents": list(p.residents),
        "days": p.days,
        "jitter_minutes": p.jitter_minutes,
        "skip_probability": p.skip_probability,
        "seed": p.seed,
        "start_date": p.start_date.isoformat(),
        "templates": [{
            "resident": t.resident, "service_id": t.service_id, "location": t.location,
            "start": t.start, "end": t.end,
            "distributions": {a: {str(v): pr for v, pr in d.items()}
                              for a, d in t.distributions.items()},
        } for t in p.templates],
        "planted": [{
            "location": c.location, "service_id": c.service_id, "attribute": c.attribute,
            "residents": sorted(c.residents), "class": c.intended.value,
        } for c in p.planted],
    }


def profile_from_dict(d: dict) -> SyntheticProfile:
    from .core import parse_minute

    def minute(x):
        return parse_minute(x) if isinstance(x, str) else float(x)

    templates = [HabitTemplate(
        t["resident"], t["service_id"], t["location"], minute(t["start"]), minute(t["end"]),
        {a: {coerce_value(v): float(pr) for v, pr in dist.items()}
         for a, dist in t["distributions"].items()})
        for t in d["templates"]]
    planted = [PlantedConflict(c["location"], c["service_id"], c["attribute"],
                               frozenset(c["residents"]), ConflictClass(c["class"]))
               for c in d.get("planted", [])]
    residents = d.get("residents") or sorted({t.resident for t in templates})
    return SyntheticProfile(
        residents=residents, templates=templates, planted=planted,
        days=int(d.get("days", 20)), jitter_minutes=int(d.get("jitter_minutes", 0)),
        skip_probability=float(d.get("skip_probability", 0.0)), seed=int(d.get("seed", 0)),
        start_date=date.fromisoformat(d.get("start_date", "2011-06-15")))


def load_profile(text: str) -> SyntheticProfile:
    return profile_from_dict(json.loads(text))
