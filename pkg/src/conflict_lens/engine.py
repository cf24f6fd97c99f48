"""Overlap grouping, temporal proximity, entropy/gain scoring and conflict classes."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .core import TimeInterval, format_minute
from .errors import InvalidDistribution
from .habits import ServiceUsageHabit

PROB_TOLERANCE = 1e-9
GAIN_EPSILON = 1e-9


class ConflictClass(str, enum.Enum):
    STRONG = "Strong"
    TAU = "Tau"
    WEAK = "Weak"
    NONE = "None"
    PRUNED = "Pruned"

    @property
    def is_conflict(self) -> bool:
        return self in (ConflictClass.STRONG, ConflictClass.TAU, ConflictClass.WEAK)


# strongest first; used for monotonicity checks and table layout
CLASS_ORDER = (ConflictClass.STRONG, ConflictClass.TAU, ConflictClass.WEAK, ConflictClass.NONE)


@dataclass(frozen=True)
class HabitSymbol:
    habit: ServiceUsageHabit
    positive: bool
    time: float

    def __str__(self):
        return "%s%s@%s" % (self.habit.habit_id, "+" if self.positive else "-",
                            format_minute(self.time))


@dataclass(frozen=True)
class OverlapGroup:
    location: str
    service_id: str
    attribute: str
    habits: tuple
    symbols: tuple
    span: TimeInterval

    @property
    def users(self) -> tuple:
        return tuple(sorted({h.user_id for h in self.habits}))

    @property
    def key(self) -> tuple:
        return (self.location, self.service_id, self.attribute, frozenset(self.users))


def _symbols_for(habits) -> tuple:
    syms = []
    for h in habits:
        syms.append(HabitSymbol(h, True, h.window_start))
        syms.append(HabitSymbol(h, False, h.window_end))
    # ends sort before starts at equal times: touching windows do not co-occur
    syms.sort(key=lambda s: (s.time, s.positive, s.habit.habit_id))
    return tuple(syms)


def make_group(habits: Sequence[ServiceUsageHabit], service_id: str, attribute: str) -> OverlapGroup:
    habits = tuple(sorted(habits, key=lambda h: (h.window_start, h.habit_id)))
    if len({h.location for h in habits}) != 1:
        raise ValueError("overlap group habits must share one location")
    syms = _symbols_for(habits)
    return OverlapGroup(habits[0].location, service_id, attribute, habits, syms,
                        TimeInterval(syms[0].time, syms[-1].time))


def cluster_by_location(habits: Sequence[ServiceUsageHabit]) -> dict:
    clusters: dict[str, list] = {}
    for h in habits:
        clusters.setdefault(h.location, []).append(h)
    return clusters


def find_overlap_groups(cluster: Sequence[ServiceUsageHabit]) -> list:
    """Sweep each attribute's symbol sequence and emit maximal co-active runs.

    A run lasts while at least two habits owned by at least two distinct users
    are simultaneously active over a positive-length stretch.
    """
    by_attr: dict[tuple, list] = {}
    for h in cluster:
        for f in h.fsas:
            by_attr.setdefault(f.key, []).append(h)

    groups = []
    for (sid, name), habits in sorted(by_attr.items()):
        syms = _symbols_for(habits)
        active: dict[str, ServiceUsageHabit] = {}
        run: dict[str, ServiceUsageHabit] = {}
        i = 0
        while i < len(syms):
            t = syms[i].time
            while i < len(syms) and syms[i].time == t:
                s = syms[i]
                if s.positive:
                    active[s.habit.habit_id] = s.habit
                else:
                    active.pop(s.habit.habit_id, None)
                i += 1
            if len({h.user_id for h in active.values()}) >= 2:
                run.update(active)
            elif run:
                groups.append(make_group(run.values(), sid, name))
                run = {}
        if run:
            groups.append(make_group(run.values(), sid, name))
    return groups


def overlap_groups(habits: Sequence[ServiceUsageHabit]) -> list:
    """Location clustering followed by per-location overlap selection."""
    groups = []
    for loc, cluster in sorted(cluster_by_location(habits).items()):
        groups.extend(find_overlap_groups(cluster))
    groups.sort(key=_group_order)
    return groups


def _group_order(g: OverlapGroup):
    return (g.location, g.service_id, g.attribute, g.span.start, g.span.end, g.users)


def temporal_proximity(group: OverlapGroup) -> float:
    """Mean fraction of the group span covered by each habit window.

    The active count is piecewise constant between symbol times, so the
    integral is an exact sum over consecutive symbol pairs.
    """
    span = group.span.end - group.span.start
    if not span > 0:
        raise ValueError("overlap group span has zero duration")
    area = 0.0
    active = 0
    for prev, cur in zip(group.symbols, group.symbols[1:]):
        active += 1 if prev.positive else -1
        area += active * (cur.time - prev.time)
    return area / (span * len(group.habits))


def _check_distribution(p: Sequence[float]) -> None:
    if any(x < 0 or math.isnan(x) for x in p):
        raise InvalidDistribution("probabilities must be non-negative")
    if abs(sum(p) - 1.0) > PROB_TOLERANCE:
        raise InvalidDistribution("probabilities sum to %r, not 1" % sum(p))


def entropy(distribution: Sequence[float]) -> float:
    """Shannon entropy in bits; zero-probability terms contribute nothing."""
    p = list(distribution)
    _check_distribution(p)
    return -sum(x * math.log2(x) for x in p if x > 0)


def max_entropy(n: int) -> float:
    if n < 1:
        raise ValueError("value count must be at least 1")
    return math.log2(n)


@dataclass(frozen=True)
class ConsistencyTable:
    """Per-user value distributions over a shared value universe.

    ``weights`` are the row masses (e.g. 100 per resident in a count table);
    they default to equal mass for every row.
    """

    users: tuple
    value_universe: tuple
    rows: tuple
    weights: Optional[tuple] = None

    def __post_init__(self):
        rows = tuple(tuple(float(x) for x in r) for r in self.rows)
        if len(rows) < 2 or len(rows) != len(self.users):
            raise InvalidDistribution("a consistency table needs one row per user and >= 2 users")
        if not self.value_universe:
            raise InvalidDistribution("empty value universe")
        for r in rows:
            if len(r) != len(self.value_universe):
                raise InvalidDistribution("row length differs from value universe size")
            _check_distribution(r)
        w = self.weights if self.weights is not None else (1.0,) * len(rows)
        if len(w) != len(rows) or any(not x > 0 for x in w):
            raise InvalidDistribution("row weights must be positive, one per row")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "users", tuple(self.users))
        object.__setattr__(self, "value_universe", tuple(self.value_universe))
        object.__setattr__(self, "weights", tuple(float(x) for x in w))

    @classmethod
    def from_counts(cls, users, values, counts) -> "ConsistencyTable":
        rows, weights = [], []
        for r in counts:
            total = float(sum(r))
            rows.append([c / total for c in r])
            weights.append(total)
        return cls(tuple(users), tuple(values), tuple(map(tuple, rows)), tuple(weights))

    @classmethod
    def from_distributions(cls, dists: Mapping[str, Mapping[str, float]]) -> "ConsistencyTable":
        """Build from ``{user: {value: score}}``; the universe is every value seen."""
        users = tuple(sorted(dists))
        universe = tuple(sorted({v for d in dists.values() for v in d}))
        rows = tuple(tuple(dists[u].get(v, 0.0) for v in universe) for u in users)
        return cls(users, universe, rows)

    @property
    def n(self) -> int:
        return len(self.value_universe)

    def user_probabilities(self) -> list:
        total = sum(self.weights)
        return [w / total for w in self.weights]

    def mixture(self) -> list:
        pu = self.user_probabilities()
        return [sum(p * r[j] for p, r in zip(pu, self.rows)) for j in range(self.n)]


def conditional_entropy(table: ConsistencyTable) -> float:
    return sum(p * entropy(r) for p, r in zip(table.user_probabilities(), table.rows))


def mixture_entropy(table: ConsistencyTable) -> float:
    mix = table.mixture()
    total = sum(mix)
    return entropy([x / total for x in mix])


def gain(table: ConsistencyTable) -> float:
    """Information gain of the value distribution given the user."""
    return max(mixture_entropy(table) - conditional_entropy(table), 0.0)


def classify(gain_bits: float, e_max: float, n: int) -> ConflictClass:
    """Map a gain score onto the Strong/Tau/Weak bands; shared bounds go to
    the stronger class."""
    if n < 1:
        raise ValueError("value count must be at least 1")
    if gain_bits > e_max + GAIN_EPSILON:
        raise ValueError("gain %r exceeds maximum entropy %r" % (gain_bits, e_max))
    if gain_bits < -GAIN_EPSILON:
        raise ValueError("gain must be non-negative, got %r" % gain_bits)
    if gain_bits <= GAIN_EPSILON:
        return ConflictClass.NONE
    if gain_bits >= e_max / 2:
        return ConflictClass.STRONG
    if gain_bits >= e_max / 2 ** n:
        return ConflictClass.TAU
    return ConflictClass.WEAK


@dataclass(frozen=True)
class ConflictReport:
    group: OverlapGroup
    proximity: float
    conflict_class: ConflictClass
    entropy: Optional[float] = None
    max_entropy: Optional[float] = None
    gain: Optional[float] = None
    table: Optional[ConsistencyTable] = None

    @property
    def users(self) -> tuple:
        return self.group.users

    @property
    def key(self) -> tuple:
        return self.group.key

    @property
    def n_values(self) -> Optional[int]:
        return self.table.n if self.table is not None else None


def group_table(group: OverlapGroup) -> ConsistencyTable:
    """One row per participating user.

    A user owning several habits in the group contributes the support-weighted
    average of those habits' distributions.
    """
    per_user: dict[str, dict] = {}
    support: dict[str, int] = {}
    for h in group.habits:
        fsa = h.fsa_for(group.service_id, group.attribute)
        acc = per_user.setdefault(h.user_id, {})
        for v, s in fsa.values.items():
            acc[v] = acc.get(v, 0.0) + s * h.support
        support[h.user_id] = support.get(h.user_id, 0) + h.support
    dists = {u: {v: x / support[u] for v, x in acc.items()} for u, acc in per_user.items()}
    return ConsistencyTable.from_distributions(dists)


def score_group(group: OverlapGroup, proximity: Optional[float] = None) -> ConflictReport:
    if proximity is None:
        proximity = temporal_proximity(group)
    table = group_table(group)
    e = mixture_entropy(table)
    e_max = max_entropy(table.n)
    g = gain(table)
    return ConflictReport(group, proximity, classify(g, e_max, table.n),
                          entropy=e, max_entropy=e_max, gain=g, table=table)


def detect(groups: Sequence[OverlapGroup], mu: float = 0.0) -> list:
    """Prune groups whose proximity falls below ``mu``; score and classify the rest."""
    if not 0.0 <= mu <= 1.0:
        raise ValueError("proximity threshold mu must lie in [0, 1], got %r" % mu)
    reports = []
    for g in sorted(groups, key=_group_order):
        prox = temporal_proximity(g)
        if prox < mu:
            reports.append(ConflictReport(g, prox, ConflictClass.PRUNED))
        else:
            reports.append(score_group(g, prox))
    return reports


def class_counts(reports: Sequence[ConflictReport]) -> dict:
    counts = {c: 0 for c in ConflictClass}
    for r in reports:
        counts[r.conflict_class] += 1
    return counts


def conflicting_fsas(reports: Sequence[ConflictReport]) -> dict:
    """FSA ids involved in each class."""
    out: dict[ConflictClass, list] = {c: [] for c in ConflictClass}
    for r in reports:
        for h in r.group.habits:
            out[r.conflict_class].append(h.fsa_for(r.group.service_id, r.group.attribute).fsa_id)
    return out
