"""Phase-one event conditioning: numeric binning and value stabilization."""

from __future__ import annotations

import bisect
from dataclasses import dataclass, replace
from datetime import timedelta
from typing import Iterable, Sequence

import numpy as np

from .core import ServiceEvent, TimeInterval
from .errors import InfeasibleBinCount, UnsortedEventsError

DEFAULT_BIN_COUNT = 5
DEFAULT_SETTLE_SECONDS = 60


def _fmt(x: float) -> str:
    return "%g" % x


@dataclass(frozen=True)
class BinScheme:
    attribute: str
    edges: tuple
    labels: tuple

    def __post_init__(self):
        edges = tuple(float(e) for e in self.edges)
        if any(b <= a for a, b in zip(edges, edges[1:])):
            raise ValueError("bin edges must be strictly increasing")
        if len(self.labels) != len(edges) + 1:
            raise ValueError("need exactly one label per bin (%d edges, %d labels)"
                             % (len(edges), len(self.labels)))
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "labels", tuple(self.labels))

    def bin_index(self, value: float) -> int:
        # a value sitting on an edge belongs to the upper bin
        return bisect.bisect_right(self.edges, value)

    def label(self, value: float) -> str:
        return self.labels[self.bin_index(value)]


def _segment_cost(csum, csq, cw, i, j):
    """Weighted SSE of distinct values i..j-1 (prefix arrays are 1-offset)."""
    w = cw[j] - cw[i]
    s = csum[j] - csum[i]
    return (csq[j] - csq[i]) - s * s / w


def optimal_partition(values: Sequence[float], k: int):
    """Split the sorted distinct values into ``k`` contiguous groups of minimal SSE.

    Returns ``(distinct_values, group_bounds, cost)`` where ``group_bounds`` is
    a list of ``(lo, hi)`` index pairs into ``distinct_values`` (hi exclusive).
    """
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise ValueError("cannot bin an empty value list")
    distinct, counts = np.unique(arr, return_counts=True)
    m = distinct.size
    if not 1 <= k <= m:
        raise InfeasibleBinCount(
            "bin count %d infeasible for %d distinct values" % (k, m))

    cw = np.concatenate(([0.0], np.cumsum(counts)))
    csum = np.concatenate(([0.0], np.cumsum(counts * distinct)))
    csq = np.concatenate(([0.0], np.cumsum(counts * distinct ** 2)))

    # cost[g][j]: best SSE of the first j distinct values in g groups
    cost = np.full((k + 1, m + 1), np.inf)
    back = np.zeros((k + 1, m + 1), dtype=int)
    cost[0][0] = 0.0
    for g in range(1, k + 1):
        for j in range(g, m - (k - g) + 1):
            i = np.arange(g - 1, j)
            cand = cost[g - 1][i] + _segment_cost(csum, csq, cw, i, j)
            best = int(np.argmin(cand))
            cost[g][j] = cand[best]
            back[g][j] = i[best]

    bounds = []
    j = m
    for g in range(k, 0, -1):
        i = back[g][j]
        bounds.append((i, j))
        j = i
    bounds.reverse()
    return distinct, bounds, max(float(cost[k][m]), 0.0)


def fit_bins(values: Sequence[float], k: int = DEFAULT_BIN_COUNT,
             attribute: str = "value") -> BinScheme:
    distinct, bounds, _ = optimal_partition(values, k)
    edges = [(distinct[hi - 1] + distinct[hi]) / 2.0 for _, hi in bounds[:-1]]
    labels = []
    for lo, hi in bounds:
        a, b = distinct[lo], distinct[hi - 1]
        labels.append(_fmt(a) if a == b else "%s-%s" % (_fmt(a), _fmt(b)))
    return BinScheme(attribute, tuple(edges), tuple(labels))


def partition_cost(groups: Iterable[Sequence[float]]) -> float:
    total = 0.0
    for g in groups:
        a = np.asarray(g, dtype=float)
        total += float(((a - a.mean()) ** 2).sum())
    return total


def scheme_cost(scheme: BinScheme, values: Sequence[float]) -> float:
    """Within-bin SSE of ``values`` under ``scheme``."""
    groups: dict[int, list] = {}
    for v in values:
        groups.setdefault(scheme.bin_index(v), []).append(v)
    return partition_cost(groups.values())


def _stream_key(e: ServiceEvent):
    return (e.service_id, e.user_id, e.location)


def stabilize(events: Sequence[ServiceEvent], settle_window=DEFAULT_SETTLE_SECONDS):
    """Collapse bursts of quick successive changes to their settled value.

    Within each (service, user, location) stream, a run of events whose
    consecutive start times lie within ``settle_window`` becomes one event:
    earliest start, last event's end and attribute values.
    """
    if not isinstance(settle_window, timedelta):
        settle_window = timedelta(seconds=settle_window)
    if settle_window <= timedelta(0):
        raise ValueError("settle_window must be positive")
    for prev, cur in zip(events, events[1:]):
        if cur.start < prev.start:
            raise UnsortedEventsError("events must be sorted by start time")

    runs: dict[tuple, list] = {}
    out: list[list] = []
    for e in events:
        key = _stream_key(e)
        run = runs.get(key)
        if run is not None and e.start - run[-1].start <= settle_window:
            run.append(e)
        else:
            run = [e]
            runs[key] = run
            out.append(run)

    settled = []
    for run in out:
        if len(run) == 1:
            settled.append(run[0])
            continue
        last = run[-1]
        settled.append(replace(last, interval=TimeInterval(run[0].start, last.end),
                               flags=tuple(last.flags) + ("stabilized:%d" % len(run),)))
    settled.sort(key=lambda e: e.start)
    return settled


def is_numeric(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def fit_home_bins(events: Sequence[ServiceEvent], k: int = DEFAULT_BIN_COUNT) -> dict:
    """One shared BinScheme per (service, attribute) holding numeric values."""
    samples: dict[tuple, list] = {}
    for e in events:
        for name, v in e.attribute_values.items():
            if is_numeric(v):
                samples.setdefault((e.service_id, name), []).append(float(v))
    schemes = {}
    for (sid, name), vals in sorted(samples.items()):
        kk = min(k, len(set(vals)))
        schemes[(sid, name)] = fit_bins(vals, kk, attribute=name)
    return schemes


def apply_bins(events: Sequence[ServiceEvent], schemes: dict) -> list:
    out = []
    for e in events:
        attrs = dict(e.attribute_values)
        changed = False
        for name, v in attrs.items():
            scheme = schemes.get((e.service_id, name))
            if scheme is not None and is_numeric(v):
                attrs[name] = scheme.label(float(v))
                changed = True
        out.append(replace(e, attribute_values=attrs) if changed else e)
    return out
