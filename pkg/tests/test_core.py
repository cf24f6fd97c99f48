from datetime import datetime

import pytest
from hypothesis import given, strategies as st

from conflict_lens.core import (AllenRelation, ServiceCatalog, ServiceDescriptor,
                                TimeInterval, allen_relation, split_at_midnight,
                                temporal_intersection)
from conftest import make_event

R = AllenRelation


def hm(text):
    h, m = text.split(":")
    return int(h) * 60 + int(m)


@pytest.mark.parametrize("a, b, expected", [
    ((hm("8:10"), hm("9:10")), (hm("8:00"), hm("9:00")), R.OVERLAPPED_BY),
    ((1, 2), (1, 2), R.EQUALS),
    ((1, 2), (2, 3), R.MEETS),
    ((1, 2), (3, 4), R.BEFORE),
    ((1, 3), (1, 4), R.STARTS),
    ((2, 3), (1, 4), R.DURING),
    ((2, 4), (1, 4), R.FINISHES),
    ((1, 4), (2, 3), R.CONTAINS),
])
def test_allen_examples(a, b, expected):
    assert allen_relation(TimeInterval(*a), TimeInterval(*b)) is expected


def test_intersection_examples():
    got = temporal_intersection(TimeInterval(hm("20:00"), hm("21:00")),
                                TimeInterval(hm("20:45"), hm("21:45")))
    assert got == TimeInterval(hm("20:45"), hm("21:00")) and got.duration == 15
    got = temporal_intersection(TimeInterval(hm("18:00"), hm("19:00")),
                                TimeInterval(hm("18:10"), hm("19:10")))
    assert got.duration == 50
    assert temporal_intersection(TimeInterval(1, 2), TimeInterval(3, 4)) is None
    assert temporal_intersection(TimeInterval(1, 2), TimeInterval(2, 3)) is None


@pytest.mark.parametrize("start, end", [(2, 2), (3, 1)])
def test_invalid_interval_rejected(start, end):
    with pytest.raises(ValueError):
        TimeInterval(start, end)


intervals = st.tuples(st.integers(0, 30), st.integers(1, 10)).map(lambda t: TimeInterval(t[0], t[0] + t[1]))


@given(intervals, intervals)
def test_allen_inverse_and_intersection_consistency(a, b):
    rel = allen_relation(a, b)
    assert allen_relation(b, a) is rel.inverse
    holding = [r for r in AllenRelation if _holds(r, a, b)]
    assert holding == [rel]
    i1, i2 = temporal_intersection(a, b), temporal_intersection(b, a)
    assert i1 == i2
    assert (i1 is not None) == rel.intersects
    if i1 is not None:
        assert i1.duration <= min(a.duration, b.duration)


def _holds(r, a, b):
    """Textbook endpoint definitions, one per relation."""
    s1, e1, s2, e2 = a.start, a.end, b.start, b.end
    return {
        R.BEFORE: e1 < s2, R.AFTER: e2 < s1, R.MEETS: e1 == s2, R.MET_BY: e2 == s1,
        R.OVERLAPS: s1 < s2 < e1 < e2, R.OVERLAPPED_BY: s2 < s1 < e2 < e1,
        R.STARTS: s1 == s2 and e1 < e2, R.STARTED_BY: s1 == s2 and e2 < e1,
        R.DURING: s2 < s1 and e1 < e2, R.CONTAINS: s1 < s2 and e2 < e1,
        R.FINISHES: e1 == e2 and s2 < s1, R.FINISHED_BY: e1 == e2 and s1 < s2,
        R.EQUALS: s1 == s2 and e1 == e2,
    }[r]


def test_split_at_midnight():
    iv = TimeInterval(datetime(2011, 6, 15, 23, 50), datetime(2011, 6, 16, 0, 20))
    assert split_at_midnight(iv) == [
        TimeInterval(datetime(2011, 6, 15, 23, 50), datetime(2011, 6, 16)),
        TimeInterval(datetime(2011, 6, 16), datetime(2011, 6, 16, 0, 20)),
    ]
    same_day = TimeInterval(datetime(2011, 6, 15, 8), datetime(2011, 6, 15, 9))
    assert split_at_midnight(same_day) == [same_day]


def test_catalog_validates_events():
    tv = ServiceDescriptor("5", "TV", {"channel"}, {"volume", "brightness"})
    cat = ServiceCatalog([tv])
    ok = make_event(datetime(2011, 6, 15, 8), datetime(2011, 6, 15, 9), service="5", channel="Fox")
    cat.validate_event(ok)
    bad = make_event(datetime(2011, 6, 15, 8), datetime(2011, 6, 15, 9), service="5", speed=3)
    with pytest.raises(ValueError, match="speed"):
        cat.validate_event(bad)
    with pytest.raises(ValueError):
        cat.validate_event(make_event(datetime(2011, 6, 15, 8), datetime(2011, 6, 15, 9), service="6"))
    with pytest.raises(ValueError):
        cat.add(tv)
    with pytest.raises(ValueError):
        ServiceDescriptor("7", "Fan", [], {"speed"})
    with pytest.raises(ValueError):
        ServiceDescriptor("7", "Fan", ["spin", "spin"], {"speed"})
