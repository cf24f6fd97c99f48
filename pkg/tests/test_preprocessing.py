from datetime import timedelta

import pytest
from hypothesis import given, settings, strategies as st

from conflict_lens.errors import InfeasibleBinCount, UnsortedEventsError
from conflict_lens.preprocessing import (BinScheme, apply_bins, fit_bins, fit_home_bins,
                                         optimal_partition, scheme_cost, stabilize)
from conftest import at, make_event
from oracles import best_contiguous_split


def test_fit_bins_scenario_two_temperatures():
    scheme = fit_bins([20, 21, 22, 25, 26, 27], 2, attribute="temperature")
    assert scheme.edges == pytest.approx((23.5,))
    assert scheme.labels == ("20-22", "25-27")
    assert {scheme.label(v) for v in (20, 21, 22)} == {"20-22"}
    assert {scheme.label(v) for v in (25, 26, 27)} == {"25-27"}


def test_fit_bins_small_examples():
    scheme = fit_bins([5, 5, 5], 1)
    assert scheme.edges == () and scheme.labels == ("5",)
    assert optimal_partition([5, 5, 5], 1)[2] == 0.0

    scheme = fit_bins([1, 2, 10, 11], 2)
    assert scheme.edges == (6.0,)
    assert scheme_cost(scheme, [1, 2, 10, 11]) == pytest.approx(best_contiguous_split([1, 2, 10, 11], 2))


def test_fit_bins_rejects_infeasible_k():
    with pytest.raises(InfeasibleBinCount):
        fit_bins([1, 1, 2], 3)
    with pytest.raises(ValueError):
        fit_bins([], 1)


def test_bin_scheme_invariants():
    with pytest.raises(ValueError):
        BinScheme("x", (2.0, 1.0), ("a", "b", "c"))
    with pytest.raises(ValueError):
        BinScheme("x", (1.0,), ("a",))
    s = BinScheme("x", (1.0, 2.0), ("lo", "mid", "hi"))
    assert [s.label(v) for v in (-100, 1.0, 1.5, 2.0, 99)] == ["lo", "mid", "mid", "hi", "hi"]


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 40), min_size=1, max_size=12), st.integers(1, 4))
def test_dp_matches_exhaustive_search(values, k):
    k = min(k, len(set(values)))
    _, _, cost = optimal_partition(values, k)
    assert cost == pytest.approx(best_contiguous_split(values, k), abs=1e-9)
    assert scheme_cost(fit_bins(values, k), values) == pytest.approx(cost, abs=1e-9)


def test_home_bins_shared_across_residents():
    evs = [make_event(at(d, "20:00"), at(d, "21:00"), user=u, service="ac", temperature=t)
           for d, (u, t) in enumerate([("R1", 20), ("R1", 22), ("R2", 25), ("R2", 27)])]
    schemes = fit_home_bins(evs, k=2)
    binned = apply_bins(evs, schemes)
    labels = [e.attribute_values["temperature"] for e in binned]
    assert labels == ["20-22", "20-22", "25-27", "25-27"]


def test_stabilize_collapses_channel_surfing():
    t0 = at(0, "20:00")
    evs = [make_event(t0 + timedelta(seconds=s), t0 + timedelta(seconds=e), channel=c)
           for s, e, c in [(0, 10, "A"), (10, 25, "B"), (25, 3600, "Fox")]]
    out = stabilize(evs, 60)
    assert len(out) == 1
    assert out[0].attribute_values == {"channel": "Fox"}
    assert out[0].start == t0 and out[0].end == t0 + timedelta(seconds=3600)


def test_stabilize_trivial_cases():
    single = [make_event(at(0, "20:00"), at(0, "21:00"), channel="Fox")]
    assert stabilize(single, 60) == single
    apart = [make_event(at(0, "20:00"), at(0, "20:01"), channel="A"),
             make_event(at(0, "20:02"), at(0, "21:00"), channel="B")]
    assert stabilize(apart, 60) == apart


def test_stabilize_validates_input():
    evs = [make_event(at(0, "21:00"), at(0, "22:00")), make_event(at(0, "20:00"), at(0, "21:00"))]
    with pytest.raises(UnsortedEventsError):
        stabilize(evs, 60)
    with pytest.raises(ValueError):
        stabilize([], 0)


event_specs = st.lists(
    st.tuples(st.integers(0, 600), st.integers(1, 120), st.sampled_from(["R1", "R2"]),
              st.sampled_from(["tv", "radio"]), st.sampled_from(["a", "b", "c"])),
    max_size=25)


def _events(specs):
    t0 = at(0, "08:00")
    evs = [make_event(t0 + timedelta(seconds=s), t0 + timedelta(seconds=s + d),
                      user=u, service=svc, value=v) for s, d, u, svc, v in specs]
    return sorted(evs, key=lambda e: e.start)


@settings(max_examples=150, deadline=None)
@given(event_specs, st.integers(1, 90))
def test_stabilize_idempotent_and_stream_local(specs, window):
    evs = _events(specs)
    once = stabilize(evs, window)
    assert stabilize(once, window) == once
    assert len(once) <= len(evs)
    for key in {(e.service_id, e.user_id, e.location) for e in evs}:
        own = [e for e in evs if (e.service_id, e.user_id, e.location) == key]
        sub = stabilize(own, window)
        assert sub == [e for e in once if (e.service_id, e.user_id, e.location) == key]
