import json
from datetime import datetime, timedelta

import pytest
from hypothesis import given, settings, strategies as st

from conflict_lens import storage
from conflict_lens.engine import ConflictClass, detect, overlap_groups
from conflict_lens.errors import DocumentError, SchemaVersionError
from conflict_lens.logs import SensorInfo, format_log, parse_log
from conflict_lens.pipeline import run_pipeline
from conflict_lens.scenarios import definite_profile, probable_profile, planted_profile
from conflict_lens.synthetic import (HabitTemplate, PlantedConflict, SyntheticProfile,
                                     generate_synthetic, load_profile, profile_to_dict)
from conftest import at, make_event

SENSORS = {"TV": SensorInfo("tv", "living_room", "channel")}


def test_parse_on_off_pair():
    text = "2011-06-15 08:00:00 TV ON\n2011-06-15 09:00:00 TV OFF\n"
    (e,) = parse_log(text, SENSORS).events
    assert (e.start, e.end) == (datetime(2011, 6, 15, 8), datetime(2011, 6, 15, 9))
    assert e.service_id == "tv" and e.location == "living_room" and e.user_id == "R1"
    assert e.attribute_values == {}


def test_parse_empty_and_comments():
    assert parse_log("").events == []
    assert parse_log("# nothing here\n\n").events == []


def test_parse_splits_at_midnight():
    text = "2011-06-15 23:50:00 TV ON Fox R2\n2011-06-16 00:20:00 TV OFF - R2\n"
    evs = parse_log(text, SENSORS).events
    assert [(e.start, e.end) for e in evs] == [
        (datetime(2011, 6, 15, 23, 50), datetime(2011, 6, 16)),
        (datetime(2011, 6, 16), datetime(2011, 6, 16, 0, 20))]
    assert all(e.user_id == "R2" and e.attribute_values == {"channel": "Fox"} for e in evs)
    assert all("split" in e.flags for e in evs)


def test_parse_issue_collection():
    text = "\n".join([
        "2011-06-15 07:00:00 TV OFF",             # OFF without ON
        "garbage line",                           # malformed
        "2011-06-15 08:00:00 TV ON Fox",
        "2011-06-15 08:30:00 TV ON MTV",          # duplicate ON -> restart
        "2011-06-15 09:00:00 TV OFF",
        "2011-06-15 10:00:00 Lamp ON",            # never closed
    ])
    parsed = parse_log(text, SENSORS, max_duration=timedelta(hours=2))
    kinds = sorted(i.kind for i in parsed.issues)
    assert kinds == ["duplicate-on", "malformed", "off-without-on", "unclosed"]
    tv = [e for e in parsed.events if e.service_id == "tv"]
    assert [(e.start.hour, e.start.minute, e.attribute_values["channel"]) for e in tv] == [
        (8, 0, "Fox"), (8, 30, "MTV")]
    assert "restarted" in tv[0].flags
    (lamp,) = [e for e in parsed.events if e.service_id == "Lamp"]
    assert lamp.end - lamp.start == timedelta(hours=2) and "unclosed" in lamp.flags


def test_parse_value_change_and_caps():
    text = "\n".join([
        "2011-06-15 20:00:00 TV ON Fox",
        "2011-06-15 20:30:00 TV MTV",
        "2011-06-15 21:00:00 TV OFF",
        "2011-06-16 01:00:00 TV ON 35 R3",
        "2011-06-16 09:00:00 TV OFF - R3",
    ])
    evs = parse_log(text, SENSORS).events
    assert [e.attribute_values["channel"] for e in evs] == ["Fox", "MTV", 35]
    assert evs[-1].end - evs[-1].start == timedelta(hours=4) and "capped" in evs[-1].flags


log_events = st.lists(st.tuples(st.integers(0, 3), st.integers(0, 1400), st.integers(1, 240),
                                st.sampled_from(["R1", "R2"]), st.sampled_from(["Fox", "MTV", 7, 2.5])),
                      max_size=15)


@settings(max_examples=100, deadline=None)
@given(log_events)
def test_log_round_trip(specs):
    evs = []
    taken = []
    for d, s, dur, u, v in specs:
        start = at(d, "00:00") + timedelta(minutes=s)
        end = min(start + timedelta(minutes=dur), at(d + 1, "00:00"))
        # one open session per user on a sensor at a time
        if any(u == tu and start <= te and ts <= end for tu, ts, te in taken):
            continue
        taken.append((u, start, end))
        evs.append(make_event(start, end, user=u, channel=v))
    text = format_log(evs, SENSORS)
    back = parse_log(text, SENSORS).events
    key = lambda e: (e.start, e.user_id)
    assert sorted(back, key=key) == sorted(evs, key=key)


# persistence

def mined_habits():
    events, _ = generate_synthetic(probable_profile())
    return run_pipeline(events).habits


def test_habit_db_round_trip():
    habits = mined_habits()
    text = storage.save_habits(habits)
    assert storage.load_habits(text) == habits
    assert storage.save_habits(storage.load_habits(text)) == text


def test_empty_habit_db():
    text = storage.save_habits([])
    assert json.loads(text) == {"schema_version": "1", "habits": []}
    assert storage.load_habits(text) == []


def test_habit_db_rejects_bad_scores_and_versions():
    doc = json.loads(storage.save_habits(mined_habits()))
    doc["habits"][0]["fsas"][0]["values"] = {"Fox": 0.5, "MTV": 0.48}
    with pytest.raises(DocumentError, match="sum"):
        storage.load_habits(json.dumps(doc))
    doc["schema_version"] = "0"
    with pytest.raises(SchemaVersionError, match="expected '1', found '0'"):
        storage.load_habits(json.dumps(doc))
    with pytest.raises(DocumentError):
        storage.load_habits("not json")


def test_reports_and_truth_round_trip():
    events, truth = generate_synthetic(planted_profile())
    reports = run_pipeline(events, mu=None).reports
    back = storage.load_reports(storage.save_reports(reports, 0.0))
    assert [(r.key, r.conflict_class, r.gain, r.proximity) for r in back] == \
        [(r.key, r.conflict_class, r.gain, r.proximity) for r in reports]
    assert back[0].group == reports[0].group
    assert storage.load_truth(storage.save_truth(truth)) == truth
    tsv = storage.reports_tsv(reports).splitlines()
    assert tsv[0].split("\t")[0] == "location" and len(tsv) == len(reports) + 1


def test_events_round_trip():
    events, _ = generate_synthetic(definite_profile(days=3))
    assert storage.load_events(storage.save_events(events)) == events


# synthetic generation

def test_generation_is_reproducible():
    p = planted_profile()
    a, ta = generate_synthetic(p)
    b, tb = generate_synthetic(planted_profile())
    assert storage.save_events(a) == storage.save_events(b) and ta == tb
    noisy = SyntheticProfile(p.residents, p.templates, p.planted, jitter_minutes=5,
                             skip_probability=0.2, seed=4)
    assert storage.save_events(generate_synthetic(noisy)[0]) == storage.save_events(generate_synthetic(noisy)[0])
    other = SyntheticProfile(p.residents, p.templates, p.planted, jitter_minutes=5,
                             skip_probability=0.2, seed=5)
    assert storage.save_events(generate_synthetic(other)[0]) != storage.save_events(generate_synthetic(noisy)[0])


def test_definite_ground_truth():
    events, truth = generate_synthetic(definite_profile())
    (t,) = truth
    assert t.conflict_class is ConflictClass.STRONG and t.users == {"R1", "R2", "R3"}
    assert len(events) == 4 * 20


def test_single_resident_has_no_planted_conflicts():
    p = definite_profile().restricted_to(["R1"])
    events, truth = generate_synthetic(p)
    assert truth == []
    assert detect(overlap_groups(run_pipeline(events).habits)) == []


def test_probable_truth_gain():
    _, (t,) = generate_synthetic(probable_profile())
    assert t.gain == pytest.approx(0.18512076608898378, abs=1e-12)


def test_generation_checks_intended_class():
    p = definite_profile()
    wrong = [PlantedConflict(c.location, c.service_id, c.attribute, c.residents, ConflictClass.WEAK)
             for c in p.planted]
    with pytest.raises(ValueError, match="Strong by its templates"):
        generate_synthetic(SyntheticProfile(p.residents, p.templates, wrong))


def test_template_window_validation():
    with pytest.raises(ValueError, match="outside"):
        HabitTemplate("R1", "tv", "x", 1400, 1500, {"channel": {"Fox": 1.0}})
    with pytest.raises(ValueError):
        HabitTemplate("R1", "tv", "x", 100, 50, {"channel": {"Fox": 1.0}})


def test_profile_document_round_trip():
    p = planted_profile()
    q = load_profile(json.dumps(profile_to_dict(p)))
    assert storage.save_events(generate_synthetic(q)[0]) == storage.save_events(generate_synthetic(p)[0])
