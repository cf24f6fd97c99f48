"""Built-in synthetic profiles used by the CLI and the evaluation harness."""

from __future__ import annotations

from .core import parse_minute as _m
from .engine import ConflictClass
from .synthetic import HabitTemplate, PlantedConflict, SyntheticProfile

TV = "tv"
CHANNEL = "channel"
LIVING = "living_room"

S, T, W, N = ConflictClass.STRONG, ConflictClass.TAU, ConflictClass.WEAK, ConflictClass.NONE

# per-class channel distributions, cycled through when planting
RECIPES = {
    S: [
        [{"Fox": 1.0}, {"MTV": 1.0}],
        [{"Fox": 1.0}, {"MTV": 1.0}, {"Discovery": 1.0}],
        [{"Fox": 0.9, "MTV": 0.1}, {"Fox": 0.1, "MTV": 0.9}],
    ],
    T: [
        [{"Fox": 0.9, "MTV": 0.1}, {"Fox": 0.3, "MTV": 0.7}],
        [{"Fox": 0.8, "MTV": 0.2}, {"Fox": 0.8, "MTV": 0.2}, {"MTV": 0.2, "Discovery": 0.8}],
        [{"Fox": 0.8, "MTV": 0.2}, {"Fox": 0.2, "MTV": 0.8}],
    ],
    W: [
        [{"Fox": 0.5, "MTV": 0.4, "Discovery": 0.1},
         {"Fox": 0.25, "MTV": 0.45, "Discovery": 0.3},
         {"Fox": 0.3, "MTV": 0.1, "Discovery": 0.6}],
        [{"Fox": 0.6, "MTV": 0.4}, {"Fox": 0.5, "MTV": 0.5}],
    ],
    N: [
        [{"Fox": 1.0}, {"Fox": 1.0}],
        [{"Fox": 0.5, "MTV": 0.5}, {"Fox": 0.5, "MTV": 0.5}, {"Fox": 0.5, "MTV": 0.5}],
    ],
}

# start offsets (minutes) of successive residents' one-hour windows from 18:00;
# two windows offset by d have proximity 60 / (60 + d)
HIGH_PROXIMITY = (0, 10, 5)      # 0.857 for two residents
LOW_PROXIMITY = (0, 45, 20)      # 0.571 for two residents
SWEEP_OFFSETS = {1.0: (0, 0, 0), 0.857: (0, 10, 5), 0.75: (0, 20, 10),
                 0.667: (0, 30, 15), 0.571: (0, 45, 20), 0.52: (0, 55, 25)}


def _plant(templates, planted, room, cls, recipe, offsets, with_decoy=False):
    residents = ["R%d" % (i + 1) for i in range(len(recipe))]
    base = _m("18:00")
    for r, dist, off in zip(residents, recipe, offsets):
        templates.append(HabitTemplate(r, TV, room, base + off, base + off + 60, {CHANNEL: dist}))
    if with_decoy:
        # a fourth resident watching later, never overlapping the others
        templates.append(HabitTemplate("R4", TV, room, _m("21:00"), _m("22:00"),
                                       {CHANNEL: {"MTV": 1.0}}))
    planted.append(PlantedConflict(room, TV, CHANNEL, frozenset(residents), cls))


def planted_profile(counts=None, low_proximity_strong=0, seed=7, days=20) -> SyntheticProfile:
    """One planted overlap group per room, cycling through the class recipes.

    The first ``low_proximity_strong`` Strong groups get loosely overlapping
    windows (proximity ~0.571); every other group is tightly overlapping.
    """
    counts = counts or {S: 8, T: 6, W: 6, N: 4}
    templates, planted = [], []
    room_no = 0
    for cls in (S, T, W, N):
        for i in range(counts.get(cls, 0)):
            room_no += 1
            recipe = RECIPES[cls][i % len(RECIPES[cls])]
            loose = cls is S and i < low_proximity_strong
            _plant(templates, planted, "room%02d" % room_no, cls, recipe,
                   LOW_PROXIMITY if loose else HIGH_PROXIMITY, with_decoy=room_no % 3 == 0)
    return SyntheticProfile(["R1", "R2", "R3", "R4"], templates, planted, days=days, seed=seed)


def pruning_profile(seed=11) -> SyntheticProfile:
    """Half of the Strong groups overlap loosely (proximity < 0.6)."""
    return planted_profile({S: 20, T: 4, W: 4, N: 4}, low_proximity_strong=10, seed=seed)


def sweep_profile(seed=13) -> SyntheticProfile:
    """Every class spread over a ladder of proximity levels."""
    templates, planted = [], []
    room_no = 0
    for cls in (S, T, W, N):
        for j, offsets in enumerate(SWEEP_OFFSETS.values()):
            room_no += 1
            recipe = RECIPES[cls][j % len(RECIPES[cls])]
            _plant(templates, planted, "room%02d" % room_no, cls, recipe, offsets)
    return SyntheticProfile(["R1", "R2", "R3"], templates, planted, days=20, seed=seed)


def definite_profile(days=20) -> SyntheticProfile:
    """Three residents with one-hot, mutually different channels; R4 watches later."""
    t = [
        HabitTemplate("R1", TV, LIVING, _m("8:10"), _m("9:10"), {CHANNEL: {"Fox": 1.0}}),
        HabitTemplate("R2", TV, LIVING, _m("8:00"), _m("9:00"), {CHANNEL: {"MTV": 1.0}}),
        HabitTemplate("R3", TV, LIVING, _m("8:30"), _m("9:20"), {CHANNEL: {"Discovery": 1.0}}),
        HabitTemplate("R4", TV, LIVING, _m("9:40"), _m("10:30"), {CHANNEL: {"MTV": 1.0}}),
    ]
    planted = [PlantedConflict(LIVING, TV, CHANNEL, frozenset({"R1", "R2", "R3"}), S)]
    return SyntheticProfile(["R1", "R2", "R3", "R4"], t, planted, days=days)


def probable_profile(days=20) -> SyntheticProfile:
    """Same windows as the definite case with mixed channel preferences."""
    dists = {
        "R1": {"Fox": 0.5, "MTV": 0.4, "Discovery": 0.1},
        "R2": {"Fox": 0.25, "MTV": 0.45, "Discovery": 0.3},
        "R3": {"Fox": 0.3, "MTV": 0.1, "Discovery": 0.6},
        "R4": {"MTV": 1.0},
    }
    base = definite_profile(days)
    t = [HabitTemplate(x.resident, x.service_id, x.location, x.start, x.end,
                       {CHANNEL: dists[x.resident]}) for x in base.templates]
    planted = [PlantedConflict(LIVING, TV, CHANNEL, frozenset({"R1", "R2", "R3"}), W)]
    return SyntheticProfile(base.residents, t, planted, days=days)


def household_profile(seed=3, days=20) -> SyntheticProfile:
    """Four residents; restricting to the first k gives nested k-resident homes."""
    t = [
        HabitTemplate("R1", TV, LIVING, _m("19:00"), _m("21:00"), {CHANNEL: {"Fox": 0.8, "MTV": 0.2}}),
        HabitTemplate("R2", TV, LIVING, _m("19:30"), _m("21:30"), {CHANNEL: {"MTV": 0.9, "Fox": 0.1}}),
        HabitTemplate("R3", TV, LIVING, _m("19:15"), _m("20:45"), {CHANNEL: {"Discovery": 1.0}}),
        HabitTemplate("R1", "light", "kitchen", _m("7:00"), _m("8:00"), {"brightness": {"high": 1.0}}),
        HabitTemplate("R3", "light", "kitchen", _m("7:20"), _m("8:10"), {"brightness": {"low": 0.7, "high": 0.3}}),
        HabitTemplate("R2", "ac", "bedroom", _m("22:00"), _m("23:30"), {"temperature": {20: 0.3, 21: 0.4, 22: 0.3}}),
        HabitTemplate("R4", "ac", "bedroom", _m("22:15"), _m("23:45"), {"temperature": {25: 0.5, 27: 0.5}}),
        HabitTemplate("R4", "radio", "study", _m("17:00"), _m("18:00"), {"station": {"jazz": 1.0}}),
        HabitTemplate("R1", "radio", "study", _m("17:10"), _m("18:00"), {"station": {"news": 1.0}}),
    ]
    planted = [
        PlantedConflict(LIVING, TV, CHANNEL, frozenset({"R1", "R2", "R3"}), S),
        PlantedConflict("kitchen", "light", "brightness", frozenset({"R1", "R3"}), T),
        PlantedConflict("study", "radio", "station", frozenset({"R1", "R4"}), S),
        PlantedConflict("bedroom", "ac", "temperature", frozenset({"R2", "R4"}), T),
    ]
    return SyntheticProfile(["R1", "R2", "R3", "R4"], t, planted, days=days, seed=seed)


def nested_profiles(sizes=(1, 2, 3, 4)) -> list:
    """Prefixes R1..Rk of the household; planted truth describes only the full home."""
    full = household_profile()
    return [full.restricted_to(full.residents[:k]) for k in sizes]


SCENARIOS = {
    "definite": definite_profile,
    "probable": probable_profile,
    "planted": planted_profile,
    "pruning": pruning_profile,
    "sweep": sweep_profile,
    "household": household_profile,
}
