"""End-to-end run: events -> settled, binned events -> habits -> groups -> reports."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .config import Settings
from .engine import detect, overlap_groups
from .habits import mine_habits
from .preprocessing import apply_bins, fit_home_bins, stabilize
from .logs import event_sort_key


@dataclass
class PipelineResult:
    events: list
    bins: dict
    habits: list
    groups: list
    reports: list = field(default_factory=list)


def preprocess(events: Sequence, settings: Settings = Settings()):
    ordered = sorted(events, key=event_sort_key)
    settled = stabilize(ordered, settings.settle_seconds)
    bins = fit_home_bins(settled, settings.bin_count)
    return apply_bins(settled, bins), bins


def build_habits(events: Sequence, settings: Settings = Settings()):
    prepared, bins = preprocess(events, settings)
    return prepared, bins, mine_habits(prepared, settings.mining)


def run_pipeline(events: Sequence, settings: Settings = Settings(), mu=None) -> PipelineResult:
    prepared, bins, habits = build_habits(events, settings)
    groups = overlap_groups(habits)
    reports = detect(groups, settings.mu if mu is None else mu)
    return PipelineResult(prepared, bins, habits, groups, reports)
