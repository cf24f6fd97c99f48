"""Scoring detected conflicts against planted ground truth."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .engine import CLASS_ORDER, ConflictClass, detect, overlap_groups
from .errors import EvaluationError

PREDICTED_COLUMNS = CLASS_ORDER + (ConflictClass.PRUNED,)


def _ratio(num, den) -> Optional[float]:
    return num / den if den else None


@dataclass(frozen=True)
class ClassMetrics:
    precision: Optional[float]
    recall: Optional[float]
    f1: Optional[float]
    accuracy: Optional[float]
    support: int


@dataclass
class EvaluationMetrics:
    # confusion[truth][predicted]; predicted includes Pruned
    confusion: dict
    per_class: dict
    accuracy: Optional[float]
    total: int
    unmatched_predictions: int = 0

    def recall(self, cls: ConflictClass) -> Optional[float]:
        return self.per_class[cls].recall

    def as_rows(self):
        for cls in CLASS_ORDER:
            m = self.per_class[cls]
            yield cls.value, m.precision, m.recall, m.f1, m.accuracy, m.support


def evaluate(predicted: Sequence, truth: Sequence) -> EvaluationMetrics:
    """One-vs-rest metrics per class; Pruned predictions count as misses."""
    by_key = {}
    for r in predicted:
        by_key[r.key] = r.conflict_class
    unknown = [t.key for t in truth if t.key not in by_key]
    if unknown:
        raise EvaluationError("truth entries without a matching prediction: %s"
                              % [(k[0], k[1], k[2], sorted(k[3])) for k in unknown])
    truth_keys = {t.key for t in truth}

    confusion = {t: {p: 0 for p in PREDICTED_COLUMNS} for t in CLASS_ORDER}
    for t in truth:
        if t.conflict_class not in confusion:
            raise EvaluationError("ground truth class must be one of %s" % [c.value for c in CLASS_ORDER])
        confusion[t.conflict_class][by_key[t.key]] += 1

    total = len(truth)
    per_class = {}
    for cls in CLASS_ORDER:
        tp = confusion[cls][cls]
        row = sum(confusion[cls].values())
        col = sum(confusion[t][cls] for t in CLASS_ORDER)
        fp, fn = col - tp, row - tp
        tn = total - tp - fp - fn
        p, r = _ratio(tp, col), _ratio(tp, row)
        f1 = None
        if p is not None and r is not None:
            f1 = _ratio(2 * p * r, p + r) if p + r else 0.0
        per_class[cls] = ClassMetrics(p, r, f1, _ratio(tp + tn, total), row)

    trace = sum(confusion[c][c] for c in CLASS_ORDER)
    return EvaluationMetrics(confusion, per_class, _ratio(trace, total), total,
                             sum(1 for k in by_key if k not in truth_keys))


@dataclass(frozen=True)
class SweepRow:
    mu: float
    recall: dict
    pruned: int


def sweep_threshold(habits: Sequence, truth: Sequence, mus: Sequence[float]) -> list:
    """Detect at each threshold over one shared set of overlap groups."""
    for mu in mus:
        if not 0.0 <= mu <= 1.0:
            raise ValueError("threshold %r outside [0, 1]" % mu)
    groups = overlap_groups(habits)
    rows = []
    for mu in mus:
        reports = detect(groups, mu)
        m = evaluate(reports, truth)
        rows.append(SweepRow(mu, {c: m.recall(c) for c in CLASS_ORDER},
                             sum(1 for r in reports if r.conflict_class is ConflictClass.PRUNED)))
    return rows


@dataclass(frozen=True)
class ScaleRow:
    residents: int
    conflicts: int
    groups: int
    by_class: dict = field(default_factory=dict)


def count_conflicts(reports: Sequence) -> int:
    return sum(1 for r in reports if r.conflict_class.is_conflict)


def scale_residents(habit_sets: Sequence[tuple], mu: float = 0.0) -> list:
    """``habit_sets`` holds ``(resident_count, habits)`` pairs."""
    rows = []
    for n, habits in habit_sets:
        reports = detect(overlap_groups(habits), mu)
        by_class = {c: 0 for c in ConflictClass}
        for r in reports:
            by_class[r.conflict_class] += 1
        rows.append(ScaleRow(n, count_conflicts(reports), len(reports), by_class))
    return rows
