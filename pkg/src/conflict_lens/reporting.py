"""Delimited (TSV) and JSON renderings of evaluation tables."""

from __future__ import annotations

import json

from .engine import CLASS_ORDER
from .evaluation import PREDICTED_COLUMNS, EvaluationMetrics

SCHEMA_VERSION = "1"


def _cell(x) -> str:
    if x is None:
        return "NA"
    if isinstance(x, float):
        return "%.6f" % x
    return str(x)


def _tsv(header, rows) -> str:
    out = ["\t".join(header)]
    out.extend("\t".join(_cell(x) for x in row) for row in rows)
    return "\n".join(out) + "\n"


def _json(doc) -> str:
    doc = dict(doc, schema_version=SCHEMA_VERSION)
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def metrics_tsv(m: EvaluationMetrics) -> str:
    rows = list(m.as_rows())
    rows.append(("overall", None, None, None, m.accuracy, m.total))
    body = _tsv(("class", "precision", "recall", "f1", "accuracy", "support"), rows)
    confusion = _tsv(("truth\\predicted",) + tuple(c.value for c in PREDICTED_COLUMNS),
                     [(t.value,) + tuple(m.confusion[t][p] for p in PREDICTED_COLUMNS)
                      for t in CLASS_ORDER])
    return body + "\n" + confusion


def metrics_json(m: EvaluationMetrics) -> str:
    return _json({
        "accuracy": m.accuracy,
        "total": m.total,
        "unmatched_predictions": m.unmatched_predictions,
        "per_class": {c.value: {"precision": x.precision, "recall": x.recall, "f1": x.f1,
                                "accuracy": x.accuracy, "support": x.support}
                      for c, x in m.per_class.items()},
        "confusion": {t.value: {p.value: m.confusion[t][p] for p in PREDICTED_COLUMNS}
                      for t in CLASS_ORDER},
    })


def sweep_tsv(rows) -> str:
    return _tsv(("mu",) + tuple("recall_" + c.value for c in CLASS_ORDER) + ("pruned",),
                [(r.mu,) + tuple(r.recall[c] for c in CLASS_ORDER) + (r.pruned,) for r in rows])


def sweep_json(rows) -> str:
    return _json({"sweep": [{"mu": r.mu, "pruned": r.pruned,
                             "recall": {c.value: r.recall[c] for c in CLASS_ORDER}}
                            for r in rows]})


def scale_tsv(rows) -> str:
    return _tsv(("residents", "conflicts", "groups") + tuple(c.value for c in CLASS_ORDER),
                [(r.residents, r.conflicts, r.groups) + tuple(r.by_class[c] for c in CLASS_ORDER)
                 for r in rows])


def scale_json(rows) -> str:
    return _json({"scale": [{"residents": r.residents, "conflicts": r.conflicts,
                             "groups": r.groups,
                             "by_class": {c.value: r.by_class[c] for c in CLASS_ORDER}}
                            for r in rows]})
