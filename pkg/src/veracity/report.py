"""Evaluation pipeline and machine-readable reports.

The pipeline is: parse ground truth and explanation log, derive preferences,
classify every record in file order, accumulate one confusion matrix per
dimension and combiner mode, then compute metrics.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from veracity import __version__
from veracity.errors import InvariantError
from veracity.explanations import parse_explanations
from veracity.ground_truth import (
    DEFAULT_LIKE_THRESHOLD,
    GroundTruth,
    derive_preferences,
    load_item_features,
    load_ratings,
)
from veracity.outcomes import (
    ALL_MODES,
    CombinerMode,
    ExplanationRecord,
    RecordOutcome,
    classify_record,
)
from veracity.sdt import COUNT_TOL, ConfusionMatrix, OutcomeMass, SdtMetrics, accumulate_all, metrics

log = logging.getLogger(__name__)

FLOAT_DECIMALS = 6


@dataclass(frozen=True)
class MetricBlock:
    matrix: ConfusionMatrix
    metrics: SdtMetrics

    @classmethod
    def from_masses(cls, masses: Iterable[OutcomeMass]) -> "MetricBlock":
        matrix = accumulate_all(masses)
        return cls(matrix, metrics(matrix))

    def to_dict(self) -> dict:
        m, s = self.matrix, self.metrics
        return {
            "matrix": {
                "hits": m.hits,
                "misses": m.misses,
                "false_alarms": m.false_alarms,
                "correct_rejections": m.correct_rejections,
                "record_count": m.record_count,
            },
            "metrics": {
                "hr": s.hit_rate,
                "far": s.false_alarm_rate,
                "a_prime": s.a_prime,
                "b_double_prime": s.b_double_prime,
            },
            "undefined": s.undefined_reasons(),
        }


@dataclass
class MetricReport:
    fidelity: MetricBlock
    attunement: MetricBlock
    veracity: dict[CombinerMode, MetricBlock]
    counts: dict[str, int]
    inputs: dict[str, str] = field(default_factory=dict)
    params: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "inputs": dict(self.inputs),
            "params": dict(self.params),
            "counts": dict(self.counts),
            "fidelity": self.fidelity.to_dict(),
            "attunement": self.attunement.to_dict(),
            "veracity": {mode.value: block.to_dict() for mode, block in self.veracity.items()},
        }

    def blocks(self) -> list[tuple[str, str, MetricBlock]]:
        rows = [("fidelity", "", self.fidelity), ("attunement", "", self.attunement)]
        rows += [("veracity", mode.value, b) for mode, b in self.veracity.items()]
        return rows

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(
            ["dimension", "mode", "hits", "misses", "false_alarms", "correct_rejections",
             "record_count", "hr", "far", "a_prime", "b_double_prime"]
        )
        for dim, mode, b in self.blocks():
            m, s = b.matrix, b.metrics
            writer.writerow(
                [dim, mode, *(fmt_float(c) for c in m.cells()), m.record_count,
                 *(fmt_float(v) for v in (s.hit_rate, s.false_alarm_rate, s.a_prime, s.b_double_prime))]
            )
        return buf.getvalue()


@dataclass(frozen=True)
class ClassifiedRecord:
    record: ExplanationRecord
    outcome: RecordOutcome


def digest(data: bytes | str) -> str:
    if isinstance(data, str):
        data = data.encode("utf-8")
    return "sha256:" + hashlib.sha256(data).hexdigest()


def classify_records(
    items: bytes | str,
    ratings: bytes | str,
    explanations: bytes | str,
    modes: Sequence[CombinerMode] = ALL_MODES,
    like_threshold: int = DEFAULT_LIKE_THRESHOLD,
) -> tuple[list[ClassifiedRecord], GroundTruth]:
    """Parse all three inputs and classify each explanation record in file order."""
    if not modes:
        raise ValueError("at least one combiner mode is required")
    store = load_item_features(items)
    events = load_ratings(ratings)
    records = parse_explanations(explanations)
    prefs = derive_preferences(events, store, like_threshold)
    truth = GroundTruth(store, prefs)
    out = []
    for rec in records:
        v = truth.lookup(rec.user_id, rec.item_id, rec.feature_id)
        out.append(ClassifiedRecord(rec, classify_record(rec, v, modes)))
    if truth.unknown_items:
        log.warning("%d explanation(s) reference items absent from the item file", truth.unknown_items)
    if prefs.orphaned_ratings:
        log.warning("%d rating(s) reference items absent from the item file", prefs.orphaned_ratings)
    return out, truth


def build_report(
    classified: Sequence[ClassifiedRecord],
    truth: GroundTruth,
    modes: Sequence[CombinerMode],
) -> MetricReport:
    outcomes = [c.outcome for c in classified]
    included = [o for o in outcomes if o.included_in_attunement]
    fidelity = MetricBlock.from_masses(OutcomeMass.pure(o.fidelity) for o in outcomes)
    attunement = MetricBlock.from_masses(OutcomeMass.pure(o.attunement) for o in included)
    veracity = {mode: MetricBlock.from_masses(o.veracity[mode] for o in included) for mode in modes}
    counts = {
        "total_records": len(outcomes),
        "excluded_unknown_preference": len(outcomes) - len(included),
        "orphaned_ratings": truth.prefs.orphaned_ratings,
        "unknown_items": truth.unknown_items,
    }
    report = MetricReport(fidelity, attunement, veracity, counts)
    check_report(report)
    return report


def check_report(report: MetricReport) -> None:
    total = report.counts["total_records"]
    kept = total - report.counts["excluded_unknown_preference"]
    if report.fidelity.matrix.record_count != total:
        raise InvariantError("fidelity record_count does not match total_records")
    for dim, _, block in report.blocks():
        m = block.matrix
        if dim != "fidelity" and m.record_count != kept:
            raise InvariantError(f"{dim} record_count does not match included records")
        if abs(sum(m.cells()) - m.record_count) > COUNT_TOL:
            raise InvariantError(f"{dim} cell masses do not reconcile with record_count")


def evaluate(
    items: bytes | str,
    ratings: bytes | str,
    explanations: bytes | str,
    modes: Sequence[CombinerMode] = ALL_MODES,
    like_threshold: int = DEFAULT_LIKE_THRESHOLD,
) -> MetricReport:
    classified, truth = classify_records(items, ratings, explanations, modes, like_threshold)
    if not classified:
        log.warning("explanation log is empty; all metrics are undefined")
    report = build_report(classified, truth, modes)
    report.inputs = {
        "items": digest(items),
        "ratings": digest(ratings),
        "explanations": digest(explanations),
    }
    report.params = {
        "modes": [m.value for m in modes],
        "like_threshold": like_threshold,
        "tool_version": __version__,
    }
    return report


def record_line(index: int, c: ClassifiedRecord) -> dict:
    o = c.outcome
    return {
        "index": index,
        "user": c.record.user_id,
        "item": c.record.item_id,
        "feature": c.record.feature_id,
        "fidelity": o.fidelity.value,
        "attunement": o.attunement.value if o.attunement is not None else None,
        "excluded": not o.included_in_attunement,
        "veracity": {
            mode.value: {
                "hit": mass.hit,
                "miss": mass.miss,
                "false_alarm": mass.false_alarm,
                "correct_rejection": mass.correct_rejection,
            }
            for mode, mass in o.veracity.items()
        },
    }


# -- serialization ---------------------------------------------------------


def fmt_float(value: float | None) -> str:
    """Fixed 6-decimal rendering; ``None`` becomes ``n/a`` and -0 becomes 0."""
    if value is None:
        return "n/a"
    if math.isnan(value):
        raise ValueError("NaN cannot be serialized")
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    text = f"{value:.{FLOAT_DECIMALS}f}"
    if text.startswith("-") and float(text) == 0.0:
        text = text[1:]
    return text


def dumps_canonical(obj: Any, indent: int | None = 2) -> str:
    """JSON with sorted keys and fixed-precision floats.

    Non-finite floats are written as the strings ``"inf"``/``"-inf"``;
    NaN is rejected.
    """

    def emit(o: Any, level: int) -> str:
        pad = "" if indent is None else "\n" + " " * (indent * (level + 1))
        end = "" if indent is None else "\n" + " " * (indent * level)
        colon = ":" if indent is None else ": "
        if o is None or isinstance(o, bool):
            return json.dumps(o)
        if isinstance(o, int):
            return str(o)
        if isinstance(o, float):
            if math.isinf(o):
                return json.dumps(fmt_float(o))
            return fmt_float(o)
        if isinstance(o, str):
            return json.dumps(o, ensure_ascii=False)
        if isinstance(o, dict):
            if not o:
                return "{}"
            parts = [f"{json.dumps(str(k), ensure_ascii=False)}{colon}{emit(o[k], level + 1)}"
                     for k in sorted(o, key=str)]
            return "{" + pad + ("," + pad).join(parts) + end + "}"
        if isinstance(o, (list, tuple)):
            if not o:
                return "[]"
            parts = [emit(v, level + 1) for v in o]
            return "[" + pad + ("," + pad).join(parts) + end + "]"
        raise TypeError(f"cannot serialize {type(o).__name__}")

    return emit(obj, 0)
