"""Synthetic simulation and the four-case replicated experiment."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Sequence

from veracity.errors import InsufficientDataError
from veracity.ground_truth import DEFAULT_LIKE_THRESHOLD
from veracity.outcomes import ALL_MODES, CombinerMode
from veracity.report import MetricReport, evaluate, fmt_float
from veracity.stats import TTestResult, paired_t_test
from veracity.synthesis import CasePreset, GeneratorParams, SyntheticDataset, generate, preset


def simulate(
    params: GeneratorParams,
    modes: Sequence[CombinerMode] = ALL_MODES,
    like_threshold: int = DEFAULT_LIKE_THRESHOLD,
) -> tuple[MetricReport, SyntheticDataset]:
    """Generate a dataset and score it through the file-format pipeline.

    The dataset is rendered to the same TSV/JSONL text that ``evaluate``
    reads from disk, so a persisted copy re-evaluates to the same report.
    """
    data = generate(params)
    report = evaluate(
        data.items_tsv(), data.ratings_tsv(), data.explanations_jsonl(), modes, like_threshold
    )
    report.params["generator"] = params.to_dict()
    report.params["seed"] = params.seed
    return report, data


def _metric_columns(modes: Sequence[CombinerMode]) -> list[str]:
    cols = []
    for dim in ("fidelity", "attunement", *(f"veracity_{m.value}" for m in modes)):
        cols += [f"{dim}_a_prime", f"{dim}_b_double_prime"]
    return cols


def _row_metrics(report: MetricReport) -> dict[str, float | None]:
    row: dict[str, float | None] = {}
    blocks = [("fidelity", report.fidelity), ("attunement", report.attunement)]
    blocks += [(f"veracity_{m.value}", b) for m, b in report.veracity.items()]
    for name, block in blocks:
        row[f"{name}_hr"] = block.metrics.hit_rate
        row[f"{name}_far"] = block.metrics.false_alarm_rate
        row[f"{name}_a_prime"] = block.metrics.a_prime
        row[f"{name}_b_double_prime"] = block.metrics.b_double_prime
    return row


@dataclass
class ExperimentResult:
    modes: tuple[CombinerMode, ...]
    replicates: int
    n_records: int
    base_seed: int
    runs: list[dict] = field(default_factory=list)
    t_test: TTestResult | None = None
    dropped_pairs: int = 0
    t_test_note: str | None = None

    def columns(self) -> list[str]:
        return _metric_columns(self.modes)

    def table(self) -> list[dict]:
        """Mean of each defined metric per case; ``None`` if never defined."""
        rows = []
        for case in CasePreset:
            runs = [r for r in self.runs if r["case"] == case.value]
            row: dict = {"case": case.value, "description": case.description}
            for col in self.columns():
                vals = [r[col] for r in runs if r[col] is not None]
                row[col] = math.fsum(vals) / len(vals) if vals else None
            rows.append(row)
        return rows

    def to_dict(self) -> dict:
        return {
            "params": {
                "modes": [m.value for m in self.modes],
                "replicates": self.replicates,
                "n_records": self.n_records,
                "base_seed": self.base_seed,
            },
            "table": self.table(),
            "runs": self.runs,
            "t_test": None if self.t_test is None else self.t_test.to_dict(),
            "t_test_note": self.t_test_note,
            "dropped_pairs": self.dropped_pairs,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        cols = self.columns()
        writer.writerow(["case", "description", *cols])
        for row in self.table():
            writer.writerow([row["case"], row["description"], *(fmt_float(row[c]) for c in cols)])
        return buf.getvalue()


def replicate_seed(base_seed: int, case_index: int, replicates: int, replicate: int) -> int:
    return base_seed + case_index * replicates + replicate


def experiment(
    replicates: int,
    n_records: int,
    base_seed: int = 0,
    modes: Sequence[CombinerMode] = ALL_MODES,
    like_threshold: int = DEFAULT_LIKE_THRESHOLD,
) -> ExperimentResult:
    """Run every case preset ``replicates`` times and compare Permissive vs Restrictive.

    The t-test pairs each run's Veracity A' under the two modes, pooled over
    cases and replicates. Runs where either A' is undefined are dropped and
    counted.
    """
    if replicates < 2:
        raise InsufficientDataError("experiment needs at least 2 replicates for the paired t-test")
    modes = tuple(modes)
    result = ExperimentResult(modes, replicates, n_records, base_seed)
    for ci, case in enumerate(CasePreset):
        for rep in range(replicates):
            seed = replicate_seed(base_seed, ci, replicates, rep)
            report, _ = simulate(preset(case, n_records, seed), modes, like_threshold)
            result.runs.append({"case": case.value, "replicate": rep, "seed": seed, **_row_metrics(report)})

    perm, restr = CombinerMode.PERMISSIVE, CombinerMode.RESTRICTIVE
    if perm not in modes or restr not in modes:
        result.t_test_note = "t-test requires both permissive and restrictive modes"
        return result
    pairs = []
    for run in result.runs:
        a, b = run[f"veracity_{perm.value}_a_prime"], run[f"veracity_{restr.value}_a_prime"]
        if a is None or b is None:
            result.dropped_pairs += 1
        else:
            pairs.append((a, b))
    try:
        result.t_test = paired_t_test(pairs)
    except InsufficientDataError as exc:
        result.t_test_note = str(exc)
    return result
