"""Seeded synthetic explanation logs and their closed-form expectations.

Each synthetic record draws a true item/feature state and a true user
preference, then draws the two claims from Bernoulli accuracies conditioned
on those states. Ground truth is emitted in the same TSV formats that real
data uses, so both go through one evaluation path.

Randomness comes from numpy's PCG64 bit generator seeded with the 64-bit
``seed``; four uniforms are drawn per record in a fixed order.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable

import numpy as np

from veracity.explanations import dump_explanations
from veracity.ground_truth import RatingEvent
from veracity.outcomes import ALL_MODES, CombinerMode, ExplanationRecord, combine
from veracity.sdt import (
    ConfusionMatrix,
    OutcomeKind,
    OutcomeMass,
    SdtMetrics,
    metrics,
)

LIKED_RATING = 5
DISLIKED_RATING = 1


@dataclass(frozen=True)
class GeneratorParams:
    """Bernoulli claim-accuracy model.

    ``fidelity_accuracy`` is ``(q1, q0)``: probability of claiming the item
    has the feature when it does (q1) and when it does not (q0). The
    attunement pair reads the same way for "user likes feature".
    """

    n_records: int
    fidelity_accuracy: tuple[float, float] = (0.5, 0.5)
    attunement_accuracy: tuple[float, float] = (0.5, 0.5)
    signal_prevalence: tuple[float, float] = (0.5, 0.5)
    seed: int = 0

    def __post_init__(self):
        if self.n_records < 1:
            raise ValueError("n_records must be positive")
        for q in (*self.fidelity_accuracy, *self.attunement_accuracy):
            if not (0.0 <= q <= 1.0):
                raise ValueError(f"claim probability {q!r} outside [0, 1]")
        for p in self.signal_prevalence:
            if not (0.0 < p < 1.0):
                raise ValueError(f"signal prevalence {p!r} must lie in (0, 1)")
        if not (0 <= self.seed < 2**64):
            raise ValueError("seed must be a 64-bit unsigned integer")

    def to_dict(self) -> dict:
        return {
            "n_records": self.n_records,
            "fidelity_accuracy": list(self.fidelity_accuracy),
            "attunement_accuracy": list(self.attunement_accuracy),
            "signal_prevalence": list(self.signal_prevalence),
            "seed": self.seed,
        }


class CasePreset(Enum):
    CASE1 = "case1"
    CASE2 = "case2"
    CASE3 = "case3"
    CASE4 = "case4"

    @property
    def description(self) -> str:
        return _DESCRIPTIONS[self]


_ACCURATE = (0.9, 0.1)
_CHANCE = (0.5, 0.5)

_PRESET_TABLE = {
    CasePreset.CASE1: (_CHANCE, _CHANCE),
    CasePreset.CASE2: (_ACCURATE, _CHANCE),
    CasePreset.CASE3: (_CHANCE, _ACCURATE),
    CasePreset.CASE4: (_ACCURATE, _ACCURATE),
}

_DESCRIPTIONS = {
    CasePreset.CASE1: "random item features and random preferences",
    CasePreset.CASE2: "accurate item features, random preferences",
    CasePreset.CASE3: "random item features, accurate preferences",
    CasePreset.CASE4: "accurate item features and preferences",
}


def preset(case: CasePreset, n_records: int, seed: int) -> GeneratorParams:
    fid, att = _PRESET_TABLE[case]
    return GeneratorParams(
        n_records=n_records,
        fidelity_accuracy=fid,
        attunement_accuracy=att,
        signal_prevalence=(0.5, 0.5),
        seed=seed,
    )


@dataclass(frozen=True)
class SyntheticDataset:
    params: GeneratorParams
    item_features: list[tuple[str, str]]
    ratings: list[RatingEvent]
    records: list[ExplanationRecord]
    # latent (item_has_feature, user_likes_feature) per record, for tests
    truth: list[tuple[bool, bool]] = field(repr=False)

    def items_tsv(self) -> str:
        return "".join(f"{item}\t{feat}\n" for item, feat in self.item_features)

    def ratings_tsv(self) -> str:
        return "".join(f"{r.user_id}\t{r.item_id}\t{r.rating}\n" for r in self.ratings)

    def explanations_jsonl(self) -> str:
        return dump_explanations(self.records)


def generate(params: GeneratorParams) -> SyntheticDataset:
    """Draw one synthetic dataset.

    Record ``k`` uses user ``u<k>``, recommended item ``i<k>`` and feature
    ``f<k>``. The recommended item carries ``f<k>`` only when the feature is
    truly present (otherwise a filler feature keeps the item known). The
    preference is planted by a single rating of a dedicated carrier item
    ``c<k>`` whose only feature is ``f<k>``.
    """
    rng = np.random.Generator(np.random.PCG64(params.seed))
    u = rng.random((params.n_records, 4))
    pi_f, pi_a = params.signal_prevalence
    q1_f, q0_f = params.fidelity_accuracy
    q1_a, q0_a = params.attunement_accuracy

    width = max(6, len(str(params.n_records - 1)))
    item_features: list[tuple[str, str]] = []
    ratings: list[RatingEvent] = []
    records: list[ExplanationRecord] = []
    truth: list[tuple[bool, bool]] = []
    for k in range(params.n_records):
        g_f = bool(u[k, 0] < pi_f)
        g_a = bool(u[k, 1] < pi_a)
        claim_has = bool(u[k, 2] < (q1_f if g_f else q0_f))
        claim_likes = bool(u[k, 3] < (q1_a if g_a else q0_a))
        tag = f"{k:0{width}d}"
        user, item, feat, carrier = f"u{tag}", f"i{tag}", f"f{tag}", f"c{tag}"
        item_features.append((item, feat if g_f else f"x{tag}"))
        item_features.append((carrier, feat))
        ratings.append(RatingEvent(user, carrier, LIKED_RATING if g_a else DISLIKED_RATING))
        records.append(ExplanationRecord(user, item, feat, claim_has, claim_likes))
        truth.append((g_f, g_a))
    return SyntheticDataset(params, item_features, ratings, records, truth)


@dataclass(frozen=True)
class ExpectedBlock:
    proportions: OutcomeMass
    metrics: SdtMetrics


@dataclass(frozen=True)
class ExpectedMatrix:
    fidelity: ExpectedBlock
    attunement: ExpectedBlock
    veracity: dict[CombinerMode, ExpectedBlock]


def _dimension_probs(prevalence: float, q1: float, q0: float) -> dict[OutcomeKind, float]:
    return {
        OutcomeKind.HIT: prevalence * q1,
        OutcomeKind.MISS: prevalence * (1.0 - q1),
        OutcomeKind.FALSE_ALARM: (1.0 - prevalence) * q0,
        OutcomeKind.CORRECT_REJECTION: (1.0 - prevalence) * (1.0 - q0),
    }


def _block(probs: dict[OutcomeKind, float]) -> ExpectedBlock:
    mass = OutcomeMass.split(probs)
    # a unit-count matrix of proportions gives rates identical to the expected-mass ratios
    matrix = ConfusionMatrix(*mass.as_tuple(), record_count=1)
    return ExpectedBlock(proportions=mass, metrics=metrics(matrix))


def expected_matrix(
    params: GeneratorParams, modes: Iterable[CombinerMode] = ALL_MODES
) -> ExpectedMatrix:
    """Exact outcome proportions and metrics implied by ``params``.

    Veracity proportions enumerate all 16 Fidelity x Attunement outcome
    pairs, weighting each pair's combined mass by its joint probability
    (the two dimensions are independent by construction).
    """
    fid = _dimension_probs(params.signal_prevalence[0], *params.fidelity_accuracy)
    att = _dimension_probs(params.signal_prevalence[1], *params.attunement_accuracy)
    veracity = {}
    for mode in modes:
        acc = dict.fromkeys(OutcomeKind, 0.0)
        for fo, fp in fid.items():
            for ao, ap in att.items():
                mass = combine(fo, ao, mode)
                for kind in OutcomeKind:
                    acc[kind] += fp * ap * mass.get(kind)
        veracity[mode] = _block(acc)
    return ExpectedMatrix(fidelity=_block(fid), attunement=_block(att), veracity=veracity)


def with_seed(params: GeneratorParams, seed: int) -> GeneratorParams:
    return replace(params, seed=seed)
