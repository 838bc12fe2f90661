"""Fidelity, Attunement and Veracity outcome assignment for explanation statements."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cache
from typing import Iterable, Mapping

from veracity.sdt import OutcomeKind, OutcomeMass

H = OutcomeKind.HIT
M = OutcomeKind.MISS
FA = OutcomeKind.FALSE_ALARM
CR = OutcomeKind.CORRECT_REJECTION


class CombinerMode(Enum):
    RESTRICTIVE = "restrictive"
    PERMISSIVE = "permissive"
    BALANCED = "balanced"


ALL_MODES: tuple[CombinerMode, ...] = tuple(CombinerMode)


class Preference(Enum):
    LIKED = "liked"
    DISLIKED = "disliked"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class ExplanationRecord:
    """One explanation statement: "item has feature, which you may like".

    Both clauses are booleans so a system can also assert absence or dislike.
    """

    user_id: str
    item_id: str
    feature_id: str
    claims_item_has_feature: bool
    claims_user_likes_feature: bool

    def __post_init__(self):
        for name in ("user_id", "item_id", "feature_id"):
            if not getattr(self, name):
                raise ValueError(f"{name} must be non-empty")


@dataclass(frozen=True)
class GroundTruthVerdict:
    item_has_feature: bool
    user_preference: Preference


@dataclass(frozen=True)
class RecordOutcome:
    fidelity: OutcomeKind
    attunement: OutcomeKind | None
    veracity: Mapping[CombinerMode, OutcomeMass] = field(default_factory=dict)

    @property
    def included_in_attunement(self) -> bool:
        return self.attunement is not None


def _sdt_outcome(response: bool, signal: bool) -> OutcomeKind:
    if signal:
        return H if response else M
    return FA if response else CR


def classify_fidelity(claims_item_has_feature: bool, item_has_feature: bool) -> OutcomeKind:
    return _sdt_outcome(claims_item_has_feature, item_has_feature)


def classify_attunement(
    claims_user_likes_feature: bool, preference: Preference
) -> OutcomeKind | None:
    """Attunement outcome, or ``None`` when the preference is unknown."""
    if preference is Preference.UNKNOWN:
        return None
    return _sdt_outcome(claims_user_likes_feature, preference is Preference.LIKED)


@cache
def combine(fidelity: OutcomeKind, attunement: OutcomeKind, mode: CombinerMode) -> OutcomeMass:
    """Fuse a Fidelity/Attunement outcome pair into a Veracity outcome mass.

    Matching outcomes pass through. Two correct (H + CR) or two incorrect
    (M + FA) outcomes split 0.5/0.5 in every mode. When exactly one side is
    correct, Restrictive keeps the incorrect outcome, Permissive keeps the
    correct one and Balanced splits them evenly.
    """
    if fidelity is attunement:
        return OutcomeMass.pure(fidelity)
    if fidelity.is_correct == attunement.is_correct:
        return OutcomeMass.split({fidelity: 0.5, attunement: 0.5})
    correct, incorrect = (fidelity, attunement) if fidelity.is_correct else (attunement, fidelity)
    if mode is CombinerMode.RESTRICTIVE:
        return OutcomeMass.pure(incorrect)
    if mode is CombinerMode.PERMISSIVE:
        return OutcomeMass.pure(correct)
    return OutcomeMass.split({correct: 0.5, incorrect: 0.5})


def classify_record(
    record: ExplanationRecord,
    verdict: GroundTruthVerdict,
    modes: Iterable[CombinerMode] = ALL_MODES,
) -> RecordOutcome:
    modes = tuple(modes)
    if not modes:
        raise ValueError("at least one combiner mode is required")
    fid = classify_fidelity(record.claims_item_has_feature, verdict.item_has_feature)
    att = classify_attunement(record.claims_user_likes_feature, verdict.user_preference)
    if att is None:
        return RecordOutcome(fidelity=fid, attunement=None, veracity={})
    return RecordOutcome(
        fidelity=fid,
        attunement=att,
        veracity={mode: combine(fid, att, mode) for mode in modes},
    )


def parse_modes(text: str) -> tuple[CombinerMode, ...]:
    """Parse a comma list such as ``"restrictive,balanced"`` into canonical mode order."""
    names = [part.strip().lower() for part in text.split(",") if part.strip()]
    if not names:
        raise ValueError("empty mode list")
    chosen = set()
    for name in names:
        try:
            chosen.add(CombinerMode(name))
        except ValueError:
            raise ValueError(f"unknown combiner mode: {name!r}") from None
    return tuple(m for m in ALL_MODES if m in chosen)
