"""Signal detection core: outcome masses, confusion matrices, A' and B''D.

Rates are computed from real-valued outcome masses so that split outcomes
(e.g. half a hit and half a correct rejection) fold in naturally. Undefined
quantities are returned as ``None`` rather than NaN or a sentinel number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import cache
from typing import Iterable

MASS_TOL = 1e-9
COUNT_TOL = 1e-6


class OutcomeKind(Enum):
    HIT = "H"
    MISS = "M"
    FALSE_ALARM = "FA"
    CORRECT_REJECTION = "CR"

    @property
    def is_correct(self) -> bool:
        return self in (OutcomeKind.HIT, OutcomeKind.CORRECT_REJECTION)

    @property
    def is_signal_trial(self) -> bool:
        return self in (OutcomeKind.HIT, OutcomeKind.MISS)


@dataclass(frozen=True)
class OutcomeMass:
    """Fractional allocation of one trial over the four outcomes."""

    hit: float = 0.0
    miss: float = 0.0
    false_alarm: float = 0.0
    correct_rejection: float = 0.0

    def __post_init__(self):
        parts = self.as_tuple()
        if any(not math.isfinite(p) or p < 0.0 or p > 1.0 for p in parts):
            raise ValueError(f"outcome mass components must lie in [0, 1]: {parts}")
        if abs(sum(parts) - 1.0) > MASS_TOL:
            raise ValueError(f"outcome mass must sum to 1, got {sum(parts)!r}")

    @staticmethod
    @cache
    def pure(kind: OutcomeKind) -> "OutcomeMass":
        return OutcomeMass.split({kind: 1.0})

    @classmethod
    def split(cls, weights: dict[OutcomeKind, float]) -> "OutcomeMass":
        return cls(
            hit=weights.get(OutcomeKind.HIT, 0.0),
            miss=weights.get(OutcomeKind.MISS, 0.0),
            false_alarm=weights.get(OutcomeKind.FALSE_ALARM, 0.0),
            correct_rejection=weights.get(OutcomeKind.CORRECT_REJECTION, 0.0),
        )

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.hit, self.miss, self.false_alarm, self.correct_rejection)

    def get(self, kind: OutcomeKind) -> float:
        return {
            OutcomeKind.HIT: self.hit,
            OutcomeKind.MISS: self.miss,
            OutcomeKind.FALSE_ALARM: self.false_alarm,
            OutcomeKind.CORRECT_REJECTION: self.correct_rejection,
        }[kind]


@dataclass(frozen=True)
class ConfusionMatrix:
    """Accumulated outcome masses for one dimension.

    ``record_count`` counts trials; with one unit of mass per trial the four
    cells always sum to it.
    """

    hits: float = 0.0
    misses: float = 0.0
    false_alarms: float = 0.0
    correct_rejections: float = 0.0
    record_count: int = 0

    def __post_init__(self):
        cells = self.cells()
        if any(not math.isfinite(c) or c < 0.0 for c in cells):
            raise ValueError(f"confusion matrix cells must be nonnegative: {cells}")
        if self.record_count < 0:
            raise ValueError("record_count must be nonnegative")
        if abs(sum(cells) - self.record_count) > COUNT_TOL:
            raise ValueError(
                f"cell mass {sum(cells)!r} does not match record_count {self.record_count}"
            )

    def cells(self) -> tuple[float, float, float, float]:
        return (self.hits, self.misses, self.false_alarms, self.correct_rejections)

    @property
    def signal_mass(self) -> float:
        return self.hits + self.misses

    @property
    def noise_mass(self) -> float:
        return self.false_alarms + self.correct_rejections


def accumulate(matrix: ConfusionMatrix, mass: OutcomeMass) -> ConfusionMatrix:
    """Add one trial's outcome mass to ``matrix`` and return the new matrix."""
    return ConfusionMatrix(
        hits=matrix.hits + mass.hit,
        misses=matrix.misses + mass.miss,
        false_alarms=matrix.false_alarms + mass.false_alarm,
        correct_rejections=matrix.correct_rejections + mass.correct_rejection,
        record_count=matrix.record_count + 1,
    )


def accumulate_all(masses: Iterable[OutcomeMass]) -> ConfusionMatrix:
    """Sequentially accumulate masses in the order given.

    Summation order is fixed by the input order, which keeps results
    bit-identical between runs over the same record sequence.
    """
    h = m = fa = cr = 0.0
    n = 0
    for mass in masses:
        h += mass.hit
        m += mass.miss
        fa += mass.false_alarm
        cr += mass.correct_rejection
        n += 1
    return ConfusionMatrix(h, m, fa, cr, n)


def hit_rate(matrix: ConfusionMatrix) -> float | None:
    signal = matrix.signal_mass
    if signal == 0.0:
        return None
    return matrix.hits / signal


def false_alarm_rate(matrix: ConfusionMatrix) -> float | None:
    noise = matrix.noise_mass
    if noise == 0.0:
        return None
    return matrix.false_alarms / noise


def _check_rate(name: str, value: float) -> None:
    if not (0.0 <= value <= 1.0):
        raise ValueError(f"{name} must lie in [0, 1], got {value!r}")


def a_prime(hr: float, far: float) -> float:
    """Nonparametric sensitivity A'.

    Ranges from 0.5 (no discrimination) to 1.0 (perfect). Below-chance
    performance folds back above 0.5 through the second branch. Where
    ``hr == far`` the result is exactly 0.5, which also covers the 0/0
    corners at (0, 0) and (1, 1).
    """
    _check_rate("hr", hr)
    _check_rate("far", far)
    if hr == far:
        return 0.5
    if hr > far:
        return 0.5 + (hr - far) * (1.0 + hr - far) / (4.0 * hr * (1.0 - far))
    return 0.5 + (far - hr) * (1.0 + far - hr) / (4.0 * far * (1.0 - hr))


def b_double_prime(hr: float, far: float) -> float | None:
    """Nonparametric bias B''D in [-1, 1]; positive is conservative.

    Returns ``None`` at (1, 0) and (0, 1) where the denominator vanishes.
    """
    _check_rate("hr", hr)
    _check_rate("far", far)
    miss_cr = (1.0 - hr) * (1.0 - far)
    hit_fa = hr * far
    denom = miss_cr + hit_fa
    if denom == 0.0:
        return None
    return (miss_cr - hit_fa) / denom


@dataclass(frozen=True)
class SdtMetrics:
    hit_rate: float | None
    false_alarm_rate: float | None
    a_prime: float | None
    b_double_prime: float | None
    signal_mass: float
    noise_mass: float

    def undefined_reasons(self) -> dict[str, str]:
        """Explain each undefined field, keyed by short metric name."""
        reasons = {}
        if self.hit_rate is None:
            reasons["hr"] = "no signal trials"
        if self.false_alarm_rate is None:
            reasons["far"] = "no noise trials"
        if self.a_prime is None:
            reasons["a_prime"] = "hit rate or false alarm rate undefined"
        if self.b_double_prime is None:
            if self.hit_rate is None or self.false_alarm_rate is None:
                reasons["b_double_prime"] = "hit rate or false alarm rate undefined"
            else:
                reasons["b_double_prime"] = "zero denominator (perfect corner)"
        return reasons


def metrics(matrix: ConfusionMatrix) -> SdtMetrics:
    hr = hit_rate(matrix)
    far = false_alarm_rate(matrix)
    if hr is None or far is None:
        ap = bd = None
    else:
        ap = a_prime(hr, far)
        bd = b_double_prime(hr, far)
    return SdtMetrics(
        hit_rate=hr,
        false_alarm_rate=far,
        a_prime=ap,
        b_double_prime=bd,
        signal_mass=matrix.signal_mass,
        noise_mass=matrix.noise_mass,
    )
