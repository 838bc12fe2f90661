"""Signal-detection scoring of explanation Veracity for recommender systems."""

__version__ = "0.1.0"

from veracity.outcomes import (  # noqa: E402
    ALL_MODES,
    CombinerMode,
    ExplanationRecord,
    GroundTruthVerdict,
    Preference,
    classify_attunement,
    classify_fidelity,
    classify_record,
    combine,
)
from veracity.sdt import (  # noqa: E402
    ConfusionMatrix,
    OutcomeKind,
    OutcomeMass,
    SdtMetrics,
    a_prime,
    accumulate,
    b_double_prime,
    false_alarm_rate,
    hit_rate,
    metrics,
)

__all__ = [
    "ALL_MODES",
    "CombinerMode",
    "ConfusionMatrix",
    "ExplanationRecord",
    "GroundTruthVerdict",
    "OutcomeKind",
    "OutcomeMass",
    "Preference",
    "SdtMetrics",
    "a_prime",
    "accumulate",
    "b_double_prime",
    "classify_attunement",
    "classify_fidelity",
    "classify_record",
    "combine",
    "false_alarm_rate",
    "hit_rate",
    "metrics",
]
