"""Paired t-test over matched metric pairs."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from scipy import stats as _st

from veracity.errors import InsufficientDataError


@dataclass(frozen=True)
class TTestResult:
    t_statistic: float
    degrees_of_freedom: int
    p_value_two_sided: float
    n_pairs: int
    mean_difference: float

    def to_dict(self) -> dict:
        return {
            "t_statistic": self.t_statistic,
            "degrees_of_freedom": self.degrees_of_freedom,
            "p_value_two_sided": self.p_value_two_sided,
            "n_pairs": self.n_pairs,
            "mean_difference": self.mean_difference,
        }


def paired_t_test(pairs: Sequence[tuple[float, float]]) -> TTestResult:
    """Two-sided paired t-test of ``first - second`` for each pair.

    Uses the sample standard deviation (n - 1). With zero variance the
    statistic is +/-inf (p = 0) for a nonzero mean difference, and 0 (p = 1)
    when every difference is zero.
    """
    n = len(pairs)
    if n < 2:
        raise InsufficientDataError(f"paired t-test needs at least 2 pairs, got {n}")
    diffs = [a - b for a, b in pairs]
    mean = math.fsum(diffs) / n
    var = math.fsum((d - mean) ** 2 for d in diffs) / (n - 1)
    df = n - 1
    if var == 0.0:
        if mean == 0.0:
            return TTestResult(0.0, df, 1.0, n, 0.0)
        return TTestResult(math.copysign(math.inf, mean), df, 0.0, n, mean)
    t = mean / math.sqrt(var / n)
    p = float(2.0 * _st.t.sf(abs(t), df))
    return TTestResult(t, df, min(1.0, p), n, mean)
