"""Ratio-of-sums metrics and their naive per-sample averages.

A ratio-of-sums metric over a sample set is ``sum(a_i) / sum(b_i)``; its
naively averaged conjugate is ``mean(a_i / b_i)``. The two coincide when
either the denominators are constant (type-1) or the per-sample ratios are
constant (type-2); otherwise they may diverge, and the gap is the bias this
package measures.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import MetricDomainError

# Two ratios are treated as equal when they differ by at most this much.
# All quantities of interest are ratios of small integers, so the only
# slack needed is float rounding.
RATIO_TOLERANCE = 1e-12


@dataclass(frozen=True)
class RosSamplePairs:
    """Per-sample numerator/denominator pairs of a ratio-of-sums metric."""

    a: tuple[float, ...]
    b: tuple[float, ...]

    def __init__(self, a: Sequence[float], b: Sequence[float]):
        object.__setattr__(self, "a", tuple(float(x) for x in a))
        object.__setattr__(self, "b", tuple(float(x) for x in b))
        if len(self.a) != len(self.b):
            raise MetricDomainError(
                f"numerator/denominator lengths differ: {len(self.a)} vs {len(self.b)}"
            )
        if not self.a:
            raise MetricDomainError("empty sample set")

    @property
    def n(self) -> int:
        return len(self.a)


def ros_aggregate(pairs: RosSamplePairs) -> float:
    """Pooled ratio sum(a) / sum(b)."""
    denom = sum(pairs.b)
    if denom == 0:
        raise MetricDomainError("aggregate denominator sum(b) is zero")
    return sum(pairs.a) / denom


def ros_average(pairs: RosSamplePairs) -> float:
    """Arithmetic mean of the per-sample ratios a_i / b_i."""
    for i, b in enumerate(pairs.b):
        if b == 0:
            raise MetricDomainError(f"sample {i}: per-sample denominator is zero")
    return sum(a / b for a, b in zip(pairs.a, pairs.b)) / pairs.n


def check_type1(pairs: RosSamplePairs) -> bool:
    """True when every denominator equals the first (constant-denominator condition)."""
    return all(b == pairs.b[0] for b in pairs.b)


def check_type2(pairs: RosSamplePairs, tolerance: float = RATIO_TOLERANCE) -> bool:
    """True when all per-sample ratios agree within ``tolerance``.

    Returns False if any denominator is zero, since the ratios are then not
    all defined and the condition cannot be certified.
    """
    if any(b == 0 for b in pairs.b):
        return False
    ratios = [a / b for a, b in zip(pairs.a, pairs.b)]
    return all(abs(r - ratios[0]) <= tolerance for r in ratios)
