"""Binary recognition metrics in aggregate and sample-averaged form.

Every metric here comes in two flavours over a set of (truth, decision)
bit pairs:

* the aggregate form pools counts over the whole set and takes one ratio;
* the averaged form evaluates the same metric on each singleton sample and
  takes the arithmetic mean.

Both accept a smoothing constant ``gamma`` added to numerator and
denominator, which keeps singleton evaluations defined. Accuracy is the
exception: its two forms coincide by construction, so it takes no gamma.

Smoothing admissibility is checked against the contingency rows actually
present, not as a blanket exclusion: e.g. gamma=0 breaks the averaged
precision only if some row has a negative decision.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import MetricDomainError
from .ros import RosSamplePairs, ros_aggregate, ros_average

BINARY_METRICS = ("accuracy", "precision", "recall", "dsc")


@dataclass(frozen=True)
class BinaryPredictionSet:
    """Paired ground-truth / decision bit sequences of equal length."""

    y: tuple[int, ...]
    yhat: tuple[int, ...]

    def __init__(self, y: Sequence[int], yhat: Sequence[int]):
        object.__setattr__(self, "y", tuple(int(v) for v in y))
        object.__setattr__(self, "yhat", tuple(int(v) for v in yhat))
        if len(self.y) != len(self.yhat):
            raise MetricDomainError(
                f"label/decision lengths differ: {len(self.y)} vs {len(self.yhat)}"
            )
        if not self.y:
            raise MetricDomainError("empty prediction set")
        for i, (a, b) in enumerate(zip(self.y, self.yhat)):
            if a not in (0, 1) or b not in (0, 1):
                raise MetricDomainError(f"sample {i}: labels must be 0 or 1, got ({a}, {b})")

    @property
    def n(self) -> int:
        return len(self.y)

    @property
    def sum_y(self) -> int:
        return sum(self.y)

    @property
    def sum_yhat(self) -> int:
        return sum(self.yhat)

    def swapped(self) -> "BinaryPredictionSet":
        """The set with truth and decision roles exchanged (recall duality)."""
        return BinaryPredictionSet(self.yhat, self.y)


@dataclass(frozen=True)
class ContingencyCounts:
    """TP/FP/FN/TN cell counts of a binary prediction set."""

    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def n(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    @property
    def mismatches(self) -> int:
        return self.fp + self.fn


@dataclass(frozen=True)
class BiasReport:
    """Aggregate value, averaged value, and their absolute gap."""

    aggregate: float
    averaged: float
    epsilon: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "epsilon", abs(self.aggregate - self.averaged))


def contingency(s: BinaryPredictionSet) -> ContingencyCounts:
    tp = fp = fn = tn = 0
    for y, yh in zip(s.y, s.yhat):
        if yh == 1:
            if y == 1:
                tp += 1
            else:
                fp += 1
        else:
            if y == 1:
                fn += 1
            else:
                tn += 1
    return ContingencyCounts(tp, fp, fn, tn)


def accuracy(s: BinaryPredictionSet) -> float:
    """Fraction of matching decisions; aggregate and averaged forms coincide."""
    return sum(1 for y, yh in zip(s.y, s.yhat) if y == yh) / s.n


def accuracy_average(s: BinaryPredictionSet) -> float:
    """Mean of the per-sample match indicators; provided as a second route
    so the zero-bias claim can be checked across independent code paths."""
    return sum(float(y == yh) for y, yh in zip(s.y, s.yhat)) / s.n


def precision_aggregate(s: BinaryPredictionSet, gamma: float = 0.0) -> float:
    """(gamma + TP) / (gamma + sum(yhat)); gamma=0 is vanilla precision."""
    denom = gamma + s.sum_yhat
    if denom == 0:
        raise MetricDomainError(
            f"aggregate precision undefined: gamma + sum(yhat) = {gamma} + {s.sum_yhat} = 0"
        )
    tp = sum(y * yh for y, yh in zip(s.y, s.yhat))
    return (gamma + tp) / denom


def precision_average(s: BinaryPredictionSet, gamma: float) -> float:
    """Mean over samples of (gamma + y*yhat) / (gamma + yhat).

    Defined for any gamma whose per-sample denominators are all nonzero:
    gamma=0 is admissible only when every decision is positive, gamma=-1
    only when every decision is negative.
    """
    total = 0.0
    for i, (y, yh) in enumerate(zip(s.y, s.yhat)):
        denom = gamma + yh
        if denom == 0:
            raise MetricDomainError(
                f"sample {i}: averaged precision undefined at gamma={gamma} "
                f"for a row with yhat={yh}"
            )
        total += (gamma + y * yh) / denom
    return total / s.n


def recall_aggregate(s: BinaryPredictionSet, gamma: float = 0.0) -> float:
    """Precision with truth and decision roles swapped: (gamma + TP) / (gamma + sum(y))."""
    try:
        return precision_aggregate(s.swapped(), gamma)
    except MetricDomainError:
        raise MetricDomainError(
            f"aggregate recall undefined: gamma + sum(y) = {gamma} + {s.sum_y} = 0"
        ) from None


def recall_average(s: BinaryPredictionSet, gamma: float) -> float:
    """Mean over samples of (gamma + y*yhat) / (gamma + y)."""
    total = 0.0
    for i, (y, yh) in enumerate(zip(s.y, s.yhat)):
        denom = gamma + y
        if denom == 0:
            raise MetricDomainError(
                f"sample {i}: averaged recall undefined at gamma={gamma} for a row with y={y}"
            )
        total += (gamma + y * yh) / denom
    return total / s.n


def dsc_aggregate(s: BinaryPredictionSet, gamma: float = 0.0) -> float:
    """(gamma + 2*TP) / (gamma + sum(y) + sum(yhat)), the pooled overlap coefficient."""
    denom = gamma + s.sum_y + s.sum_yhat
    if denom == 0:
        raise MetricDomainError(
            f"aggregate overlap undefined: gamma + sum(y) + sum(yhat) = "
            f"{gamma} + {s.sum_y} + {s.sum_yhat} = 0"
        )
    tp = sum(y * yh for y, yh in zip(s.y, s.yhat))
    return (gamma + 2 * tp) / denom


def dsc_average(s: BinaryPredictionSet, gamma: float) -> float:
    """Mean over samples of (gamma + 2*y*yhat) / (gamma + y + yhat).

    Per-sample denominators are gamma, gamma+1 or gamma+2 depending on the
    contingency row, so gamma in {0, -1, -2} is rejected exactly when the
    corresponding row occurs in the data.
    """
    total = 0.0
    for i, (y, yh) in enumerate(zip(s.y, s.yhat)):
        denom = gamma + y + yh
        if denom == 0:
            raise MetricDomainError(
                f"sample {i}: averaged overlap undefined at gamma={gamma} "
                f"for a row with (y, yhat)=({y}, {yh})"
            )
        total += (gamma + 2 * y * yh) / denom
    return total / s.n


_AGGREGATE = {
    "precision": precision_aggregate,
    "recall": recall_aggregate,
    "dsc": dsc_aggregate,
}
_AVERAGE = {
    "precision": precision_average,
    "recall": recall_average,
    "dsc": dsc_average,
}


def bias_report(
    data: BinaryPredictionSet | RosSamplePairs,
    metric: str = "dsc",
    gamma_agg: float = 0.0,
    gamma_avg: float = 1.0,
) -> BiasReport:
    """Evaluate both forms of a metric and report their gap.

    The two sides may use distinct smoothing constants, matching the common
    setup where a smoothed averaged loss is compared against an unsmoothed
    aggregate evaluation metric (defaults gamma_agg=0, gamma_avg=1).

    Ratio-of-sums sample pairs are evaluated directly and ignore the metric
    name and smoothing constants.
    """
    if isinstance(data, RosSamplePairs):
        return BiasReport(ros_aggregate(data), ros_average(data))
    if metric == "accuracy":
        value = accuracy(data)
        return BiasReport(value, accuracy_average(data))
    if metric not in _AGGREGATE:
        raise MetricDomainError(
            f"unknown metric {metric!r}; expected one of {', '.join(BINARY_METRICS)}"
        )
    return BiasReport(
        _AGGREGATE[metric](data, gamma_agg),
        _AVERAGE[metric](data, gamma_avg),
    )
