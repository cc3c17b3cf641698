"""Brute-force verification over all small binary configurations.

Everything here is an independent second route: identities are re-checked on
every enumerable configuration, the averaged-overlap monotonicity claim is
tested by exhaustive pairwise comparison, and partitioned-comparison
reversals (better in every group, worse pooled) are found by direct search
and re-checkable by an explicit witness predicate.
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

from .binary import (
    BinaryPredictionSet,
    ContingencyCounts,
    accuracy,
    dsc_aggregate,
    dsc_average,
    precision_aggregate,
    precision_average,
    recall_aggregate,
    recall_average,
)
from .errors import MetricDomainError
from .gamma import (
    IDENTITY_TOLERANCE,
    gamma_precision_star,
    gamma_recall_star,
    gamma_t1,
    verify_identity,
)

# Full enumeration is 4^n configurations; past this it stops being a desk job.
MAX_ENUMERATION_N = 6

DEFAULT_GAMMA_GRID = (1.0, 0.5, 2.0, -0.25)


def enumerate_sets(
    n: int, where: Callable[[BinaryPredictionSet], bool] | None = None
) -> Iterator[BinaryPredictionSet]:
    """Every (y, yhat) configuration of length n in lexicographic order."""
    if n < 1:
        raise MetricDomainError("n must be at least 1")
    if n > MAX_ENUMERATION_N:
        raise MetricDomainError(
            f"n={n} exceeds the enumeration bound {MAX_ENUMERATION_N}; "
            "use the seeded sampling mode instead"
        )
    bits = list(itertools.product((0, 1), repeat=n))
    for y in bits:
        for yhat in bits:
            s = BinaryPredictionSet(y, yhat)
            if where is None or where(s):
                yield s


@dataclass(frozen=True)
class Violation:
    """One configuration on which an identity failed to hold."""

    identity: str
    y: tuple[int, ...]
    yhat: tuple[int, ...]
    gamma: float
    lhs: float
    rhs: float


@dataclass(frozen=True)
class SweepResult:
    identity: str
    checked: int
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        return (
            f"{self.identity}: {len(self.violations)} violations / "
            f"{self.checked} applicable configurations"
        )


def _gammas_for(s: BinaryPredictionSet, identity: str,
                grid: Sequence[float]) -> list[float]:
    """Smoothing constants to check for one configuration, empty when the
    identity does not apply to it."""
    if identity == "accuracy":
        return [0.0]
    if identity == "T1":
        sol = gamma_t1(s)
        return [sol.gamma] if sol.applicable else []
    if identity == "T2-precision":
        return [gamma_precision_star(s).gamma]
    if identity == "T2-recall":
        return [gamma_recall_star(s).gamma]
    if identity == "Lemma1":
        # Admissible when no per-sample precision denominator vanishes.
        return [g for g in grid if all(g + yh != 0 for yh in s.yhat)]
    if identity == "T3":
        return [
            g for g in grid
            if all(g + y + yh != 0 for y, yh in zip(s.y, s.yhat))
        ]
    raise MetricDomainError(f"unknown identity {identity!r}")


def _sweep_one_n(identity: str, n: int, grid: Sequence[float],
                 tolerance: float) -> tuple[int, list[Violation]]:
    checked = 0
    violations: list[Violation] = []
    for s in enumerate_sets(n):
        for g in _gammas_for(s, identity, grid):
            checked += 1
            report = verify_identity(s, identity, g, tolerance)
            if not report.holds:
                violations.append(
                    Violation(identity, s.y, s.yhat, g, report.lhs, report.rhs)
                )
    return checked, violations


def exhaustive_verify(
    identity: str,
    n_max: int = 5,
    gamma_grid: Sequence[float] = DEFAULT_GAMMA_GRID,
    tolerance: float = IDENTITY_TOLERANCE,
    threads: int = 1,
) -> SweepResult:
    """Check one identity on every configuration with n <= n_max.

    Solved-constant identities evaluate at their own constant per
    configuration; closed-form identities evaluate at each admissible point
    of ``gamma_grid``. Work is sharded by n and merged in order, so the
    violation list is deterministic regardless of thread count.
    """
    if n_max > MAX_ENUMERATION_N:
        raise MetricDomainError(
            f"n_max={n_max} exceeds the enumeration bound {MAX_ENUMERATION_N}"
        )
    sizes = range(1, n_max + 1)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            shards = list(
                pool.map(lambda n: _sweep_one_n(identity, n, gamma_grid, tolerance), sizes)
            )
    else:
        shards = [_sweep_one_n(identity, n, gamma_grid, tolerance) for n in sizes]
    checked = sum(c for c, _ in shards)
    violations = tuple(v for _, vs in shards for v in vs)
    return SweepResult(identity, checked, violations)


def accuracy_monotone_check(n: int, gamma: float,
                            tolerance: float = IDENTITY_TOLERANCE) -> bool:
    """True when ranking prediction sets on a common truth vector by the
    averaged smoothed overlap matches ranking them by accuracy, for every
    truth vector of length n (ties must match ties)."""
    if n > 5:
        raise MetricDomainError("exhaustive pairwise comparison is bounded at n=5")
    if gamma <= -1:
        raise MetricDomainError("monotonicity requires gamma > -1")
    bits = list(itertools.product((0, 1), repeat=n))
    for y in bits:
        scored = [
            (accuracy(s), dsc_average(s, gamma))
            for s in (BinaryPredictionSet(y, yh) for yh in bits)
        ]
        for (acc_a, avg_a), (acc_b, avg_b) in itertools.combinations(scored, 2):
            acc_tie = acc_a == acc_b
            avg_tie = abs(avg_a - avg_b) <= tolerance
            if acc_tie != avg_tie:
                return False
            if not acc_tie and (acc_a > acc_b) != (avg_a > avg_b):
                return False
    return True


@dataclass(frozen=True)
class PartitionedComparison:
    """Per-group contingency counts for a challenger and a baseline model."""

    challenger: tuple[ContingencyCounts, ...]
    baseline: tuple[ContingencyCounts, ...]

    def __post_init__(self):
        if len(self.challenger) != len(self.baseline):
            raise MetricDomainError("group counts differ between models")
        if not self.challenger:
            raise MetricDomainError("at least one group required")

    @property
    def groups(self) -> int:
        return len(self.challenger)


def _group_precision(c: ContingencyCounts) -> float:
    pos = c.tp + c.fp
    if pos == 0:
        raise MetricDomainError("precision undefined for a group with no positive decisions")
    return c.tp / pos


def check_reversal_witness(comparison: PartitionedComparison,
                           metric: str = "precision") -> bool:
    """True when the challenger strictly beats the baseline inside every group
    yet strictly loses on the pooled counts."""
    if metric != "precision":
        raise MetricDomainError(f"unsupported witness metric {metric!r}")
    for ch, ba in zip(comparison.challenger, comparison.baseline):
        if not _group_precision(ch) > _group_precision(ba):
            return False
    pooled_ch = ContingencyCounts(
        sum(c.tp for c in comparison.challenger),
        sum(c.fp for c in comparison.challenger), 0, 0,
    )
    pooled_ba = ContingencyCounts(
        sum(c.tp for c in comparison.baseline),
        sum(c.fp for c in comparison.baseline), 0, 0,
    )
    return _group_precision(pooled_ch) < _group_precision(pooled_ba)


def find_simpson_reversal(
    metric: str = "precision",
    max_tp: int = 9,
    max_fp: int = 9,
    groups: int = 2,
) -> PartitionedComparison | None:
    """Search per-group counts for a reversal witness; None if the bounds
    admit none.

    Enumeration is lexicographic over (tp, fp) pairs, so the returned witness
    is deterministic. A single group can never reverse: the pooled comparison
    is the group comparison.
    """
    if metric != "precision":
        raise MetricDomainError(f"unsupported witness metric {metric!r}")
    if groups < 1:
        raise MetricDomainError("at least one group required")
    cells = [
        ContingencyCounts(tp, fp, 0, 0)
        for tp in range(max_tp + 1)
        for fp in range(max_fp + 1)
        if tp + fp > 0
    ]
    wins = [
        (ch, ba)
        for ch in cells
        for ba in cells
        if _group_precision(ch) > _group_precision(ba)
    ]
    for assignment in itertools.product(wins, repeat=groups):
        comparison = PartitionedComparison(
            tuple(ch for ch, _ in assignment), tuple(ba for _, ba in assignment)
        )
        if check_reversal_witness(comparison, metric):
            return comparison
    return None


def format_witness(comparison: PartitionedComparison) -> str:
    """Small text rendering of a witness: per-group counts plus the precisions."""
    lines = []
    for i, (ch, ba) in enumerate(zip(comparison.challenger, comparison.baseline), 1):
        lines.append(
            f"group {i}: challenger tp={ch.tp} fp={ch.fp} "
            f"(precision {_group_precision(ch)!r}) | "
            f"baseline tp={ba.tp} fp={ba.fp} (precision {_group_precision(ba)!r})"
        )
    pooled_ch = ContingencyCounts(
        sum(c.tp for c in comparison.challenger),
        sum(c.fp for c in comparison.challenger), 0, 0,
    )
    pooled_ba = ContingencyCounts(
        sum(c.tp for c in comparison.baseline),
        sum(c.fp for c in comparison.baseline), 0, 0,
    )
    lines.append(
        f"pooled: challenger tp={pooled_ch.tp} fp={pooled_ch.fp} "
        f"(precision {_group_precision(pooled_ch)!r}) | "
        f"baseline tp={pooled_ba.tp} fp={pooled_ba.fp} "
        f"(precision {_group_precision(pooled_ba)!r})"
    )
    return "\n".join(lines)


_CENSUS_AGGREGATE = {
    "accuracy": lambda s, g: accuracy(s),
    "precision": precision_aggregate,
    "recall": recall_aggregate,
    "dsc": dsc_aggregate,
}
_CENSUS_AVERAGE = {
    "accuracy": lambda s, g: accuracy(s),
    "precision": precision_average,
    "recall": recall_average,
    "dsc": dsc_average,
}


@dataclass(frozen=True)
class CensusReport:
    """Counts of direction disagreements over ordered pairs of prediction sets.

    ``reversal_count`` uses the non-strict sign predicate (product of the two
    deltas <= 0) minus the pairs where both deltas are exactly zero; those are
    tabulated separately because the literal predicate includes them.
    """

    metric: str
    total_pairs: int
    reversal_count: int
    both_zero_count: int
    skipped_sets: int

    @property
    def ratio(self) -> float:
        return self.reversal_count / self.total_pairs if self.total_pairs else 0.0


def _census_pairs_exhaustive(n: int, evaluate) -> tuple[int, int, int, int]:
    bits = list(itertools.product((0, 1), repeat=n))
    total = reversals = both_zero = skipped = 0
    for y in bits:
        scored = []
        for yhat in bits:
            values = evaluate(BinaryPredictionSet(y, yhat))
            if values is None:
                skipped += 1
            else:
                scored.append(values)
        for (f1, a1), (f2, a2) in itertools.permutations(scored, 2):
            total += 1
            df, da = f2 - f1, a2 - a1
            if df == 0 and da == 0:
                both_zero += 1
            elif df * da <= 0:
                reversals += 1
    return total, reversals, both_zero, skipped


def reversal_census(
    n: int,
    metric: str = "dsc",
    gamma_agg: float = 0.0,
    gamma_avg: float = 1.0,
    samples: int | None = None,
    seed: int | None = None,
) -> CensusReport:
    """Frequency of direction disagreement between the two metric forms over
    ordered pairs of distinct prediction sets sharing a truth vector.

    Exhaustive for n <= 4. Beyond that a seeded uniform sample over
    (truth, prediction, prediction) configurations is required, with the
    sample count and seed supplied explicitly. Prediction sets on which
    either form is undefined are excluded and counted in ``skipped_sets``.
    """
    if metric not in _CENSUS_AGGREGATE:
        raise MetricDomainError(f"unsupported census metric {metric!r}")
    agg = _CENSUS_AGGREGATE[metric]
    avg = _CENSUS_AVERAGE[metric]

    def evaluate(s: BinaryPredictionSet):
        try:
            return agg(s, gamma_agg), avg(s, gamma_avg)
        except MetricDomainError:
            return None

    if n <= 4:
        total, reversals, both_zero, skipped = _census_pairs_exhaustive(n, evaluate)
        return CensusReport(metric, total, reversals, both_zero, skipped)

    if samples is None or seed is None:
        raise MetricDomainError(
            f"n={n} exceeds the exhaustive census bound 4; "
            "pass samples= and seed= for the sampling mode"
        )
    rng = random.Random(seed)
    total = reversals = both_zero = skipped = 0
    while total < samples:
        y = tuple(rng.randint(0, 1) for _ in range(n))
        yh1 = tuple(rng.randint(0, 1) for _ in range(n))
        yh2 = tuple(rng.randint(0, 1) for _ in range(n))
        if yh1 == yh2:
            continue
        v1 = evaluate(BinaryPredictionSet(y, yh1))
        v2 = evaluate(BinaryPredictionSet(y, yh2))
        if v1 is None or v2 is None:
            skipped += 1
            continue
        total += 1
        df, da = v2[0] - v1[0], v2[1] - v1[1]
        if df == 0 and da == 0:
            both_zero += 1
        elif df * da <= 0:
            reversals += 1
    return CensusReport(metric, total, reversals, both_zero, skipped)
