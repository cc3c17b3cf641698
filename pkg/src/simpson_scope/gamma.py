"""Bias-eliminating smoothing constants and closed-form identity checks.

For the smoothed precision family there are two special constants:

* a matched constant at which the averaged form equals the aggregate form
  evaluated with the same smoothing (identity ``T1``), defined when the set
  has at least two positive decisions;
* a constant at which the averaged form equals the *unsmoothed* aggregate
  metric (identities ``T2-precision`` / ``T2-recall``), defined always.

Both are typically negative, which is what makes them unusual as smoothing
terms. The remaining identities are closed forms for the averaged metrics
themselves: ``Lemma1`` rewrites the averaged smoothed precision in terms of
the false-positive count, ``T3`` rewrites the averaged smoothed overlap
coefficient in terms of the mismatch count (making it a monotone function of
accuracy, so no constant can de-bias it), and ``accuracy`` asserts the
zero-bias of plain accuracy. Identity names are the stable report keys used
by the CLI and CSV output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .binary import (
    BinaryPredictionSet,
    accuracy,
    accuracy_average,
    contingency,
    dsc_average,
    precision_aggregate,
    precision_average,
    recall_average,
)
from .errors import MetricDomainError

IDENTITY_TOLERANCE = 1e-12

IDENTITIES = ("accuracy", "T1", "T2-precision", "T2-recall", "Lemma1", "T3")


@dataclass(frozen=True)
class GammaSolution:
    """A solved smoothing constant and whether its side conditions hold."""

    gamma: float
    identity: str
    applicable: bool
    reason: str = ""


@dataclass(frozen=True)
class IdentityReport:
    """Left/right sides of an identity and their residual."""

    identity: str
    gamma: float
    lhs: float
    rhs: float
    residual: float
    holds: bool


def gamma_t1(s: BinaryPredictionSet) -> GammaSolution:
    """Constant matching the averaged and aggregate smoothed precision.

    Inapplicable for singleton sets (the formula divides by n - 1) and for
    sets with fewer than two positive decisions: a single positive decision
    would force the constant to -1, where the averaged form is undefined on
    that sample. Inapplicability is reported as data, not raised, so sweeps
    can tabulate it.
    """
    if s.n == 1:
        return GammaSolution(
            math.nan, "T1", False, "n=1: constant undefined (division by n-1)"
        )
    value = -(s.n - s.sum_yhat) / (s.n - 1)
    if s.sum_yhat < 2:
        return GammaSolution(
            value,
            "T1",
            False,
            f"sum(yhat)={s.sum_yhat} < 2: no constant can match the two forms",
        )
    return GammaSolution(value, "T1", True)


def gamma_precision_star(s: BinaryPredictionSet) -> GammaSolution:
    """Constant at which the averaged smoothed precision equals vanilla precision.

    Always applicable: the all-positive and all-negative decision edge cases
    land on 0 and -1 respectively, which are admissible exactly there.
    """
    return GammaSolution(s.sum_yhat / s.n - 1.0, "T2-precision", True)


def gamma_recall_star(s: BinaryPredictionSet) -> GammaSolution:
    """Recall twin of gamma_precision_star, built from the positive-label rate."""
    return GammaSolution(s.sum_y / s.n - 1.0, "T2-recall", True)


def _vanilla_precision(s: BinaryPredictionSet) -> float:
    # FP-count form: with no positive decisions there are no false positives,
    # and the identity's right side degenerates to 1.
    c = contingency(s)
    pos = c.tp + c.fp
    return 1.0 - c.fp / pos if pos else 1.0


def _vanilla_recall(s: BinaryPredictionSet) -> float:
    c = contingency(s)
    pos = c.tp + c.fn
    return 1.0 - c.fn / pos if pos else 1.0


def verify_identity(
    s: BinaryPredictionSet,
    identity: str,
    gamma: float = 0.0,
    tolerance: float = IDENTITY_TOLERANCE,
) -> IdentityReport:
    """Evaluate both sides of an identity on a concrete set.

    The left side always goes through direct per-sample summation; the right
    side uses the aggregate form or the contingency-count closed form, so the
    two routes share no code path.
    """
    if identity == "accuracy":
        lhs = accuracy_average(s)
        rhs = accuracy(s)
    elif identity == "T1":
        lhs = precision_average(s, gamma)
        rhs = precision_aggregate(s, gamma)
    elif identity == "T2-precision":
        lhs = precision_average(s, gamma)
        rhs = _vanilla_precision(s)
    elif identity == "T2-recall":
        lhs = recall_average(s, gamma)
        rhs = _vanilla_recall(s)
    elif identity == "Lemma1":
        if gamma == -1.0:
            raise MetricDomainError("closed form undefined at gamma=-1")
        lhs = precision_average(s, gamma)
        rhs = 1.0 - contingency(s).fp / ((1.0 + gamma) * s.n)
    elif identity == "T3":
        if gamma == -1.0:
            raise MetricDomainError("closed form undefined at gamma=-1")
        lhs = dsc_average(s, gamma)
        rhs = 1.0 - contingency(s).mismatches / ((1.0 + gamma) * s.n)
    else:
        raise MetricDomainError(
            f"unknown identity {identity!r}; expected one of {', '.join(IDENTITIES)}"
        )
    residual = abs(lhs - rhs)
    return IdentityReport(identity, gamma, lhs, rhs, residual, residual <= tolerance)


def solved_identity_reports(s: BinaryPredictionSet) -> list[tuple[GammaSolution, IdentityReport | None]]:
    """Solve all three special constants for a set and verify each applicable one."""
    out: list[tuple[GammaSolution, IdentityReport | None]] = []
    for solution in (gamma_t1(s), gamma_precision_star(s), gamma_recall_star(s)):
        report = (
            verify_identity(s, solution.identity, solution.gamma)
            if solution.applicable
            else None
        )
        out.append((solution, report))
    return out
