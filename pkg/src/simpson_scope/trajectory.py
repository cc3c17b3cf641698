"""Training-trajectory analysis: per-step bias, reversal pairs, correlation,
and a seeded desk-scale simulator.

A trajectory file is line-delimited JSON, one record per step, each carrying
either precomputed values ``{"step": t, "F": ..., "Fbar": ...}`` or a
prediction snapshot reference ``{"step": t, "snapshot": "path"}`` (a two-item
list of hypothesis/reference paths for corpus metrics). Snapshot paths are
resolved relative to the trajectory file, so an emitted directory can be
moved wholesale.

A reversal pair is a transition whose aggregate and averaged deltas do not
agree in direction. The default predicate counts a transition when the
product of the deltas is <= 0 (both-zero transitions included, reading the
sign condition literally); strict mode instead requires a negative product
or exactly one zero delta.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import io as scope_io
from .binary import bias_report
from .bleu import bleu_average, f_bleu
from .errors import MetricDomainError
from .multiclass import macro_f1_aggregate, macro_f1_average, with_hardmax_decisions

TRAJECTORY_METRICS = ("accuracy", "precision", "recall", "dsc", "macro-f1", "bleu")


@dataclass(frozen=True)
class TrajectoryStep:
    """One trajectory record: a step index plus exactly one payload kind."""

    step: int
    aggregate: float | None = None
    averaged: float | None = None
    snapshot: str | tuple[str, str] | None = None

    def __post_init__(self):
        if self.step < 0:
            raise MetricDomainError(f"step {self.step} is negative")
        precomputed = self.aggregate is not None or self.averaged is not None
        if precomputed and (self.aggregate is None or self.averaged is None):
            raise MetricDomainError(f"step {self.step}: F and Fbar must come together")
        if precomputed == (self.snapshot is not None):
            raise MetricDomainError(
                f"step {self.step}: exactly one of (F, Fbar) or snapshot required"
            )


@dataclass(frozen=True)
class TrajectoryPoint:
    """Evaluated step: both metric forms and their gap."""

    step: int
    aggregate: float
    averaged: float
    epsilon: float


@dataclass(frozen=True)
class ReversalReport:
    """Reversal transitions found in a series."""

    steps: tuple[int, ...]
    total: int
    count: int
    ratio: float
    strict: bool


@dataclass(frozen=True)
class CorrelationReport:
    """Pearson and Spearman coefficients; None when the input is degenerate."""

    pearson: float | None
    spearman: float | None
    n: int
    note: str = ""


def read_trajectory(path: str | Path) -> tuple[TrajectoryStep, ...]:
    """Parse a trajectory file, enforcing increasing steps and a uniform payload kind."""
    path = Path(path)
    steps: list[TrajectoryStep] = []
    kind: str | None = None
    with path.open(encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as e:
                raise MetricDomainError(f"{path}:{lineno}: malformed record: {e}") from None
            if not isinstance(record, dict) or "step" not in record:
                raise MetricDomainError(f"{path}:{lineno}: record lacks a step field")
            snapshot = record.get("snapshot")
            if isinstance(snapshot, list):
                if len(snapshot) != 2:
                    raise MetricDomainError(
                        f"{path}:{lineno}: snapshot list must hold exactly two paths"
                    )
                snapshot = (str(snapshot[0]), str(snapshot[1]))
            try:
                step = TrajectoryStep(
                    step=int(record["step"]),
                    aggregate=None if record.get("F") is None else float(record["F"]),
                    averaged=None if record.get("Fbar") is None else float(record["Fbar"]),
                    snapshot=snapshot,
                )
            except (MetricDomainError, TypeError, ValueError) as e:
                raise MetricDomainError(f"{path}:{lineno}: {e}") from None
            this_kind = "snapshot" if step.snapshot is not None else "precomputed"
            if kind is None:
                kind = this_kind
            elif kind != this_kind:
                raise MetricDomainError(
                    f"{path}:{lineno}: mixed precomputed and snapshot records"
                )
            if steps and step.step <= steps[-1].step:
                raise MetricDomainError(
                    f"{path}:{lineno}: steps must be strictly increasing"
                )
            steps.append(step)
    if not steps:
        raise MetricDomainError(f"{path}: empty trajectory")
    return tuple(steps)


def write_trajectory(steps: Sequence[TrajectoryStep], path: str | Path) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8") as handle:
        for step in steps:
            if step.snapshot is not None:
                snapshot = (
                    list(step.snapshot)
                    if isinstance(step.snapshot, tuple)
                    else step.snapshot
                )
                record = {"step": step.step, "snapshot": snapshot}
            else:
                record = {"step": step.step, "F": step.aggregate, "Fbar": step.averaged}
            handle.write(json.dumps(record, sort_keys=True) + "\n")


def _evaluate_snapshot(
    snapshot: str | tuple[str, str],
    base: Path,
    metric: str,
    gamma_agg: float,
    gamma_avg: float,
) -> tuple[float, float]:
    if metric == "bleu":
        if not isinstance(snapshot, tuple):
            raise MetricDomainError(
                "corpus metric snapshots need [hypothesis, reference] path pairs"
            )
        corpus = scope_io.read_corpus(base / snapshot[0], base / snapshot[1])
        return f_bleu(corpus), bleu_average(corpus)
    if isinstance(snapshot, tuple):
        raise MetricDomainError(f"metric {metric!r} takes a single snapshot path")
    if metric == "macro-f1":
        mcs = with_hardmax_decisions(scope_io.read_multiclass(base / snapshot))
        return macro_f1_aggregate(mcs, gamma_agg), macro_f1_average(mcs, gamma_avg)
    if metric in ("accuracy", "precision", "recall", "dsc"):
        report = bias_report(
            scope_io.read_binary_labels(base / snapshot), metric, gamma_agg, gamma_avg
        )
        return report.aggregate, report.averaged
    raise MetricDomainError(
        f"unsupported trajectory metric {metric!r}; expected one of {TRAJECTORY_METRICS}"
    )


def ingest(
    path: str | Path,
    metric: str = "dsc",
    gamma_agg: float = 0.0,
    gamma_avg: float = 1.0,
) -> tuple[TrajectoryPoint, ...]:
    """Evaluate a trajectory file into a (step, F, Fbar, epsilon) series.

    Precomputed records pass through unchanged; snapshot records are
    re-evaluated from the raw predictions, so the series is independent of
    whatever metric code produced the snapshots.
    """
    path = Path(path)
    base = path.parent
    points: list[TrajectoryPoint] = []
    for step in read_trajectory(path):
        if step.snapshot is None:
            agg, avg = float(step.aggregate), float(step.averaged)
        else:
            try:
                agg, avg = _evaluate_snapshot(
                    step.snapshot, base, metric, gamma_agg, gamma_avg
                )
            except MetricDomainError as e:
                raise MetricDomainError(f"step {step.step}: {e}") from None
        points.append(TrajectoryPoint(step.step, agg, avg, abs(agg - avg)))
    return tuple(points)


def reversal_pairs(
    series: Sequence[TrajectoryPoint],
    strict: bool = False,
    trim_percentile: float | None = None,
) -> ReversalReport:
    """Count transitions whose aggregate and averaged deltas disagree in direction.

    ``trim_percentile`` optionally drops the transitions whose delta magnitude
    exceeds that percentile (on either axis) before counting, as a guard
    against early-training extremes. Off by default.
    """
    if len(series) < 2:
        raise MetricDomainError("need at least two steps to form a transition")
    transitions = [
        (b.step, b.aggregate - a.aggregate, b.averaged - a.averaged)
        for a, b in zip(series, series[1:])
    ]
    if trim_percentile is not None:
        if not 0 < trim_percentile <= 100:
            raise MetricDomainError("trim percentile must lie in (0, 100]")
        df_cut = float(np.percentile([abs(d) for _, d, _ in transitions], trim_percentile))
        da_cut = float(np.percentile([abs(d) for _, _, d in transitions], trim_percentile))
        transitions = [
            t for t in transitions if abs(t[1]) <= df_cut and abs(t[2]) <= da_cut
        ]
    hits = []
    for step, df, da in transitions:
        if strict:
            hit = df * da < 0 or (df == 0) != (da == 0)
        else:
            hit = df * da <= 0
        if hit:
            hits.append(step)
    total = len(transitions)
    ratio = len(hits) / total if total else 0.0
    return ReversalReport(tuple(hits), total, len(hits), ratio, strict)


def _pearson(x: np.ndarray, y: np.ndarray) -> float | None:
    dx = x - x.mean()
    dy = y - y.mean()
    sx = float(np.sqrt((dx * dx).sum()))
    sy = float(np.sqrt((dy * dy).sum()))
    if sx == 0.0 or sy == 0.0:
        return None
    return float((dx * dy).sum() / (sx * sy))


def _average_ranks(values: np.ndarray) -> np.ndarray:
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values), dtype=np.float64)
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def bias_quality_correlation(
    points: Sequence[tuple[float, float]]
) -> CorrelationReport:
    """Pearson on raw (bias, quality) points and Spearman on average ranks.

    Which quality measure goes on the second axis is the caller's choice;
    final-step aggregate score is typical. Degenerate inputs (zero variance
    on an axis) yield None coefficients with an explanatory note.
    """
    if len(points) < 3:
        raise MetricDomainError("correlation needs at least three points")
    eps = np.array([p[0] for p in points], dtype=np.float64)
    quality = np.array([p[1] for p in points], dtype=np.float64)
    if not (np.isfinite(eps).all() and np.isfinite(quality).all()):
        raise MetricDomainError("correlation inputs must be finite")
    pearson = _pearson(eps, quality)
    spearman = _pearson(_average_ranks(eps), _average_ranks(quality))
    note = ""
    if pearson is None or spearman is None:
        note = "undefined: zero variance on at least one axis"
    return CorrelationReport(pearson, spearman, len(points), note)


def _rate_schedule(rate: float | Sequence[float], steps: int, name: str) -> list[float]:
    values = [float(rate)] * steps if isinstance(rate, (int, float)) else [float(r) for r in rate]
    if len(values) != steps:
        raise MetricDomainError(
            f"{name} schedule has {len(values)} entries for {steps} steps"
        )
    if any(not 0.0 <= v <= 1.0 for v in values):
        raise MetricDomainError(f"{name} rates must lie in [0, 1]")
    return values


@dataclass(frozen=True)
class SimulationConfig:
    """Seeded random-walk trainer stand-in.

    Starting from random decisions against a random truth vector, each step
    flips every wrong prediction to correct with probability ``correct_rate``
    and every correct one to wrong with probability ``corrupt_rate``. Either
    rate may be a per-step schedule of length ``steps``.
    """

    n: int
    steps: int
    correct_rate: float | tuple[float, ...] = 0.3
    corrupt_rate: float | tuple[float, ...] = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise MetricDomainError("n must be at least 1")
        if self.steps < 1:
            raise MetricDomainError("steps must be at least 1")


def simulate_trajectory(config: SimulationConfig, out_dir: str | Path) -> Path:
    """Emit a snapshot-per-step trajectory under ``out_dir``; returns the
    trajectory file path. Identical configs produce byte-identical trees."""
    correct = _rate_schedule(config.correct_rate, config.steps, "correct")
    corrupt = _rate_schedule(config.corrupt_rate, config.steps, "corrupt")
    out_dir = Path(out_dir)
    snap_dir = out_dir / "snapshots"
    snap_dir.mkdir(parents=True, exist_ok=True)

    rng = random.Random(config.seed)
    y = [rng.randint(0, 1) for _ in range(config.n)]
    yhat = [rng.randint(0, 1) for _ in range(config.n)]

    def write_snapshot(t: int) -> str:
        rel = f"snapshots/step_{t:04d}.tsv"
        with (out_dir / rel).open("w", encoding="utf-8") as handle:
            for a, b in zip(y, yhat):
                handle.write(f"{a}\t{b}\n")
        return rel

    records = [TrajectoryStep(step=0, snapshot=write_snapshot(0))]
    for t in range(1, config.steps + 1):
        p, q = correct[t - 1], corrupt[t - 1]
        for i in range(config.n):
            if yhat[i] != y[i]:
                if rng.random() < p:
                    yhat[i] = y[i]
            elif rng.random() < q:
                yhat[i] = 1 - y[i]
        records.append(TrajectoryStep(step=t, snapshot=write_snapshot(t)))
    trajectory_path = out_dir / "trajectory.jsonl"
    write_trajectory(records, trajectory_path)
    return trajectory_path
