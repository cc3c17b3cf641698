"""Multi-class macro-F1 in both forms, the soft Dice loss, and the two
sequence-tagging Dice variants with an explicit padding policy.

The macro-F1 of a classifier is the per-class overlap coefficient averaged
over classes; its sample-averaged conjugate evaluates the smoothed singleton
score cell by cell. The soft Dice loss replaces hard decisions with
probability rows and squares the terms in the denominator.

For sequence tagging there are two ways to pool token probabilities: per
sentence (one ratio per sentence and class) or per token (one ratio per
cell). The per-token variant is sensitive to padding tokens unless they are
masked out; both behaviours are available because the unmasked one is a real
failure mode worth reproducing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .binary import BinaryPredictionSet, dsc_aggregate, precision_aggregate, recall_aggregate
from .errors import MetricDomainError

# Probability rows must sum to one within this tolerance at ingestion.
PROB_ROW_TOLERANCE = 1e-9

# Label index reserved for padding positions in tagged batches.
PADDING_LABEL = -1


def _one_hot(indices: Sequence[int], k: int) -> np.ndarray:
    rows = np.zeros((len(indices), k), dtype=np.int64)
    for i, c in enumerate(indices):
        if not 0 <= c < k:
            raise MetricDomainError(f"sample {i}: class index {c} outside 0..{k - 1}")
        rows[i, c] = 1
    return rows


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class MultiClassSet:
    """One-hot labels with optional hard decisions and/or probability rows."""

    labels: np.ndarray
    decisions: np.ndarray | None = None
    probs: np.ndarray | None = None

    def __post_init__(self):
        labels = _freeze(np.array(self.labels, dtype=np.int64))
        object.__setattr__(self, "labels", labels)
        if labels.ndim != 2 or labels.shape[1] < 2:
            raise MetricDomainError("labels must be an (n, K) one-hot matrix with K >= 2")
        if labels.shape[0] < 1:
            raise MetricDomainError("empty sample set")
        self._check_one_hot(labels, "label")
        if self.decisions is not None:
            decisions = _freeze(np.array(self.decisions, dtype=np.int64))
            object.__setattr__(self, "decisions", decisions)
            if decisions.shape != labels.shape:
                raise MetricDomainError("decisions shape differs from labels shape")
            self._check_one_hot(decisions, "decision")
        if self.probs is not None:
            probs = _freeze(np.array(self.probs, dtype=np.float64))
            object.__setattr__(self, "probs", probs)
            if probs.shape != labels.shape:
                raise MetricDomainError("probability shape differs from labels shape")
            if np.any(probs < 0) or np.any(probs > 1):
                raise MetricDomainError("probability entries must lie in [0, 1]")
            bad = np.nonzero(np.abs(probs.sum(axis=1) - 1.0) > PROB_ROW_TOLERANCE)[0]
            if bad.size:
                raise MetricDomainError(
                    f"sample {bad[0]}: probability row sums to {probs[bad[0]].sum()!r}, not 1"
                )

    @staticmethod
    def _check_one_hot(rows: np.ndarray, kind: str) -> None:
        if not np.isin(rows, (0, 1)).all():
            raise MetricDomainError(f"{kind} rows must contain only 0 and 1")
        bad = np.nonzero(rows.sum(axis=1) != 1)[0]
        if bad.size:
            raise MetricDomainError(f"sample {bad[0]}: {kind} row does not sum to exactly 1")

    @classmethod
    def from_indices(
        cls,
        labels: Sequence[int],
        k_classes: int,
        decisions: Sequence[int] | None = None,
        probs: Sequence[Sequence[float]] | None = None,
    ) -> "MultiClassSet":
        return cls(
            labels=_one_hot(labels, k_classes),
            decisions=None if decisions is None else _one_hot(decisions, k_classes),
            probs=None if probs is None else np.asarray(probs, dtype=np.float64),
        )

    @property
    def n(self) -> int:
        return self.labels.shape[0]

    @property
    def k_classes(self) -> int:
        return self.labels.shape[1]


def hardmax(row: Sequence[float]) -> np.ndarray:
    """One-hot row at the arg-max position; ties broken toward the lowest index."""
    values = np.asarray(row, dtype=np.float64)
    if values.size == 0:
        raise MetricDomainError("cannot take hardmax of an empty row")
    out = np.zeros(values.shape, dtype=np.int64)
    out[int(np.argmax(values))] = 1
    return out


def with_hardmax_decisions(s: MultiClassSet) -> MultiClassSet:
    """Fill in missing hard decisions from the probability rows."""
    if s.decisions is not None:
        return s
    if s.probs is None:
        raise MetricDomainError("set has neither decisions nor probabilities")
    decisions = np.vstack([hardmax(row) for row in s.probs])
    return MultiClassSet(labels=s.labels, decisions=decisions, probs=s.probs)


def _class_column(s: MultiClassSet, k: int) -> BinaryPredictionSet:
    if s.decisions is None:
        raise MetricDomainError("hard decisions required for per-class metrics")
    if not 0 <= k < s.k_classes:
        raise MetricDomainError(f"class index {k} outside 0..{s.k_classes - 1}")
    return BinaryPredictionSet(s.labels[:, k].tolist(), s.decisions[:, k].tolist())


def per_class_dsc(s: MultiClassSet, k: int, gamma: float = 0.0) -> float:
    """Overlap coefficient of class k's indicator columns."""
    return dsc_aggregate(_class_column(s, k), gamma)


def per_class_precision(s: MultiClassSet, k: int, gamma: float = 0.0) -> float:
    return precision_aggregate(_class_column(s, k), gamma)


def per_class_recall(s: MultiClassSet, k: int, gamma: float = 0.0) -> float:
    return recall_aggregate(_class_column(s, k), gamma)


def macro_f1_aggregate(s: MultiClassSet, gamma: float = 0.0) -> float:
    """Unweighted mean of the per-class overlap coefficients.

    A class absent from both labels and decisions contributes gamma/gamma = 1
    for nonzero gamma; at gamma=0 its ratio is undefined and the error
    propagates.
    """
    return sum(per_class_dsc(s, k, gamma) for k in range(s.k_classes)) / s.k_classes


def macro_f1_average(s: MultiClassSet, gamma: float) -> float:
    """Cell-wise smoothed singleton score, averaged over samples and classes."""
    if s.decisions is None:
        raise MetricDomainError("hard decisions required for the averaged macro-F1")
    y = s.labels
    yh = s.decisions
    denom = (gamma + y) + yh
    zero = np.nonzero(denom == 0)
    if zero[0].size:
        i, k = int(zero[0][0]), int(zero[1][0])
        raise MetricDomainError(
            f"cell (sample {i}, class {k}): averaged macro-F1 undefined at gamma={gamma} "
            f"for (y, yhat)=({y[i, k]}, {yh[i, k]})"
        )
    cells = (gamma + 2 * y * yh) / denom
    return float(cells.sum()) / (s.k_classes * s.n)


def dice_loss(s: MultiClassSet, gamma: float = 1.0) -> float:
    """One minus the soft squared-denominator singleton score, averaged cell-wise.

    Uses probability rows in place of hard decisions; with one-hot
    probabilities this equals 1 - macro_f1_average exactly, since squaring
    is idempotent on 0/1.
    """
    if s.probs is None:
        raise MetricDomainError("probability rows required for the soft loss")
    y = s.labels
    p = s.probs
    denom = (gamma + y * y) + p * p
    zero = np.nonzero(denom == 0)
    if zero[0].size:
        i, k = int(zero[0][0]), int(zero[1][0])
        raise MetricDomainError(
            f"cell (sample {i}, class {k}): soft loss undefined at gamma={gamma} "
            f"for (y, p)=({y[i, k]}, {p[i, k]})"
        )
    cells = (gamma + 2 * y * p) / denom
    return 1.0 - float(cells.sum()) / (s.k_classes * s.n)


@dataclass(frozen=True)
class TaggedSentence:
    """Per-token label indices and probability rows for one sentence.

    Padding positions carry the reserved label index; their probability rows
    are whatever the producer emitted (all-zero for a clean pipeline).
    """

    labels: tuple[int, ...]
    probs: tuple[tuple[float, ...], ...]

    def __init__(self, labels: Sequence[int], probs: Sequence[Sequence[float]]):
        object.__setattr__(self, "labels", tuple(int(v) for v in labels))
        object.__setattr__(self, "probs", tuple(tuple(float(x) for x in row) for row in probs))
        if len(self.labels) != len(self.probs):
            raise MetricDomainError("per-token labels and probability rows differ in length")
        if not self.labels:
            raise MetricDomainError("empty sentence")

    def __len__(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class TaggedSentenceBatch:
    """A batch of tagged sentences over a fixed class inventory."""

    sentences: tuple[TaggedSentence, ...]
    k_classes: int

    def __post_init__(self):
        object.__setattr__(self, "sentences", tuple(self.sentences))
        if not self.sentences:
            raise MetricDomainError("empty batch")
        if self.k_classes < 2:
            raise MetricDomainError("k_classes must be at least 2")
        for si, sent in enumerate(self.sentences):
            for ti, (lab, row) in enumerate(zip(sent.labels, sent.probs)):
                if len(row) != self.k_classes:
                    raise MetricDomainError(
                        f"sentence {si}, token {ti}: probability row has "
                        f"{len(row)} entries, expected {self.k_classes}"
                    )
                if lab != PADDING_LABEL and not 0 <= lab < self.k_classes:
                    raise MetricDomainError(
                        f"sentence {si}, token {ti}: label index {lab} outside "
                        f"0..{self.k_classes - 1} (padding is {PADDING_LABEL})"
                    )
                if any(not 0.0 <= x <= 1.0 for x in row):
                    raise MetricDomainError(
                        f"sentence {si}, token {ti}: probabilities must lie in [0, 1]"
                    )


def _sentence_tokens(sent: TaggedSentence, mask_padding: bool):
    for lab, row in zip(sent.labels, sent.probs):
        if mask_padding and lab == PADDING_LABEL:
            continue
        yield lab, row


def ner_dice_sentence(batch: TaggedSentenceBatch, gamma: float = 1.0,
                      mask_padding: bool = False) -> float:
    """Sentence-pooled soft score: token sums feed one ratio per (sentence, class).

    With masking off, padding tokens contribute their squared probabilities
    to the pooled denominators, exactly like extra negative examples.
    """
    total = 0.0
    for si, sent in enumerate(batch.sentences):
        tokens = list(_sentence_tokens(sent, mask_padding))
        for k in range(batch.k_classes):
            num = gamma + sum(2.0 * row[k] * (lab == k) for lab, row in tokens)
            den = gamma + sum(row[k] * row[k] + (lab == k) for lab, row in tokens)
            if den == 0:
                raise MetricDomainError(
                    f"sentence {si}, class {k}: pooled ratio undefined at gamma={gamma}"
                )
            total += num / den
    return total / (batch.k_classes * len(batch.sentences))


def ner_dice_token(batch: TaggedSentenceBatch, gamma: float = 1.0,
                   mask_padding: bool = False) -> float:
    """Token-level soft score: one ratio per (token, class) cell.

    With ``mask_padding`` the padded cells are skipped and the divisor counts
    only real tokens; without it every padding token is scored as a negative
    example, which depresses the value whenever its probability row is
    nonzero.
    """
    total = 0.0
    counted = 0
    for si, sent in enumerate(batch.sentences):
        for lab, row in _sentence_tokens(sent, mask_padding):
            counted += 1
            for k in range(batch.k_classes):
                hit = 1 if lab == k else 0
                den = gamma + row[k] * row[k] + hit
                if den == 0:
                    raise MetricDomainError(
                        f"sentence {si}, class {k}: token cell undefined at gamma={gamma}"
                    )
                total += (gamma + 2.0 * row[k] * hit) / den
    if counted == 0:
        raise MetricDomainError("no unmasked tokens in batch")
    return total / (batch.k_classes * counted)
