"""Readers and writers for the on-disk formats.

All text formats are UTF-8. Blank lines and lines starting with ``#`` are
ignored in label files. Parse failures raise with the file path and
1-based line number.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import IO, Iterable

from .binary import BinaryPredictionSet
from .bleu import BleuCorpus
from .errors import MetricDomainError
from .multiclass import (
    PADDING_LABEL,
    MultiClassSet,
    TaggedSentence,
    TaggedSentenceBatch,
)


def _data_lines(path: Path) -> Iterable[tuple[int, str]]:
    """(line number, stripped content) for lines that carry data."""
    with path.open(encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            yield lineno, line


def read_binary_labels(path: str | Path) -> BinaryPredictionSet:
    """Binary label file: one ``y<TAB>yhat`` record per line, each field 0 or 1."""
    path = Path(path)
    y: list[int] = []
    yhat: list[int] = []
    for lineno, line in _data_lines(path):
        fields = line.split("\t")
        if len(fields) != 2 or any(f not in ("0", "1") for f in fields):
            raise MetricDomainError(
                f"{path}:{lineno}: expected two tab-separated 0/1 fields, got {line!r}"
            )
        y.append(int(fields[0]))
        yhat.append(int(fields[1]))
    if not y:
        raise MetricDomainError(f"{path}: no samples found")
    return BinaryPredictionSet(y, yhat)


def _parse_prob_row(text: str, path: Path, lineno: int) -> list[float]:
    try:
        return [float(x) for x in text.split(",")]
    except ValueError:
        raise MetricDomainError(
            f"{path}:{lineno}: malformed probability row {text!r}"
        ) from None


def read_multiclass(path: str | Path, k_classes: int | None = None) -> MultiClassSet:
    """Multiclass file: ``label<TAB>decision`` or ``label<TAB>p_1,...,p_K`` per line.

    The two record shapes cannot be mixed within one file. For the decision
    shape the class count is inferred from the largest index seen unless
    ``k_classes`` is given.
    """
    path = Path(path)
    labels: list[int] = []
    decisions: list[int] = []
    probs: list[list[float]] = []
    kind: str | None = None
    for lineno, line in _data_lines(path):
        fields = line.split("\t")
        if len(fields) != 2:
            raise MetricDomainError(
                f"{path}:{lineno}: expected two tab-separated fields, got {line!r}"
            )
        this_kind = "probs" if "," in fields[1] else "decisions"
        if kind is None:
            kind = this_kind
        elif kind != this_kind:
            raise MetricDomainError(
                f"{path}:{lineno}: mixed decision and probability records in one file"
            )
        try:
            labels.append(int(fields[0]))
        except ValueError:
            raise MetricDomainError(
                f"{path}:{lineno}: malformed label index {fields[0]!r}"
            ) from None
        if this_kind == "probs":
            probs.append(_parse_prob_row(fields[1], path, lineno))
        else:
            try:
                decisions.append(int(fields[1]))
            except ValueError:
                raise MetricDomainError(
                    f"{path}:{lineno}: malformed decision index {fields[1]!r}"
                ) from None
    if not labels:
        raise MetricDomainError(f"{path}: no samples found")
    if kind == "probs":
        widths = {len(row) for row in probs}
        if len(widths) != 1:
            raise MetricDomainError(f"{path}: probability rows differ in width")
        k = k_classes if k_classes is not None else widths.pop()
        return MultiClassSet.from_indices(labels, k, probs=probs)
    k = k_classes if k_classes is not None else max(2, max(labels + decisions) + 1)
    return MultiClassSet.from_indices(labels, k, decisions=decisions)


def read_ner_batch(path: str | Path, k_classes: int | None = None) -> TaggedSentenceBatch:
    """Tagged batch file: ``sentence_id<TAB>label<TAB>p_1,...,p_K`` per token,
    sentences separated by blank lines, padding declared by label -1."""
    path = Path(path)
    sentences: list[TaggedSentence] = []
    cur_labels: list[int] = []
    cur_probs: list[list[float]] = []

    def flush():
        if cur_labels:
            sentences.append(TaggedSentence(cur_labels, cur_probs))
            cur_labels.clear()
            cur_probs.clear()

    with path.open(encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, 1):
            line = raw.strip()
            if line.startswith("#"):
                continue
            if not line:
                flush()
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise MetricDomainError(
                    f"{path}:{lineno}: expected three tab-separated fields, got {line!r}"
                )
            try:
                label = int(fields[1])
            except ValueError:
                raise MetricDomainError(
                    f"{path}:{lineno}: malformed label index {fields[1]!r}"
                ) from None
            cur_labels.append(label)
            cur_probs.append(_parse_prob_row(fields[2], path, lineno))
    flush()
    if not sentences:
        raise MetricDomainError(f"{path}: no sentences found")
    widths = {len(row) for sent in sentences for row in sent.probs}
    if len(widths) != 1:
        raise MetricDomainError(f"{path}: probability rows differ in width")
    k = k_classes if k_classes is not None else widths.pop()
    claimed = {
        lab for sent in sentences for lab in sent.labels if lab != PADDING_LABEL
    }
    if claimed and max(claimed) >= k:
        raise MetricDomainError(
            f"{path}: label index {max(claimed)} outside 0..{k - 1}"
        )
    return TaggedSentenceBatch(tuple(sentences), k)


def read_token_lines(path: str | Path) -> list[tuple[str, ...]]:
    """One pre-tokenized sentence per line, tokens separated by whitespace."""
    path = Path(path)
    with path.open(encoding="utf-8") as handle:
        return [tuple(line.split()) for line in handle.read().splitlines()]


def read_corpus(hyp_path: str | Path, ref_path: str | Path) -> BleuCorpus:
    """Line-aligned hypothesis and reference files."""
    hyps = read_token_lines(hyp_path)
    refs = read_token_lines(ref_path)
    if len(hyps) != len(refs):
        raise MetricDomainError(
            f"line counts differ: {hyp_path} has {len(hyps)}, {ref_path} has {len(refs)}"
        )
    return BleuCorpus.from_pairs(zip(hyps, refs))


def write_sentence_stats_csv(corpus: BleuCorpus, out: IO[str]) -> None:
    """Per-sentence statistics as CSV: sentence_id, H1..H4, L1..L4, M1."""
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(
        ["sentence_id", "H1", "H2", "H3", "H4", "L1", "L2", "L3", "L4", "M1"]
    )
    for i, stats in enumerate(corpus.stats):
        writer.writerow([i, *stats.matched, *stats.total, stats.ref_len])
