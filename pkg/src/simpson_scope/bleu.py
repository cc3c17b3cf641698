"""Corpus-level BLEU, its log-form decomposition, and sentence-averaged scores.

Per-sentence statistics are the clipped k-gram match counts (k = 1..4), the
hypothesis k-gram totals, and the reference length. Corpus scoring pools
these counts and takes the geometric mean of the four precision ratios times
the brevity penalty; the log form rewrites the same quantity as a sum of four
log-ratios minus a length term, so the two are related by exp(log_form + 1).

The sentence-averaged conjugate takes the arithmetic mean of per-sentence
log-form scores. Individual sentences frequently have zero higher-order
matches, so a smoothing policy decides how zero counts are handled there.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import MetricDomainError

NGRAM_ORDERS = (1, 2, 3, 4)

SMOOTHING_POLICIES = ("none", "floor", "add-one")

# Count substituted for a zero slot under the floor policy.
FLOOR_EPSILON = 0.1


def check_tokens(tokens: Sequence[str], role: str = "sentence") -> tuple[str, ...]:
    """Validate a token sequence: non-empty strings without internal whitespace."""
    out = tuple(tokens)
    for i, tok in enumerate(out):
        if not tok or any(c.isspace() for c in tok):
            raise MetricDomainError(
                f"{role} token {i} is empty or contains whitespace: {tok!r}"
            )
    return out


def ngram_multiset(tokens: Sequence[str], k: int) -> Counter:
    """All contiguous k-token windows with multiplicities."""
    if k not in NGRAM_ORDERS:
        raise MetricDomainError(f"n-gram order must be 1..4, got {k}")
    return Counter(tuple(tokens[i:i + k]) for i in range(len(tokens) - k + 1))


@dataclass(frozen=True)
class SentenceStats:
    """Clipped match counts, hypothesis totals, and reference length for one pair."""

    matched: tuple[int, int, int, int]
    total: tuple[int, int, int, int]
    ref_len: int


def sentence_stats(hyp: Sequence[str], ref: Sequence[str]) -> SentenceStats:
    """Count clipped k-gram matches: each k-gram of the hypothesis is credited
    at most as many times as it occurs in the reference."""
    hyp = check_tokens(hyp, "hypothesis")
    ref = check_tokens(ref, "reference")
    matched = []
    total = []
    for k in NGRAM_ORDERS:
        hyp_grams = ngram_multiset(hyp, k)
        ref_grams = ngram_multiset(ref, k)
        matched.append(sum(min(c, ref_grams[g]) for g, c in hyp_grams.items()))
        total.append(max(0, len(hyp) - k + 1))
    return SentenceStats(tuple(matched), tuple(total), len(ref))


@dataclass(frozen=True)
class BleuCorpus:
    """Aligned hypothesis/reference pairs with cached per-sentence statistics."""

    pairs: tuple[tuple[tuple[str, ...], tuple[str, ...]], ...]
    stats: tuple[SentenceStats, ...]

    @classmethod
    def from_pairs(
        cls, pairs: Iterable[tuple[Sequence[str], Sequence[str]]]
    ) -> "BleuCorpus":
        frozen = tuple((tuple(h), tuple(r)) for h, r in pairs)
        if not frozen:
            raise MetricDomainError("empty corpus")
        return cls(frozen, tuple(sentence_stats(h, r) for h, r in frozen))

    @property
    def n(self) -> int:
        return len(self.pairs)

    def pooled(self) -> SentenceStats:
        """Component-wise sums of the per-sentence statistics."""
        matched = tuple(sum(s.matched[i] for s in self.stats) for i in range(4))
        total = tuple(sum(s.total[i] for s in self.stats) for i in range(4))
        return SentenceStats(matched, total, sum(s.ref_len for s in self.stats))


@dataclass(frozen=True)
class BleuScore:
    """A BLEU value plus the n-gram orders (if any) whose zero counts forced it to 0."""

    score: float
    zero_orders: tuple[int, ...] = ()

    @property
    def degenerate(self) -> bool:
        return bool(self.zero_orders)


def _zero_orders(stats: SentenceStats) -> tuple[int, ...]:
    return tuple(
        k for k, m, t in zip(NGRAM_ORDERS, stats.matched, stats.total) if m == 0 or t == 0
    )


def _score_from_counts(ratios: Sequence[float], ref_len: float, total_1: float) -> float:
    gm = math.prod(ratios) ** 0.25
    return gm * min(math.exp(1.0 - ref_len / total_1), 1.0)


def corpus_bleu(corpus: BleuCorpus) -> BleuScore:
    """Pooled-count BLEU. Zero pooled counts at any order yield score 0 with
    the offending orders flagged rather than an error, matching the metric's
    conventional value."""
    pooled = corpus.pooled()
    zeros = _zero_orders(pooled)
    if zeros:
        return BleuScore(0.0, zeros)
    ratios = [m / t for m, t in zip(pooled.matched, pooled.total)]
    return BleuScore(_score_from_counts(ratios, pooled.ref_len, pooled.total[0]))


def f_bleu(corpus: BleuCorpus) -> float:
    """Log form of the pooled score: mean log precision minus the length term.

    Satisfies exp(f_bleu + 1) == corpus_bleu. Zero pooled counts are an error
    here because the log is undefined.
    """
    pooled = corpus.pooled()
    zeros = _zero_orders(pooled)
    if zeros:
        raise MetricDomainError(
            f"log-form score undefined: zero pooled counts at n-gram orders {zeros}"
        )
    logs = sum(math.log(m / t) for m, t in zip(pooled.matched, pooled.total))
    return 0.25 * logs - max(pooled.ref_len / pooled.total[0], 1.0)


def _smoothed_counts(
    stats: SentenceStats, policy: str
) -> tuple[list[tuple[float, float]], float, tuple[int, ...]]:
    """Per-order (matched, total) counts after smoothing, the total used by the
    length term, and any orders left with zero counts."""
    if policy not in SMOOTHING_POLICIES:
        raise MetricDomainError(
            f"unknown smoothing policy {policy!r}; expected one of {SMOOTHING_POLICIES}"
        )
    counts: list[tuple[float, float]] = []
    remaining: list[int] = []
    for idx, k in enumerate(NGRAM_ORDERS):
        m, t = stats.matched[idx], stats.total[idx]
        if m > 0:
            counts.append((float(m), float(t)))
        elif policy == "floor":
            counts.append((FLOOR_EPSILON, float(t) if t > 0 else FLOOR_EPSILON))
        elif policy == "add-one" and k >= 2:
            counts.append((m + 1.0, t + 1.0))
        else:
            counts.append((0.0, float(t)))
            remaining.append(k)
    total_1 = counts[0][1]
    if total_1 == 0 and 1 not in remaining:
        remaining.insert(0, 1)
    return counts, total_1, tuple(remaining)


def sentence_bleu(
    hyp: Sequence[str], ref: Sequence[str], smoothing: str = "add-one"
) -> BleuScore:
    """BLEU of a single pair from that pair's own statistics.

    Without smoothing this coincides with a one-sentence corpus score; the
    floor and add-one policies keep short or zero-match sentences above 0.
    """
    stats = sentence_stats(hyp, ref)
    counts, total_1, zeros = _smoothed_counts(stats, smoothing)
    if zeros:
        return BleuScore(0.0, zeros)
    ratios = [m / t for m, t in counts]
    return BleuScore(_score_from_counts(ratios, stats.ref_len, total_1))


def sentence_log_score(stats: SentenceStats, smoothing: str = "add-one") -> float:
    """Log-form score of one sentence under a smoothing policy."""
    counts, total_1, zeros = _smoothed_counts(stats, smoothing)
    if zeros:
        raise MetricDomainError(
            f"zero counts at n-gram orders {zeros} (smoothing policy {smoothing!r})"
        )
    logs = sum(math.log(m / t) for m, t in counts)
    return 0.25 * logs - max(stats.ref_len / total_1, 1.0)


def bleu_average(corpus: BleuCorpus, smoothing: str = "add-one") -> float:
    """Arithmetic mean of per-sentence log-form scores, the sentence-averaged
    conjugate of the pooled log form."""
    total = 0.0
    for i, stats in enumerate(corpus.stats):
        try:
            total += sentence_log_score(stats, smoothing)
        except MetricDomainError as e:
            raise MetricDomainError(f"sentence {i}: {e}") from None
    return total / corpus.n
