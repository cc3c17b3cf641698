"""Aggregate vs sample-averaged metric forms and the gap between them.

The library evaluates classification and translation metrics two ways: once
over pooled corpus counts and once as the mean of per-sample scores. It
solves for the smoothing constants that make the two coincide where such
constants exist, verifies the closed-form identities exhaustively over small
configurations, searches for classic partitioned-comparison reversals, and
analyzes training trajectories for steps where the two forms move in
opposite directions.
"""

from .binary import (
    BiasReport,
    BinaryPredictionSet,
    ContingencyCounts,
    accuracy,
    bias_report,
    contingency,
    dsc_aggregate,
    dsc_average,
    precision_aggregate,
    precision_average,
    recall_aggregate,
    recall_average,
)
from .bleu import (
    BleuCorpus,
    BleuScore,
    SentenceStats,
    bleu_average,
    corpus_bleu,
    f_bleu,
    ngram_multiset,
    sentence_bleu,
    sentence_stats,
)
from .errors import MetricDomainError
from .gamma import (
    GammaSolution,
    IdentityReport,
    gamma_precision_star,
    gamma_recall_star,
    gamma_t1,
    verify_identity,
)
from .multiclass import (
    MultiClassSet,
    TaggedSentence,
    TaggedSentenceBatch,
    dice_loss,
    hardmax,
    macro_f1_aggregate,
    macro_f1_average,
    ner_dice_sentence,
    ner_dice_token,
    per_class_dsc,
    per_class_precision,
    per_class_recall,
)
from .oracle import (
    CensusReport,
    PartitionedComparison,
    accuracy_monotone_check,
    check_reversal_witness,
    enumerate_sets,
    exhaustive_verify,
    find_simpson_reversal,
    reversal_census,
)
from .ros import RosSamplePairs, check_type1, check_type2, ros_aggregate, ros_average
from .trajectory import (
    CorrelationReport,
    ReversalReport,
    SimulationConfig,
    TrajectoryPoint,
    TrajectoryStep,
    bias_quality_correlation,
    ingest,
    reversal_pairs,
    simulate_trajectory,
)

__all__ = [
    "BiasReport",
    "BinaryPredictionSet",
    "BleuCorpus",
    "BleuScore",
    "CensusReport",
    "ContingencyCounts",
    "CorrelationReport",
    "GammaSolution",
    "IdentityReport",
    "MetricDomainError",
    "MultiClassSet",
    "PartitionedComparison",
    "ReversalReport",
    "RosSamplePairs",
    "SentenceStats",
    "SimulationConfig",
    "TaggedSentence",
    "TaggedSentenceBatch",
    "TrajectoryPoint",
    "TrajectoryStep",
    "accuracy",
    "accuracy_monotone_check",
    "bias_quality_correlation",
    "bias_report",
    "bleu_average",
    "check_reversal_witness",
    "check_type1",
    "check_type2",
    "contingency",
    "corpus_bleu",
    "dice_loss",
    "dsc_aggregate",
    "dsc_average",
    "enumerate_sets",
    "exhaustive_verify",
    "f_bleu",
    "find_simpson_reversal",
    "gamma_precision_star",
    "gamma_recall_star",
    "gamma_t1",
    "hardmax",
    "ingest",
    "macro_f1_aggregate",
    "macro_f1_average",
    "ner_dice_sentence",
    "ner_dice_token",
    "ngram_multiset",
    "per_class_dsc",
    "per_class_precision",
    "per_class_recall",
    "precision_aggregate",
    "precision_average",
    "recall_aggregate",
    "recall_average",
    "reversal_census",
    "reversal_pairs",
    "ros_aggregate",
    "ros_average",
    "sentence_bleu",
    "sentence_stats",
    "simulate_trajectory",
    "verify_identity",
]
