"""Command-line entry point.

Subcommands: metrics, gamma, verify, bleu, analyze, simulate, reversal-find.
Every run is fully determined by its arguments (summation order is fixed and
all randomness is seeded), so identical invocations produce byte-identical
output. Expected failures exit with status 1 and a one-line diagnostic;
usage errors exit 2.

The SIMPSON_SCOPE_THREADS environment variable caps the worker threads used
by the exhaustive verification sweep.
"""

from __future__ import annotations

import argparse
import csv
import io as std_io
import os
import sys
from pathlib import Path

from . import io as scope_io
from .binary import BiasReport, bias_report
from .bleu import SMOOTHING_POLICIES, bleu_average, corpus_bleu, f_bleu
from .errors import MetricDomainError
from .gamma import IDENTITIES, solved_identity_reports, verify_identity
from .multiclass import (
    dice_loss,
    macro_f1_aggregate,
    macro_f1_average,
    ner_dice_sentence,
    ner_dice_token,
    with_hardmax_decisions,
)
from .oracle import (
    DEFAULT_GAMMA_GRID,
    exhaustive_verify,
    find_simpson_reversal,
    format_witness,
    reversal_census,
)
from .trajectory import (
    SimulationConfig,
    bias_quality_correlation,
    ingest,
    reversal_pairs,
    simulate_trajectory,
)

METRIC_CHOICES = (
    "accuracy",
    "precision",
    "recall",
    "dsc",
    "macro-f1",
    "dice-loss",
    "ner-dice-sentence",
    "ner-dice-token",
    "bleu",
)


def _threads() -> int:
    raw = os.environ.get("SIMPSON_SCOPE_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise MetricDomainError(
            f"SIMPSON_SCOPE_THREADS must be an integer, got {raw!r}"
        ) from None


def _write_out(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _gamma_grid(raw: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in raw.split(","))
    except ValueError:
        raise MetricDomainError(f"malformed gamma grid {raw!r}") from None


def _rate(raw: str) -> float | tuple[float, ...]:
    try:
        values = tuple(float(x) for x in raw.split(","))
    except ValueError:
        raise MetricDomainError(f"malformed rate {raw!r}") from None
    return values[0] if len(values) == 1 else values


def _print_bias(report: BiasReport) -> None:
    print(f"F={report.aggregate!r}")
    print(f"Fbar={report.averaged!r}")
    print(f"epsilon={report.epsilon!r}")


def _cmd_metrics(args: argparse.Namespace) -> int:
    metric = args.metric
    if metric == "bleu":
        if len(args.inputs) != 2:
            raise MetricDomainError("bleu needs two inputs: hypotheses and references")
        corpus = scope_io.read_corpus(args.inputs[0], args.inputs[1])
        _print_bias(
            BiasReport(f_bleu(corpus), bleu_average(corpus, args.smoothing))
        )
        return 0
    if len(args.inputs) != 1:
        raise MetricDomainError(f"metric {metric!r} takes exactly one input file")
    path = args.inputs[0]
    if metric in ("accuracy", "precision", "recall", "dsc"):
        s = scope_io.read_binary_labels(path)
        _print_bias(bias_report(s, metric, args.gamma_agg, args.gamma_avg))
    elif metric == "macro-f1":
        mcs = with_hardmax_decisions(scope_io.read_multiclass(path))
        _print_bias(
            BiasReport(
                macro_f1_aggregate(mcs, args.gamma_agg),
                macro_f1_average(mcs, args.gamma_avg),
            )
        )
    elif metric == "dice-loss":
        mcs = scope_io.read_multiclass(path)
        print(f"value={dice_loss(mcs, args.gamma_avg)!r}")
    elif metric == "ner-dice-sentence":
        batch = scope_io.read_ner_batch(path)
        print(f"value={ner_dice_sentence(batch, args.gamma_avg, args.mask_padding)!r}")
    elif metric == "ner-dice-token":
        batch = scope_io.read_ner_batch(path)
        print(f"value={ner_dice_token(batch, args.gamma_avg, args.mask_padding)!r}")
    return 0


def _cmd_gamma(args: argparse.Namespace) -> int:
    s = scope_io.read_binary_labels(args.input)
    rows = []
    for solution, report in solved_identity_reports(s):
        status = "applicable" if solution.applicable else f"inapplicable ({solution.reason})"
        print(f"{solution.identity}: gamma={solution.gamma!r} {status}")
        if report is not None:
            rows.append(report)
    for g in _gamma_grid(args.gamma_grid):
        for identity in ("Lemma1", "T3"):
            rows.append(verify_identity(s, identity, g))
    buf = std_io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        ["identity", "n", "sum_y", "sum_yhat", "gamma", "lhs", "rhs", "residual", "holds"]
    )
    for r in rows:
        writer.writerow(
            [r.identity, s.n, s.sum_y, s.sum_yhat, repr(r.gamma), repr(r.lhs),
             repr(r.rhs), repr(r.residual), r.holds]
        )
    _write_out(buf.getvalue(), args.out)
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    if args.identity == "all":
        identities = list(IDENTITIES)
    elif args.identity == "T2":
        identities = ["T2-precision", "T2-recall"]
    else:
        identities = [args.identity]
    grid = _gamma_grid(args.gamma_grid)
    threads = _threads()
    failures = 0
    rows = []
    for identity in identities:
        result = exhaustive_verify(identity, args.n_max, grid, threads=threads)
        print(result.summary())
        failures += len(result.violations)
        rows.extend(result.violations)
    if args.out is not None:
        buf = std_io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["identity", "y", "yhat", "gamma", "lhs", "rhs"])
        for v in rows:
            writer.writerow(
                [v.identity, "".join(map(str, v.y)), "".join(map(str, v.yhat)),
                 repr(v.gamma), repr(v.lhs), repr(v.rhs)]
            )
        _write_out(buf.getvalue(), args.out)
    return 1 if failures else 0


def _cmd_bleu(args: argparse.Namespace) -> int:
    corpus = scope_io.read_corpus(args.hypotheses, args.references)
    score = corpus_bleu(corpus)
    print(f"BLEU={score.score!r}")
    if score.degenerate:
        print(f"diagnostic: zero pooled counts at n-gram orders {score.zero_orders}")
        print("F_BLEU undefined (log form needs nonzero counts)")
    else:
        aggregate = f_bleu(corpus)
        averaged = bleu_average(corpus, args.smoothing)
        print(f"F_BLEU={aggregate!r}")
        print(f"Fbar_BLEU={averaged!r}")
        print(f"epsilon={abs(aggregate - averaged)!r}")
    if args.out is not None:
        buf = std_io.StringIO()
        scope_io.write_sentence_stats_csv(corpus, buf)
        _write_out(buf.getvalue(), args.out)
    return 0


def _cmd_analyze(args: argparse.Namespace) -> int:
    series = ingest(args.trajectory, args.metric, args.gamma_agg, args.gamma_avg)
    report = reversal_pairs(series, strict=args.strict, trim_percentile=args.trim_percentile)
    print(f"steps={len(series)}")
    print(
        f"reversals={report.count}/{report.total} ratio={report.ratio!r} "
        f"strict={report.strict}"
    )
    if args.correlate:
        corr = bias_quality_correlation([(p.epsilon, p.aggregate) for p in series])
        note = f" ({corr.note})" if corr.note else ""
        print(f"pearson={corr.pearson!r} spearman={corr.spearman!r}{note}")
    buf = std_io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["t", "F", "Fbar", "epsilon", "dF", "dFbar", "reversal"])
    flagged = set(report.steps)
    prev = None
    for p in series:
        if prev is None:
            writer.writerow([p.step, repr(p.aggregate), repr(p.averaged),
                             repr(p.epsilon), "", "", ""])
        else:
            writer.writerow(
                [p.step, repr(p.aggregate), repr(p.averaged), repr(p.epsilon),
                 repr(p.aggregate - prev.aggregate), repr(p.averaged - prev.averaged),
                 int(p.step in flagged)]
            )
        prev = p
    _write_out(buf.getvalue(), args.out)
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    config = SimulationConfig(
        n=args.n,
        steps=args.steps,
        correct_rate=_rate(args.correct_rate),
        corrupt_rate=_rate(args.corrupt_rate),
        seed=args.seed,
    )
    path = simulate_trajectory(config, args.out_dir)
    print(path)
    return 0


def _cmd_reversal_find(args: argparse.Namespace) -> int:
    witness = find_simpson_reversal(
        metric=args.metric, max_tp=args.max_tp, max_fp=args.max_fp, groups=args.groups
    )
    if witness is None:
        print("no reversal witness within bounds")
        return 0
    text = format_witness(witness)
    print(text)
    if args.out is not None:
        _write_out(text + "\n", args.out)
    return 0


def _cmd_census(args: argparse.Namespace) -> int:
    report = reversal_census(
        args.n, args.metric, args.gamma_agg, args.gamma_avg,
        samples=args.samples, seed=args.seed,
    )
    print(f"pairs={report.total_pairs}")
    print(f"reversals={report.reversal_count} ratio={report.ratio!r}")
    print(f"both_zero={report.both_zero_count} skipped_sets={report.skipped_sets}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simpson-scope",
        description=(
            "Compare aggregate and sample-averaged metric forms, solve for "
            "bias-eliminating smoothing constants, and analyze training "
            "trajectories for reversal pairs."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_gammas(p: argparse.ArgumentParser) -> None:
        p.add_argument("--gamma-agg", type=float, default=0.0,
                       help="smoothing constant for the aggregate form (default 0)")
        p.add_argument("--gamma-avg", type=float, default=1.0,
                       help="smoothing constant for the averaged form (default 1)")

    p = sub.add_parser("metrics", help="aggregate/averaged values and their gap for a labeled file")
    p.add_argument("inputs", nargs="+", help="label file (two files for bleu: hyp ref)")
    p.add_argument("--metric", choices=METRIC_CHOICES, default="dsc")
    add_gammas(p)
    p.add_argument("--mask-padding", action="store_true",
                   help="exclude padding tokens from tagged-batch metrics")
    p.add_argument("--smoothing", choices=SMOOTHING_POLICIES, default="add-one",
                   help="sentence-score smoothing policy for bleu")
    p.set_defaults(func=_cmd_metrics)

    p = sub.add_parser("gamma", help="solve special smoothing constants and check identities")
    p.add_argument("input", help="binary label file")
    p.add_argument("--gamma-grid", default="1",
                   help="comma-separated constants for the closed-form identity rows")
    p.add_argument("--out", default=None, help="write the identity CSV here instead of stdout")
    p.set_defaults(func=_cmd_gamma)

    p = sub.add_parser("verify", help="exhaustively check identities over all small configurations")
    p.add_argument("--identity", choices=IDENTITIES + ("T2", "all"), default="all")
    p.add_argument("--n-max", type=int, default=5)
    p.add_argument("--gamma-grid", default=",".join(str(g) for g in DEFAULT_GAMMA_GRID))
    p.add_argument("--out", default=None, help="write violations CSV here")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("bleu", help="corpus score, log form, and sentence-averaged conjugate")
    p.add_argument("hypotheses")
    p.add_argument("references")
    p.add_argument("--smoothing", choices=SMOOTHING_POLICIES, default="add-one")
    p.add_argument("--out", default=None, help="write per-sentence stats CSV here")
    p.set_defaults(func=_cmd_bleu)

    p = sub.add_parser("analyze", help="per-step bias series and reversal pairs for a trajectory")
    p.add_argument("trajectory")
    p.add_argument("--metric", choices=("accuracy", "precision", "recall", "dsc", "macro-f1", "bleu"),
                   default="dsc")
    add_gammas(p)
    p.add_argument("--strict", action="store_true",
                   help="count only strictly opposing transitions")
    p.add_argument("--trim-percentile", type=float, default=None,
                   help="drop transitions with delta magnitude above this percentile")
    p.add_argument("--correlate", action="store_true",
                   help="also report bias-vs-aggregate correlation over the series")
    p.add_argument("--out", default=None, help="write the series CSV here instead of stdout")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("simulate", help="emit a seeded synthetic trajectory with snapshots")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--correct-rate", default="0.3",
                   help="probability a wrong prediction is fixed each step (or comma schedule)")
    p.add_argument("--corrupt-rate", default="0.1",
                   help="probability a correct prediction is broken each step (or comma schedule)")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("reversal-find", help="search for a partitioned-comparison reversal witness")
    p.add_argument("--metric", choices=("precision",), default="precision")
    p.add_argument("--max-tp", type=int, default=9)
    p.add_argument("--max-fp", type=int, default=9)
    p.add_argument("--groups", type=int, default=2)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_reversal_find)

    p = sub.add_parser("census", help="reversal frequency over all prediction-set pairs at size n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--metric", choices=("accuracy", "precision", "recall", "dsc"), default="dsc")
    add_gammas(p)
    p.add_argument("--samples", type=int, default=None,
                   help="sample count for n beyond the exhaustive bound")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=_cmd_census)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except MetricDomainError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    raise SystemExit(main())
