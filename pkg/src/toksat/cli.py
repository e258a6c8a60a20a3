"""Command-line interface.

Subcommands mirror the analysis stages: ``validate``, ``discover``,
``fit``, ``zipf``, ``granularity``, ``stats``, ``report`` (full
pipeline), and ``synth`` (deterministic synthetic-log generator).

Exit codes: 0 success, 1 input error (bad files or bad usage), 2 when no
language survives input handling.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from typing import Sequence

from .discovery import (
    DegenerateTrajectory,
    EmptyWindowSeries,
    accumulate_discovery,
    stagnation_check,
    token_frequencies,
)
from .granularity import (
    AllTokensEmpty,
    EmptyReference,
    EmptyTable,
    aggregate_cer,
    load_references_file,
    weighted_mean_token_length,
)
from .logmodel import (
    CandidateRecord,
    CheckpointGrid,
    DuplicateCandidateId,
    KMismatch,
    LanguageMeta,
    LogFormatError,
    MetaFormatError,
    UnsortedCandidates,
    assign_checkpoints,
    meta_to_csv,
    parse_log_file,
    validate_record,
    write_log,
)
from .report import (
    NoLanguagesIncluded,
    PipelineConfig,
    emit_report,
    hypothesis_text,
    run_pipeline,
    stats_to_csv,
)
from .satfit import FitError, fit_saturation
from .simulate import Splitmix64, SynthSpec, derive_seed, synth_candidate_log
from .zipf import DegenerateRanks, fit_zipf, fit_zipf_mandelbrot, rank_frequencies, select_model_aic

log = logging.getLogger(__name__)


class _Parser(argparse.ArgumentParser):
    # Usage mistakes are input errors; keep exit code 2 reserved for the
    # no-languages outcome.
    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_log_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--logs", nargs="+", action="extend", required=True, metavar="PATH",
                   help="candidate-log JSONL files")


def _add_grid_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--step-min", type=float, default=10.0, help="checkpoint spacing in minutes")
    p.add_argument("--max-min", type=float, default=120.0, help="last checkpoint in minutes")


def _add_horizon_flag(p: argparse.ArgumentParser) -> None:
    p.add_argument("--horizon-min", type=float, default=120.0,
                   help="analysis horizon in minutes (must lie on the grid)")


def _add_cer_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--refs", metavar="TSV", help="utt_id<TAB>reference_text transcript file")
    p.add_argument("--cer-threshold", type=float, default=0.30,
                   help="inclusion requires CER strictly below this")
    p.add_argument("--cer-horizon-min", type=float, default=10.0,
                   help="window used for the CER screen, in minutes")


def _add_pipeline_flags(p: argparse.ArgumentParser) -> None:
    _add_log_flags(p)
    p.add_argument("--meta", required=True, metavar="CSV",
                   help="language,script,train_hours metadata file")
    _add_cer_flags(p)
    p.add_argument("--k", type=int, default=50, help="expected candidate-list size")
    _add_grid_flags(p)
    _add_horizon_flag(p)
    p.add_argument("--exclude-language", nargs="+", action="extend", default=[],
                   metavar="CODE", help="language codes to drop before analysis")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="toksat", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, metavar="COMMAND")

    p = sub.add_parser("validate", help="check log structure and report diagnostics")
    _add_log_flags(p)
    p.add_argument("--k", type=int, default=50, help="expected candidate-list size")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("discover", help="per-language discovery trajectories")
    _add_log_flags(p)
    _add_grid_flags(p)
    p.add_argument("--out", metavar="DIR", help="write discovery.csv here instead of stdout")
    p.set_defaults(func=cmd_discover)

    p = sub.add_parser("fit", help="per-language saturation fits")
    _add_log_flags(p)
    _add_grid_flags(p)
    p.add_argument("--out", metavar="DIR", help="write fits.csv here instead of stdout")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("zipf", help="per-language rank-frequency fits at the horizon")
    _add_log_flags(p)
    _add_grid_flags(p)
    _add_horizon_flag(p)
    p.add_argument("--out", metavar="DIR", help="write zipf.csv here instead of stdout")
    p.set_defaults(func=cmd_zipf)

    p = sub.add_parser("granularity", help="token lengths and CER screen")
    _add_log_flags(p)
    _add_grid_flags(p)
    _add_horizon_flag(p)
    _add_cer_flags(p)
    p.add_argument("--out", metavar="DIR", help="write granularity.csv here instead of stdout")
    p.set_defaults(func=cmd_granularity)

    p = sub.add_parser("stats", help="cross-language statistics block")
    _add_pipeline_flags(p)
    p.add_argument("--out", metavar="DIR", help="write stats files here instead of stdout")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("report", help="full pipeline: summaries, statistics, figures")
    _add_pipeline_flags(p)
    p.add_argument("--out", required=True, metavar="DIR", help="output directory")
    p.add_argument("--format", choices=("csv", "json", "svg"), action="append",
                   help="artifact kinds to emit (repeatable; default all)")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("synth", help="generate a deterministic synthetic corpus")
    p.add_argument("--seed", type=lambda v: int(v, 0), default=0, help="64-bit generator seed")
    p.add_argument("--out", required=True, metavar="DIR", help="output directory")
    p.add_argument("--languages", type=int, default=3, help="number of synthetic languages")
    p.add_argument("--minutes", type=float, default=120.0, help="audio per language, minutes")
    p.add_argument("--k", type=int, default=50, help="candidate-list size")
    p.set_defaults(func=cmd_synth)

    return parser


# --- helpers ----------------------------------------------------------------


def _load_records(paths: Sequence[str]) -> dict[str, list[CandidateRecord]]:
    groups: dict[str, list[CandidateRecord]] = {}
    for path in paths:
        for record in parse_log_file(path):
            groups.setdefault(record.language, []).append(record)
    return groups


def _emit_csv(rows: list[list[str]], header: list[str], out_dir: str | None, name: str) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        path = os.path.join(out_dir, name)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(buf.getvalue())
        print(path)
    else:
        sys.stdout.write(buf.getvalue())


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _describe_diag(diag) -> str:
    if isinstance(diag, KMismatch):
        return f"KMismatch: step {diag.step} has {diag.found} candidates"
    if isinstance(diag, UnsortedCandidates):
        return f"UnsortedCandidates: step {diag.step} logprobs are not non-increasing"
    if isinstance(diag, DuplicateCandidateId):
        return f"DuplicateCandidateId: step {diag.step} repeats token {diag.token_id}"
    return repr(diag)


# --- subcommands ------------------------------------------------------------


def cmd_validate(args: argparse.Namespace) -> int:
    n_records = 0
    n_diags = 0
    for path in args.logs:
        for record in parse_log_file(path):
            n_records += 1
            for diag in validate_record(record, expected_k=args.k):
                n_diags += 1
                print(f"{record.utt_id}\t{_describe_diag(diag)}")
    print(f"{n_records} records, {n_diags} diagnostics")
    return 0


def cmd_discover(args: argparse.Namespace) -> int:
    groups = _load_records(args.logs)
    grid = CheckpointGrid(step_minutes=args.step_min, max_minutes=args.max_min)
    rows: list[list[str]] = []
    for language in sorted(groups):
        windows = assign_checkpoints(groups[language], grid)
        try:
            trajectory = accumulate_discovery(groups[language], windows, language=language)
        except EmptyWindowSeries:
            log.warning("%s: no utterance fits in any checkpoint window", language)
            continue
        for minute, count in zip(trajectory.checkpoints, trajectory.counts):
            rows.append([language, _fmt(minute), str(count)])
    _emit_csv(rows, ["language", "checkpoint_min", "unique_tokens"], args.out, "discovery.csv")
    return 0


def cmd_fit(args: argparse.Namespace) -> int:
    groups = _load_records(args.logs)
    grid = CheckpointGrid(step_minutes=args.step_min, max_minutes=args.max_min)
    header = ["language", "A", "k", "B", "t90_minutes", "r_squared", "rss",
              "iterations", "included_growth", "error"]
    rows: list[list[str]] = []
    for language in sorted(groups):
        windows = assign_checkpoints(groups[language], grid)
        try:
            trajectory = accumulate_discovery(groups[language], windows, language=language)
        except EmptyWindowSeries:
            rows.append([language] + [""] * 8 + ["EmptyWindowSeries"])
            continue
        try:
            included = _fmt(stagnation_check(trajectory).included)
        except DegenerateTrajectory:
            included = ""
        try:
            fit = fit_saturation(trajectory)
        except FitError as exc:
            rows.append([language] + [""] * 7 + [included, type(exc).__name__])
            continue
        rows.append([
            language, _fmt(fit.A), _fmt(fit.k), _fmt(fit.B), _fmt(fit.t90_minutes),
            _fmt(fit.r_squared), _fmt(fit.rss), str(fit.iterations), included, "",
        ])
    _emit_csv(rows, header, args.out, "fits.csv")
    return 0


def cmd_zipf(args: argparse.Namespace) -> int:
    groups = _load_records(args.logs)
    grid = CheckpointGrid(step_minutes=args.step_min, max_minutes=args.max_min)
    header = ["language", "n_points", "zipf_alpha", "zipf_aic", "zm_alpha", "zm_beta",
              "zm_aic", "chosen_model", "delta_aic", "error"]
    rows: list[list[str]] = []
    for language in sorted(groups):
        windows = assign_checkpoints(groups[language], grid)
        usage = token_frequencies(groups[language], args.horizon_min, windows, language=language)
        if not usage.entries:
            rows.append([language, "0"] + [""] * 7 + ["EmptyTable"])
            continue
        rf = rank_frequencies(usage)
        try:
            plain = fit_zipf(rf)
            shifted = fit_zipf_mandelbrot(rf)
        except DegenerateRanks as exc:
            rows.append([language, str(len(rf.ranks))] + [""] * 7 + [type(exc).__name__])
            continue
        chosen, delta = select_model_aic(plain, shifted)
        rows.append([
            language, str(plain.n_points), _fmt(plain.alpha), _fmt(plain.aic),
            _fmt(shifted.alpha), _fmt(shifted.beta), _fmt(shifted.aic),
            chosen, _fmt(delta), "",
        ])
    _emit_csv(rows, header, args.out, "zipf.csv")
    return 0


def cmd_granularity(args: argparse.Namespace) -> int:
    groups = _load_records(args.logs)
    grid = CheckpointGrid(step_minutes=args.step_min, max_minutes=args.max_min)
    refs = load_references_file(args.refs) if args.refs else None
    header = ["language", "mean_token_length", "total_weight", "cer", "edit_ops",
              "ref_chars", "included_cer", "error"]
    rows: list[list[str]] = []
    for language in sorted(groups):
        windows = assign_checkpoints(groups[language], grid)
        usage = token_frequencies(groups[language], args.horizon_min, windows, language=language)
        mean_length = total_weight = None
        error = ""
        try:
            g = weighted_mean_token_length(usage)
            mean_length, total_weight = g.mean_length, g.total_weight
        except (EmptyTable, AllTokensEmpty) as exc:
            error = type(exc).__name__
        cer = ops = ref_chars = None
        included = True
        if refs is not None:
            if args.cer_horizon_min not in windows:
                raise ValueError(f"CER horizon {args.cer_horizon_min} min is not on the grid")
            members = windows[args.cer_horizon_min]
            pairs = [(refs[r.utt_id], hypothesis_text(r)) for r in groups[language]
                     if r.utt_id in members and r.utt_id in refs]
            if pairs:
                try:
                    res = aggregate_cer(pairs, threshold=args.cer_threshold, language=language)
                    cer, ops, ref_chars, included = res.cer, res.edit_ops, res.ref_chars, res.included
                except EmptyReference as exc:
                    error = error or type(exc).__name__
        rows.append([
            language, _fmt(mean_length), _fmt(total_weight), _fmt(cer), _fmt(ops),
            _fmt(ref_chars), _fmt(included), error,
        ])
    _emit_csv(rows, header, args.out, "granularity.csv")
    return 0


def _pipeline_config(args: argparse.Namespace) -> PipelineConfig:
    return PipelineConfig(
        k=args.k,
        step_minutes=args.step_min,
        max_minutes=args.max_min,
        horizon_minutes=args.horizon_min,
        cer_horizon_minutes=args.cer_horizon_min,
        cer_threshold=args.cer_threshold,
        exclude_languages=tuple(args.exclude_language),
    )


def cmd_stats(args: argparse.Namespace) -> int:
    result = run_pipeline(args.logs, args.meta, args.refs, _pipeline_config(args))
    if args.format == "json":
        text = json.dumps(result.stats, ensure_ascii=False, indent=2) + "\n"
        name = "stats.json"
    else:
        text = stats_to_csv(result.stats)
        name = "stats.csv"
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        path = os.path.join(args.out, name)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        print(path)
    else:
        sys.stdout.write(text)
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    result = run_pipeline(args.logs, args.meta, args.refs, _pipeline_config(args))
    formats = tuple(args.format) if args.format else ("csv", "json", "svg")
    for path in emit_report(result, args.out, formats):
        print(path)
    return 0


_SYNTH_SCRIPTS = ("Latin", "Cyrillic", "Arabic", "Devanagari", "CJ")


def cmd_synth(args: argparse.Namespace) -> int:
    if args.languages < 1:
        raise ValueError("--languages must be at least 1")
    os.makedirs(args.out, exist_ok=True)
    records = []
    metas: dict[str, LanguageMeta] = {}
    refs_lines: list[str] = []
    for i in range(args.languages):
        rng = Splitmix64(derive_seed(args.seed, 10_000 + i))
        spec = SynthSpec(
            seed=derive_seed(args.seed, 20_000 + i),
            A=5_000.0 + rng.uniform() * 25_000.0,
            k=0.012 + rng.uniform() * 0.03,
            B=200.0 + rng.uniform() * 600.0,
            alpha=1.5 + rng.uniform() * 0.4,
            beta=4.0 + rng.uniform() * 14.0,
            vocab_size=1_200 + int(rng.uniform() * 800),
            steps_per_utterance=3 + int(rng.uniform() * 4),
            K=args.k,
        )
        language = f"syn{i:02d}"
        synth = synth_candidate_log(spec, args.minutes, language=language)
        records.extend(synth.records)
        hours = 10.0 ** (1.0 + 2.0 * (i / max(args.languages - 1, 1)))
        metas[language] = LanguageMeta(
            language=language,
            script=_SYNTH_SCRIPTS[i % len(_SYNTH_SCRIPTS)],
            train_hours=round(hours, 3),
        )
        for record in synth.records:
            refs_lines.append(f"{record.utt_id}\t{hypothesis_text(record)}")

    logs_path = os.path.join(args.out, "logs.jsonl")
    write_log(records, logs_path)
    meta_path = os.path.join(args.out, "meta.csv")
    with open(meta_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(meta_to_csv(metas))
    refs_path = os.path.join(args.out, "refs.tsv")
    with open(refs_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(refs_lines) + "\n")
    for path in (logs_path, meta_path, refs_path):
        print(path)
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "func"):
        parser.print_help(sys.stderr)
        return 1
    try:
        return args.func(args)
    except NoLanguagesIncluded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (LogFormatError, MetaFormatError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
