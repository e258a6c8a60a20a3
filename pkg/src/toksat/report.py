"""Per-language pipeline orchestration, cross-language statistics, reports.

The pipeline per language: nested windows -> discovery trajectory ->
stagnant-growth screen -> saturation fit -> rank-frequency fits at the
analysis horizon -> weighted token length -> CER against reference
transcripts (when provided, over the CER horizon window).  Languages that
fail the CER or growth screens stay in the outputs with their flags set
but are left out of the cross-language statistics.

Outputs are deterministic: identical inputs and configuration produce
byte-identical CSV and JSON.
"""

from __future__ import annotations

import dataclasses
import json
import logging
import math
import os
import statistics
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from . import figures
from .discovery import (
    DegenerateTrajectory,
    DiscoveryTrajectory,
    EmptyWindowSeries,
    TokenUsageTable,
    accumulate_discovery,
    stagnation_check,
    token_frequencies,
)
from .granularity import (
    AllTokensEmpty,
    CerResult,
    EmptyReference,
    EmptyTable,
    aggregate_cer,
    weighted_mean_token_length,
)
from .logmodel import (
    CandidateRecord,
    CheckpointGrid,
    DuplicateUttId,
    LanguageMeta,
    assign_checkpoints,
    load_language_meta_file,
    parse_log_file,
)
from .granularity import load_references_file
from .satfit import FitError, SaturationFit, absolute_coverage_at, coverage_at, eval_saturation, fit_saturation
from .stats import (
    LengthMismatch,
    RankDeficient,
    RegressionResult,
    TooFewObservations,
    ZeroVariance,
    ols_regression,
    pearson_corr,
    script_dummies,
)
from .zipf import DegenerateRanks, RankFrequency, fit_zipf, fit_zipf_mandelbrot, rank_frequencies, select_model_aic

log = logging.getLogger(__name__)


class NoLanguagesIncluded(RuntimeError):
    """No language survived input handling; there is nothing to report."""


@dataclass(frozen=True)
class PipelineConfig:
    k: int = 50
    step_minutes: float = 10.0
    max_minutes: float = 120.0
    horizon_minutes: float = 120.0
    cer_horizon_minutes: float = 10.0
    cer_threshold: float = 0.30
    exclude_languages: tuple[str, ...] = ()

    def grid(self) -> CheckpointGrid:
        return CheckpointGrid(step_minutes=self.step_minutes, max_minutes=self.max_minutes)

    def __post_init__(self) -> None:
        grid = self.grid()
        for name, horizon in (("horizon", self.horizon_minutes), ("cer horizon", self.cer_horizon_minutes)):
            if horizon not in grid.checkpoints():
                raise ValueError(f"{name} {horizon} min is not on the checkpoint grid")


@dataclass
class LanguageSummary:
    """One output row; field order defines the CSV column order."""

    language: str
    script: str
    train_hours: float
    tokens_discovered_at_horizon: int
    t90_minutes: float | None
    A: float | None
    k: float | None
    B: float | None
    fit_r_squared: float | None
    coverage_at_horizon: float | None
    coverage_abs_at_horizon: float | None
    zipf_alpha: float | None
    zm_alpha: float | None
    zm_beta: float | None
    chosen_model: str | None
    delta_aic: float | None
    mean_token_length: float | None
    cer: float | None
    included_cer: bool
    included_growth: bool


@dataclass
class LanguageDetail:
    """Per-language curves kept for figure rendering."""

    language: str
    script: str
    checkpoints: list[float]
    counts: list[int]
    fit: SaturationFit | None
    rank_freq: RankFrequency | None


@dataclass
class PipelineResult:
    summaries: list[LanguageSummary]
    stats: dict
    details: list[LanguageDetail]
    config: dict


def hypothesis_text(record: CandidateRecord) -> str:
    """Reconstruct the emitted hypothesis: top candidate text of each step."""
    return "".join(step.candidates[0].token_text for step in record.steps if step.candidates)


def _group_by_language(records: Iterable[CandidateRecord]) -> dict[str, list[CandidateRecord]]:
    groups: dict[str, list[CandidateRecord]] = {}
    seen: dict[str, set[str]] = {}
    for record in records:
        group = groups.setdefault(record.language, [])
        ids = seen.setdefault(record.language, set())
        if record.utt_id in ids:
            raise DuplicateUttId(record.utt_id, line_no=0)
        ids.add(record.utt_id)
        group.append(record)
    return groups


@dataclass
class _LanguageAnalysis:
    summary: LanguageSummary
    detail: LanguageDetail
    verdict_growth: bool


def _analyze_language(
    language: str,
    records: list[CandidateRecord],
    meta: LanguageMeta,
    refs: Mapping[str, str] | None,
    config: PipelineConfig,
) -> _LanguageAnalysis:
    grid = config.grid()
    windows = assign_checkpoints(records, grid)

    trajectory: DiscoveryTrajectory | None
    try:
        trajectory = accumulate_discovery(records, windows, language=language)
    except EmptyWindowSeries:
        log.warning("%s: no utterance fits in any checkpoint window", language)
        trajectory = None

    tokens_at_horizon = 0
    included_growth = False
    fit: SaturationFit | None = None
    if trajectory is not None:
        tokens_at_horizon = trajectory.count_at(config.horizon_minutes)
        try:
            included_growth = stagnation_check(trajectory).included
        except DegenerateTrajectory as exc:
            log.warning("%s: stagnation check skipped (%s)", language, exc)
        if len(trajectory.checkpoints) >= 4:
            try:
                fit = fit_saturation(trajectory)
            except FitError as exc:
                log.warning("%s: saturation fit failed (%s)", language, exc)

    usage: TokenUsageTable = token_frequencies(
        records, config.horizon_minutes, windows, language=language
    )

    rf: RankFrequency | None = None
    zipf_alpha = zm_alpha = zm_beta = delta_aic = None
    chosen_model = None
    if usage.entries:
        rf = rank_frequencies(usage)
        try:
            plain = fit_zipf(rf)
            shifted = fit_zipf_mandelbrot(rf)
            chosen_model, delta_aic = select_model_aic(plain, shifted)
            zipf_alpha = plain.alpha
            zm_alpha = shifted.alpha
            zm_beta = shifted.beta
        except DegenerateRanks as exc:
            log.warning("%s: rank-law fits skipped (%s)", language, exc)

    mean_length = None
    try:
        mean_length = weighted_mean_token_length(usage).mean_length
    except (EmptyTable, AllTokensEmpty) as exc:
        log.warning("%s: token length skipped (%s)", language, exc)

    cer_value: float | None = None
    included_cer = True
    if refs is not None:
        cer_members = windows[config.cer_horizon_minutes]
        pairs = [
            (refs[r.utt_id], hypothesis_text(r))
            for r in records
            if r.utt_id in cer_members and r.utt_id in refs
        ]
        if pairs:
            try:
                cer_result: CerResult = aggregate_cer(
                    pairs, threshold=config.cer_threshold, language=language
                )
                cer_value = cer_result.cer
                included_cer = cer_result.included
            except EmptyReference as exc:
                log.warning("%s: CER skipped (%s)", language, exc)
        else:
            log.warning(
                "%s: no reference transcripts cover the %.0f-minute window; CER filter not applied",
                language,
                config.cer_horizon_minutes,
            )

    summary = LanguageSummary(
        language=language,
        script=meta.script,
        train_hours=meta.train_hours,
        tokens_discovered_at_horizon=tokens_at_horizon,
        t90_minutes=fit.t90_minutes if fit else None,
        A=fit.A if fit else None,
        k=fit.k if fit else None,
        B=fit.B if fit else None,
        fit_r_squared=fit.r_squared if fit else None,
        coverage_at_horizon=coverage_at(fit, config.horizon_minutes) if fit else None,
        coverage_abs_at_horizon=absolute_coverage_at(fit, config.horizon_minutes) if fit else None,
        zipf_alpha=zipf_alpha,
        zm_alpha=zm_alpha,
        zm_beta=zm_beta,
        chosen_model=chosen_model,
        delta_aic=delta_aic,
        mean_token_length=mean_length,
        cer=cer_value,
        included_cer=included_cer,
        included_growth=included_growth,
    )
    detail = LanguageDetail(
        language=language,
        script=meta.script,
        checkpoints=list(trajectory.checkpoints) if trajectory else [],
        counts=list(trajectory.counts) if trajectory else [],
        fit=fit,
        rank_freq=rf,
    )
    return _LanguageAnalysis(summary=summary, detail=detail, verdict_growth=included_growth)


def run_pipeline(
    log_paths: Sequence[str],
    meta_path: str,
    transcript_path: str | None = None,
    config: PipelineConfig | None = None,
) -> PipelineResult:
    """Run the full per-language pipeline and the cross-language statistics.

    Raises :class:`NoLanguagesIncluded` when no language survives input
    handling (no logs, all languages excluded, or metadata missing for all).
    """
    config = config or PipelineConfig()
    records: list[CandidateRecord] = []
    for path in log_paths:
        records.extend(parse_log_file(path))
    groups = _group_by_language(records)
    meta = load_language_meta_file(meta_path)
    refs = load_references_file(transcript_path) if transcript_path else None

    excluded_by_flag = sorted(set(groups) & set(config.exclude_languages))
    missing_meta = sorted(lang for lang in groups if lang not in meta and lang not in excluded_by_flag)
    for lang in missing_meta:
        log.warning("MetadataMissing: language %s has no metadata row; excluded", lang)

    analyzed = sorted(lang for lang in groups if lang in meta and lang not in excluded_by_flag)
    if not analyzed:
        raise NoLanguagesIncluded(
            "no languages to analyze (empty logs, all excluded, or metadata missing)"
        )

    ref_langs = set()
    if refs:
        covered = set(refs)
        for lang in analyzed:
            if any(r.utt_id in covered for r in groups[lang]):
                ref_langs.add(lang)

    summaries: list[LanguageSummary] = []
    details: list[LanguageDetail] = []
    for lang in analyzed:
        lang_meta = meta[lang]
        if lang in ref_langs:
            lang_meta = dataclasses.replace(lang_meta, reference_text_available=True)
        analysis = _analyze_language(lang, groups[lang], lang_meta, refs, config)
        summaries.append(analysis.summary)
        details.append(analysis.detail)

    stats_block = compute_stats_block(summaries, excluded_by_flag, missing_meta)
    config_echo = {
        "k": config.k,
        "step_minutes": config.step_minutes,
        "max_minutes": config.max_minutes,
        "horizon_minutes": config.horizon_minutes,
        "cer_horizon_minutes": config.cer_horizon_minutes,
        "cer_threshold": config.cer_threshold,
        "exclude_languages": list(config.exclude_languages),
        "log_paths": list(log_paths),
    }
    return PipelineResult(summaries=summaries, stats=stats_block, details=details, config=config_echo)


# --- cross-language statistics ---------------------------------------------


def _corr(pairs: list[tuple[float, float]]) -> dict | None:
    if len(pairs) < 3:
        return None
    try:
        result = pearson_corr([p[0] for p in pairs], [p[1] for p in pairs])
    except (ZeroVariance, TooFewObservations, LengthMismatch):
        return None
    return {"r": result.r, "p": result.p_two_tailed, "n": result.n}


def _regression(columns: dict[str, list[float]], y: list[float]) -> dict | None:
    try:
        result = ols_regression(columns, y)
    except (RankDeficient, TooFewObservations, ZeroVariance, LengthMismatch, ValueError):
        return None
    return _regression_dict(result)


def _regression_dict(result: RegressionResult) -> dict:
    return {
        "coefficients": {
            name: {
                "estimate": c.estimate,
                "std_error": c.std_error,
                "t": c.t,
                "p": c.p,
            }
            for name, c in result.coefficients.items()
        },
        "r_squared": result.r_squared,
        "adj_r_squared": result.adj_r_squared,
        "f_statistic": result.f_statistic,
        "f_p": result.f_p,
        "df_model": result.df_model,
        "df_resid": result.df_resid,
    }


def _pairs(
    rows: list[LanguageSummary], x_of, y_of, scripts: set[str] | None = None
) -> list[tuple[float, float]]:
    out = []
    for s in rows:
        if scripts is not None and s.script not in scripts:
            continue
        x, y = x_of(s), y_of(s)
        if x is None or y is None:
            continue
        out.append((float(x), float(y)))
    return out


def _script_regression(
    rows: list[LanguageSummary], y_of, with_hours: bool
) -> dict | None:
    usable = [s for s in rows if y_of(s) is not None]
    if len(usable) < 3:
        return None
    columns: dict[str, list[float]] = {"intercept": [1.0] * len(usable)}
    if with_hours:
        columns["log10_train_hours"] = [math.log10(s.train_hours) for s in usable]
    dummies = script_dummies([s.script for s in usable])
    if not dummies and not with_hours:
        return None
    columns.update(dummies)
    return _regression(columns, [float(y_of(s)) for s in usable])


def compute_stats_block(
    summaries: list[LanguageSummary],
    excluded_by_flag: list[str],
    missing_meta: list[str],
) -> dict:
    """Aggregate statistics over filter-included languages."""
    included = [s for s in summaries if s.included_cer and s.included_growth]
    log_hours = lambda s: math.log10(s.train_hours)
    tokens = lambda s: s.tokens_discovered_at_horizon
    latin = {"Latin"}

    token_counts = [s.tokens_discovered_at_horizon for s in included]
    discovery = (
        {
            "mean_tokens": statistics.fmean(token_counts),
            "median_tokens": statistics.median(token_counts),
            "min_tokens": min(token_counts),
            "max_tokens": max(token_counts),
        }
        if token_counts
        else None
    )

    t90s = sorted(s.t90_minutes for s in included if s.t90_minutes is not None)
    r2s = [s.fit_r_squared for s in included if s.fit_r_squared is not None]
    coverages = [s.coverage_at_horizon for s in included if s.coverage_at_horizon is not None]
    abs_coverages = [
        s.coverage_abs_at_horizon for s in included if s.coverage_abs_at_horizon is not None
    ]
    saturation = None
    if t90s:
        saturation = {
            "median_t90_minutes": statistics.median(t90s),
            "t90_iqr_minutes": list(statistics.quantiles(t90s, n=4, method="inclusive")[0::2])
            if len(t90s) >= 2
            else [t90s[0], t90s[0]],
            "mean_r_squared": statistics.fmean(r2s),
            "min_r_squared": min(r2s),
            "mean_coverage_at_horizon": statistics.fmean(coverages),
            "mean_abs_coverage_at_horizon": statistics.fmean(abs_coverages),
            "n_fits": len(t90s),
        }

    alphas = [s.zipf_alpha for s in included if s.zipf_alpha is not None]
    betas = [s.zm_beta for s in included if s.zm_beta is not None]
    rank_law = None
    if alphas:
        rank_law = {
            "mean_zipf_alpha": statistics.fmean(alphas),
            "std_zipf_alpha": statistics.pstdev(alphas) if len(alphas) > 1 else 0.0,
            "mean_zm_beta": statistics.fmean(betas) if betas else None,
            "zm_chosen": sum(1 for s in included if s.chosen_model == "zipf_mandelbrot"),
            "n": len(alphas),
        }

    correlations = {
        "tokens_vs_log_hours": _corr(_pairs(included, log_hours, tokens)),
        "tokens_vs_log_hours_latin": _corr(_pairs(included, log_hours, tokens, latin)),
        "t90_vs_log_hours": _corr(_pairs(included, log_hours, lambda s: s.t90_minutes)),
        "t90_vs_log_hours_latin": _corr(_pairs(included, log_hours, lambda s: s.t90_minutes, latin)),
        "zipf_alpha_vs_log_hours": _corr(_pairs(included, log_hours, lambda s: s.zipf_alpha)),
        "zipf_alpha_vs_log_hours_latin": _corr(
            _pairs(included, log_hours, lambda s: s.zipf_alpha, latin)
        ),
        "mean_length_vs_log_hours_latin": _corr(
            _pairs(included, log_hours, lambda s: s.mean_token_length, latin)
        ),
    }

    length_latin = [s for s in included if s.script == "Latin" and s.mean_token_length is not None]
    length_reg = None
    if len(length_latin) >= 3:
        length_reg = _regression(
            {
                "intercept": [1.0] * len(length_latin),
                "log10_train_hours": [math.log10(s.train_hours) for s in length_latin],
            },
            [s.mean_token_length for s in length_latin],
        )

    regressions = {
        "tokens_on_script": _script_regression(included, tokens, with_hours=False),
        "tokens_on_log_hours_and_script": _script_regression(included, tokens, with_hours=True),
        "t90_on_log_hours_and_script": _script_regression(
            included, lambda s: s.t90_minutes, with_hours=True
        ),
        "mean_length_on_log_hours_latin": length_reg,
    }

    return {
        "n_languages": len(summaries),
        "n_included": len(included),
        "excluded_cer": sorted(s.language for s in summaries if not s.included_cer),
        "excluded_growth": sorted(s.language for s in summaries if not s.included_growth),
        "excluded_by_flag": list(excluded_by_flag),
        "excluded_missing_meta": list(missing_meta),
        "discovery": discovery,
        "saturation": saturation,
        "rank_law": rank_law,
        "correlations": correlations,
        "regressions": regressions,
    }


# --- serialization ----------------------------------------------------------


SUMMARY_FIELDS = [f.name for f in dataclasses.fields(LanguageSummary)]


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def summaries_to_csv(summaries: list[LanguageSummary]) -> str:
    import csv as _csv
    import io

    buf = io.StringIO()
    writer = _csv.writer(buf, lineterminator="\n")
    writer.writerow(SUMMARY_FIELDS)
    for s in summaries:
        writer.writerow([_csv_cell(getattr(s, name)) for name in SUMMARY_FIELDS])
    return buf.getvalue()


_SUMMARY_PARSERS = {
    "language": str,
    "script": str,
    "chosen_model": str,
    "train_hours": float,
    "tokens_discovered_at_horizon": int,
    "included_cer": lambda v: v == "true",
    "included_growth": lambda v: v == "true",
}


def read_summary_csv(text: str) -> list[LanguageSummary]:
    """Parse summaries_to_csv output back into equal-value summaries."""
    import csv as _csv
    import io

    reader = _csv.reader(io.StringIO(text))
    header = next(reader)
    if header != SUMMARY_FIELDS:
        raise ValueError("unexpected summary CSV header")
    out = []
    for row in reader:
        kwargs = {}
        for name, cell in zip(header, row):
            parser = _SUMMARY_PARSERS.get(name, float)
            if cell == "" and name not in ("included_cer", "included_growth"):
                kwargs[name] = None
            else:
                kwargs[name] = parser(cell)
        out.append(LanguageSummary(**kwargs))
    return out


def _sanitize(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _sanitize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_sanitize(v) for v in value]
    return value


def _flatten(prefix: str, value, rows: list[tuple[str, str]]) -> None:
    if isinstance(value, dict):
        for key, sub in value.items():
            _flatten(f"{prefix}.{key}" if prefix else str(key), sub, rows)
    elif isinstance(value, (list, tuple)):
        rows.append((prefix, ";".join(_csv_cell(_sanitize(v)) for v in value)))
    else:
        rows.append((prefix, _csv_cell(_sanitize(value))))


def stats_to_csv(stats: dict) -> str:
    import csv as _csv
    import io

    rows: list[tuple[str, str]] = []
    _flatten("", stats, rows)
    buf = io.StringIO()
    writer = _csv.writer(buf, lineterminator="\n")
    writer.writerow(["statistic", "value"])
    writer.writerows(rows)
    return buf.getvalue()


def report_to_json(result: PipelineResult) -> str:
    payload = {
        "config": result.config,
        "summaries": [_sanitize(dataclasses.asdict(s)) for s in result.summaries],
        "stats": _sanitize(result.stats),
    }
    return json.dumps(payload, ensure_ascii=False, indent=2) + "\n"


# --- figures ----------------------------------------------------------------


def _decimate_ranks(rf: RankFrequency, max_points: int = 160) -> list[tuple[float, float]]:
    n = len(rf.ranks)
    indices: list[int] = []
    i = 0
    while i < n:
        indices.append(i)
        step = max(1, int(i * 0.18))
        i += step
    if indices[-1] != n - 1:
        indices.append(n - 1)
    return [(float(rf.ranks[i]), float(rf.freqs[i])) for i in indices[:max_points]]


def render_figures(result: PipelineResult) -> dict[str, str]:
    """Render the four standard charts; returns {filename: svg_text}."""
    details = result.details
    summaries = result.summaries
    horizon = result.config["horizon_minutes"]

    by_script: dict[str, list[tuple[float, float]]] = {}
    for s in summaries:
        by_script.setdefault(s.script, []).append(
            (s.train_hours, float(s.tokens_discovered_at_horizon))
        )
    discovery_series = [
        figures.Series(name=script, points=points, kind="scatter")
        for script, points in sorted(by_script.items())
    ]
    discovery_svg = figures.render_chart(
        f"Unique sub-tokens at {horizon:g} min vs training hours",
        "training hours (log scale)",
        "unique sub-tokens",
        discovery_series,
        x_log=True,
    )

    saturation_series = []
    max_minutes = result.config["max_minutes"]
    plotted = 0
    for d in details:
        if not d.checkpoints:
            continue
        color = figures.PALETTE[plotted % len(figures.PALETTE)]
        plotted += 1
        observed = [(t, float(c)) for t, c in zip(d.checkpoints, d.counts)]
        if d.fit is None:
            saturation_series.append(
                figures.Series(name=d.language, points=observed, kind="both", color=color)
            )
            continue
        t90 = d.fit.t90_minutes
        curve = [
            (t, eval_saturation(d.fit.A, d.fit.k, d.fit.B, t)) for t in _curve_grid(max_minutes)
        ]
        saturation_series.append(
            figures.Series(
                name=f"{d.language} (observed)", points=observed, kind="scatter", color=color
            )
        )
        saturation_series.append(
            figures.Series(
                name=f"{d.language} (fit)",
                points=curve,
                kind="line",
                color=color,
                markers=[(t90, eval_saturation(d.fit.A, d.fit.k, d.fit.B, t90))]
                if t90 <= max_minutes * 1.5
                else (),
            )
        )
    saturation_svg = figures.render_chart(
        "Sub-token discovery and fitted saturation curves",
        "cumulative audio (minutes)",
        "unique sub-tokens",
        saturation_series,
    )

    rank_series = [
        figures.Series(name=d.language, points=_decimate_ranks(d.rank_freq), kind="line")
        for d in details
        if d.rank_freq is not None and len(d.rank_freq.ranks) >= 2
    ]
    rank_svg = figures.render_chart(
        f"Rank-frequency at {horizon:g} min (log-log)",
        "rank",
        "candidate-list frequency",
        rank_series,
        x_log=True,
        y_log=True,
    )

    length_points_latin = [
        (s.train_hours, s.mean_token_length)
        for s in summaries
        if s.mean_token_length is not None and s.script == "Latin"
    ]
    length_points_other = [
        (s.train_hours, s.mean_token_length)
        for s in summaries
        if s.mean_token_length is not None and s.script != "Latin"
    ]
    length_series = []
    if length_points_latin:
        length_series.append(figures.Series(name="Latin", points=length_points_latin, kind="scatter"))
    if length_points_other:
        length_series.append(
            figures.Series(name="other scripts", points=length_points_other, kind="scatter")
        )
    length_svg = figures.render_chart(
        "Frequency-weighted mean sub-token length vs training hours",
        "training hours (log scale)",
        "mean sub-token length (code points)",
        length_series,
        x_log=True,
    )

    return {
        "discovery_vs_hours.svg": discovery_svg,
        "saturation_curves.svg": saturation_svg,
        "rank_frequency.svg": rank_svg,
        "token_length_vs_hours.svg": length_svg,
    }


def _curve_grid(max_minutes: float, points: int = 61) -> list[float]:
    return [max_minutes * i / (points - 1) for i in range(points)]


class IoFailure(OSError):
    def __init__(self, path: str, cause: OSError):
        super().__init__(f"cannot write {path}: {cause}")
        self.path = path


def emit_report(
    result: PipelineResult, out_dir: str, formats: Iterable[str] = ("csv", "json", "svg")
) -> list[str]:
    """Write the selected report artifacts; returns the written paths."""
    if not result.summaries:
        raise NoLanguagesIncluded("nothing to report")
    written: list[str] = []

    def _write(relpath: str, text: str) -> None:
        path = os.path.join(out_dir, relpath)
        try:
            os.makedirs(os.path.dirname(path) or out_dir, exist_ok=True)
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            raise IoFailure(path, exc) from exc
        written.append(path)

    formats = set(formats)
    unknown = formats - {"csv", "json", "svg"}
    if unknown:
        raise ValueError(f"unknown report formats: {sorted(unknown)}")
    if "csv" in formats:
        _write("summary.csv", summaries_to_csv(result.summaries))
        _write("stats.csv", stats_to_csv(result.stats))
    if "json" in formats:
        _write("report.json", report_to_json(result))
    if "svg" in formats:
        for name, svg in render_figures(result).items():
            _write(os.path.join("figures", name), svg)
    return written
