"""Batch analysis toolkit for multilingual ASR decoder candidate logs.

Measures how quickly a subword inventory saturates as audio accumulates,
fits rank-frequency laws to candidate usage, screens languages by
transcription quality and trajectory growth, and relates the results to
training-data volume across languages.
"""

from .discovery import (
    DiscoveryTrajectory,
    StagnationVerdict,
    TokenUsageTable,
    accumulate_discovery,
    stagnation_check,
    token_frequencies,
)
from .granularity import CerResult, GranularityResult, aggregate_cer, compute_cer, weighted_mean_token_length
from .logmodel import (
    CandidateEntry,
    CandidateRecord,
    CheckpointGrid,
    DecodingStep,
    LanguageMeta,
    assign_checkpoints,
    load_language_meta_file,
    parse_log_file,
    parse_log_stream,
    validate_record,
    write_log,
)
from .report import (
    LanguageSummary,
    NoLanguagesIncluded,
    PipelineConfig,
    PipelineResult,
    emit_report,
    run_pipeline,
)
from .satfit import SaturationFit, compute_t90, coverage_at, fit_saturation
from .simulate import SynthSpec, synth_candidate_log
from .stats import CorrelationResult, RegressionResult, ols_regression, pearson_corr
from .zipf import RankFrequency, ZipfFit, ZipfMandelbrotFit, fit_zipf, fit_zipf_mandelbrot, select_model_aic

__version__ = "1.0.0"

__all__ = [
    "CandidateEntry",
    "CandidateRecord",
    "CerResult",
    "CheckpointGrid",
    "CorrelationResult",
    "DecodingStep",
    "DiscoveryTrajectory",
    "GranularityResult",
    "LanguageMeta",
    "LanguageSummary",
    "NoLanguagesIncluded",
    "PipelineConfig",
    "PipelineResult",
    "RankFrequency",
    "RegressionResult",
    "SaturationFit",
    "StagnationVerdict",
    "SynthSpec",
    "TokenUsageTable",
    "ZipfFit",
    "ZipfMandelbrotFit",
    "accumulate_discovery",
    "aggregate_cer",
    "assign_checkpoints",
    "compute_cer",
    "compute_t90",
    "coverage_at",
    "emit_report",
    "fit_saturation",
    "fit_zipf",
    "fit_zipf_mandelbrot",
    "load_language_meta_file",
    "ols_regression",
    "parse_log_file",
    "parse_log_stream",
    "pearson_corr",
    "run_pipeline",
    "select_model_aic",
    "stagnation_check",
    "synth_candidate_log",
    "token_frequencies",
    "validate_record",
    "weighted_mean_token_length",
    "write_log",
]
