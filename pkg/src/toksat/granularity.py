"""Segmentation granularity and character error rate.

Token length is counted in Unicode code points after stripping at most one
leading space character (BPE token strings mark word boundaries with a
leading space; counting it would inflate every length by one).  CER is the
Levenshtein distance over code points divided by the reference length,
computed after NFC normalization, whitespace-run collapsing and trimming.
No case folding, no punctuation stripping.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from typing import Iterable

from .discovery import TokenUsageTable

CER_THRESHOLD = 0.30


class EmptyTable(ValueError):
    pass


class AllTokensEmpty(ValueError):
    pass


class EmptyReference(ValueError):
    pass


@dataclass(frozen=True)
class GranularityResult:
    language: str
    mean_length: float
    total_weight: int


@dataclass(frozen=True)
class CerResult:
    language: str
    cer: float
    edit_ops: int
    ref_chars: int
    included: bool


def token_length(text: str) -> int:
    """Code-point length after stripping at most one leading space."""
    if text.startswith(" "):
        text = text[1:]
    return len(text)


def weighted_mean_token_length(usage: TokenUsageTable) -> GranularityResult:
    """Frequency-weighted mean token length over a usage table.

    Tokens whose stripped length is zero are excluded from both the
    numerator and the denominator.
    """
    if not usage.entries:
        raise EmptyTable("usage table has no entries")
    weighted_sum = 0
    total_weight = 0
    for token_id in sorted(usage.entries):
        freq, text = usage.entries[token_id]
        length = token_length(text)
        if length == 0:
            continue
        weighted_sum += freq * length
        total_weight += freq
    if total_weight == 0:
        raise AllTokensEmpty("every token is empty after stripping")
    return GranularityResult(
        language=usage.language,
        mean_length=weighted_sum / total_weight,
        total_weight=total_weight,
    )


def normalize_text(text: str) -> str:
    """NFC, collapse whitespace runs to single spaces, trim."""
    return " ".join(unicodedata.normalize("NFC", text).split())


def levenshtein(a: str, b: str) -> int:
    """Unit-cost edit distance over code points (two-row DP)."""
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i] + [0] * len(b)
        for j, cb in enumerate(b, start=1):
            cost = 0 if ca == cb else 1
            current[j] = min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + cost)
        previous = current
    return previous[-1]


def compute_cer(
    reference: str, hypothesis: str, threshold: float = CER_THRESHOLD, language: str = ""
) -> CerResult:
    """Character error rate of one reference/hypothesis pair.

    Raises :class:`EmptyReference` when the reference is empty after
    normalization.  ``included`` reflects the strict ``cer < threshold``
    rule.
    """
    ref = normalize_text(reference)
    hyp = normalize_text(hypothesis)
    if not ref:
        raise EmptyReference("reference is empty after normalization")
    ops = levenshtein(ref, hyp)
    cer = ops / len(ref)
    return CerResult(
        language=language, cer=cer, edit_ops=ops, ref_chars=len(ref), included=cer < threshold
    )


def aggregate_cer(
    pairs: Iterable[tuple[str, str]], threshold: float = CER_THRESHOLD, language: str = ""
) -> CerResult:
    """Corpus-level CER: total edit operations over total reference length."""
    total_ops = 0
    total_ref = 0
    for reference, hypothesis in pairs:
        single = compute_cer(reference, hypothesis, threshold=threshold)
        total_ops += single.edit_ops
        total_ref += single.ref_chars
    if total_ref == 0:
        raise EmptyReference("no usable reference text")
    cer = total_ops / total_ref
    return CerResult(
        language=language,
        cer=cer,
        edit_ops=total_ops,
        ref_chars=total_ref,
        included=cer < threshold,
    )


def cer_filter(
    results: Iterable[CerResult], threshold: float = CER_THRESHOLD
) -> tuple[list[CerResult], list[CerResult]]:
    """Partition per-language CER results into (included, excluded).

    Inclusion uses the strict inequality ``cer < threshold``; the returned
    results carry flags consistent with the threshold actually applied.
    """
    included: list[CerResult] = []
    excluded: list[CerResult] = []
    for result in results:
        keep = result.cer < threshold
        if keep != result.included:
            result = CerResult(
                language=result.language,
                cer=result.cer,
                edit_ops=result.edit_ops,
                ref_chars=result.ref_chars,
                included=keep,
            )
        (included if keep else excluded).append(result)
    return included, excluded


def load_references(text: str | Iterable[str]) -> dict[str, str]:
    """Parse the two-column ``utt_id<TAB>reference_text`` TSV."""
    if isinstance(text, str):
        lines = text.splitlines()
    else:
        lines = [ln.rstrip("\n") for ln in text]
    refs: dict[str, str] = {}
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        if "\t" not in line:
            raise ValueError(f"references line {line_no}: expected utt_id<TAB>text")
        utt_id, ref = line.split("\t", 1)
        if utt_id in refs:
            raise ValueError(f"references line {line_no}: duplicate utt_id {utt_id!r}")
        refs[utt_id] = ref
    return refs


def load_references_file(path: str) -> dict[str, str]:
    with open(path, "r", encoding="utf-8") as fh:
        return load_references(fh)
