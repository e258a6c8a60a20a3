"""Candidate-log and language-metadata formats.

A candidate log is UTF-8 JSON Lines, one utterance per line:

    {"utt_id": str, "language": str, "duration_s": float,
     "steps": [{"topk": [{"id": int, "s": str, "lp": float}, ...]}, ...]}

Each ``topk`` list holds the highest-probability sub-token candidates of one
decoding step, sorted by log-probability descending.  Language metadata is a
CSV with header ``language,script,train_hours``; lines starting with ``#``
are comments.

Parsing enforces structural validity (field presence, types, value ranges,
no duplicate candidate ids within a step).  Contract-level checks that
depend on configuration, i.e. the per-step candidate count K and the sort
order, are reported as diagnostics by :func:`validate_record` so that
malformed-but-parseable logs can be inspected rather than rejected.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator

log = logging.getLogger(__name__)

SCRIPTS = frozenset(
    {"Latin", "Cyrillic", "Arabic", "Devanagari", "CJ", "Hangul", "Thai", "Hebrew", "Other"}
)


class LogFormatError(ValueError):
    """Base class for candidate-log input errors."""


class MalformedLine(LogFormatError):
    def __init__(self, line_no: int, reason: str = "invalid JSON"):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no


class SchemaViolation(LogFormatError):
    def __init__(self, line_no: int, fieldname: str, reason: str):
        super().__init__(f"line {line_no}: field {fieldname!r}: {reason}")
        self.line_no = line_no
        self.fieldname = fieldname


class DuplicateUttId(LogFormatError):
    def __init__(self, utt_id: str, line_no: int):
        super().__init__(f"line {line_no}: duplicate utt_id {utt_id!r}")
        self.utt_id = utt_id
        self.line_no = line_no


class EmptyCorpus(LogFormatError):
    def __init__(self) -> None:
        super().__init__("no records to assign to checkpoints")


class MetaFormatError(ValueError):
    """Base class for language-metadata CSV errors."""


class UnknownScript(MetaFormatError):
    def __init__(self, row_no: int, script: str):
        super().__init__(f"row {row_no}: unknown script {script!r}")
        self.row_no = row_no
        self.script = script


class NonPositiveHours(MetaFormatError):
    def __init__(self, row_no: int, value: str):
        super().__init__(f"row {row_no}: train_hours must be > 0, got {value!r}")
        self.row_no = row_no


class DuplicateLanguage(MetaFormatError):
    def __init__(self, code: str):
        super().__init__(f"duplicate language code {code!r}")
        self.code = code


@dataclass(frozen=True, slots=True)
class CandidateEntry:
    """One sub-token candidate: vocabulary index, decoded string, log-probability."""

    token_id: int
    token_text: str
    logprob: float


@dataclass(frozen=True, slots=True)
class DecodingStep:
    """The ranked candidate list captured at one decoding step."""

    candidates: tuple[CandidateEntry, ...]


@dataclass(frozen=True, slots=True)
class CandidateRecord:
    """One utterance's decoding trace."""

    utt_id: str
    language: str
    duration_s: float
    steps: tuple[DecodingStep, ...]


@dataclass(frozen=True, slots=True)
class LanguageMeta:
    language: str
    script: str
    train_hours: float
    reference_text_available: bool = False


@dataclass(frozen=True)
class CheckpointGrid:
    """Cumulative-duration checkpoints: step_minutes, 2*step_minutes, ..., max_minutes."""

    step_minutes: float = 10.0
    max_minutes: float = 120.0

    def __post_init__(self) -> None:
        if self.step_minutes <= 0 or self.max_minutes <= 0:
            raise ValueError("checkpoint grid values must be positive")
        ratio = self.max_minutes / self.step_minutes
        if abs(ratio - round(ratio)) > 1e-9 or round(ratio) < 1:
            raise ValueError("max_minutes must be an integer multiple of step_minutes")

    def checkpoints(self) -> list[float]:
        n = round(self.max_minutes / self.step_minutes)
        return [self.step_minutes * (i + 1) for i in range(n)]


# --- diagnostics returned by validate_record -------------------------------


@dataclass(frozen=True)
class KMismatch:
    step: int
    found: int

    def __str__(self) -> str:
        return f"step {self.step}: expected K candidates, found {self.found}"


@dataclass(frozen=True)
class UnsortedCandidates:
    step: int

    def __str__(self) -> str:
        return f"step {self.step}: candidates not in non-increasing logprob order"


@dataclass(frozen=True)
class DuplicateCandidateId:
    step: int
    token_id: int

    def __str__(self) -> str:
        return f"step {self.step}: duplicate token id {self.token_id}"


Diagnostic = KMismatch | UnsortedCandidates | DuplicateCandidateId


def _require(cond: bool, line_no: int, fieldname: str, reason: str) -> None:
    if not cond:
        raise SchemaViolation(line_no, fieldname, reason)


def _parse_entry(obj: object, line_no: int, path: str) -> CandidateEntry:
    _require(isinstance(obj, dict), line_no, path, "candidate must be an object")
    assert isinstance(obj, dict)
    for key in ("id", "s", "lp"):
        _require(key in obj, line_no, f"{path}.{key}", "missing")
    tid = obj["id"]
    _require(
        isinstance(tid, int) and not isinstance(tid, bool) and tid >= 0,
        line_no,
        f"{path}.id",
        "must be a non-negative integer",
    )
    text = obj["s"]
    _require(isinstance(text, str), line_no, f"{path}.s", "must be a string")
    lp = obj["lp"]
    _require(
        isinstance(lp, (int, float)) and not isinstance(lp, bool),
        line_no,
        f"{path}.lp",
        "must be a number",
    )
    lp = float(lp)
    _require(math.isfinite(lp) and lp <= 0.0, line_no, f"{path}.lp", "must be finite and <= 0")
    return CandidateEntry(token_id=tid, token_text=text, logprob=lp)


def _parse_record(obj: object, line_no: int) -> CandidateRecord:
    _require(isinstance(obj, dict), line_no, "<record>", "must be a JSON object")
    assert isinstance(obj, dict)
    for key in ("utt_id", "language", "duration_s", "steps"):
        _require(key in obj, line_no, key, "missing")
    utt_id = obj["utt_id"]
    _require(isinstance(utt_id, str) and utt_id != "", line_no, "utt_id", "must be a non-empty string")
    language = obj["language"]
    _require(
        isinstance(language, str) and language != "", line_no, "language", "must be a non-empty string"
    )
    duration = obj["duration_s"]
    _require(
        isinstance(duration, (int, float)) and not isinstance(duration, bool),
        line_no,
        "duration_s",
        "must be a number",
    )
    duration = float(duration)
    _require(math.isfinite(duration) and duration > 0.0, line_no, "duration_s", "must be finite and > 0")
    raw_steps = obj["steps"]
    _require(isinstance(raw_steps, list), line_no, "steps", "must be a list")
    steps = []
    for i, raw_step in enumerate(raw_steps):
        _require(isinstance(raw_step, dict), line_no, f"steps[{i}]", "must be an object")
        _require("topk" in raw_step, line_no, f"steps[{i}].topk", "missing")
        topk = raw_step["topk"]
        _require(isinstance(topk, list), line_no, f"steps[{i}].topk", "must be a list")
        entries = tuple(
            _parse_entry(e, line_no, f"steps[{i}].topk[{j}]") for j, e in enumerate(topk)
        )
        seen_ids = {e.token_id for e in entries}
        _require(
            len(seen_ids) == len(entries),
            line_no,
            f"steps[{i}].topk",
            "duplicate token ids within one step",
        )
        steps.append(DecodingStep(candidates=entries))
    return CandidateRecord(utt_id=utt_id, language=language, duration_s=duration, steps=tuple(steps))


def parse_log_stream(stream: IO[bytes] | IO[str] | Iterable[str]) -> Iterator[CandidateRecord]:
    """Parse a JSON Lines candidate log, yielding records in file order.

    Accepts a binary stream, a text stream, or any iterable of lines.  Blank
    lines are skipped.  Raises :class:`MalformedLine` on unparseable JSON,
    :class:`SchemaViolation` on missing or invalid fields, and
    :class:`DuplicateUttId` when an utterance id repeats within the stream.
    """
    seen: set[str] = set()
    for line_no, raw in enumerate(stream, start=1):
        if isinstance(raw, bytes):
            try:
                line = raw.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise MalformedLine(line_no, f"invalid UTF-8: {exc}") from exc
        else:
            line = raw
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedLine(line_no, f"invalid JSON: {exc.msg}") from exc
        record = _parse_record(obj, line_no)
        if record.utt_id in seen:
            raise DuplicateUttId(record.utt_id, line_no)
        seen.add(record.utt_id)
        yield record


def parse_log_file(path: str) -> list[CandidateRecord]:
    with open(path, "rb") as fh:
        return list(parse_log_stream(fh))


def record_to_json_line(record: CandidateRecord) -> str:
    """Canonical single-line serialization (no trailing newline).

    Compact separators, keys in schema order, non-ASCII characters kept
    verbatim; parsing then re-serializing a canonical log is byte-identical.
    """
    obj = {
        "utt_id": record.utt_id,
        "language": record.language,
        "duration_s": record.duration_s,
        "steps": [
            {
                "topk": [
                    {"id": e.token_id, "s": e.token_text, "lp": e.logprob}
                    for e in step.candidates
                ]
            }
            for step in record.steps
        ],
    }
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def serialize_records(records: Iterable[CandidateRecord]) -> str:
    """Serialize records as JSON Lines text (one trailing newline per line)."""
    return "".join(record_to_json_line(r) + "\n" for r in records)


def write_log(records: Iterable[CandidateRecord], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for record in records:
            fh.write(record_to_json_line(record) + "\n")


def validate_record(record: CandidateRecord, expected_k: int) -> list[Diagnostic]:
    """Check the per-step contract: exactly K candidates, sorted, unique ids.

    Returns an empty list iff every step conforms.  Violations are returned
    as diagnostics rather than raised so a whole log can be audited in one
    pass.
    """
    diagnostics: list[Diagnostic] = []
    for i, step in enumerate(record.steps):
        if len(step.candidates) != expected_k:
            diagnostics.append(KMismatch(step=i, found=len(step.candidates)))
        lps = [e.logprob for e in step.candidates]
        if any(lps[j] < lps[j + 1] for j in range(len(lps) - 1)):
            diagnostics.append(UnsortedCandidates(step=i))
        ids = [e.token_id for e in step.candidates]
        seen: set[int] = set()
        for tid in ids:
            if tid in seen:
                diagnostics.append(DuplicateCandidateId(step=i, token_id=tid))
                break
            seen.add(tid)
    return diagnostics


def assign_checkpoints(
    records: Iterable[CandidateRecord], grid: CheckpointGrid
) -> dict[float, set[str]]:
    """Assign utterances to nested cumulative-duration windows.

    An utterance belongs to checkpoint ``c`` iff the cumulative duration of
    all utterances up to and including it is <= ``c`` minutes (inclusive
    boundary).  An utterance whose cumulative end overshoots a checkpoint
    therefore first appears in the next one, which guarantees
    ``window(c1) <= window(c2)`` for ``c1 < c2``.  Membership depends only
    on utterance order and durations.

    Raises :class:`EmptyCorpus` when there are no records.  Logs an
    InsufficientAudio warning when the corpus is shorter than the last
    checkpoint (those windows are still returned, merely not full).
    """
    checkpoints = grid.checkpoints()
    windows: dict[float, set[str]] = {c: set() for c in checkpoints}
    cumulative_s = 0.0
    n = 0
    for record in records:
        n += 1
        cumulative_s += record.duration_s
        for c in checkpoints:
            if cumulative_s <= c * 60.0:
                windows[c].add(record.utt_id)
    if n == 0:
        raise EmptyCorpus()
    total_min = cumulative_s / 60.0
    if total_min < grid.max_minutes:
        short = [c for c in checkpoints if total_min < c]
        log.warning(
            "InsufficientAudio: corpus has %.1f min, checkpoints %s cannot be filled",
            total_min,
            short,
        )
    return windows


def earliest_window(cumulative_end_s: float, grid: CheckpointGrid) -> float | None:
    """First checkpoint (minutes) whose budget contains the cumulative end, or None."""
    for c in grid.checkpoints():
        if cumulative_end_s <= c * 60.0:
            return c
    return None


def load_language_meta(text: str | Iterable[str]) -> dict[str, LanguageMeta]:
    """Parse the ``language,script,train_hours`` CSV into a table keyed by code.

    Comment lines starting with ``#`` and blank lines are ignored.  The
    header row is required.
    """
    import csv as _csv

    if isinstance(text, str):
        lines = text.splitlines()
    else:
        lines = [ln.rstrip("\n") for ln in text]
    rows = [
        (idx, ln) for idx, ln in enumerate(lines, start=1) if ln.strip() and not ln.lstrip().startswith("#")
    ]
    if not rows:
        raise MetaFormatError("metadata CSV is empty")
    header_no, header = rows[0]
    parsed_header = next(_csv.reader([header]))
    expected = ["language", "script", "train_hours"]
    if [h.strip() for h in parsed_header] != expected:
        raise MetaFormatError(f"row {header_no}: header must be {','.join(expected)}")
    table: dict[str, LanguageMeta] = {}
    for row_no, ln in rows[1:]:
        fields = next(_csv.reader([ln]))
        if len(fields) != 3:
            raise MetaFormatError(f"row {row_no}: expected 3 columns, got {len(fields)}")
        code, script, hours_text = (f.strip() for f in fields)
        if not code:
            raise MetaFormatError(f"row {row_no}: empty language code")
        if script not in SCRIPTS:
            raise UnknownScript(row_no, script)
        try:
            hours = float(hours_text)
        except ValueError:
            raise NonPositiveHours(row_no, hours_text) from None
        if not math.isfinite(hours) or hours <= 0:
            raise NonPositiveHours(row_no, hours_text)
        if code in table:
            raise DuplicateLanguage(code)
        table[code] = LanguageMeta(language=code, script=script, train_hours=hours)
    return table


def load_language_meta_file(path: str) -> dict[str, LanguageMeta]:
    with open(path, "r", encoding="utf-8") as fh:
        return load_language_meta(fh)


def meta_to_csv(table: dict[str, LanguageMeta]) -> str:
    """Serialize a metadata table back to canonical CSV (round-trip form)."""
    lines = ["language,script,train_hours"]
    for code in sorted(table):
        m = table[code]
        hours = int(m.train_hours) if m.train_hours == int(m.train_hours) else m.train_hours
        lines.append(f"{m.language},{m.script},{hours}")
    return "\n".join(lines) + "\n"
