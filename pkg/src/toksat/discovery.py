"""Cumulative sub-token discovery trajectories and usage frequencies.

Discovery counts how many distinct token ids (keyed by vocabulary index,
never by decoded string) have appeared in any candidate list within each
cumulative-duration window.  Usage frequencies count, per token id, the
number of candidate lists containing it within one horizon window: a token
contributes at most once per decoding step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

from .logmodel import CandidateRecord

GROWTH_THRESHOLD = 0.10
CV_THRESHOLD = 0.05


class EmptyWindowSeries(ValueError):
    """No utterance fits in any checkpoint window."""


class HorizonNotOnGrid(ValueError):
    def __init__(self, horizon: float, available: list[float]):
        super().__init__(f"horizon {horizon} min is not a checkpoint; have {available}")
        self.horizon = horizon


class DegenerateTrajectory(ValueError):
    """Trajectory too short or starting at zero; stagnation is undefined."""


@dataclass(frozen=True)
class DiscoveryTrajectory:
    """Per-language cumulative unique-token counts at duration checkpoints."""

    language: str
    checkpoints: tuple[float, ...]
    counts: tuple[int, ...]
    first_seen: Mapping[int, float]  # token_id -> earliest checkpoint (minutes)

    def count_at(self, checkpoint: float) -> int:
        try:
            return self.counts[self.checkpoints.index(checkpoint)]
        except ValueError:
            raise HorizonNotOnGrid(checkpoint, list(self.checkpoints)) from None


@dataclass(frozen=True)
class TokenUsageTable:
    """Per-token candidate-list frequencies within one horizon window."""

    language: str
    horizon_minutes: float
    entries: Mapping[int, tuple[int, str]]  # token_id -> (frequency, token_text)

    def total_frequency(self) -> int:
        return sum(f for f, _ in self.entries.values())


@dataclass(frozen=True)
class StagnationVerdict:
    """Outcome of the stagnant-growth screen applied before curve fitting."""

    included: bool
    relative_growth: float
    cv: float


def accumulate_discovery(
    records: Iterable[CandidateRecord], windows: Mapping[float, set[str]], language: str | None = None
) -> DiscoveryTrajectory:
    """Build the cumulative unique-token trajectory over nested windows.

    ``windows`` must come from :func:`toksat.logmodel.assign_checkpoints` on
    the same record sequence.  Records outside every window contribute
    nothing.  Raises :class:`EmptyWindowSeries` if all windows are empty.
    """
    checkpoints = sorted(windows)
    if not any(windows[c] for c in checkpoints):
        raise EmptyWindowSeries("all checkpoint windows are empty")
    # Earliest window an utterance belongs to; windows are nested, so that
    # is the smallest checkpoint whose member set contains it.
    utt_earliest: dict[str, float] = {}
    for c in checkpoints:
        for utt in windows[c]:
            prev = utt_earliest.get(utt)
            if prev is None or c < prev:
                utt_earliest[utt] = c
    first_seen: dict[int, float] = {}
    lang = language
    for record in records:
        if lang is None:
            lang = record.language
        elif language is None and record.language != lang:
            raise ValueError(
                f"records span multiple languages ({lang!r}, {record.language!r}); "
                "accumulate one language at a time"
            )
        window = utt_earliest.get(record.utt_id)
        if window is None:
            continue
        for step in record.steps:
            for entry in step.candidates:
                prev = first_seen.get(entry.token_id)
                if prev is None or window < prev:
                    first_seen[entry.token_id] = window
    counts = tuple(sum(1 for w in first_seen.values() if w <= c) for c in checkpoints)
    return DiscoveryTrajectory(
        language=lang or "",
        checkpoints=tuple(checkpoints),
        counts=counts,
        first_seen=first_seen,
    )


def token_frequencies(
    records: Iterable[CandidateRecord],
    horizon_minutes: float,
    windows: Mapping[float, set[str]],
    language: str | None = None,
) -> TokenUsageTable:
    """Tally per-token candidate-list frequencies within the horizon window.

    The horizon must be one of the grid checkpoints.  Frequency is the
    number of (utterance, step) candidate lists containing the id; the
    decoded string stored alongside is the one from the id's first
    occurrence.
    """
    if horizon_minutes not in windows:
        raise HorizonNotOnGrid(horizon_minutes, sorted(windows))
    members = windows[horizon_minutes]
    entries: dict[int, tuple[int, str]] = {}
    lang = language
    for record in records:
        if lang is None:
            lang = record.language
        if record.utt_id not in members:
            continue
        for step in record.steps:
            for entry in step.candidates:
                prev = entries.get(entry.token_id)
                if prev is None:
                    entries[entry.token_id] = (1, entry.token_text)
                else:
                    entries[entry.token_id] = (prev[0] + 1, prev[1])
    return TokenUsageTable(language=lang or "", horizon_minutes=horizon_minutes, entries=entries)


def stagnation_check(trajectory: DiscoveryTrajectory) -> StagnationVerdict:
    """Screen a trajectory for stagnant growth before saturation fitting.

    A trajectory is kept only when both the relative growth from the first
    checkpoint is >= 10% and the coefficient of variation (population
    std / mean over all checkpoint counts) is >= 0.05.  Excluded
    trajectories are flagged, never deleted.
    """
    counts = trajectory.counts
    if len(counts) < 2:
        raise DegenerateTrajectory("need at least 2 checkpoints")
    if counts[0] == 0:
        raise DegenerateTrajectory("first checkpoint count is zero")
    relative_growth = counts[-1] / counts[0] - 1.0
    mean = sum(counts) / len(counts)
    variance = sum((c - mean) ** 2 for c in counts) / len(counts)
    cv = math.sqrt(variance) / mean
    included = relative_growth >= GROWTH_THRESHOLD and cv >= CV_THRESHOLD
    return StagnationVerdict(included=included, relative_growth=relative_growth, cv=cv)
