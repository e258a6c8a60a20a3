"""Deterministic synthetic-data generators used as ground-truth oracles.

Randomness comes from a splitmix64 generator: 64-bit integer state advanced
by the golden-ratio constant, output mixed by two xor-multiply rounds.  The
state transition and mixing are pure integer arithmetic, so a given seed
produces the same stream everywhere; uniform doubles are built from the top
53 output bits ((x >> 11) + 0.5) / 2^53, normals by the Box-Muller
transform.  Per-utterance substreams are derived by hashing (seed, index),
so generation order never changes the output.

Candidate lists are sampled without replacement from a shifted power law
over ranks (weight (r + beta)^(-alpha), token id = rank) using the
exponential-keys method: draw one uniform per vocabulary item, keep the K
largest ln(u)/w keys.  Sorting keys involves log evaluations, so the only
platform dependence is libm rounding; the integer state itself never
diverges.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .discovery import DiscoveryTrajectory, TokenUsageTable
from .logmodel import CandidateEntry, CandidateRecord, CheckpointGrid, DecodingStep

_MASK64 = (1 << 64) - 1
_GOLDEN64 = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    """splitmix64 output finalizer."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, index: int) -> int:
    """Substream seed for (seed, index); collision-resistant enough for tests."""
    return mix64(mix64(seed & _MASK64) ^ mix64((index & _MASK64) ^ 0xA5A5A5A5A5A5A5A5))


class Splitmix64:
    """Minimal seeded generator with uniform and normal variates."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + _GOLDEN64) & _MASK64
        return mix64(self.state)

    def uniform(self) -> float:
        """Double in the open interval (0, 1)."""
        return ((self.next_u64() >> 11) + 0.5) * 2.0**-53

    def normal(self) -> float:
        u1 = self.uniform()
        u2 = self.uniform()
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)

    def clone(self) -> "Splitmix64":
        other = Splitmix64(0)
        other.state = self.state
        return other


@dataclass(frozen=True)
class SynthSpec:
    """Parameters shared by the generators; identical specs give identical output."""

    seed: int = 0
    A: float = 20000.0
    k: float = 0.02
    B: float = 500.0
    alpha: float = 1.7
    beta: float = 10.0
    C: float = 1000.0
    vocab_size: int = 500
    utterance_seconds: float = 30.0
    steps_per_utterance: int = 4
    K: int = 50

    def __post_init__(self) -> None:
        if self.vocab_size < 1 or self.K < 1 or self.steps_per_utterance < 1:
            raise ValueError("vocab_size, K and steps_per_utterance must be >= 1")
        if self.K > self.vocab_size:
            raise ValueError("K cannot exceed vocab_size")
        if self.utterance_seconds <= 0:
            raise ValueError("utterance_seconds must be positive")


def synth_trajectory(
    spec: SynthSpec, grid: CheckpointGrid, noise_sigma: float = 0.0, language: str = "syn"
) -> DiscoveryTrajectory:
    """Counts from the saturation model plus optional Gaussian noise.

    Each count is round(A*(1 - exp(-k t)) + B + eps) clamped to be
    non-negative and non-decreasing; first_seen is synthesized to keep the
    trajectory invariants (counts[i] new ids appear by checkpoint i).
    """
    rng = Splitmix64(derive_seed(spec.seed, 0))
    checkpoints = grid.checkpoints()
    counts: list[int] = []
    floor = 0
    for t in checkpoints:
        value = spec.A * (1.0 - math.exp(-spec.k * t)) + spec.B
        if noise_sigma > 0:
            value += noise_sigma * rng.normal()
        count = max(floor, max(0, round(value)))
        counts.append(count)
        floor = count
    first_seen: dict[int, float] = {}
    next_id = 0
    for t, count in zip(checkpoints, counts):
        while next_id < count:
            first_seen[next_id] = t
            next_id += 1
    return DiscoveryTrajectory(
        language=language,
        checkpoints=tuple(checkpoints),
        counts=tuple(counts),
        first_seen=first_seen,
    )


def _rank_weights(spec: SynthSpec) -> np.ndarray:
    ranks = np.arange(1, spec.vocab_size + 1, dtype=float)
    return (ranks + spec.beta) ** (-spec.alpha)


def synth_rank_sample(
    spec: SynthSpec, n_draws: int, language: str = "syn", horizon_minutes: float = 120.0
) -> TokenUsageTable:
    """Tally n_draws i.i.d. draws from p(r) proportional to (r+beta)^(-alpha).

    Token id equals the rank; only ranks actually drawn appear in the table.
    """
    if spec.vocab_size < 2:
        raise ValueError("vocab_size must be >= 2")
    rng = Splitmix64(derive_seed(spec.seed, 1))
    weights = _rank_weights(spec)
    cum = np.cumsum(weights)
    cum /= cum[-1]
    uniforms = np.fromiter((rng.uniform() for _ in range(n_draws)), dtype=float, count=n_draws)
    drawn = np.searchsorted(cum, uniforms, side="right")
    tallies = np.bincount(drawn, minlength=spec.vocab_size)
    entries = {
        rank + 1: (int(count), _token_text(rank + 1))
        for rank, count in enumerate(tallies)
        if count > 0
    }
    return TokenUsageTable(language=language, horizon_minutes=horizon_minutes, entries=entries)


def _token_text(token_id: int) -> str:
    # Every third id carries the word-boundary space marker.
    prefix = " " if token_id % 3 == 0 else ""
    return f"{prefix}t{token_id}"


@dataclass
class SynthLog:
    """Generated records plus the generator's own bookkeeping.

    ``first_exposed_by_utt[i]`` lists token ids whose first appearance is in
    utterance i; ``step_counts_by_utt[i]`` maps token id to the number of
    that utterance's steps containing it.  ``expected_counts`` and
    ``expected_frequencies`` recompute ground truth from this schedule with
    plain cumulative-duration arithmetic, independent of the parsing and
    windowing pipeline under test.
    """

    records: list[CandidateRecord]
    utterance_seconds: float
    first_exposed_by_utt: list[list[int]] = field(default_factory=list)
    step_counts_by_utt: list[dict[int, int]] = field(default_factory=list)

    def _utts_within(self, minutes: float) -> int:
        # Same float-summation order as the windowing under test, so exact
        # boundary hits agree bit-for-bit.
        budget_s = minutes * 60.0
        cumulative = 0.0
        n = 0
        for _ in self.records:
            cumulative += self.utterance_seconds
            if cumulative > budget_s:
                break
            n += 1
        return n

    def expected_counts(self, grid: CheckpointGrid) -> list[int]:
        counts = []
        for c in grid.checkpoints():
            n = self._utts_within(c)
            counts.append(sum(len(self.first_exposed_by_utt[i]) for i in range(n)))
        return counts

    def expected_frequencies(self, horizon_minutes: float) -> dict[int, int]:
        n = self._utts_within(horizon_minutes)
        freqs: dict[int, int] = {}
        for i in range(n):
            for token_id, count in self.step_counts_by_utt[i].items():
                freqs[token_id] = freqs.get(token_id, 0) + count
        return freqs


def _sample_topk(rng: Splitmix64, weights: np.ndarray, k: int) -> list[int]:
    """Weighted sample of k distinct ranks via exponential keys (largest ln(u)/w)."""
    keys = [
        (math.log(rng.uniform()) / weights[i], i + 1) for i in range(len(weights))
    ]
    top = heapq.nlargest(k, keys)
    return [rank for _, rank in top]


def synth_candidate_log(
    spec: SynthSpec, total_minutes: float, language: str = "syn"
) -> SynthLog:
    """Generate a candidate log covering at least total_minutes of audio.

    Utterances all last ``spec.utterance_seconds``; every step's candidate
    list holds ``spec.K`` distinct ids drawn from the rank law, sorted by
    log-probability descending (step-normalized law weights).
    """
    if total_minutes <= 0:
        raise ValueError("total_minutes must be positive")
    weights = _rank_weights(spec)
    n_utts = math.ceil(total_minutes * 60.0 / spec.utterance_seconds)
    out = SynthLog(records=[], utterance_seconds=spec.utterance_seconds)
    seen: set[int] = set()
    for i in range(n_utts):
        rng = Splitmix64(derive_seed(spec.seed, 2 + i))
        steps: list[DecodingStep] = []
        newly_exposed: list[int] = []
        step_counts: dict[int, int] = {}
        for _ in range(spec.steps_per_utterance):
            ids = _sample_topk(rng, weights, spec.K)
            chosen_weights = [weights[tid - 1] for tid in ids]
            total = sum(chosen_weights)
            entries = [
                CandidateEntry(
                    token_id=tid,
                    token_text=_token_text(tid),
                    logprob=min(math.log(w / total), 0.0),
                )
                for tid, w in zip(ids, chosen_weights)
            ]
            entries.sort(key=lambda e: (-e.logprob, e.token_id))
            steps.append(DecodingStep(candidates=tuple(entries)))
            for tid in ids:
                step_counts[tid] = step_counts.get(tid, 0) + 1
                if tid not in seen:
                    seen.add(tid)
                    newly_exposed.append(tid)
        out.records.append(
            CandidateRecord(
                utt_id=f"{language}-{i:05d}",
                language=language,
                duration_s=spec.utterance_seconds,
                steps=tuple(steps),
            )
        )
        out.first_exposed_by_utt.append(newly_exposed)
        out.step_counts_by_utt.append(step_counts)
    return out


def iter_records(logs: list[SynthLog]) -> Iterator[CandidateRecord]:
    for synth in logs:
        yield from synth.records
