"""Shared builders for hand-rolled test corpora."""

from __future__ import annotations

import json

import pytest

from toksat.logmodel import CandidateEntry, CandidateRecord, DecodingStep


def entry(token_id: int, text: str | None = None, lp: float = -1.0) -> CandidateEntry:
    return CandidateEntry(
        token_id=token_id,
        token_text=text if text is not None else f"t{token_id}",
        logprob=lp,
    )


def step(*ids: int, lps: list[float] | None = None) -> DecodingStep:
    if lps is None:
        lps = [-1.0 - 0.1 * i for i in range(len(ids))]
    return DecodingStep(candidates=tuple(entry(i, lp=lp) for i, lp in zip(ids, lps)))


def record(
    utt_id: str,
    language: str = "xx",
    duration_s: float = 60.0,
    steps: tuple[DecodingStep, ...] = (),
) -> CandidateRecord:
    return CandidateRecord(
        utt_id=utt_id, language=language, duration_s=duration_s, steps=tuple(steps)
    )


def log_line(
    utt_id: str = "u1",
    language: str = "xx",
    duration_s: float = 60.0,
    steps: list[list[tuple[int, str, float]]] | None = None,
) -> str:
    if steps is None:
        steps = [[(1, "a", -0.5), (2, "b", -1.0)]]
    return json.dumps(
        {
            "utt_id": utt_id,
            "language": language,
            "duration_s": duration_s,
            "steps": [
                {"topk": [{"id": i, "s": s, "lp": lp} for i, s, lp in topk]}
                for topk in steps
            ],
        },
        ensure_ascii=False,
        separators=(",", ":"),
    )


@pytest.fixture
def tmp_corpus(tmp_path):
    """Write (logs.jsonl, meta.csv, refs.tsv) for a tiny two-language corpus.

    Each language has 12 one-minute utterances with one step of three
    candidates, so every 10-minute checkpoint window is populated.
    """
    lines = []
    refs = []
    for lang in ("aa", "bb"):
        for i in range(12):
            ids = [(i * 3 + j, f"{lang}{i * 3 + j}", -0.5 - 0.1 * j) for j in range(3)]
            lines.append(log_line(f"{lang}-{i}", lang, 60.0, [ids]))
            refs.append(f"{lang}-{i}\t" + "".join(s for _, s, _ in ids[:1]))
    logs = tmp_path / "logs.jsonl"
    logs.write_text("\n".join(lines) + "\n", encoding="utf-8")
    meta = tmp_path / "meta.csv"
    meta.write_text(
        "language,script,train_hours\naa,Latin,100\nbb,Cyrillic,400\n", encoding="utf-8"
    )
    refs_path = tmp_path / "refs.tsv"
    refs_path.write_text("\n".join(refs) + "\n", encoding="utf-8")
    return logs, meta, refs_path
