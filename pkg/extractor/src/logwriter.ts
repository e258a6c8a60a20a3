import { closeSync, openSync, writeSync } from "node:fs";
import { CandidateRecord } from "./types.js";

/**
 * Canonical single-line serialization, no trailing newline. Keys are written
 * in schema order (utt_id, language, duration_s, steps / topk / id, s, lp)
 * regardless of how the record object was assembled.
 */
export function recordToJsonLine(record: CandidateRecord): string {
  return JSON.stringify({
    utt_id: record.utt_id,
    language: record.language,
    duration_s: record.duration_s,
    steps: record.steps.map((step) => ({
      topk: step.topk.map((e) => ({ id: e.id, s: e.s, lp: e.lp })),
    })),
  });
}

/**
 * Write records as JSON Lines. Emission is append-only, one line per write:
 * if the process dies mid-record, every earlier line is still a complete,
 * parseable record and only the final line can be truncated.
 */
export function writeLog(records: Iterable<CandidateRecord>, path: string): number {
  const fd = openSync(path, "w");
  let count = 0;
  try {
    for (const record of records) {
      writeSync(fd, recordToJsonLine(record) + "\n");
      count++;
    }
  } finally {
    closeSync(fd);
  }
  return count;
}
