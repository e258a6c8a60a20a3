import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";
import { recordToJsonLine, writeLog } from "../src/logwriter.js";
import { CandidateRecord } from "../src/types.js";

const record: CandidateRecord = {
  utt_id: "u1",
  language: "aa",
  duration_s: 30.5,
  steps: [
    {
      topk: [
        { id: 3, s: " ab", lp: -0.5 },
        { id: 1, s: "c", lp: -1.25 },
      ],
    },
  ],
};

describe("recordToJsonLine", () => {
  it("writes keys in schema order regardless of object assembly", () => {
    const shuffled = {
      steps: record.steps,
      duration_s: record.duration_s,
      utt_id: record.utt_id,
      language: record.language,
    } as CandidateRecord;
    const expected =
      '{"utt_id":"u1","language":"aa","duration_s":30.5,' +
      '"steps":[{"topk":[{"id":3,"s":" ab","lp":-0.5},{"id":1,"s":"c","lp":-1.25}]}]}';
    expect(recordToJsonLine(shuffled)).toBe(expected);
  });
});

describe("writeLog", () => {
  it("writes one parseable line per record", () => {
    const path = join(mkdtempSync(join(tmpdir(), "logwriter-")), "log.jsonl");
    const second = { ...record, utt_id: "u2" };
    expect(writeLog([record, second], path)).toBe(2);
    const lines = readFileSync(path, "utf-8").split("\n");
    expect(lines.length).toBe(3); // two records plus trailing newline
    expect(lines[2]).toBe("");
    expect(JSON.parse(lines[0]).utt_id).toBe("u1");
    expect(JSON.parse(lines[1]).utt_id).toBe("u2");
  });

  it("leaves prior lines valid when the final line is truncated", () => {
    const path = join(mkdtempSync(join(tmpdir(), "logwriter-")), "log.jsonl");
    writeLog([record, { ...record, utt_id: "u2" }], path);
    const bytes = readFileSync(path);
    writeFileSync(path, bytes.subarray(0, bytes.length - 20)); // crash mid-record
    const lines = readFileSync(path, "utf-8").split("\n");
    expect(() => JSON.parse(lines[0])).not.toThrow();
    expect(() => JSON.parse(lines[1])).toThrow();
  });
});
