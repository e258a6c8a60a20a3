import { describe, expect, it } from "vitest";
import { buildCumulativeManifest, parseManifest } from "../src/manifest.js";
import { ManifestEntry } from "../src/types.js";

describe("parseManifest", () => {
  it("parses path, utt_id, duration columns", () => {
    const entries = parseManifest("a/u1.wav\tu1\t30\nb/u2.wav\tu2\t12.5\n");
    expect(entries).toEqual([
      { path: "a/u1.wav", uttId: "u1", durationS: 30 },
      { path: "b/u2.wav", uttId: "u2", durationS: 12.5 },
    ]);
  });

  it("skips blank lines and comments", () => {
    const entries = parseManifest("# header\n\na.wav\tu1\t5\n   \n");
    expect(entries.length).toBe(1);
  });

  it("rejects wrong column counts with the line number", () => {
    expect(() => parseManifest("a.wav\tu1\t5\nb.wav\tu2\n")).toThrow(/line 2.*3 tab-separated/);
  });

  it("rejects non-positive and non-numeric durations", () => {
    expect(() => parseManifest("a.wav\tu1\t0\n")).toThrow(/duration_s/);
    expect(() => parseManifest("a.wav\tu1\tfast\n")).toThrow(/duration_s/);
  });

  it("rejects duplicate utt_ids", () => {
    expect(() => parseManifest("a.wav\tu1\t5\nb.wav\tu1\t5\n")).toThrow(/duplicate utt_id/);
  });
});

describe("buildCumulativeManifest", () => {
  const listing: ManifestEntry[] = Array.from({ length: 13 }, (_, i) => ({
    path: `clips/${i}.wav`,
    uttId: `u${i}`,
    durationS: 600, // 10 minutes each, 130 total
  }));

  it("covers the last checkpoint when enough audio exists", () => {
    const manifest = buildCumulativeManifest(listing, { stepMinutes: 10, maxMinutes: 120 });
    const totalS = manifest.reduce((acc, e) => acc + e.durationS, 0);
    expect(totalS).toBeGreaterThanOrEqual(120 * 60);
    expect(manifest.length).toBe(12);
  });

  it("keeps dataset order and is reproducible", () => {
    const a = buildCumulativeManifest(listing, { stepMinutes: 10, maxMinutes: 120 });
    const b = buildCumulativeManifest(listing, { stepMinutes: 10, maxMinutes: 120 });
    expect(a).toEqual(b);
    expect(a.map((e) => e.uttId)).toEqual(listing.slice(0, 12).map((e) => e.uttId));
  });

  it("returns everything when the listing is shorter than the grid", () => {
    const manifest = buildCumulativeManifest(listing.slice(0, 3), { stepMinutes: 10, maxMinutes: 120 });
    expect(manifest.length).toBe(3);
  });

  it("rejects non-positive grids", () => {
    expect(() => buildCumulativeManifest(listing, { stepMinutes: 0, maxMinutes: 120 })).toThrow(/positive/);
  });
});
