import { readFileSync } from "node:fs";
import { CheckpointGrid, ManifestEntry } from "./types.js";

/**
 * Parse a TSV audio manifest: `path<TAB>utt_id<TAB>duration_s` per line.
 * Blank lines and `#` comments are skipped. Paths may contain anything but
 * tabs; utt_ids must be unique since the log format requires it downstream.
 */
export function parseManifest(text: string): ManifestEntry[] {
  const entries: ManifestEntry[] = [];
  const seen = new Set<string>();
  const lines = text.split("\n");
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i].replace(/\r$/, "");
    if (line.trim() === "" || line.startsWith("#")) {
      continue;
    }
    const cols = line.split("\t");
    if (cols.length !== 3) {
      throw new Error(`manifest line ${i + 1}: expected 3 tab-separated columns, got ${cols.length}`);
    }
    const [path, uttId, rawDuration] = cols;
    if (path === "" || uttId === "") {
      throw new Error(`manifest line ${i + 1}: empty path or utt_id`);
    }
    if (seen.has(uttId)) {
      throw new Error(`manifest line ${i + 1}: duplicate utt_id ${JSON.stringify(uttId)}`);
    }
    const durationS = Number(rawDuration);
    if (!Number.isFinite(durationS) || durationS <= 0) {
      throw new Error(`manifest line ${i + 1}: duration_s must be a positive number, got ${JSON.stringify(rawDuration)}`);
    }
    seen.add(uttId);
    entries.push({ path, uttId, durationS });
  }
  return entries;
}

export function readManifestFile(path: string): ManifestEntry[] {
  return parseManifest(readFileSync(path, "utf-8"));
}

/**
 * Prefix of the dataset listing that covers the checkpoint grid: entries in
 * dataset order, stopping once cumulative duration reaches the last
 * checkpoint. Re-running over the same listing returns the identical
 * manifest, which is what makes downstream windows reproducible.
 */
export function buildCumulativeManifest(entries: ManifestEntry[], grid: CheckpointGrid): ManifestEntry[] {
  if (!(grid.stepMinutes > 0) || !(grid.maxMinutes > 0)) {
    throw new Error("checkpoint grid minutes must be positive");
  }
  const targetS = grid.maxMinutes * 60;
  const manifest: ManifestEntry[] = [];
  let cumulativeS = 0;
  for (const entry of entries) {
    if (cumulativeS >= targetS) {
      break;
    }
    manifest.push(entry);
    cumulativeS += entry.durationS;
  }
  return manifest;
}
