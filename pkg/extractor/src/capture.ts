import { readFileSync } from "node:fs";
import { DecoderBackend, loadBackend } from "./backend.js";
import { decodeWavPcm16 } from "./wav.js";
import {
  AudioDecodeFailure,
  CandidateRecord,
  ExtractionConfig,
  ManifestEntry,
} from "./types.js";

export interface SkippedUtterance {
  uttId: string;
  reason: string;
}

export interface CaptureResult {
  records: CandidateRecord[];
  emittedDurationS: number;
  skipped: SkippedUtterance[];
}

export type WarnFn = (message: string) => void;

/**
 * Run the decoder over every manifest entry and collect candidate records.
 *
 * Utterances whose audio cannot be decoded are skipped with a warning; a
 * model that cannot be loaded aborts the whole run. Emitted duration_s is
 * measured from the decoded audio, so the total matches the manifest's
 * bookkeeping to within container rounding.
 */
export function captureCandidates(
  manifest: ManifestEntry[],
  config: ExtractionConfig,
  backend?: DecoderBackend,
  warn: WarnFn = (m) => console.warn(m),
): CaptureResult {
  const decoder = backend ?? loadBackend(config.model);
  const records: CandidateRecord[] = [];
  const skipped: SkippedUtterance[] = [];
  let emittedDurationS = 0;

  for (const entry of manifest) {
    let audio;
    try {
      const buffer = readFileSync(entry.path);
      audio = decodeWavPcm16(buffer);
      if (audio.sampleRate !== config.sampleRate) {
        throw new Error(`sample rate ${audio.sampleRate} Hz, need ${config.sampleRate} Hz`);
      }
    } catch (err) {
      const failure = new AudioDecodeFailure(entry.uttId, (err as Error).message);
      warn(failure.message);
      skipped.push({ uttId: entry.uttId, reason: failure.message });
      continue;
    }
    records.push({
      utt_id: entry.uttId,
      language: config.language,
      duration_s: audio.durationS,
      steps: decoder.decode(audio.samples, config),
    });
    emittedDurationS += audio.durationS;
  }

  return { records, emittedDurationS, skipped };
}
