import { CandidateEntry, DecodingStep, ExtractionConfig, ModelLoadFailure } from "./types.js";

export interface DecoderBackend {
  readonly name: string;
  readonly vocabSize: number;
  // One call per utterance; must be deterministic in (samples, config).
  decode(samples: Int16Array, config: ExtractionConfig): DecodingStep[];
}

const MASK64 = (1n << 64n) - 1n;
const FNV_OFFSET = 14695981039346656037n;
const FNV_PRIME = 1099511628211n;

function fnv1a64(bytes: Uint8Array, seed: bigint): bigint {
  let h = (FNV_OFFSET ^ seed) & MASK64;
  for (const b of bytes) {
    h = ((h ^ BigInt(b)) * FNV_PRIME) & MASK64;
  }
  return h;
}

class Splitmix64 {
  private state: bigint;

  constructor(seed: bigint) {
    this.state = seed & MASK64;
  }

  next(): bigint {
    this.state = (this.state + 0x9e3779b97f4a7c15n) & MASK64;
    let z = this.state;
    z = ((z ^ (z >> 30n)) * 0xbf58476d1ce4e5b9n) & MASK64;
    z = ((z ^ (z >> 27n)) * 0x94d049bb133111ebn) & MASK64;
    return (z ^ (z >> 31n)) & MASK64;
  }

  uniform(): number {
    // 53-bit mantissa, in [0, 1)
    return Number(this.next() >> 11n) / 2 ** 53;
  }
}

const ALPHABET = "abcdefghijklmnopqrstuvwxyz";

function tokenText(id: number): string {
  let s = "";
  let v = id;
  do {
    s = ALPHABET[v % 26] + s;
    v = Math.floor(v / 26);
  } while (v > 0);
  // every third piece is word-initial and carries the leading space
  return id % 3 === 0 ? " " + s : s;
}

const STEP_SECONDS = 0.5; // one decoding step per half second of audio
const SIGNAL_VOCAB = 4096;
const SIGNAL_SEED = 0x746f6b736174n; // backend version tag, bump on behavior change

/**
 * Deterministic stand-in for a neural decoder hook: candidate lists are
 * derived from a stable hash of each audio frame's PCM content, so identical
 * audio always yields identical logs and different audio diverges. It
 * exercises the full emission contract (framing, K-sized sorted candidate
 * lists, log-probabilities) without model weights.
 */
export class SignalHashBackend implements DecoderBackend {
  readonly name = "signal-v1";
  readonly vocabSize = SIGNAL_VOCAB;

  decode(samples: Int16Array, config: ExtractionConfig): DecodingStep[] {
    if (config.k > this.vocabSize) {
      throw new Error(`k=${config.k} exceeds the ${this.name} vocabulary of ${this.vocabSize}`);
    }
    const stepSamples = Math.max(1, Math.round(config.sampleRate * STEP_SECONDS));
    const steps: DecodingStep[] = [];
    for (let start = 0; start < samples.length; start += stepSamples) {
      const frame = samples.subarray(start, Math.min(start + stepSamples, samples.length));
      // explicit little-endian bytes so the hash is platform-independent
      const bytes = new Uint8Array(frame.length * 2);
      for (let i = 0; i < frame.length; i++) {
        bytes[i * 2] = frame[i] & 0xff;
        bytes[i * 2 + 1] = (frame[i] >> 8) & 0xff;
      }
      const rng = new Splitmix64(fnv1a64(bytes, SIGNAL_SEED + BigInt(steps.length)));
      const weights = new Map<number, number>();
      while (weights.size < config.k) {
        const id = Number(rng.next() % BigInt(this.vocabSize));
        if (!weights.has(id)) {
          weights.set(id, 1e-12 + rng.uniform());
        }
      }
      let total = 0;
      for (const w of weights.values()) {
        total += w;
      }
      const topk: CandidateEntry[] = [...weights.entries()]
        .sort((a, b) => b[1] - a[1] || a[0] - b[0])
        .map(([id, w]) => ({ id, s: tokenText(id), lp: Math.log(w / total) }));
      steps.push({ topk });
    }
    return steps;
  }
}

const BACKENDS: Record<string, () => DecoderBackend> = {
  "signal-v1": () => new SignalHashBackend(),
};

export function loadBackend(model: string): DecoderBackend {
  const factory = BACKENDS[model];
  if (!factory) {
    const known = Object.keys(BACKENDS).join(", ");
    throw new ModelLoadFailure(model, `unknown model identifier (available: ${known})`);
  }
  return factory();
}
