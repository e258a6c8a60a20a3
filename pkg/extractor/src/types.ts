// Shapes of the emitted log: field names and ordering must match what the
// analysis CLI parses, so these mirror its JSON schema exactly.
export interface CandidateEntry {
  id: number; // non-negative token id
  s: string; // decoded token text
  lp: number; // log-probability, finite and <= 0
}

export interface DecodingStep {
  topk: CandidateEntry[];
}

export interface CandidateRecord {
  utt_id: string;
  language: string;
  duration_s: number;
  steps: DecodingStep[];
}

export interface ManifestEntry {
  path: string;
  uttId: string;
  durationS: number;
}

export interface CheckpointGrid {
  stepMinutes: number;
  maxMinutes: number;
}

export interface ExtractionConfig {
  model: string;
  language: string;
  k: number;
  beamSize: number;
  temperature: number;
  sampleRate: number;
}

export function defaultConfig(overrides: Partial<ExtractionConfig> = {}): ExtractionConfig {
  const config: ExtractionConfig = {
    model: "signal-v1",
    language: "xx",
    k: 50,
    beamSize: 5,
    temperature: 0.2,
    sampleRate: 16000,
    ...overrides,
  };
  if (!Number.isInteger(config.k) || config.k < 1) {
    throw new Error(`k must be a positive integer, got ${config.k}`);
  }
  if (!Number.isInteger(config.beamSize) || config.beamSize < 1) {
    throw new Error(`beamSize must be a positive integer, got ${config.beamSize}`);
  }
  if (!(config.temperature >= 0)) {
    throw new Error(`temperature must be >= 0, got ${config.temperature}`);
  }
  if (config.language === "") {
    throw new Error("language must be a non-empty code");
  }
  return config;
}

export class ModelLoadFailure extends Error {
  constructor(model: string, detail: string) {
    super(`ModelLoadFailure: cannot load ${JSON.stringify(model)}: ${detail}`);
    this.name = "ModelLoadFailure";
  }
}

export class AudioDecodeFailure extends Error {
  readonly uttId: string;

  constructor(uttId: string, detail: string) {
    super(`AudioDecodeFailure: ${uttId}: ${detail}`);
    this.name = "AudioDecodeFailure";
    this.uttId = uttId;
  }
}
