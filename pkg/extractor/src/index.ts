export * from "./types.js";
export { decodeWavPcm16, encodeWavPcm16 } from "./wav.js";
export type { PcmAudio } from "./wav.js";
export { SignalHashBackend, loadBackend } from "./backend.js";
export type { DecoderBackend } from "./backend.js";
export { parseManifest, readManifestFile, buildCumulativeManifest } from "./manifest.js";
export { recordToJsonLine, writeLog } from "./logwriter.js";
export { captureCandidates } from "./capture.js";
export type { CaptureResult, SkippedUtterance, WarnFn } from "./capture.js";
