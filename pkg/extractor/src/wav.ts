export interface PcmAudio {
  sampleRate: number;
  samples: Int16Array;
  durationS: number;
}

// Minimal RIFF/WAVE reader for the only format the extractor accepts:
// uncompressed PCM, 16-bit, mono. Anything else is a decode error, not a
// resampling job.
export function decodeWavPcm16(buffer: Buffer): PcmAudio {
  if (buffer.length < 12 || buffer.toString("ascii", 0, 4) !== "RIFF") {
    throw new Error("not a RIFF file");
  }
  if (buffer.toString("ascii", 8, 12) !== "WAVE") {
    throw new Error("RIFF file is not WAVE");
  }

  let sampleRate = 0;
  let bitsPerSample = 0;
  let channels = 0;
  let formatSeen = false;
  let data: Buffer | null = null;

  let offset = 12;
  while (offset + 8 <= buffer.length) {
    const chunkId = buffer.toString("ascii", offset, offset + 4);
    const chunkSize = buffer.readUInt32LE(offset + 4);
    const body = offset + 8;
    if (body + chunkSize > buffer.length) {
      throw new Error(`truncated ${chunkId.trim()} chunk`);
    }
    if (chunkId === "fmt ") {
      if (chunkSize < 16) {
        throw new Error("fmt chunk too short");
      }
      const audioFormat = buffer.readUInt16LE(body);
      channels = buffer.readUInt16LE(body + 2);
      sampleRate = buffer.readUInt32LE(body + 4);
      bitsPerSample = buffer.readUInt16LE(body + 14);
      if (audioFormat !== 1) {
        throw new Error(`unsupported audio format code ${audioFormat}, need PCM (1)`);
      }
      if (channels !== 1) {
        throw new Error(`need mono audio, got ${channels} channels`);
      }
      if (bitsPerSample !== 16) {
        throw new Error(`need 16-bit samples, got ${bitsPerSample}`);
      }
      formatSeen = true;
    } else if (chunkId === "data") {
      data = buffer.subarray(body, body + chunkSize);
    }
    // chunk bodies are padded to even length
    offset = body + chunkSize + (chunkSize % 2);
  }

  if (!formatSeen) {
    throw new Error("missing fmt chunk");
  }
  if (data === null) {
    throw new Error("missing data chunk");
  }
  if (data.length % 2 !== 0) {
    throw new Error("data chunk length is not a whole number of 16-bit samples");
  }
  if (data.length === 0) {
    throw new Error("data chunk is empty");
  }

  const samples = new Int16Array(data.length / 2);
  for (let i = 0; i < samples.length; i++) {
    samples[i] = data.readInt16LE(i * 2);
  }
  return { sampleRate, samples, durationS: samples.length / sampleRate };
}

export function encodeWavPcm16(samples: Int16Array, sampleRate: number): Buffer {
  const dataSize = samples.length * 2;
  const buffer = Buffer.alloc(44 + dataSize);
  buffer.write("RIFF", 0, "ascii");
  buffer.writeUInt32LE(36 + dataSize, 4);
  buffer.write("WAVE", 8, "ascii");
  buffer.write("fmt ", 12, "ascii");
  buffer.writeUInt32LE(16, 16); // fmt chunk size
  buffer.writeUInt16LE(1, 20); // PCM
  buffer.writeUInt16LE(1, 22); // mono
  buffer.writeUInt32LE(sampleRate, 24);
  buffer.writeUInt32LE(sampleRate * 2, 28); // byte rate
  buffer.writeUInt16LE(2, 32); // block align
  buffer.writeUInt16LE(16, 34);
  buffer.write("data", 36, "ascii");
  buffer.writeUInt32LE(dataSize, 40);
  for (let i = 0; i < samples.length; i++) {
    buffer.writeInt16LE(samples[i], 44 + i * 2);
  }
  return buffer;
}
