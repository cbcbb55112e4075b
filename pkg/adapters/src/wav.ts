/**
 * Minimal WAV decode/encode plus the mono/resample preprocessing the
 * embedding models expect. Supports PCM16, PCM24, and IEEE float32.
 */

import * as fs from 'node:fs';

export interface Audio {
  /** mono or multichannel samples, one Float64Array per channel */
  channels: Float64Array[];
  sampleRate: number;
}

export class WavError extends Error {}

export function readWav(path: string): Audio {
  const buf = fs.readFileSync(path);
  if (buf.length < 12 || buf.toString('ascii', 0, 4) !== 'RIFF' || buf.toString('ascii', 8, 12) !== 'WAVE') {
    throw new WavError(`${path}: not a RIFF/WAVE file`);
  }
  let pos = 12;
  let fmt: { tag: number; channels: number; rate: number; bits: number } | null = null;
  let data: Buffer | null = null;
  while (pos + 8 <= buf.length) {
    const id = buf.toString('ascii', pos, pos + 4);
    const size = buf.readUInt32LE(pos + 4);
    const body = buf.subarray(pos + 8, pos + 8 + size);
    if (id === 'fmt ') {
      let tag = body.readUInt16LE(0);
      if (tag === 0xfffe && body.length >= 26) tag = body.readUInt16LE(24);
      fmt = {
        tag,
        channels: body.readUInt16LE(2),
        rate: body.readUInt32LE(4),
        bits: body.readUInt16LE(14),
      };
    } else if (id === 'data') {
      data = body;
    }
    pos += 8 + size + (size % 2);
  }
  if (!fmt || !data) throw new WavError(`${path}: missing fmt or data chunk`);

  const { tag, channels, rate, bits } = fmt;
  let interleaved: Float64Array;
  if (tag === 1 && bits === 16) {
    const n = Math.floor(data.length / 2);
    interleaved = new Float64Array(n);
    for (let i = 0; i < n; i++) interleaved[i] = data.readInt16LE(i * 2) / 32768;
  } else if (tag === 1 && bits === 24) {
    const n = Math.floor(data.length / 3);
    interleaved = new Float64Array(n);
    for (let i = 0; i < n; i++) {
      let v = data[i * 3] | (data[i * 3 + 1] << 8) | (data[i * 3 + 2] << 16);
      if (v >= 1 << 23) v -= 1 << 24;
      interleaved[i] = v / (1 << 23);
    }
  } else if (tag === 3 && bits === 32) {
    const n = Math.floor(data.length / 4);
    interleaved = new Float64Array(n);
    for (let i = 0; i < n; i++) interleaved[i] = data.readFloatLE(i * 4);
  } else {
    throw new WavError(`${path}: unsupported encoding (tag ${tag}, ${bits}-bit)`);
  }
  if (interleaved.length === 0) throw new WavError(`${path}: zero-length audio`);

  const frames = Math.floor(interleaved.length / channels);
  const out: Float64Array[] = [];
  for (let c = 0; c < channels; c++) {
    const ch = new Float64Array(frames);
    for (let i = 0; i < frames; i++) ch[i] = interleaved[i * channels + c];
    out.push(ch);
  }
  return { channels: out, sampleRate: rate };
}

export function writeWavFloat32(path: string, audio: Audio): void {
  const channels = audio.channels.length;
  const frames = audio.channels[0].length;
  const payload = Buffer.alloc(frames * channels * 4);
  for (let i = 0; i < frames; i++) {
    for (let c = 0; c < channels; c++) {
      payload.writeFloatLE(audio.channels[c][i], (i * channels + c) * 4);
    }
  }
  const header = Buffer.alloc(44);
  header.write('RIFF', 0, 'ascii');
  header.writeUInt32LE(36 + payload.length, 4);
  header.write('WAVE', 8, 'ascii');
  header.write('fmt ', 12, 'ascii');
  header.writeUInt32LE(16, 16);
  header.writeUInt16LE(3, 20); // IEEE float
  header.writeUInt16LE(channels, 22);
  header.writeUInt32LE(audio.sampleRate, 24);
  header.writeUInt32LE(audio.sampleRate * channels * 4, 28);
  header.writeUInt16LE(channels * 4, 32);
  header.writeUInt16LE(32, 34);
  header.write('data', 36, 'ascii');
  header.writeUInt32LE(payload.length, 40);
  fs.writeFileSync(path, Buffer.concat([header, payload]));
}

export function downmixMono(audio: Audio): Audio {
  if (audio.channels.length === 1) return audio;
  const frames = audio.channels[0].length;
  const mono = new Float64Array(frames);
  for (let i = 0; i < frames; i++) {
    let sum = 0;
    for (const ch of audio.channels) sum += ch[i];
    mono[i] = sum / audio.channels.length;
  }
  return { channels: [mono], sampleRate: audio.sampleRate };
}

/** Linear-interpolation resampler; adequate for embedding front-ends. */
export function resample(audio: Audio, targetRate: number): Audio {
  if (audio.sampleRate === targetRate) return audio;
  const ratio = audio.sampleRate / targetRate;
  const out: Float64Array[] = [];
  for (const ch of audio.channels) {
    const frames = Math.max(1, Math.round(ch.length / ratio));
    const res = new Float64Array(frames);
    for (let i = 0; i < frames; i++) {
      const src = i * ratio;
      const lo = Math.min(Math.floor(src), ch.length - 1);
      const hi = Math.min(lo + 1, ch.length - 1);
      const frac = src - lo;
      res[i] = ch[lo] * (1 - frac) + ch[hi] * frac;
    }
    out.push(res);
  }
  return { channels: out, sampleRate: targetRate };
}
