import * as fs from 'node:fs';
import * as os from 'node:os';
import * as path from 'node:path';
import { describe, expect, it } from 'vitest';
import { Audio, downmixMono, readWav, resample, WavError, writeWavFloat32 } from '../src/wav.js';

function tmpPath(name: string): string {
  return path.join(fs.mkdtempSync(path.join(os.tmpdir(), 'wav-')), name);
}

function sine(freq: number, rate: number, seconds: number): Float64Array {
  const n = Math.round(rate * seconds);
  const out = new Float64Array(n);
  for (let i = 0; i < n; i++) out[i] = 0.5 * Math.sin((2 * Math.PI * freq * i) / rate);
  return out;
}

function writePcm16(file: string, samples: number[], rate: number, channels = 1): void {
  const payload = Buffer.alloc(samples.length * 2);
  samples.forEach((s, i) => payload.writeInt16LE(Math.round(s * 32768), i * 2));
  const header = Buffer.alloc(44);
  header.write('RIFF', 0, 'ascii');
  header.writeUInt32LE(36 + payload.length, 4);
  header.write('WAVE', 8, 'ascii');
  header.write('fmt ', 12, 'ascii');
  header.writeUInt32LE(16, 16);
  header.writeUInt16LE(1, 20);
  header.writeUInt16LE(channels, 22);
  header.writeUInt32LE(rate, 24);
  header.writeUInt32LE(rate * channels * 2, 28);
  header.writeUInt16LE(channels * 2, 32);
  header.writeUInt16LE(16, 34);
  header.write('data', 36, 'ascii');
  header.writeUInt32LE(payload.length, 40);
  fs.writeFileSync(file, Buffer.concat([header, payload]));
}

describe('readWav / writeWavFloat32', () => {
  it('round-trips float32 within single-precision error', () => {
    const file = tmpPath('f32.wav');
    const original = sine(440, 16000, 0.05);
    writeWavFloat32(file, { channels: [original], sampleRate: 16000 });
    const back = readWav(file);
    expect(back.sampleRate).toBe(16000);
    expect(back.channels).toHaveLength(1);
    for (let i = 0; i < original.length; i++) {
      expect(Math.abs(back.channels[0][i] - original[i])).toBeLessThan(1e-6);
    }
  });

  it('decodes PCM16 and de-interleaves stereo', () => {
    const file = tmpPath('pcm16.wav');
    // frames: L=0.25 R=-0.5, L=0.5 R=0.125
    writePcm16(file, [0.25, -0.5, 0.5, 0.125], 8000, 2);
    const audio = readWav(file);
    expect(audio.channels).toHaveLength(2);
    expect(audio.channels[0][0]).toBeCloseTo(0.25, 4);
    expect(audio.channels[1][0]).toBeCloseTo(-0.5, 4);
    expect(audio.channels[0][1]).toBeCloseTo(0.5, 4);
    expect(audio.channels[1][1]).toBeCloseTo(0.125, 4);
  });

  it('rejects non-WAV input', () => {
    const file = tmpPath('garbage.wav');
    fs.writeFileSync(file, 'this is not audio');
    expect(() => readWav(file)).toThrow(WavError);
  });
});

describe('downmixMono', () => {
  it('averages channels per sample', () => {
    const audio: Audio = {
      channels: [new Float64Array([1, 0.5]), new Float64Array([0, -0.5])],
      sampleRate: 8000,
    };
    const mono = downmixMono(audio);
    expect(Array.from(mono.channels[0])).toEqual([0.5, 0]);
  });
});

describe('resample', () => {
  it('is the identity at the source rate', () => {
    const audio: Audio = { channels: [sine(440, 16000, 0.01)], sampleRate: 16000 };
    expect(resample(audio, 16000)).toBe(audio);
  });

  it('scales the frame count and preserves a low-frequency tone', () => {
    const audio: Audio = { channels: [sine(100, 16000, 0.1)], sampleRate: 16000 };
    const up = resample(audio, 48000);
    expect(up.sampleRate).toBe(48000);
    expect(up.channels[0].length).toBe(audio.channels[0].length * 3);
    // a 100 Hz tone survives linear interpolation nearly unchanged; the final
    // frames clamp to the last source sample, so compare the interior only
    const expected = sine(100, 48000, 0.1);
    for (let i = 0; i < Math.min(expected.length, up.channels[0].length) - 4; i++) {
      expect(Math.abs(up.channels[0][i] - expected[i])).toBeLessThan(1e-3);
    }
  });
});
