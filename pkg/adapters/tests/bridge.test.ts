import * as fs from 'node:fs';
import * as os from 'node:os';
import * as path from 'node:path';
import { describe, expect, it } from 'vitest';
import { MODEL_CONFIGS, runBridge } from '../src/bridge.js';
import { EmbedRequest, EmbeddingRecord, ProtocolError } from '../src/protocol.js';
import { writeWavFloat32 } from '../src/wav.js';

// Stand-in for a real model backend: verifies it received mono WAVs at the
// requested rate, then emits deterministic vectors derived from each id.
const FAKE_BACKEND = `
import hashlib, json, sys

from scipy.io import wavfile

with open(sys.argv[1]) as fh:
    job = json.load(fh)
vectors = {}
for item in job["items"]:
    if item["kind"] == "audio":
        rate, data = wavfile.read(item["payload"])
        assert rate == job["sample_rate"], "wrong sample rate"
        assert data.ndim == 1, "expected mono"
    seed = hashlib.sha256(item["id"].encode()).digest()
    vectors[item["id"]] = [b / 255.0 + 0.001 for b in seed[:4]]
with open(sys.argv[2], "w") as fh:
    json.dump({"vectors": vectors}, fh)
`;

const FAILING_BACKEND = `
import sys
print("model package missing: no such module", file=sys.stderr)
sys.exit(3)
`;

function setup(): { dir: string; backend: string; requestsPath: string; outPath: string } {
  const dir = fs.mkdtempSync(path.join(os.tmpdir(), 'bridge-'));
  const backend = path.join(dir, 'fake_backend.py');
  fs.writeFileSync(backend, FAKE_BACKEND);

  const clip = path.join(dir, 'clip.wav');
  const samples = new Float64Array(800);
  for (let i = 0; i < samples.length; i++) samples[i] = Math.sin(i / 10) * 0.4;
  writeWavFloat32(clip, { channels: [samples, samples], sampleRate: 8000 });

  const requests: EmbedRequest[] = [
    { id: 'audio__clip', kind: 'audio', payload: clip },
    { id: 'text__bright', kind: 'text', payload: 'bright' },
  ];
  const requestsPath = path.join(dir, 'requests.jsonl');
  fs.writeFileSync(requestsPath, requests.map((r) => JSON.stringify(r)).join('\n') + '\n');
  return { dir, backend, requestsPath, outPath: path.join(dir, 'out.jsonl') };
}

describe('runBridge', () => {
  it('preprocesses audio, delegates to the backend, and writes validated records', () => {
    const { backend, requestsPath, outPath } = setup();
    runBridge(MODEL_CONFIGS['ms-clap'], requestsPath, outPath, { backend });
    const records = fs
      .readFileSync(outPath, 'utf-8')
      .trim()
      .split('\n')
      .map((l) => JSON.parse(l) as EmbeddingRecord);
    expect(records.map((r) => r.id)).toEqual(['audio__clip', 'text__bright']);
    expect(records.every((r) => r.model === 'ms-clap' && r.dim === 4)).toBe(true);
    const sidecar = fs.readFileSync(outPath.replace('.jsonl', '.provenance.txt'), 'utf-8');
    expect(sidecar).toContain('rate=44100');
  });

  it('resamples to each model’s native rate', () => {
    for (const key of ['laion-clap', 'muq-mulan'] as const) {
      const { backend, requestsPath, outPath } = setup();
      // the fake backend asserts the wav it receives matches job.sample_rate
      runBridge(MODEL_CONFIGS[key], requestsPath, outPath, { backend });
      expect(fs.existsSync(outPath)).toBe(true);
    }
  });

  it('is deterministic across runs', () => {
    const { dir, backend, requestsPath } = setup();
    const out1 = path.join(dir, 'a.jsonl');
    const out2 = path.join(dir, 'b.jsonl');
    runBridge(MODEL_CONFIGS['ms-clap'], requestsPath, out1, { backend });
    runBridge(MODEL_CONFIGS['ms-clap'], requestsPath, out2, { backend });
    expect(fs.readFileSync(out1)).toEqual(fs.readFileSync(out2));
  });

  it('surfaces backend stderr when the model package is unavailable', () => {
    const { dir, requestsPath, outPath } = setup();
    const failing = path.join(dir, 'failing_backend.py');
    fs.writeFileSync(failing, FAILING_BACKEND);
    expect(() =>
      runBridge(MODEL_CONFIGS['laion-clap'], requestsPath, outPath, { backend: failing }),
    ).toThrowError(/model package missing/);
  });

  it('names a missing audio file', () => {
    const { dir, backend, outPath } = setup();
    const requestsPath = path.join(dir, 'missing.jsonl');
    fs.writeFileSync(
      requestsPath,
      JSON.stringify({ id: 'audio__gone', kind: 'audio', payload: path.join(dir, 'gone.wav') }) +
        '\n',
    );
    expect(() =>
      runBridge(MODEL_CONFIGS['ms-clap'], requestsPath, outPath, { backend }),
    ).toThrowError(/audio file not found for id audio__gone/);
  });

  it('rejects a backend that drops a request', () => {
    const { dir, requestsPath, outPath } = setup();
    const dropping = path.join(dir, 'dropping_backend.py');
    fs.writeFileSync(
      dropping,
      FAKE_BACKEND.replace('for item in job["items"]:', 'for item in job["items"][:1]:'),
    );
    expect(() =>
      runBridge(MODEL_CONFIGS['ms-clap'], requestsPath, outPath, { backend: dropping }),
    ).toThrow(ProtocolError);
  });
});
