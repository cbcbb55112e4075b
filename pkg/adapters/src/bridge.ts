/**
 * Model bridge: the TypeScript side owns the protocol and the audio
 * preprocessing (decode, mono downmix, resample to the model's native rate),
 * then hands a single JSON job to a Python backend process that runs the
 * actual encoder. Keeping inference behind a narrow subprocess boundary means
 * heavyweight model dependencies never leak into this package.
 */

import * as fs from 'node:fs';
import * as os from 'node:os';
import * as path from 'node:path';
import { fileURLToPath } from 'node:url';
import { spawnSync } from 'node:child_process';
import { EmbedRequest, EmbeddingRecord, ProtocolError, readRequests, validateRecords, writeEmbeddings } from './protocol.js';
import { downmixMono, readWav, resample, writeWavFloat32 } from './wav.js';

export interface ModelConfig {
  /** model tag stamped on every embedding record */
  name: string;
  /** sample rate the encoder's front-end expects */
  targetRate: number;
  /** backend script filename under py/ */
  backendScript: string;
}

export const MODEL_CONFIGS: Record<string, ModelConfig> = {
  'ms-clap': { name: 'ms-clap', targetRate: 44100, backendScript: 'msclap_backend.py' },
  'laion-clap': { name: 'laion-clap', targetRate: 48000, backendScript: 'laion_clap_backend.py' },
  'muq-mulan': { name: 'muq-mulan', targetRate: 24000, backendScript: 'muq_mulan_backend.py' },
};

interface BackendJob {
  model: string;
  sample_rate: number;
  items: { id: string; kind: 'audio' | 'text'; payload: string }[];
}

interface BackendResult {
  vectors: Record<string, number[]>;
}

function packageRoot(): string {
  // dist/bridge.js or src/bridge.ts -> package root one level up
  return path.resolve(path.dirname(fileURLToPath(import.meta.url)), '..');
}

export interface BridgeOptions {
  /** override backend script path (tests point this at a fake backend) */
  backend?: string;
  /** python interpreter; default python3 */
  python?: string;
}

export function runBridge(
  config: ModelConfig,
  requestsPath: string,
  outPath: string,
  options: BridgeOptions = {},
): void {
  const requests = readRequests(requestsPath);
  const workdir = fs.mkdtempSync(path.join(os.tmpdir(), `adapter-${config.name}-`));
  try {
    const items = requests.map((req) => ({
      id: req.id,
      kind: req.kind,
      payload: req.kind === 'audio' ? preprocessAudio(req, config, workdir) : req.payload,
    }));
    const job: BackendJob = { model: config.name, sample_rate: config.targetRate, items };
    const jobPath = path.join(workdir, 'job.json');
    const resultPath = path.join(workdir, 'result.json');
    fs.writeFileSync(jobPath, JSON.stringify(job), 'utf-8');

    const backend =
      options.backend ??
      process.env.TIMBREBENCH_ADAPTER_BACKEND ??
      path.join(packageRoot(), 'py', config.backendScript);
    const python = options.python ?? process.env.TIMBREBENCH_ADAPTER_PYTHON ?? 'python3';
    const proc = spawnSync(python, [backend, jobPath, resultPath], { encoding: 'utf-8' });
    if (proc.error) {
      throw new ProtocolError(`failed to launch backend ${backend}: ${proc.error.message}`);
    }
    if (proc.status !== 0) {
      throw new ProtocolError(
        `backend ${path.basename(backend)} exited with ${proc.status}:\n${proc.stderr || proc.stdout}`,
      );
    }
    const result = JSON.parse(fs.readFileSync(resultPath, 'utf-8')) as BackendResult;
    const records: EmbeddingRecord[] = requests.map((req) => {
      const vector = result.vectors[req.id];
      if (!vector) throw new ProtocolError(`backend returned no vector for id: ${req.id}`);
      return { id: req.id, kind: req.kind, model: config.name, dim: vector.length, vector };
    });
    validateRecords(records, requests);
    writeEmbeddings(
      outPath,
      records,
      `model=${config.name} rate=${config.targetRate} preprocessing=mono+linear-resample`,
    );
  } finally {
    fs.rmSync(workdir, { recursive: true, force: true });
  }
}

function preprocessAudio(req: EmbedRequest, config: ModelConfig, workdir: string): string {
  if (!fs.existsSync(req.payload)) {
    throw new ProtocolError(`audio file not found for id ${req.id}: ${req.payload}`);
  }
  const audio = resample(downmixMono(readWav(req.payload)), config.targetRate);
  const out = path.join(workdir, `${req.id}.wav`);
  writeWavFloat32(out, audio);
  return out;
}

/** Shared argv handling for the three model adapter executables. */
export function runBridgeCli(modelKey: string, argv: string[]): number {
  const config = MODEL_CONFIGS[modelKey];
  const args = [...argv];
  const options: BridgeOptions = {};
  const backendIdx = args.indexOf('--backend');
  if (backendIdx >= 0) {
    options.backend = args[backendIdx + 1];
    args.splice(backendIdx, 2);
  }
  if (args.length !== 2) {
    process.stderr.write(`usage: adapter-${modelKey} [--backend script.py] <requests.jsonl> <out.jsonl>\n`);
    return 2;
  }
  runBridge(config, args[0], args[1], options);
  return 0;
}

export function bridgeMain(modelKey: string): void {
  try {
    process.exit(runBridgeCli(modelKey, process.argv.slice(2)));
  } catch (err) {
    process.stderr.write(`adapter-${modelKey}: ${err instanceof Error ? err.message : err}\n`);
    process.exit(1);
  }
}
