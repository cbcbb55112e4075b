/**
 * Deterministic oracle embedder. Vectors come either from an explicit JSON
 * fixture (exact control for tests) or, by default, from a sha256-seeded
 * pseudo-random unit vector per request key — stable across runs and
 * machines, requiring no model weights.
 */

import * as crypto from 'node:crypto';
import * as fs from 'node:fs';
import * as path from 'node:path';
import { EmbedRequest, EmbeddingRecord, ProtocolError } from './protocol.js';

export const ORACLE_DIM = 16;
export const ORACLE_MODEL = 'oracle';

export interface Fixture {
  /** vectors for text requests, keyed by payload string */
  text?: Record<string, number[]>;
  /** vectors for audio requests, keyed by file basename */
  audio?: Record<string, number[]>;
}

export function loadFixture(fixturePath: string): Fixture {
  let parsed: unknown;
  try {
    parsed = JSON.parse(fs.readFileSync(fixturePath, 'utf-8'));
  } catch (err) {
    throw new ProtocolError(`fixture ${fixturePath}: ${err}`);
  }
  if (typeof parsed !== 'object' || parsed === null) {
    throw new ProtocolError(`fixture ${fixturePath}: expected a JSON object`);
  }
  return parsed as Fixture;
}

/** Unit vector derived from sha256(key); identical for identical keys. */
export function syntheticVector(key: string, dim: number = ORACLE_DIM): number[] {
  const vec: number[] = [];
  let counter = 0;
  while (vec.length < dim) {
    const digest = crypto.createHash('sha256').update(`${key}#${counter}`).digest();
    for (let i = 0; i + 4 <= digest.length && vec.length < dim; i += 4) {
      vec.push(digest.readUInt32BE(i) / 0xffffffff - 0.5);
    }
    counter++;
  }
  const norm = Math.sqrt(vec.reduce((s, v) => s + v * v, 0));
  return vec.map((v) => v / norm);
}

export function embedOracle(requests: EmbedRequest[], fixture?: Fixture): EmbeddingRecord[] {
  return requests.map((req) => {
    let vector: number[] | undefined;
    if (fixture) {
      const table = req.kind === 'text' ? fixture.text : fixture.audio;
      const key = req.kind === 'text' ? req.payload : path.basename(req.payload);
      vector = table?.[key];
      if (!vector) {
        throw new ProtocolError(`fixture has no ${req.kind} vector for key: ${key}`);
      }
    } else {
      vector = syntheticVector(`${req.kind}:${req.kind === 'text' ? req.payload : path.basename(req.payload)}`);
    }
    return { id: req.id, kind: req.kind, model: ORACLE_MODEL, dim: vector.length, vector };
  });
}
