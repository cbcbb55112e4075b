/**
 * File-based embedding protocol shared with the harness:
 * requests.jsonl in, embedding records out, exit 0 on success.
 */

import * as fs from 'node:fs';

export type Kind = 'audio' | 'text';

export interface EmbedRequest {
  id: string;
  kind: Kind;
  /** audio: file path; text: descriptor string */
  payload: string;
}

export interface EmbeddingRecord {
  id: string;
  kind: Kind;
  model: string;
  dim: number;
  vector: number[];
}

export class ProtocolError extends Error {}

export function readRequests(path: string): EmbedRequest[] {
  const text = fs.readFileSync(path, 'utf-8');
  const requests: EmbedRequest[] = [];
  const seen = new Set<string>();
  const lines = text.split('\n');
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i].trim();
    if (!line) continue;
    let record: unknown;
    try {
      record = JSON.parse(line);
    } catch (err) {
      throw new ProtocolError(`${path}, line ${i + 1}: invalid JSON (${err})`);
    }
    const req = record as Partial<EmbedRequest>;
    if (
      typeof req.id !== 'string' ||
      (req.kind !== 'audio' && req.kind !== 'text') ||
      typeof req.payload !== 'string'
    ) {
      throw new ProtocolError(`${path}, line ${i + 1}: malformed request record`);
    }
    if (seen.has(req.id)) {
      throw new ProtocolError(`duplicate request id: ${req.id}`);
    }
    seen.add(req.id);
    requests.push(req as EmbedRequest);
  }
  return requests;
}

export function validateRecords(records: EmbeddingRecord[], requests: EmbedRequest[]): void {
  const wanted = new Set(requests.map((r) => r.id));
  const produced = new Set<string>();
  let dim: number | null = null;
  for (const rec of records) {
    if (!wanted.has(rec.id)) {
      throw new ProtocolError(`response for unknown id: ${rec.id}`);
    }
    if (produced.has(rec.id)) {
      throw new ProtocolError(`duplicate response id: ${rec.id}`);
    }
    produced.add(rec.id);
    if (rec.vector.length !== rec.dim || rec.dim < 1) {
      throw new ProtocolError(`id ${rec.id}: declared dim ${rec.dim} != vector length`);
    }
    if (dim === null) dim = rec.dim;
    if (rec.dim !== dim) {
      throw new ProtocolError(`id ${rec.id}: dim ${rec.dim} differs from batch dim ${dim}`);
    }
    if (!rec.vector.every((v) => Number.isFinite(v))) {
      throw new ProtocolError(`id ${rec.id}: non-finite vector entry`);
    }
    if (rec.vector.every((v) => v === 0)) {
      throw new ProtocolError(`id ${rec.id}: zero vector`);
    }
  }
  for (const id of wanted) {
    if (!produced.has(id)) {
      throw new ProtocolError(`no response for id: ${id}`);
    }
  }
}

export function writeEmbeddings(
  path: string,
  records: EmbeddingRecord[],
  provenance?: string,
): void {
  // A leading comment line documents preprocessing; the harness skips blanks
  // and the loader tolerates it being absent.
  const lines = records.map((r) => JSON.stringify(r));
  fs.writeFileSync(path, lines.join('\n') + (lines.length ? '\n' : ''), 'utf-8');
  if (provenance) {
    fs.appendFileSync(path.replace(/\.jsonl$/, '') + '.provenance.txt', provenance + '\n');
  }
}
