import * as fs from 'node:fs';
import * as os from 'node:os';
import * as path from 'node:path';
import { describe, expect, it } from 'vitest';
import { runOracleCli } from '../src/cli-oracle.js';
import { embedOracle, ORACLE_DIM, syntheticVector } from '../src/oracle.js';
import { EmbedRequest, EmbeddingRecord } from '../src/protocol.js';

const req = (id: string, kind: 'audio' | 'text', payload: string): EmbedRequest => ({
  id,
  kind,
  payload,
});

describe('syntheticVector', () => {
  it('is deterministic and unit-norm', () => {
    const a = syntheticVector('text:bright');
    const b = syntheticVector('text:bright');
    expect(a).toEqual(b);
    expect(a).toHaveLength(ORACLE_DIM);
    const norm = Math.sqrt(a.reduce((s, v) => s + v * v, 0));
    expect(norm).toBeCloseTo(1, 12);
  });

  it('separates distinct keys', () => {
    expect(syntheticVector('text:bright')).not.toEqual(syntheticVector('text:dark'));
  });
});

describe('embedOracle', () => {
  it('keys text by payload and audio by basename', () => {
    const fixture = {
      text: { bright: [1, 0] },
      audio: { 'clip.wav': [0, 1] },
    };
    const records = embedOracle(
      [req('t1', 'text', 'bright'), req('a1', 'audio', '/deep/dir/clip.wav')],
      fixture,
    );
    expect(records[0].vector).toEqual([1, 0]);
    expect(records[1].vector).toEqual([0, 1]);
    expect(records.every((r) => r.model === 'oracle')).toBe(true);
  });

  it('names the missing fixture key', () => {
    expect(() => embedOracle([req('t1', 'text', 'mellow')], { text: {} })).toThrowError(
      /no text vector for key: mellow/,
    );
  });
});

describe('runOracleCli', () => {
  function writeRequests(dir: string, requests: EmbedRequest[]): string {
    const file = path.join(dir, 'requests.jsonl');
    fs.writeFileSync(file, requests.map((r) => JSON.stringify(r)).join('\n') + '\n');
    return file;
  }

  it('produces a validated response file and identical output across runs', () => {
    const dir = fs.mkdtempSync(path.join(os.tmpdir(), 'oracle-'));
    const requests = writeRequests(dir, [
      req('t1', 'text', 'bright'),
      req('t2', 'text', 'warm'),
    ]);
    const out1 = path.join(dir, 'out1.jsonl');
    const out2 = path.join(dir, 'out2.jsonl');
    expect(runOracleCli([requests, out1])).toBe(0);
    expect(runOracleCli([requests, out2])).toBe(0);
    expect(fs.readFileSync(out1)).toEqual(fs.readFileSync(out2));
    const records = fs
      .readFileSync(out1, 'utf-8')
      .trim()
      .split('\n')
      .map((l) => JSON.parse(l) as EmbeddingRecord);
    expect(records.map((r) => r.id)).toEqual(['t1', 't2']);
    expect(records[0].dim).toBe(ORACLE_DIM);
  });

  it('honors --fixture', () => {
    const dir = fs.mkdtempSync(path.join(os.tmpdir(), 'oracle-'));
    const fixturePath = path.join(dir, 'fixture.json');
    fs.writeFileSync(fixturePath, JSON.stringify({ text: { bright: [3, 4] } }));
    const requests = writeRequests(dir, [req('t1', 'text', 'bright')]);
    const out = path.join(dir, 'out.jsonl');
    expect(runOracleCli(['--fixture', fixturePath, requests, out])).toBe(0);
    expect(JSON.parse(fs.readFileSync(out, 'utf-8').trim()).vector).toEqual([3, 4]);
  });

  it('returns usage error on bad argv', () => {
    expect(runOracleCli(['only-one-arg'])).toBe(2);
    expect(runOracleCli(['a', 'b', 'c'])).toBe(2);
  });
});
