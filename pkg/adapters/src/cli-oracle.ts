#!/usr/bin/env node
/**
 * Oracle adapter executable: `adapter-oracle [--fixture f.json] <requests.jsonl> <out.jsonl>`
 */

import { embedOracle, loadFixture, Fixture } from './oracle.js';
import { readRequests, validateRecords, writeEmbeddings } from './protocol.js';

export function runOracleCli(argv: string[]): number {
  const args = [...argv];
  let fixture: Fixture | undefined;
  const fixtureIdx = args.indexOf('--fixture');
  if (fixtureIdx >= 0) {
    const fixturePath = args[fixtureIdx + 1];
    if (!fixturePath) {
      process.stderr.write('--fixture requires a path\n');
      return 2;
    }
    args.splice(fixtureIdx, 2);
    fixture = loadFixture(fixturePath);
  }
  if (args.length !== 2) {
    process.stderr.write('usage: adapter-oracle [--fixture f.json] <requests.jsonl> <out.jsonl>\n');
    return 2;
  }
  const [requestsPath, outPath] = args;
  const requests = readRequests(requestsPath);
  const records = embedOracle(requests, fixture);
  validateRecords(records, requests);
  writeEmbeddings(outPath, records);
  return 0;
}

const entry = process.argv[1] ?? '';
if (entry.endsWith('cli-oracle.js') || entry.endsWith('adapter-oracle')) {
  try {
    process.exit(runOracleCli(process.argv.slice(2)));
  } catch (err) {
    process.stderr.write(`adapter-oracle: ${err instanceof Error ? err.message : err}\n`);
    process.exit(1);
  }
}
