#!/usr/bin/env node
/** plots <roc-overlay|roc-by-k|violin> --in <csv> --out <svg>
 *
 * Reads one benchmark CSV and writes one deterministic SVG figure.
 * Exit codes: 0 on success, 1 on any input problem.
 */

import * as fs from "node:fs";
import * as path from "node:path";

import { plotRocByK, plotRocOverlay, plotViolin } from "./plots";

const COMMANDS: Record<string, (csv: string) => string> = {
  "roc-overlay": plotRocOverlay,
  "roc-by-k": plotRocByK,
  violin: plotViolin,
};

function usage(): string {
  return "usage: plots <roc-overlay|roc-by-k|violin> --in <csv> --out <svg>";
}

export function run(argv: string[]): number {
  const [command, ...rest] = argv;
  if (!command || !(command in COMMANDS)) {
    process.stderr.write(usage() + "\n");
    return 1;
  }
  const options: Record<string, string> = {};
  for (let i = 0; i < rest.length; i += 2) {
    const flag = rest[i];
    const value = rest[i + 1];
    if ((flag !== "--in" && flag !== "--out") || value === undefined) {
      process.stderr.write(usage() + "\n");
      return 1;
    }
    options[flag.slice(2)] = value;
  }
  const input = options["in"];
  const output = options["out"];
  if (!input || !output) {
    process.stderr.write(usage() + "\n");
    return 1;
  }
  try {
    const csv = fs.readFileSync(input, "utf-8");
    const svg = COMMANDS[command]!(csv);
    fs.mkdirSync(path.dirname(path.resolve(output)), { recursive: true });
    fs.writeFileSync(output, svg);
    process.stdout.write(`wrote ${output}\n`);
    return 0;
  } catch (err) {
    process.stderr.write(`error: ${err instanceof Error ? err.message : String(err)}\n`);
    return 1;
  }
}

if (require.main === module) {
  process.exit(run(process.argv.slice(2)));
}
