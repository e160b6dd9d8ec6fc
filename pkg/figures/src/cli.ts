#!/usr/bin/env node
/**
 * Figure regeneration CLI:
 *
 *   kitaev-qsd-figures <kind|all> --in <run-dir> --out <fig-dir>
 *
 * Reads the simulator's CSV outputs (plus manifest.json for the provenance
 * footer) and writes deterministic SVG files.  Exit codes: 0 ok, 2 usage or
 * schema error.
 */

import { mkdirSync, writeFileSync } from "fs";
import { join } from "path";

import { SchemaError } from "./csv.js";
import { FIGURE_KINDS, FigureKind, renderFigure } from "./figures.js";
import { manifestFooter } from "./manifest.js";

function usage(): never {
  console.error(`usage: kitaev-qsd-figures <kind> --in <dir> --out <dir>`);
  console.error(`kinds: all ${FIGURE_KINDS.join(" ")}`);
  process.exit(2);
}

export function main(argv: string[]): number {
  const args = [...argv];
  const kindArg = args.shift();
  if (!kindArg) usage();
  let inDir = "";
  let outDir = "";
  while (args.length > 0) {
    const flag = args.shift();
    if (flag === "--in") inDir = args.shift() ?? "";
    else if (flag === "--out") outDir = args.shift() ?? "";
    else usage();
  }
  if (!inDir || !outDir) usage();
  const kinds: FigureKind[] =
    kindArg === "all" ? [...FIGURE_KINDS] : [kindArg as FigureKind];
  if (kinds.some((k) => !FIGURE_KINDS.includes(k))) usage();

  const footer = manifestFooter(inDir);
  mkdirSync(outDir, { recursive: true });
  let written = 0;
  for (const kind of kinds) {
    for (const fig of renderFigure(kind, inDir, footer)) {
      writeFileSync(join(outDir, fig.name), fig.svg + "\n");
      console.log(`wrote ${join(outDir, fig.name)}`);
      written += 1;
    }
  }
  console.log(`${written} figures from ${inDir} (${footer})`);
  return 0;
}

const invokedDirectly = process.argv[1]?.endsWith("cli.js");
if (invokedDirectly) {
  try {
    process.exit(main(process.argv.slice(2)));
  } catch (err) {
    if (err instanceof SchemaError || (err as NodeJS.ErrnoException)?.code === "ENOENT") {
      console.error(`schema error: ${(err as Error).message}`);
      process.exit(2);
    }
    throw err;
  }
}
