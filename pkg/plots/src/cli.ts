/**
 * Usage: node dist/cli.js <sweep.csv> <output-dir>
 *
 * Reads the experiment sweep CSV and writes figure.svg and figure.png into
 * the output directory: a grid of success-rate panels (tolerance rows,
 * correlation-mode columns) with the five fixed mechanism series.
 *
 * Exit codes: 0 ok (a data-free CSV still renders, with a warning),
 * 1 schema violation, 2 unreadable input.
 */

import { mkdirSync, readFileSync, writeFileSync } from "node:fs";
import { join } from "node:path";

import { buildFigure } from "./figure.js";
import { encodePng } from "./png.js";
import { renderRaster } from "./raster.js";
import { parseSweepCsv, SchemaError } from "./schema.js";
import { renderSvg } from "./svg.js";

export function main(argv: string[]): number {
  if (argv.length < 2) {
    console.error("usage: cli.js <sweep.csv> <output-dir>");
    return 2;
  }
  const [csvPath, outDir] = argv;
  let text: string;
  try {
    text = readFileSync(csvPath, "utf8");
  } catch (err) {
    console.error(`cannot read ${csvPath}: ${(err as Error).message}`);
    return 2;
  }
  let rows;
  try {
    rows = parseSweepCsv(text);
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema error: ${err.message}`);
      return 1;
    }
    throw err;
  }
  const figure = buildFigure(rows);
  if (figure.warning) {
    console.error(`warning: ${figure.warning}`);
  }
  mkdirSync(outDir, { recursive: true });
  const svgPath = join(outDir, "figure.svg");
  writeFileSync(svgPath, renderSvg(figure));
  const canvas = renderRaster(figure);
  const pngPath = join(outDir, "figure.png");
  writeFileSync(pngPath, encodePng(canvas.width, canvas.height, canvas.data));
  console.log(`${svgPath}\n${pngPath}`);
  console.log(`${figure.panels.length} panels, ` +
    `${figure.panels.reduce((acc, p) => acc + p.series.length, 0)} series drawn`);
  return 0;
}

const entry = process.argv[1] ?? "";
if (entry.endsWith("cli.js") || entry.endsWith("cli.ts")) {
  process.exit(main(process.argv.slice(2)));
}
