/**
 * Strict reader for the experiment sweep's aggregate CSV.
 *
 * Required columns: mechanism, d, epsilon, mode, success_rate.
 * Optional pass-through: trials, mean_min_ratio (may be blank).
 * Every mechanism name must map to one of the five declared series.
 */

export class SchemaError extends Error {}

export interface SweepRow {
  mechanism: string;
  d: number;
  epsilon: string;
  mode: string;
  successRate: number;
  trials?: number;
  meanMinRatio?: number;
}

export const SERIES_COLORS: Record<string, string> = {
  Random: "yellow",
  "Random-Steal": "cyan",
  Partition: "red",
  "Partition-Steal": "green",
  "Partition-Plant-Steal": "blue",
};

export const SERIES_ORDER = [
  "Random",
  "Random-Steal",
  "Partition",
  "Partition-Steal",
  "Partition-Plant-Steal",
];

const REQUIRED = ["mechanism", "d", "epsilon", "mode", "success_rate"];

/** Minimal CSV split: the sweep writer never quotes or embeds commas. */
function splitLine(line: string): string[] {
  return line.split(",").map((cell) => cell.trim());
}

export function parseSweepCsv(text: string): SweepRow[] {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new SchemaError("empty file: no header row");
  }
  const header = splitLine(lines[0]);
  const index = new Map(header.map((name, i) => [name, i]));
  for (const col of REQUIRED) {
    if (!index.has(col)) {
      throw new SchemaError(`missing required column '${col}' (got: ${header.join(", ")})`);
    }
  }
  const rows: SweepRow[] = [];
  for (let ln = 1; ln < lines.length; ln++) {
    const cells = splitLine(lines[ln]);
    if (cells.length < header.length) {
      throw new SchemaError(`line ${ln + 1}: expected ${header.length} cells, got ${cells.length}`);
    }
    const get = (name: string) => cells[index.get(name)!];
    const mechanism = get("mechanism");
    if (!(mechanism in SERIES_COLORS)) {
      throw new SchemaError(`line ${ln + 1}: unknown mechanism '${mechanism}'`);
    }
    const d = Number(get("d"));
    if (!Number.isFinite(d) || d < 0) {
      throw new SchemaError(`line ${ln + 1}: bad distance '${get("d")}'`);
    }
    const successRate = Number(get("success_rate"));
    if (!Number.isFinite(successRate)) {
      throw new SchemaError(`line ${ln + 1}: bad success_rate '${get("success_rate")}'`);
    }
    const mode = get("mode");
    if (mode !== "correlated" && mode !== "uncorrelated") {
      throw new SchemaError(`line ${ln + 1}: unknown mode '${mode}'`);
    }
    const row: SweepRow = {
      mechanism,
      d,
      epsilon: get("epsilon"),
      mode,
      successRate,
    };
    if (index.has("trials") && get("trials") !== "") {
      row.trials = Number(get("trials"));
    }
    if (index.has("mean_min_ratio") && get("mean_min_ratio") !== "") {
      row.meanMinRatio = Number(get("mean_min_ratio"));
    }
    rows.push(row);
  }
  return rows;
}
