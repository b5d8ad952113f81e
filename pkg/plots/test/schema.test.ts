import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { parseSweepCsv, SchemaError, SERIES_COLORS } from "../src/schema.js";

const FIXTURE = new URL("../fixtures/figure2.csv", import.meta.url).pathname;

describe("sweep CSV schema", () => {
  it("parses the transcribed figure fixture", () => {
    const rows = parseSweepCsv(readFileSync(FIXTURE, "utf8"));
    expect(rows).toHaveLength(330);
    const mechanisms = new Set(rows.map((r) => r.mechanism));
    expect(mechanisms.size).toBe(5);
    for (const mech of mechanisms) {
      expect(SERIES_COLORS[mech]).toBeDefined();
    }
    const epsilons = new Set(rows.map((r) => r.epsilon));
    expect([...epsilons].sort()).toEqual(["0.02", "0.05", "0.1"]);
    expect(rows.every((r) => r.trials === 100000)).toBe(true);
    expect(rows.every((r) => r.meanMinRatio === undefined)).toBe(true);
  });

  it("rejects a missing required column", () => {
    const text = "mechanism,d,epsilon,trials,success_rate\nRandom,1,0.05,10,0.5\n";
    expect(() => parseSweepCsv(text)).toThrowError(SchemaError);
    expect(() => parseSweepCsv(text)).toThrowError(/mode/);
  });

  it("rejects unknown mechanisms and bad numbers", () => {
    const head = "mechanism,d,epsilon,mode,trials,success_rate,mean_min_ratio\n";
    expect(() => parseSweepCsv(head + "Mystery,1,0.05,correlated,10,0.5,0.9\n"))
      .toThrowError(/unknown mechanism/);
    expect(() => parseSweepCsv(head + "Random,one,0.05,correlated,10,0.5,0.9\n"))
      .toThrowError(/bad distance/);
    expect(() => parseSweepCsv(head + "Random,1,0.05,diagonal,10,0.5,0.9\n"))
      .toThrowError(/unknown mode/);
    expect(() => parseSweepCsv(head + "Random,1,0.05,correlated,10,maybe,0.9\n"))
      .toThrowError(/bad success_rate/);
  });

  it("accepts a header-only file as zero rows", () => {
    const head = "mechanism,d,epsilon,mode,trials,success_rate,mean_min_ratio\n";
    expect(parseSweepCsv(head)).toEqual([]);
  });

  it("rejects a file with no header at all", () => {
    expect(() => parseSweepCsv("")).toThrowError(SchemaError);
  });
});
