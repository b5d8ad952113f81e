import { mkdtempSync, readFileSync, statSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { main } from "../src/cli.js";

const FIXTURE = new URL("../fixtures/figure2.csv", import.meta.url).pathname;

function tmp(): string {
  return mkdtempSync(join(tmpdir(), "plots-"));
}

describe("cli", () => {
  it("renders the fixture to svg and png", () => {
    const out = tmp();
    expect(main([FIXTURE, out])).toBe(0);
    const svg = readFileSync(join(out, "figure.svg"), "utf8");
    expect(svg).toContain("data-panel=\"correlated-eps0.02\"");
    expect(svg).toContain("data-panel=\"uncorrelated-eps0.1\"");
    expect(statSync(join(out, "figure.png")).size).toBeGreaterThan(4000);
  });

  it("exits 1 on a schema violation", () => {
    const dir = tmp();
    const bad = join(dir, "bad.csv");
    writeFileSync(bad, "mechanism,d,epsilon,success_rate\nRandom,1,0.05,0.4\n");
    expect(main([bad, dir])).toBe(1);
  });

  it("exits 1 on an unknown mechanism", () => {
    const dir = tmp();
    const bad = join(dir, "bad2.csv");
    writeFileSync(bad,
      "mechanism,d,epsilon,mode,trials,success_rate,mean_min_ratio\n" +
      "Mystery,1,0.05,correlated,10,0.4,\n");
    expect(main([bad, dir])).toBe(1);
  });

  it("exits 2 when the file is unreadable or args are missing", () => {
    expect(main([join(tmp(), "missing.csv"), tmp()])).toBe(2);
    expect(main([])).toBe(2);
  });

  it("renders a header-only file with empty panels", () => {
    const dir = tmp();
    const empty = join(dir, "empty.csv");
    writeFileSync(empty, "mechanism,d,epsilon,mode,trials,success_rate,mean_min_ratio\n");
    expect(main([empty, dir])).toBe(0);
    expect(readFileSync(join(dir, "figure.svg"), "utf8")).toContain("<svg");
  });
});
