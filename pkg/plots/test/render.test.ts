import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { buildFigure, X_TICKS } from "../src/figure.js";
import { encodePng } from "../src/png.js";
import { Canvas, renderRaster } from "../src/raster.js";
import { parseSweepCsv } from "../src/schema.js";
import { renderSvg } from "../src/svg.js";

const FIXTURE = new URL("../fixtures/figure2.csv", import.meta.url).pathname;

function fixtureRows() {
  return parseSweepCsv(readFileSync(FIXTURE, "utf8"));
}

describe("figure geometry", () => {
  it("lays the fixture out as a 3x2 grid with five series per panel", () => {
    const fig = buildFigure(fixtureRows());
    expect(fig.panels).toHaveLength(6);
    const rows = new Set(fig.panels.map((p) => p.row));
    const cols = new Set(fig.panels.map((p) => p.col));
    expect(rows.size).toBe(3);
    expect(cols.size).toBe(2);
    // tolerance rows ascend, mode columns are alphabetical
    expect(fig.panels[0].epsilon).toBe("0.02");
    expect(fig.panels[0].mode).toBe("correlated");
    expect(fig.panels[1].mode).toBe("uncorrelated");
    for (const panel of fig.panels) {
      expect(panel.series).toHaveLength(5);
      expect(panel.xTicks.map((t) => t.label)).toEqual(X_TICKS.map(String));
      for (const series of panel.series) {
        expect(series.points).toHaveLength(11);
      }
    }
  });

  it("keeps every point inside its panel even above rate 1.0", () => {
    const fig = buildFigure(fixtureRows());
    for (const panel of fig.panels) {
      for (const series of panel.series) {
        for (const p of series.points) {
          expect(p.x).toBeGreaterThanOrEqual(panel.x0 - 0.01);
          expect(p.x).toBeLessThanOrEqual(panel.x0 + panel.width + 0.01);
          expect(p.y).toBeGreaterThanOrEqual(panel.y0 - 0.01);
          expect(p.y).toBeLessThanOrEqual(panel.y0 + panel.height + 0.01);
        }
      }
    }
  });

  it("renders empty panels with a warning for a data-free file", () => {
    const fig = buildFigure([]);
    expect(fig.warning).toMatch(/no data/);
    expect(fig.panels).toHaveLength(1);
    expect(fig.panels[0].series).toHaveLength(0);
    const svg = renderSvg(fig);
    expect(svg).toContain("<svg");
  });
});

describe("svg output", () => {
  it("draws the five series with their fixed colors", () => {
    const svg = renderSvg(buildFigure(fixtureRows()));
    for (const [mech, color] of [
      ["Random", "yellow"],
      ["Random-Steal", "cyan"],
      ["Partition", "red"],
      ["Partition-Steal", "green"],
      ["Partition-Plant-Steal", "blue"],
    ]) {
      const marker = `data-series="${mech}"`;
      const count = svg.split(marker).length - 1;
      expect(count).toBe(6); // one polyline per panel
      expect(svg).toContain(`stroke="${color}" stroke-width="2" data-series="${mech}"`);
    }
    for (const tick of X_TICKS) {
      expect(svg).toContain(`>${tick}</text>`);
    }
    expect(svg.startsWith("<svg")).toBe(true);
    expect(svg.trimEnd().endsWith("</svg>")).toBe(true);
  });

  it("is deterministic", () => {
    const a = renderSvg(buildFigure(fixtureRows()));
    const b = renderSvg(buildFigure(fixtureRows()));
    expect(a).toBe(b);
  });

  it("renders a single-mechanism file as one series", () => {
    const head = "mechanism,d,epsilon,mode,trials,success_rate,mean_min_ratio\n";
    const rows = parseSweepCsv(head +
      "Partition,1,0.05,correlated,10,0.9,\nPartition,10,0.05,correlated,10,0.6,\n");
    const svg = renderSvg(buildFigure(rows));
    expect(svg.split("data-series=").length - 1).toBe(1);
  });
});

describe("raster output", () => {
  it("produces a valid PNG with the panel ink present", () => {
    const fig = buildFigure(fixtureRows());
    const canvas = renderRaster(fig);
    const png = encodePng(canvas.width, canvas.height, canvas.data);
    expect([...png.subarray(0, 8)]).toEqual([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]);
    expect(png.length).toBeGreaterThan(4000);
    // some pixels carry each series color
    const want = [
      [230, 195, 0],
      [0, 180, 200],
      [220, 30, 30],
      [0, 150, 60],
      [40, 60, 230],
    ];
    const found = new Set<number>();
    for (let i = 0; i < canvas.data.length; i += 4) {
      want.forEach((rgb, idx) => {
        if (canvas.data[i] === rgb[0] && canvas.data[i + 1] === rgb[1] &&
            canvas.data[i + 2] === rgb[2]) {
          found.add(idx);
        }
      });
      if (found.size === want.length) break;
    }
    expect(found.size).toBe(want.length);
  });

  it("draws text through the bitmap font", () => {
    const canvas = new Canvas(60, 20);
    canvas.text(2, 2, "0.5", [0, 0, 0]);
    const inked = canvas.data.filter((_, i) => i % 4 === 0)
      .reduce((acc, v) => acc + (v === 0 ? 1 : 0), 0);
    expect(inked).toBeGreaterThan(10);
  });
});
