/**
 * Figure layout: a grid of panels (tolerance rows x correlation-mode
 * columns), each panel a log-x success-rate chart with the fixed tick set
 * and one polyline per mechanism.  The layout is resolution-independent;
 * svg.ts and raster.ts draw the same primitives.
 */

import { SERIES_COLORS, SERIES_ORDER, SweepRow } from "./schema.js";

export const X_TICKS = [1, 5, 10, 40, 160, 640, 2560];
export const Y_MAX = 1.05;

export interface SeriesGeom {
  mechanism: string;
  color: string;
  points: Array<{ x: number; y: number; d: number; rate: number }>;
}

export interface PanelGeom {
  epsilon: string;
  mode: string;
  row: number;
  col: number;
  x0: number;
  y0: number;
  width: number;
  height: number;
  series: SeriesGeom[];
  xTicks: Array<{ x: number; label: string }>;
  yTicks: Array<{ y: number; label: string }>;
}

export interface FigureGeom {
  width: number;
  height: number;
  panels: PanelGeom[];
  legend: Array<{ mechanism: string; color: string }>;
  warning?: string;
}

export const PANEL_W = 420;
export const PANEL_H = 300;
export const MARGIN = { left: 70, right: 20, top: 48, bottom: 56 };
export const LEGEND_H = 36;

function uniqueSorted<T>(values: T[], cmp: (a: T, b: T) => number): T[] {
  return [...new Set(values)].sort(cmp);
}

export function buildFigure(rows: SweepRow[]): FigureGeom {
  const epsilons = uniqueSorted(rows.map((r) => r.epsilon),
    (a, b) => Number(a) - Number(b));
  const modes = uniqueSorted(rows.map((r) => r.mode),
    (a, b) => a.localeCompare(b));
  const gridRows = Math.max(1, epsilons.length);
  const gridCols = Math.max(1, modes.length);
  const panelEpsilons = epsilons.length ? epsilons : ["-"];
  const panelModes = modes.length ? modes : ["-"];

  const dMax = Math.max(2560, ...rows.map((r) => r.d));
  const logSpan = Math.log10(Math.max(dMax, 2));

  const figure: FigureGeom = {
    width: gridCols * (PANEL_W + MARGIN.left + MARGIN.right),
    height: gridRows * (PANEL_H + MARGIN.top + MARGIN.bottom) + LEGEND_H,
    panels: [],
    legend: SERIES_ORDER.map((mechanism) => ({
      mechanism,
      color: SERIES_COLORS[mechanism],
    })),
  };
  if (rows.length === 0) {
    figure.warning = "no data rows: rendering empty panels";
  }

  const xOf = (x0: number, d: number) =>
    x0 + (Math.log10(Math.max(d, 1)) / logSpan) * PANEL_W;
  const yOf = (y0: number, rate: number) =>
    y0 + PANEL_H - (Math.min(Math.max(rate, 0), Y_MAX) / Y_MAX) * PANEL_H;

  panelEpsilons.forEach((epsilon, row) => {
    panelModes.forEach((mode, col) => {
      const x0 = col * (PANEL_W + MARGIN.left + MARGIN.right) + MARGIN.left;
      const y0 = row * (PANEL_H + MARGIN.top + MARGIN.bottom) + MARGIN.top;
      const inPanel = rows.filter((r) => r.epsilon === epsilon && r.mode === mode);
      const series: SeriesGeom[] = [];
      for (const mechanism of SERIES_ORDER) {
        const pts = inPanel
          .filter((r) => r.mechanism === mechanism)
          .sort((a, b) => a.d - b.d)
          .map((r) => ({
            x: xOf(x0, r.d),
            y: yOf(y0, r.successRate),
            d: r.d,
            rate: r.successRate,
          }));
        if (pts.length > 0) {
          series.push({ mechanism, color: SERIES_COLORS[mechanism], points: pts });
        }
      }
      const xTicks = X_TICKS.filter((t) => t <= dMax).map((t) => ({
        x: xOf(x0, t),
        label: String(t),
      }));
      const yTicks = [0, 0.25, 0.5, 0.75, 1.0].map((v) => ({
        y: yOf(y0, v),
        label: v.toFixed(2),
      }));
      figure.panels.push({
        epsilon, mode, row, col, x0, y0,
        width: PANEL_W, height: PANEL_H, series, xTicks, yTicks,
      });
    });
  });
  return figure;
}
