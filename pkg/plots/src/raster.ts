/**
 * Raster output: the same figure drawn into an RGBA buffer with a small
 * built-in 5x7 bitmap font (no native canvas dependency).
 */

import { FigureGeom, PANEL_H, PANEL_W } from "./figure.js";

export class Canvas {
  readonly width: number;
  readonly height: number;
  readonly data: Uint8Array;

  constructor(width: number, height: number) {
    this.width = Math.ceil(width);
    this.height = Math.ceil(height);
    this.data = new Uint8Array(this.width * this.height * 4);
    this.fill([255, 255, 255]);
  }

  fill(rgb: number[]): void {
    for (let i = 0; i < this.data.length; i += 4) {
      this.data[i] = rgb[0];
      this.data[i + 1] = rgb[1];
      this.data[i + 2] = rgb[2];
      this.data[i + 3] = 255;
    }
  }

  set(x: number, y: number, rgb: number[]): void {
    x = Math.round(x);
    y = Math.round(y);
    if (x < 0 || y < 0 || x >= this.width || y >= this.height) return;
    const i = (y * this.width + x) * 4;
    this.data[i] = rgb[0];
    this.data[i + 1] = rgb[1];
    this.data[i + 2] = rgb[2];
    this.data[i + 3] = 255;
  }

  line(x1: number, y1: number, x2: number, y2: number, rgb: number[], thick = 1): void {
    // Bresenham with square brush
    let x = Math.round(x1);
    let y = Math.round(y1);
    const ex = Math.round(x2);
    const ey = Math.round(y2);
    const dx = Math.abs(ex - x);
    const dy = -Math.abs(ey - y);
    const sx = x < ex ? 1 : -1;
    const sy = y < ey ? 1 : -1;
    let err = dx + dy;
    for (;;) {
      for (let ox = 0; ox < thick; ox++) {
        for (let oy = 0; oy < thick; oy++) {
          this.set(x + ox - (thick >> 1), y + oy - (thick >> 1), rgb);
        }
      }
      if (x === ex && y === ey) break;
      const e2 = 2 * err;
      if (e2 >= dy) { err += dy; x += sx; }
      if (e2 <= dx) { err += dx; y += sy; }
    }
  }

  disc(cx: number, cy: number, r: number, rgb: number[]): void {
    for (let y = -r; y <= r; y++) {
      for (let x = -r; x <= r; x++) {
        if (x * x + y * y <= r * r) this.set(cx + x, cy + y, rgb);
      }
    }
  }

  rect(x: number, y: number, w: number, h: number, rgb: number[]): void {
    this.line(x, y, x + w, y, rgb);
    this.line(x + w, y, x + w, y + h, rgb);
    this.line(x + w, y + h, x, y + h, rgb);
    this.line(x, y + h, x, y, rgb);
  }

  text(x: number, y: number, s: string, rgb: number[], align: "left" | "center" | "right" = "left"): void {
    const width = s.length * 6;
    let px = align === "left" ? x : align === "center" ? x - width / 2 : x - width;
    for (const ch of s.toUpperCase()) {
      const glyph = FONT[ch] ?? FONT[" "];
      for (let row = 0; row < 7; row++) {
        for (let col = 0; col < 5; col++) {
          if ((glyph[row] >> (4 - col)) & 1) this.set(px + col, y + row, rgb);
        }
      }
      px += 6;
    }
  }
}

export const COLORS: Record<string, number[]> = {
  yellow: [230, 195, 0],
  cyan: [0, 180, 200],
  red: [220, 30, 30],
  green: [0, 150, 60],
  blue: [40, 60, 230],
  white: [255, 255, 255],
  grid: [230, 230, 230],
  axis: [70, 70, 70],
  black: [0, 0, 0],
};

const FONT: Record<string, number[]> = {
  " ": [0, 0, 0, 0, 0, 0, 0],
  "0": [0x0e, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0e],
  "1": [0x04, 0x0c, 0x04, 0x04, 0x04, 0x04, 0x0e],
  "2": [0x0e, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1f],
  "3": [0x1f, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0e],
  "4": [0x02, 0x06, 0x0a, 0x12, 0x1f, 0x02, 0x02],
  "5": [0x1f, 0x10, 0x1e, 0x01, 0x01, 0x11, 0x0e],
  "6": [0x06, 0x08, 0x10, 0x1e, 0x11, 0x11, 0x0e],
  "7": [0x1f, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08],
  "8": [0x0e, 0x11, 0x11, 0x0e, 0x11, 0x11, 0x0e],
  "9": [0x0e, 0x11, 0x11, 0x0f, 0x01, 0x02, 0x0c],
  A: [0x0e, 0x11, 0x11, 0x1f, 0x11, 0x11, 0x11],
  B: [0x1e, 0x11, 0x11, 0x1e, 0x11, 0x11, 0x1e],
  C: [0x0e, 0x11, 0x10, 0x10, 0x10, 0x11, 0x0e],
  D: [0x1c, 0x12, 0x11, 0x11, 0x11, 0x12, 0x1c],
  E: [0x1f, 0x10, 0x10, 0x1e, 0x10, 0x10, 0x1f],
  F: [0x1f, 0x10, 0x10, 0x1e, 0x10, 0x10, 0x10],
  G: [0x0e, 0x11, 0x10, 0x17, 0x11, 0x11, 0x0f],
  H: [0x11, 0x11, 0x11, 0x1f, 0x11, 0x11, 0x11],
  I: [0x0e, 0x04, 0x04, 0x04, 0x04, 0x04, 0x0e],
  J: [0x07, 0x02, 0x02, 0x02, 0x02, 0x12, 0x0c],
  K: [0x11, 0x12, 0x14, 0x18, 0x14, 0x12, 0x11],
  L: [0x10, 0x10, 0x10, 0x10, 0x10, 0x10, 0x1f],
  M: [0x11, 0x1b, 0x15, 0x15, 0x11, 0x11, 0x11],
  N: [0x11, 0x19, 0x15, 0x13, 0x11, 0x11, 0x11],
  O: [0x0e, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0e],
  P: [0x1e, 0x11, 0x11, 0x1e, 0x10, 0x10, 0x10],
  Q: [0x0e, 0x11, 0x11, 0x11, 0x15, 0x12, 0x0d],
  R: [0x1e, 0x11, 0x11, 0x1e, 0x14, 0x12, 0x11],
  S: [0x0f, 0x10, 0x10, 0x0e, 0x01, 0x01, 0x1e],
  T: [0x1f, 0x04, 0x04, 0x04, 0x04, 0x04, 0x04],
  U: [0x11, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0e],
  V: [0x11, 0x11, 0x11, 0x11, 0x11, 0x0a, 0x04],
  W: [0x11, 0x11, 0x11, 0x15, 0x15, 0x15, 0x0a],
  X: [0x11, 0x11, 0x0a, 0x04, 0x0a, 0x11, 0x11],
  Y: [0x11, 0x11, 0x11, 0x0a, 0x04, 0x04, 0x04],
  Z: [0x1f, 0x01, 0x02, 0x04, 0x08, 0x10, 0x1f],
  ".": [0x00, 0x00, 0x00, 0x00, 0x00, 0x0c, 0x0c],
  ",": [0x00, 0x00, 0x00, 0x00, 0x0c, 0x04, 0x08],
  "-": [0x00, 0x00, 0x00, 0x1f, 0x00, 0x00, 0x00],
  "(": [0x02, 0x04, 0x08, 0x08, 0x08, 0x04, 0x02],
  ")": [0x08, 0x04, 0x02, 0x02, 0x02, 0x04, 0x08],
};

export function renderRaster(figure: FigureGeom): Canvas {
  const canvas = new Canvas(figure.width, figure.height);
  for (const panel of figure.panels) {
    const { x0, y0 } = panel;
    for (const tick of panel.yTicks) {
      canvas.line(x0, tick.y, x0 + PANEL_W, tick.y, COLORS.grid);
      canvas.text(x0 - 8, tick.y - 3, tick.label, COLORS.axis, "right");
      canvas.line(x0 - 4, tick.y, x0, tick.y, COLORS.axis);
    }
    canvas.rect(x0, y0, PANEL_W, PANEL_H, COLORS.axis);
    for (const tick of panel.xTicks) {
      canvas.line(tick.x, y0 + PANEL_H, tick.x, y0 + PANEL_H + 4, COLORS.axis);
      canvas.text(tick.x, y0 + PANEL_H + 8, tick.label, COLORS.axis, "center");
    }
    canvas.text(x0 + PANEL_W / 2, y0 - 18, `${panel.mode}, tolerance ${panel.epsilon}`,
      COLORS.black, "center");
    canvas.text(x0 + PANEL_W / 2, y0 + PANEL_H + 24, "prediction distance d (log scale)",
      COLORS.axis, "center");
    for (const series of panel.series) {
      const rgb = COLORS[series.color] ?? COLORS.black;
      for (let i = 1; i < series.points.length; i++) {
        canvas.line(series.points[i - 1].x, series.points[i - 1].y,
          series.points[i].x, series.points[i].y, rgb, 2);
      }
      for (const p of series.points) {
        canvas.disc(Math.round(p.x), Math.round(p.y), 3, rgb);
      }
    }
  }
  let lx = 24;
  const ly = figure.height - 16;
  for (const entry of figure.legend) {
    const rgb = COLORS[entry.color] ?? COLORS.black;
    canvas.line(lx, ly + 3, lx + 26, ly + 3, rgb, 3);
    canvas.text(lx + 32, ly, entry.mechanism, COLORS.black);
    lx += 48 + entry.mechanism.length * 7;
  }
  return canvas;
}
