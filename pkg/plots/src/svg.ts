/** Vector output: one SVG for the whole panel grid. */

import { FigureGeom, PANEL_H, PANEL_W } from "./figure.js";

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function renderSvg(figure: FigureGeom): string {
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${figure.width}" ` +
    `height="${figure.height}" viewBox="0 0 ${figure.width} ${figure.height}" ` +
    `font-family="Helvetica, Arial, sans-serif">`);
  parts.push(`<rect width="${figure.width}" height="${figure.height}" fill="white"/>`);

  for (const panel of figure.panels) {
    const { x0, y0 } = panel;
    parts.push(`<g data-panel="${esc(panel.mode)}-eps${esc(panel.epsilon)}">`);
    parts.push(
      `<rect x="${x0}" y="${y0}" width="${PANEL_W}" height="${PANEL_H}" ` +
      `fill="none" stroke="#444" stroke-width="1"/>`);
    parts.push(
      `<text x="${x0 + PANEL_W / 2}" y="${y0 - 12}" text-anchor="middle" ` +
      `font-size="15">${esc(panel.mode)}, tolerance ${esc(panel.epsilon)}</text>`);
    for (const tick of panel.xTicks) {
      parts.push(
        `<line x1="${tick.x.toFixed(1)}" y1="${y0 + PANEL_H}" ` +
        `x2="${tick.x.toFixed(1)}" y2="${y0 + PANEL_H + 5}" stroke="#444"/>`);
      parts.push(
        `<text x="${tick.x.toFixed(1)}" y="${y0 + PANEL_H + 18}" ` +
        `text-anchor="middle" font-size="11">${tick.label}</text>`);
    }
    for (const tick of panel.yTicks) {
      parts.push(
        `<line x1="${x0 - 5}" y1="${tick.y.toFixed(1)}" x2="${x0}" ` +
        `y2="${tick.y.toFixed(1)}" stroke="#444"/>`);
      parts.push(
        `<text x="${x0 - 9}" y="${(tick.y + 4).toFixed(1)}" text-anchor="end" ` +
        `font-size="11">${tick.label}</text>`);
      parts.push(
        `<line x1="${x0}" y1="${tick.y.toFixed(1)}" x2="${x0 + PANEL_W}" ` +
        `y2="${tick.y.toFixed(1)}" stroke="#eee"/>`);
    }
    parts.push(
      `<text x="${x0 + PANEL_W / 2}" y="${y0 + PANEL_H + 38}" text-anchor="middle" ` +
      `font-size="12">prediction distance d (log scale)</text>`);
    for (const series of panel.series) {
      const path = series.points
        .map((p) => `${p.x.toFixed(1)},${p.y.toFixed(1)}`)
        .join(" ");
      parts.push(
        `<polyline points="${path}" fill="none" stroke="${series.color}" ` +
        `stroke-width="2" data-series="${esc(series.mechanism)}"/>`);
      for (const p of series.points) {
        parts.push(
          `<circle cx="${p.x.toFixed(1)}" cy="${p.y.toFixed(1)}" r="3" ` +
          `fill="${series.color}"/>`);
      }
    }
    parts.push("</g>");
  }

  // legend strip along the bottom
  const ly = figure.height - 14;
  let lx = 24;
  for (const entry of figure.legend) {
    parts.push(`<line x1="${lx}" y1="${ly - 4}" x2="${lx + 26}" y2="${ly - 4}" ` +
      `stroke="${entry.color}" stroke-width="3"/>`);
    parts.push(`<text x="${lx + 32}" y="${ly}" font-size="12">` +
      `${esc(entry.mechanism)}</text>`);
    lx += 48 + entry.mechanism.length * 7;
  }
  parts.push("</svg>");
  return parts.join("\n");
}
