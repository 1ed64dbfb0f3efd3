/**
 * Two-panel simplex figure: a region map colored by which bound binds, and
 * a value heatmap with lighter colors for larger values.
 *
 * The CSV carries one row per ascending triple (w1 <= w2 <= w3); both
 * bounds depend only on the sorted weights, so each row paints its six
 * permutations and the full triangle comes out symmetric, matching the
 * published layout. Every plotted value is a CSV cell; nothing is
 * recomputed here.
 */

import { HeatmapRow } from "./csv.js";
import { RULE_COLORS, valueColor } from "./color.js";
import { toTriangle, toPixels, TRIANGLE_HEIGHT } from "./barycentric.js";

const SIZE = 420;
const MARGIN = 40;
const PANEL_W = SIZE + 2 * MARGIN;
const PANEL_H = Math.ceil(SIZE * TRIANGLE_HEIGHT) + 2 * MARGIN + 20;

function permutations(row: HeatmapRow): Array<[number, number, number]> {
  const [a, b, c] = [row.w1, row.w2, row.w3];
  const seen = new Set<string>();
  const out: Array<[number, number, number]> = [];
  for (const p of [
    [a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a],
  ] as Array<[number, number, number]>) {
    const key = p.join(",");
    if (!seen.has(key)) {
      seen.add(key);
      out.push(p);
    }
  }
  return out;
}

function trianglePath(offsetX: number): string {
  const corners = [
    toPixels(toTriangle(1, 0, 0), SIZE, MARGIN),
    toPixels(toTriangle(0, 1, 0), SIZE, MARGIN),
    toPixels(toTriangle(0, 0, 1), SIZE, MARGIN),
  ].map((p) => `${(p.x + offsetX).toFixed(2)},${p.y.toFixed(2)}`);
  return `<polygon points="${corners.join(" ")}" fill="none" stroke="#444" stroke-width="1"/>`;
}

function cornerLabels(offsetX: number): string {
  const labels: Array<[number, number, number, string]> = [
    [1, 0, 0, "(1,0,0)"],
    [0, 1, 0, "(0,1,0)"],
    [0, 0, 1, "(0,0,1)"],
  ];
  return labels
    .map(([w1, w2, w3, text]) => {
      const p = toPixels(toTriangle(w1, w2, w3), SIZE, MARGIN);
      const dy = w3 === 1 ? -8 : 16;
      return `<text x="${(p.x + offsetX).toFixed(2)}" y="${(p.y + dy).toFixed(2)}" font-size="11" text-anchor="middle" fill="#333">${text}</text>`;
    })
    .join("\n");
}

export function renderHeatmapSvg(rows: HeatmapRow[]): string {
  if (rows.length === 0) {
    throw new Error("no heatmap rows to render");
  }
  const values = rows.map((r) => r.value);
  const lo = Math.min(...values);
  const hi = Math.max(...values);
  const span = hi > lo ? hi - lo : 1;
  const radius = Math.max(1.5, (SIZE / Math.sqrt(rows.length * 6)) * 0.7);

  const region: string[] = [];
  const heat: string[] = [];
  for (const row of rows) {
    for (const [w1, w2, w3] of permutations(row)) {
      const p = toPixels(toTriangle(w1, w2, w3), SIZE, MARGIN);
      const canonical = w1 === row.w1 && w2 === row.w2 && w3 === row.w3;
      const data = canonical
        ? ` data-rule="${row.dominatingRule}" data-value="${row.value}" data-w="${row.w1} ${row.w2} ${row.w3}"`
        : "";
      region.push(
        `<circle cx="${p.x.toFixed(2)}" cy="${p.y.toFixed(2)}" r="${radius.toFixed(2)}" fill="${RULE_COLORS[row.dominatingRule]}"${data}/>`,
      );
      const shade = valueColor((row.value - lo) / span);
      heat.push(
        `<circle cx="${(p.x + PANEL_W).toFixed(2)}" cy="${p.y.toFixed(2)}" r="${radius.toFixed(2)}" fill="${shade}"${data}/>`,
      );
    }
  }

  const legendY = PANEL_H - 14;
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${2 * PANEL_W}" height="${PANEL_H}" viewBox="0 0 ${2 * PANEL_W} ${PANEL_H}">`,
    `<rect width="${2 * PANEL_W}" height="${PANEL_H}" fill="white"/>`,
    `<g id="region-panel">`,
    ...region,
    trianglePath(0),
    cornerLabels(0),
    `<text x="${MARGIN}" y="${legendY}" font-size="11" fill="${RULE_COLORS.red1_two_agent}">binding: two-agent grouping</text>`,
    `<text x="${MARGIN + 190}" y="${legendY}" font-size="11" fill="${RULE_COLORS.red2_symmetric}">binding: symmetric scaling</text>`,
    `</g>`,
    `<g id="value-panel">`,
    ...heat,
    trianglePath(PANEL_W),
    cornerLabels(PANEL_W),
    `<text x="${PANEL_W + MARGIN}" y="${legendY}" font-size="11" fill="#333">upper bound: dark ${lo.toFixed(3)} to light ${hi.toFixed(3)}</text>`,
    `</g>`,
    `</svg>`,
  ].join("\n");
}
