/**
 * Line chart comparing the sampled entitlement-only bound against the
 * log2(n) + 1 reference for n = 3..10. The bound series is read straight
 * from the sampling CSVs; the reference line is the only computed series.
 */

import { SampleRow } from "./csv.js";

const W = 640;
const H = 400;
const ML = 60;
const MR = 30;
const MT = 30;
const MB = 50;

export function baseline(n: number): number {
  if (n < 2) {
    throw new Error("baseline is defined for n >= 2");
  }
  return Math.log2(n) + 1;
}

export function renderBoundChartSvg(rows: SampleRow[]): string {
  if (rows.length === 0) {
    throw new Error("no sampling series to render");
  }
  const sorted = [...rows].sort((a, b) => a.n - b.n);
  const ns = sorted.map((r) => r.n);
  if (new Set(ns).size !== ns.length) {
    throw new Error("duplicate n in sampling series");
  }
  const base = ns.map(baseline);
  const values = sorted.map((r) => r.maxBound);
  const yLo = Math.floor(Math.min(...values, ...base) * 2) / 2 - 0.5;
  const yHi = Math.ceil(Math.max(...values, ...base) * 2) / 2 + 0.25;
  const nLo = ns[0];
  const nHi = ns[ns.length - 1];

  const sx = (n: number) => ML + ((n - nLo) / Math.max(1, nHi - nLo)) * (W - ML - MR);
  const sy = (v: number) => MT + ((yHi - v) / (yHi - yLo)) * (H - MT - MB);

  const axis: string[] = [];
  axis.push(`<line x1="${ML}" y1="${H - MB}" x2="${W - MR}" y2="${H - MB}" stroke="#333"/>`);
  axis.push(`<line x1="${ML}" y1="${MT}" x2="${ML}" y2="${H - MB}" stroke="#333"/>`);
  for (const n of ns) {
    axis.push(`<text x="${sx(n).toFixed(1)}" y="${H - MB + 18}" font-size="11" text-anchor="middle" fill="#333">${n}</text>`);
    axis.push(`<line x1="${sx(n).toFixed(1)}" y1="${H - MB}" x2="${sx(n).toFixed(1)}" y2="${H - MB + 4}" stroke="#333"/>`);
  }
  for (let tick = Math.ceil(yLo * 2) / 2; tick <= yHi; tick += 0.5) {
    axis.push(`<text x="${ML - 8}" y="${(sy(tick) + 4).toFixed(1)}" font-size="11" text-anchor="end" fill="#333">${tick.toFixed(1)}</text>`);
    axis.push(`<line x1="${ML - 4}" y1="${sy(tick).toFixed(1)}" x2="${ML}" y2="${sy(tick).toFixed(1)}" stroke="#333"/>`);
  }
  axis.push(`<text x="${(W / 2).toFixed(1)}" y="${H - 10}" font-size="12" text-anchor="middle" fill="#333">n</text>`);

  const boundPts = sorted
    .map((r) => `${sx(r.n).toFixed(2)},${sy(r.maxBound).toFixed(2)}`)
    .join(" ");
  const basePts = ns
    .map((n, i) => `${sx(n).toFixed(2)},${sy(base[i]).toFixed(2)}`)
    .join(" ");

  const boundMarks = sorted.map(
    (r) =>
      `<circle cx="${sx(r.n).toFixed(2)}" cy="${sy(r.maxBound).toFixed(2)}" r="4" fill="#1b6ca8" data-series="bound" data-n="${r.n}" data-value="${r.maxBound}"/>`,
  );
  const baseMarks = ns.map(
    (n, i) =>
      `<rect x="${(sx(n) - 3.5).toFixed(2)}" y="${(sy(base[i]) - 3.5).toFixed(2)}" width="7" height="7" fill="#c0392b" data-series="baseline" data-n="${n}" data-value="${base[i]}"/>`,
  );

  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${W}" height="${H}" viewBox="0 0 ${W} ${H}">`,
    `<rect width="${W}" height="${H}" fill="white"/>`,
    ...axis,
    `<polyline points="${basePts}" fill="none" stroke="#c0392b" stroke-width="1.5"/>`,
    `<polyline points="${boundPts}" fill="none" stroke="#1b6ca8" stroke-width="1.5"/>`,
    ...baseMarks,
    ...boundMarks,
    `<text x="${W - MR - 10}" y="${MT + 14}" font-size="12" text-anchor="end" fill="#1b6ca8">entitlement-only bound</text>`,
    `<text x="${W - MR - 10}" y="${MT + 30}" font-size="12" text-anchor="end" fill="#c0392b">log2(n) + 1</text>`,
    `</svg>`,
  ].join("\n");
}
