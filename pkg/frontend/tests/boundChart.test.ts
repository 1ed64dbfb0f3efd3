import { describe, expect, it } from "vitest";
import * as fs from "fs";
import * as path from "path";

import { parseSampleCsv, SampleRow } from "../src/csv.js";
import { baseline, renderBoundChartSvg } from "../src/boundChart.js";

const rows: SampleRow[] = [];
for (let n = 3; n <= 10; n++) {
  rows.push(
    parseSampleCsv(
      fs.readFileSync(
        path.join(__dirname, "fixtures", `sample_n${n}.csv`),
        "utf-8",
      ),
    ),
  );
}

function seriesPoints(svg: string, series: string): Map<number, number> {
  const out = new Map<number, number>();
  const pattern = new RegExp(
    `data-series="${series}" data-n="(\\d+)" data-value="([^"]+)"`,
    "g",
  );
  for (const match of svg.matchAll(pattern)) {
    out.set(Number(match[1]), Number(match[2]));
  }
  return out;
}

describe("renderBoundChartSvg", () => {
  const svg = renderBoundChartSvg(rows);

  it("produces a nonempty SVG with one point per n and series", () => {
    expect(svg.startsWith("<svg")).toBe(true);
    expect(seriesPoints(svg, "bound").size).toBe(8);
    expect(seriesPoints(svg, "baseline").size).toBe(8);
  });

  it("baseline passes through (8, 4.0)", () => {
    expect(baseline(8)).toBe(4.0);
    expect(seriesPoints(svg, "baseline").get(8)).toBe(4.0);
  });

  it("keeps the sampled series strictly below the baseline at every n", () => {
    const bound = seriesPoints(svg, "bound");
    const base = seriesPoints(svg, "baseline");
    for (const [n, value] of bound) {
      expect(value).toBeLessThan(base.get(n)!);
    }
  });

  it("plots exactly the CSV values", () => {
    const bound = seriesPoints(svg, "bound");
    for (const row of rows) {
      expect(bound.get(row.n)).toBe(row.maxBound);
    }
  });

  it("is deterministic", () => {
    expect(renderBoundChartSvg(rows)).toBe(svg);
  });

  it("rejects empty and duplicated series", () => {
    expect(() => renderBoundChartSvg([])).toThrow(/no sampling series/);
    expect(() => renderBoundChartSvg([rows[0], rows[0]])).toThrow(/duplicate/);
  });
});
