import { describe, expect, it } from "vitest";
import * as fs from "fs";
import * as path from "path";

import { parseHeatmapCsv } from "../src/csv.js";
import { renderHeatmapSvg } from "../src/heatmap.js";
import { RULE_COLORS } from "../src/color.js";

const rows = parseHeatmapCsv(
  fs.readFileSync(path.join(__dirname, "fixtures", "heatmap.csv"), "utf-8"),
);

describe("renderHeatmapSvg", () => {
  const svg = renderHeatmapSvg(rows);

  it("produces a nonempty two-panel SVG", () => {
    expect(svg.startsWith("<svg")).toBe(true);
    expect(svg.length).toBeGreaterThan(10000);
    expect(svg).toContain('id="region-panel"');
    expect(svg).toContain('id="value-panel"');
  });

  it("colors the centroid cell as the symmetric-scaling region", () => {
    let bestKey = Infinity;
    let bestRule = "";
    for (const row of rows) {
      const key =
        Math.abs(row.w1 - 1 / 3) + Math.abs(row.w2 - 1 / 3) +
        Math.abs(row.w3 - 1 / 3);
      if (key < bestKey) {
        bestKey = key;
        bestRule = row.dominatingRule;
      }
    }
    expect(bestRule).toBe("red2_symmetric");
    const marker = new RegExp(
      `fill="${RULE_COLORS.red2_symmetric}" data-rule="red2_symmetric"`,
    );
    expect(svg).toMatch(marker);
  });

  it("keeps every plotted value equal to a CSV cell", () => {
    const plotted = new Set(
      [...svg.matchAll(/data-value="([^"]+)"/g)].map((m) => Number(m[1])),
    );
    const source = new Set(rows.map((r) => r.value));
    for (const value of plotted) {
      expect(source.has(value)).toBe(true);
    }
  });

  it("is deterministic", () => {
    expect(renderHeatmapSvg(rows)).toBe(svg);
  });

  it("fails loudly on an empty grid", () => {
    expect(() => renderHeatmapSvg([])).toThrow(/no heatmap rows/);
  });
});
