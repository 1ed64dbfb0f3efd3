/**
 * Typed readers for the two CSV contracts produced by the choreknife CLI.
 * Rendering never recomputes bound values; these readers only validate
 * shape and basic sanity so a malformed file fails loudly instead of
 * drawing garbage.
 */

export interface HeatmapRow {
  w1: number;
  w2: number;
  w3: number;
  value: number;
  dominatingRule: "red1_two_agent" | "red2_symmetric";
}

export interface SampleRow {
  n: number;
  method: string;
  samples: number;
  seed: number;
  maxBound: number;
  argmaxWeights: number[];
}

const HEATMAP_HEADER = "w1,w2,w3,value,dominating_rule";
const SAMPLE_HEADER = "n,method,samples,seed,max_bound,argmax_weights";

function splitLines(text: string): string[] {
  return text.split(/\r?\n/).filter((line) => line.trim().length > 0);
}

export function parseHeatmapCsv(text: string): HeatmapRow[] {
  const lines = splitLines(text);
  if (lines.length < 2 || lines[0] !== HEATMAP_HEADER) {
    throw new Error(`heatmap CSV must start with "${HEATMAP_HEADER}" and have rows`);
  }
  return lines.slice(1).map((line, index) => {
    const parts = line.split(",");
    if (parts.length !== 5) {
      throw new Error(`heatmap row ${index + 1} has ${parts.length} fields`);
    }
    const [w1, w2, w3, value] = parts.slice(0, 4).map(Number);
    const rule = parts[4];
    if (![w1, w2, w3, value].every(Number.isFinite)) {
      throw new Error(`heatmap row ${index + 1} has non-numeric fields`);
    }
    if (Math.abs(w1 + w2 + w3 - 1) > 1e-9) {
      throw new Error(`heatmap row ${index + 1}: weights sum to ${w1 + w2 + w3}`);
    }
    if (rule !== "red1_two_agent" && rule !== "red2_symmetric") {
      throw new Error(`heatmap row ${index + 1}: unknown rule "${rule}"`);
    }
    return { w1, w2, w3, value, dominatingRule: rule };
  });
}

export function parseSampleCsv(text: string): SampleRow {
  const lines = splitLines(text);
  if (lines.length < 2 || lines[0] !== SAMPLE_HEADER) {
    throw new Error(`sample CSV must start with "${SAMPLE_HEADER}" and have a row`);
  }
  const parts = lines[1].split(",");
  if (parts.length !== 6) {
    throw new Error(`sample row has ${parts.length} fields, expected 6`);
  }
  const row: SampleRow = {
    n: Number(parts[0]),
    method: parts[1],
    samples: Number(parts[2]),
    seed: Number(parts[3]),
    maxBound: Number(parts[4]),
    argmaxWeights: parts[5].split(" ").map(Number),
  };
  if (!Number.isFinite(row.maxBound) || !Number.isInteger(row.n) || row.n < 2) {
    throw new Error("sample row has malformed n or max_bound");
  }
  return row;
}
