/**
 * Figure rendering entry point.
 *
 *   node dist/cli.js heatmap <heatmap.csv> <out.svg>
 *   node dist/cli.js chart <out.svg> <sample_n3.csv> [sample_n4.csv ...]
 */

import * as fs from "fs";

import { parseHeatmapCsv, parseSampleCsv } from "./csv.js";
import { renderHeatmapSvg } from "./heatmap.js";
import { renderBoundChartSvg } from "./boundChart.js";

function usage(): never {
  console.error("usage: cli.ts heatmap <in.csv> <out.svg>");
  console.error("       cli.ts chart <out.svg> <in.csv> [...]");
  process.exit(2);
}

const [, , command, ...args] = process.argv;

try {
  if (command === "heatmap") {
    if (args.length !== 2) usage();
    const rows = parseHeatmapCsv(fs.readFileSync(args[0], "utf-8"));
    fs.writeFileSync(args[1], renderHeatmapSvg(rows));
    console.log(`wrote ${args[1]} (${rows.length} grid rows)`);
  } else if (command === "chart") {
    if (args.length < 2) usage();
    const [out, ...inputs] = args;
    const rows = inputs.map((p) => parseSampleCsv(fs.readFileSync(p, "utf-8")));
    fs.writeFileSync(out, renderBoundChartSvg(rows));
    console.log(`wrote ${out} (${rows.length} series points)`);
  } else {
    usage();
  }
} catch (err) {
  console.error(`error: ${err instanceof Error ? err.message : err}`);
  process.exit(1);
}
