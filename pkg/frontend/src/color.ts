/**
 * Fixed color scheme so regenerated figures are reproducible byte for byte.
 *
 * Region colors follow the published figure's convention: green for the
 * two-agent grouping bound, blue for the symmetric-scaling bound. The value
 * heatmap uses a dark-to-light ramp, lighter meaning larger.
 */

export const RULE_COLORS: Record<string, string> = {
  red1_two_agent: "#4caf50",
  red2_symmetric: "#3f6fd8",
};

const RAMP: Array<[number, [number, number, number]]> = [
  [0.0, [36, 14, 80]],
  [0.25, [84, 39, 143]],
  [0.5, [158, 70, 135]],
  [0.75, [224, 126, 80]],
  [1.0, [252, 242, 167]],
];

/** Map t in [0,1] onto the ramp; out-of-range values clamp. */
export function valueColor(t: number): string {
  const x = Math.min(1, Math.max(0, t));
  for (let i = 1; i < RAMP.length; i++) {
    const [t1, c1] = RAMP[i];
    const [t0, c0] = RAMP[i - 1];
    if (x <= t1) {
      const f = (x - t0) / (t1 - t0);
      const rgb = c0.map((a, k) => Math.round(a + f * (c1[k] - a)));
      return `rgb(${rgb[0]},${rgb[1]},${rgb[2]})`;
    }
  }
  return "rgb(252,242,167)";
}
