/**
 * Standard equilateral-triangle embedding of the three-agent simplex.
 * Vertices are the unit entitlement vectors: (1,0,0) bottom-left,
 * (0,1,0) bottom-right, (0,0,1) top.
 */

export interface Point {
  x: number;
  y: number;
}

export const TRIANGLE_HEIGHT = Math.sqrt(3) / 2;

/** Map (w1, w2, w3) with w1+w2+w3 = 1 onto the unit-side triangle. */
export function toTriangle(w1: number, w2: number, w3: number): Point {
  return {
    x: w2 + 0.5 * w3,
    y: TRIANGLE_HEIGHT * w3,
  };
}

/** Scale a unit-triangle point into pixel space (y axis flipped). */
export function toPixels(p: Point, size: number, margin: number): Point {
  return {
    x: margin + p.x * size,
    y: margin + (TRIANGLE_HEIGHT - p.y) * size,
  };
}
