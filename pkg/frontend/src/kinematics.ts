/** Client-side stroke kinematics for the live display.
 *
 * Uses the same definitions as the service (centered truncated-window
 * smoothing, bracketing-neighbor finite differences on stroke-centered
 * positions), but is display-only: authoritative features always come from
 * the service.
 */

import type { PenSample } from "./schema.js";

export const SMOOTH_WINDOW = 5;

export function segmentStrokes(samples: PenSample[]): PenSample[][] {
  const strokes: PenSample[][] = [];
  let current: PenSample[] | null = null;
  for (const s of samples) {
    if (s.d) {
      if (current === null) {
        current = [];
        strokes.push(current);
      }
      current.push(s);
    } else {
      current = null;
    }
  }
  return strokes;
}

export function smooth(values: number[], window: number): number[] {
  const n = values.length;
  if (window <= 1 || n <= 1) {
    return values.slice();
  }
  const h = Math.floor(window / 2);
  const out = new Array<number>(n);
  for (let i = 0; i < n; i++) {
    const lo = Math.max(0, i - h);
    const hi = Math.min(n, i + h + 1);
    let acc = 0;
    for (let k = lo; k < hi; k++) {
      acc += values[k];
    }
    out[i] = acc / (hi - lo);
  }
  return out;
}

export function derivative(values: number[], t: number[]): number[] {
  const n = values.length;
  const out = new Array<number>(n);
  out[0] = (values[1] - values[0]) / (t[1] - t[0]);
  out[n - 1] = (values[n - 1] - values[n - 2]) / (t[n - 1] - t[n - 2]);
  for (let i = 1; i < n - 1; i++) {
    out[i] = (values[i + 1] - values[i - 1]) / (t[i + 1] - t[i - 1]);
  }
  return out;
}

/** Speed (mm/s) per sample for one derivative-eligible stroke. */
export function strokeSpeed(stroke: PenSample[], window: number = SMOOTH_WINDOW): number[] {
  const t = stroke.map((s) => (s.t - stroke[0].t) / 1000);
  const xs = smooth(stroke.map((s) => s.x - stroke[0].x), window);
  const ys = smooth(stroke.map((s) => s.y - stroke[0].y), window);
  const vx = derivative(xs, t);
  const vy = derivative(ys, t);
  return vx.map((v, i) => Math.hypot(v, vy[i]));
}

/** Pooled speed samples over every eligible stroke, in time order. */
export function speedSeries(samples: PenSample[]): number[] {
  const out: number[] = [];
  for (const stroke of segmentStrokes(samples)) {
    if (stroke.length >= 3) {
      out.push(...strokeSpeed(stroke));
    }
  }
  return out;
}

export function median(values: number[]): number | null {
  if (values.length === 0) {
    return null;
  }
  const sorted = [...values].sort((a, b) => a - b);
  const mid = sorted.length >> 1;
  return sorted.length % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
}
