/** Linear scales, tick placement, and polyline hit-testing. */

export interface Scale {
  (value: number): number;
  invert(px: number): number;
}

export function linearScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const k = (r1 - r0) / (d1 - d0);
  const fn = ((value: number) => r0 + (value - d0) * k) as Scale;
  fn.invert = (px: number) => d0 + (px - r0) / k;
  return fn;
}

export function niceTicks(lo: number, hi: number, target = 6): number[] {
  const raw = (hi - lo) / Math.max(target, 1);
  const mag = 10 ** Math.floor(Math.log10(raw));
  let step = 10 * mag;
  for (const mult of [1, 2, 5, 10]) {
    if (raw <= mult * mag) {
      step = mult * mag;
      break;
    }
  }
  const ticks: number[] = [];
  for (let t = Math.ceil(lo / step) * step; t <= hi + step * 1e-9; t += step) {
    ticks.push(t);
  }
  return ticks;
}

export function pointSegmentDistance(
  px: number, py: number,
  x1: number, y1: number, x2: number, y2: number,
): number {
  const dx = x2 - x1;
  const dy = y2 - y1;
  const lengthSq = dx * dx + dy * dy;
  let t = 0;
  if (lengthSq > 0) {
    t = Math.min(1, Math.max(0, ((px - x1) * dx + (py - y1) * dy) / lengthSq));
  }
  const cx = x1 + t * dx;
  const cy = y1 + t * dy;
  return Math.hypot(px - cx, py - cy);
}

/** Distance from a point to a polyline given in screen coordinates. */
export function polylineDistance(px: number, py: number, points: [number, number][]): number {
  let best = Infinity;
  for (let i = 0; i + 1 < points.length; i++) {
    const [x1, y1] = points[i]!;
    const [x2, y2] = points[i + 1]!;
    best = Math.min(best, pointSegmentDistance(px, py, x1, y1, x2, y2));
  }
  if (points.length === 1) {
    const [x, y] = points[0]!;
    best = Math.hypot(px - x, py - y);
  }
  return best;
}

/** Index of the closest polyline within the hit radius, or -1. */
export function hitTest(
  px: number, py: number,
  polylines: [number, number][][],
  radiusPx = 4,
): number {
  let bestIndex = -1;
  let best = radiusPx;
  polylines.forEach((points, index) => {
    const d = polylineDistance(px, py, points);
    if (d <= best) {
      best = d;
      bestIndex = index;
    }
  });
  return bestIndex;
}
