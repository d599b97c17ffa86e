/** Pure spur arithmetic for drag feedback.
 *
 * The admissibility VERDICT always comes from the engine's region
 * intervals (single source of truth); the per-product breakdown shown in
 * the panel is recomputed here from the chart's (m, n, sign) line set with
 * the LO tracking the dragged IF center, mirroring the engine's geometry
 * so the two never disagree.
 */
import type { ChartLineJson, Injection, RegionJson, SpurClass, SpurSign } from './types.js';

export interface Violation {
  m: number;
  n: number;
  sign: SpurSign;
  spurClass: SpurClass;
  suppressionDb: number | null;
  /** suppression - floor; null when the level itself is unspecified */
  marginDb: number | null;
  bandHz: [number, number];
}

/** Admissible iff strictly inside a spur-free region: region edges are the
 * exact collision boundaries and touching counts as a collision. */
export function inAnyRegion(regions: RegionJson[], xHz: number): boolean {
  return regions.some((r) => r.low_hz < xHz && xHz < r.high_hz);
}

/** Output band of product (m, n, sign) over the RF band at a fixed LO. */
export function productBand(
  m: number, n: number, sign: SpurSign,
  rfLoHz: number, rfHiHz: number, loHz: number,
): [number, number] {
  if (sign === 'sum') {
    return [m * rfLoHz + n * loHz, m * rfHiHz + n * loHz];
  }
  const e1 = m * rfLoHz - n * loHz;
  const e2 = m * rfHiHz - n * loHz;
  if (e1 >= 0) return [e1, e2];
  if (e2 <= 0) return [-e2, -e1];
  return [0, Math.max(-e1, e2)];
}

/** Mirror of the engine rule: unspecified levels and desired-strength
 * products disqualify at any floor; suppression equal to the floor is
 * admissible. */
export function isDisqualifying(line: ChartLineJson, floorDb: number): boolean {
  if (line.class === 'Desired') return false; // the IF itself
  if (line.suppression_db === null) return true;
  return line.suppression_db < floorDb;
}

export function trackingLo(rfCenterHz: number, ifCenterHz: number, injection: Injection): number {
  return injection === 'high' ? rfCenterHz + ifCenterHz : rfCenterHz - ifCenterHz;
}

/** Disqualifying products whose band collides with [x - w, x + w] when the
 * LO tracks the candidate center x.  Closed-interval overlap. */
export function violationsAt(
  lines: ChartLineJson[],
  rfCenterHz: number,
  rfBwHz: number,
  injection: Injection,
  ifCenterHz: number,
  ifBwHz: number,
  floorDb: number,
): Violation[] {
  const lo = trackingLo(rfCenterHz, ifCenterHz, injection);
  const r1 = rfCenterHz - rfBwHz / 2;
  const r2 = rfCenterHz + rfBwHz / 2;
  const w = ifBwHz / 2;
  const out: Violation[] = [];
  for (const line of lines) {
    if (!isDisqualifying(line, floorDb)) continue;
    const band = productBand(line.m, line.n, line.sign, r1, r2, lo);
    if (band[0] <= ifCenterHz + w && band[1] >= ifCenterHz - w) {
      out.push({
        m: line.m,
        n: line.n,
        sign: line.sign,
        spurClass: line.class,
        suppressionDb: line.suppression_db,
        marginDb: line.suppression_db === null ? null : line.suppression_db - floorDb,
        bandHz: band,
      });
    }
  }
  return out;
}

/** Non-disqualifying products inside the IF band, with their margins over
 * the floor (the "permitted spurs" listing). */
export function permittedAt(
  lines: ChartLineJson[],
  rfCenterHz: number,
  rfBwHz: number,
  injection: Injection,
  ifCenterHz: number,
  ifBwHz: number,
  floorDb: number,
): Violation[] {
  const lo = trackingLo(rfCenterHz, ifCenterHz, injection);
  const r1 = rfCenterHz - rfBwHz / 2;
  const r2 = rfCenterHz + rfBwHz / 2;
  const w = ifBwHz / 2;
  const out: Violation[] = [];
  for (const line of lines) {
    if (line.class === 'Desired' || isDisqualifying(line, floorDb)) continue;
    const band = productBand(line.m, line.n, line.sign, r1, r2, lo);
    if (band[0] <= ifCenterHz + w && band[1] >= ifCenterHz - w) {
      out.push({
        m: line.m,
        n: line.n,
        sign: line.sign,
        spurClass: line.class,
        suppressionDb: line.suppression_db,
        marginDb: line.suppression_db === null ? null : line.suppression_db - floorDb,
        bandHz: band,
      });
    }
  }
  return out;
}
