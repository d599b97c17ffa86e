/** View state and its URL-query-string form, so a chosen plan view is
 * shareable and bookmarkable. */
import type { Injection } from './types.js';

export interface ViewState {
  table: string;
  rfCenterHz: number;
  rfBwHz: number;
  ifCenterHz: number;
  ifBwHz: number;
  floorDb: number;
  maxOrder: number;
  includeSums: boolean;
  normalized: boolean;
  injection: Injection;
}

export const DEFAULT_STATE: ViewState = {
  table: 'ade-mh35',
  rfCenterHz: 1800e6,
  rfBwHz: 30e6,
  ifCenterHz: 60e6,
  ifBwHz: 5e6,
  floorDb: 70,
  maxOrder: 10,
  includeSums: true,
  normalized: false,
  injection: 'high',
};

export function encodeState(state: ViewState): string {
  const q = new URLSearchParams();
  q.set('table', state.table);
  q.set('rf_center', String(state.rfCenterHz));
  q.set('rf_bw', String(state.rfBwHz));
  q.set('if_center', String(state.ifCenterHz));
  q.set('if_bw', String(state.ifBwHz));
  q.set('floor', String(state.floorDb));
  q.set('max_order', String(state.maxOrder));
  q.set('sums', state.includeSums ? '1' : '0');
  q.set('normalized', state.normalized ? '1' : '0');
  q.set('injection', state.injection);
  return q.toString();
}

function num(q: URLSearchParams, key: string, fallback: number): number {
  const raw = q.get(key);
  if (raw === null) return fallback;
  const value = Number(raw);
  return Number.isFinite(value) && value > 0 ? value : fallback;
}

export function decodeState(query: string, defaults: ViewState = DEFAULT_STATE): ViewState {
  const q = new URLSearchParams(query);
  const injection = q.get('injection');
  return {
    table: q.get('table') ?? defaults.table,
    rfCenterHz: num(q, 'rf_center', defaults.rfCenterHz),
    rfBwHz: num(q, 'rf_bw', defaults.rfBwHz),
    ifCenterHz: num(q, 'if_center', defaults.ifCenterHz),
    ifBwHz: num(q, 'if_bw', defaults.ifBwHz),
    floorDb: num(q, 'floor', defaults.floorDb),
    maxOrder: Math.max(1, Math.round(num(q, 'max_order', defaults.maxOrder))),
    includeSums: (q.get('sums') ?? (defaults.includeSums ? '1' : '0')) === '1',
    normalized: (q.get('normalized') ?? (defaults.normalized ? '1' : '0')) === '1',
    injection: injection === 'low' ? 'low' : defaults.injection,
  };
}

/** Dragging never leaves the chart's x-domain. */
export function clampCenter(xHz: number, domainLoHz: number, domainHiHz: number): number {
  return Math.min(Math.max(xHz, domainLoHz), domainHiHz);
}
