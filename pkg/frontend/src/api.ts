/** Fetch wrappers; newer requests abort in-flight ones (last write wins). */
import type { ChartJson, RegionsJson, TableInfoJson } from './types.js';
import type { ViewState } from './state.js';
import { trackingLo } from './spur.js';

export class ApiRequestError extends Error {
  constructor(message: string, readonly field: string | null) {
    super(message);
  }
}

async function getJson<T>(url: string, signal: AbortSignal): Promise<T> {
  const response = await fetch(url, { signal });
  if (!response.ok) {
    let field: string | null = null;
    let message = `${response.status} ${response.statusText}`;
    try {
      const body = await response.json();
      if (body && typeof body.error === 'string') {
        message = body.error;
        field = typeof body.field === 'string' ? body.field : null;
      }
    } catch {
      /* non-JSON error body */
    }
    throw new ApiRequestError(message, field);
  }
  return response.json() as Promise<T>;
}

export function chartUrl(state: ViewState): string {
  const lo = trackingLo(state.rfCenterHz, state.ifCenterHz, state.injection);
  const q = new URLSearchParams({
    table: state.table,
    lo: String(lo),
    rf_lo: String(state.rfCenterHz - state.rfBwHz / 2),
    rf_hi: String(state.rfCenterHz + state.rfBwHz / 2),
    max_order: String(state.maxOrder),
    sums: state.includeSums ? '1' : '0',
    normalized: state.normalized ? '1' : '0',
    all: '1', // every product, so panel math sees what the planner saw
  });
  return `/api/chart?${q.toString()}`;
}

export function regionsUrl(state: ViewState): string {
  const q = new URLSearchParams({
    table: state.table,
    rf_center: String(state.rfCenterHz),
    rf_bw: String(state.rfBwHz),
    if_bw: String(state.ifBwHz),
    floor: String(state.floorDb),
    injection: state.injection,
    max_order: String(state.maxOrder),
    sums: state.includeSums ? '1' : '0',
  });
  return `/api/regions?${q.toString()}`;
}

export class ExplorerApi {
  private controller: AbortController | null = null;

  async loadTables(): Promise<TableInfoJson[]> {
    return getJson<TableInfoJson[]>('/api/tables', new AbortController().signal);
  }

  /** Fetch chart + regions together; a newer call supersedes this one. */
  async loadView(state: ViewState): Promise<{ chart: ChartJson; regions: RegionsJson }> {
    this.controller?.abort();
    this.controller = new AbortController();
    const signal = this.controller.signal;
    const [chart, regions] = await Promise.all([
      getJson<ChartJson>(chartUrl(state), signal),
      getJson<RegionsJson>(regionsUrl(state), signal),
    ]);
    return { chart, regions };
  }
}
