/** Explorer wiring: fetch, render, drag the IF band, inspect lines. */
import { ExplorerApi, ApiRequestError } from './api.js';
import { clampCenter, decodeState, DEFAULT_STATE, encodeState, ViewState } from './state.js';
import { hitTest } from './scales.js';
import { inAnyRegion, permittedAt, violationsAt, Violation } from './spur.js';
import { renderChart, RenderedChart } from './render.js';
import { tooltipText } from './tooltip.js';
import type { ChartJson, RegionsJson } from './types.js';

const api = new ExplorerApi();

let state: ViewState = decodeState(window.location.search.slice(1));
let chart: ChartJson | null = null;
let regions: RegionsJson | null = null;
let rendered: RenderedChart | null = null;
let pinnedLine: number | null = null;
let dragging = false;

const chartHost = document.getElementById('chart')!;
const panelHost = document.getElementById('panel')!;
const bannerHost = document.getElementById('banner')!;
const tooltipHost = document.getElementById('tooltip')!;

function syncUrl(): void {
  history.replaceState(null, '', `?${encodeState(state)}`);
}

function formatMhz(hz: number): string {
  return (hz / 1e6).toFixed(3);
}

function describe(v: Violation): string {
  const margin = v.marginDb === null ? 'unspecified level'
    : `margin ${v.marginDb.toFixed(1)} dB`;
  return `(m=${v.m}, n=${v.n}, ${v.sign}) ${v.spurClass}, ` +
    `${formatMhz(v.bandHz[0])}..${formatMhz(v.bandHz[1])} MHz, ${margin}`;
}

function updatePanel(): void {
  if (!chart || !regions) return;
  const admissible = inAnyRegion(regions.regions, state.ifCenterHz);
  const violations = violationsAt(chart.lines, state.rfCenterHz, state.rfBwHz,
    state.injection, state.ifCenterHz, state.ifBwHz, state.floorDb);
  const permitted = permittedAt(chart.lines, state.rfCenterHz, state.rfBwHz,
    state.injection, state.ifCenterHz, state.ifBwHz, state.floorDb);

  const lines: string[] = [];
  lines.push(`IF center ${formatMhz(state.ifCenterHz)} MHz, band ` +
    `${formatMhz(state.ifCenterHz - state.ifBwHz / 2)}..` +
    `${formatMhz(state.ifCenterHz + state.ifBwHz / 2)} MHz - ` +
    (admissible ? 'spur-free' : `${violations.length} violating product(s)`));
  for (const v of violations) lines.push(`VIOLATION ${describe(v)}`);
  for (const p of permitted) lines.push(`permitted ${describe(p)}`);
  panelHost.textContent = lines.join('\n');
  panelHost.className = admissible ? 'panel ok' : 'panel violating';

  if (rendered) {
    rendered.ifBandRect.setAttribute('fill', admissible ? '#2ca02c' : '#d62728');
    rendered.ifBandRect.setAttribute('stroke', admissible ? '#1a7a1a' : '#b00000');
  }
}

function draw(): void {
  if (!chart || !regions) return;
  const admissible = inAnyRegion(regions.regions, state.ifCenterHz);
  rendered = renderChart(chart, regions.regions, state.ifCenterHz,
    state.ifBwHz, admissible);
  chartHost.replaceChildren(rendered.svg);
  bannerHost.textContent = regions.regions.length === 0
    ? 'no spur-free region for these settings' : '';
  attachInteractions();
  updatePanel();
}

function attachInteractions(): void {
  if (!rendered || !chart) return;
  const { svg, geometry } = rendered;

  const centerFromEvent = (event: PointerEvent | MouseEvent): number => {
    const rect = svg.getBoundingClientRect();
    const py = event.clientY - rect.top;
    const divisor = chart!.normalized ? chart!.lo_hz : 1;
    const value = geometry.y.invert(py) * geometry.unit * divisor;
    const domainHi = geometry.y.invert(geometry.margin) * geometry.unit * divisor;
    return clampCenter(value, 0, domainHi);
  };

  svg.addEventListener('pointerdown', (event) => {
    dragging = true;
    svg.setPointerCapture(event.pointerId);
    state = { ...state, ifCenterHz: centerFromEvent(event) };
    updateBandRect();
    updatePanel();
  });
  svg.addEventListener('pointermove', (event) => {
    if (dragging) {
      state = { ...state, ifCenterHz: centerFromEvent(event) };
      updateBandRect();
      updatePanel();
      return;
    }
    handleHover(event);
  });
  svg.addEventListener('pointerup', () => {
    if (!dragging) return;
    dragging = false;
    syncUrl();
    void refresh(); // the LO tracks the committed center: refetch lines
  });
  svg.addEventListener('click', (event) => {
    if (!rendered) return;
    const rect = svg.getBoundingClientRect();
    const index = hitTest(event.clientX - rect.left, event.clientY - rect.top,
      rendered.geometry.screenLines);
    pinnedLine = index >= 0 ? index : null;
    handleHover(event);
  });
}

function updateBandRect(): void {
  if (!rendered || !chart) return;
  const { geometry, ifBandRect } = rendered;
  const divisor = chart.normalized ? chart.lo_hz : 1;
  const top = geometry.y((state.ifCenterHz + state.ifBwHz / 2) / divisor / geometry.unit);
  const bottom = geometry.y((state.ifCenterHz - state.ifBwHz / 2) / divisor / geometry.unit);
  ifBandRect.setAttribute('y', String(Math.min(top, bottom)));
  ifBandRect.setAttribute('height', String(Math.max(Math.abs(bottom - top), 2)));
}

function handleHover(event: MouseEvent): void {
  if (!rendered || !chart) return;
  const rect = rendered.svg.getBoundingClientRect();
  let index = pinnedLine;
  if (index === null) {
    index = hitTest(event.clientX - rect.left, event.clientY - rect.top,
      rendered.geometry.screenLines);
  }
  if (index < 0 || index >= chart.lines.length) {
    tooltipHost.textContent = '';
    tooltipHost.className = 'tooltip hidden';
    return;
  }
  tooltipHost.textContent = tooltipText(chart.lines[index]!) +
    (pinnedLine !== null ? ' (pinned)' : '');
  tooltipHost.className = 'tooltip';
}

async function refresh(): Promise<void> {
  try {
    const view = await api.loadView(state);
    chart = view.chart;
    regions = view.regions;
    draw();
  } catch (error) {
    if (error instanceof DOMException && error.name === 'AbortError') return;
    const message = error instanceof ApiRequestError
      ? `${error.message}${error.field ? ` (field: ${error.field})` : ''}`
      : String(error);
    bannerHost.textContent = message; // keep the current chart on errors
  }
}

function bindControls(): void {
  const form = document.getElementById('controls') as HTMLFormElement;
  const set = (name: string, value: string) => {
    (form.elements.namedItem(name) as HTMLInputElement).value = value;
  };
  set('table', state.table);
  set('rf_center', String(state.rfCenterHz / 1e6));
  set('rf_bw', String(state.rfBwHz / 1e6));
  set('if_bw', String(state.ifBwHz / 1e6));
  set('floor', String(state.floorDb));
  set('max_order', String(state.maxOrder));
  (form.elements.namedItem('sums') as HTMLInputElement).checked = state.includeSums;

  form.addEventListener('submit', (event) => {
    event.preventDefault();
    const read = (name: string) =>
      Number((form.elements.namedItem(name) as HTMLInputElement).value);
    state = {
      ...state,
      table: (form.elements.namedItem('table') as HTMLInputElement).value,
      rfCenterHz: read('rf_center') * 1e6,
      rfBwHz: read('rf_bw') * 1e6,
      ifBwHz: read('if_bw') * 1e6,
      floorDb: read('floor'),
      maxOrder: read('max_order'),
      includeSums: (form.elements.namedItem('sums') as HTMLInputElement).checked,
    };
    syncUrl();
    void refresh();
  });
}

void (async () => {
  try {
    const tables = await api.loadTables();
    if (tables.length > 0 && !tables.some((t) => t.id === state.table)) {
      state = { ...state, table: tables[0]!.id };
    }
  } catch {
    state = { ...DEFAULT_STATE };
  }
  bindControls();
  syncUrl();
  await refresh();
})();
