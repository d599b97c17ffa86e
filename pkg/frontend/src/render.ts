/** SVG construction for the explorer chart. */
import type { ChartJson, ChartLineJson, RegionJson } from './types.js';
import { linearScale, niceTicks, Scale } from './scales.js';

export const CLASS_COLORS: Record<string, string> = {
  Desired: '#d62728',
  Critical: '#1f77b4',
  Moderate: '#e6b400',
  NonImpact: '#2ca02c',
};

export interface ChartGeometry {
  width: number;
  height: number;
  margin: number;
  x: Scale;
  y: Scale;
  unit: number;
  /** screen-space polylines, one per chart line (same order) */
  screenLines: [number, number][][];
}

export function chartGeometry(chart: ChartJson, width = 920, height = 560,
                              margin = 64): ChartGeometry {
  const unit = chart.normalized ? 1 : 1e6;
  const divisor = chart.normalized ? chart.lo_hz : 1;
  const xLo = chart.rf_range[0] / divisor / unit;
  const xHi = chart.rf_range[1] / divisor / unit;
  let yHi = 0;
  for (const line of chart.lines) {
    for (const [, vy] of line.vertices) yHi = Math.max(yHi, vy / unit);
  }
  const x = linearScale(xLo, xHi, margin, width - margin);
  const y = linearScale(0, yHi * 1.05 || 1, height - margin, margin);
  const screenLines = chart.lines.map((line) =>
    line.vertices.map(([vx, vy]) => [x(vx / unit), y(vy / unit)] as [number, number]));
  return { width, height, margin, x, y, unit, screenLines };
}

const SVG_NS = 'http://www.w3.org/2000/svg';

function el<K extends keyof SVGElementTagNameMap>(
  name: K, attrs: Record<string, string | number>,
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, name);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, String(value));
  }
  return node;
}

export interface RenderedChart {
  svg: SVGSVGElement;
  geometry: ChartGeometry;
  lineElements: SVGPolylineElement[];
  ifBandRect: SVGRectElement;
}

export function renderChart(chart: ChartJson, regions: RegionJson[],
                            ifCenterHz: number, ifBwHz: number,
                            admissible: boolean): RenderedChart {
  const geometry = chartGeometry(chart);
  const { width, height, margin, x, y, unit } = geometry;
  const svg = el('svg', {
    width, height, viewBox: `0 0 ${width} ${height}`, class: 'spur-chart',
  });
  svg.appendChild(el('rect', { x: 0, y: 0, width, height, fill: '#ffffff' }));

  // spur-free IF centers shaded green along the output axis (high-side
  // tracking LO makes output position equal the IF center)
  for (const region of regions) {
    const top = y(Math.min(region.high_hz / unit, y.invert(margin)));
    const bottom = y(Math.max(region.low_hz / unit, 0));
    if (bottom <= margin || top >= height - margin) continue;
    svg.appendChild(el('rect', {
      class: 'region-band',
      x: x(chart.rf_range[0] / unit), y: top,
      width: x(chart.rf_range[1] / unit) - x(chart.rf_range[0] / unit),
      height: Math.max(bottom - top, 0),
      fill: '#2ca02c', 'fill-opacity': 0.10,
    }));
  }

  // axes
  const axis = '#333333';
  svg.appendChild(el('line', { x1: margin, y1: height - margin, x2: width - margin, y2: height - margin, stroke: axis }));
  svg.appendChild(el('line', { x1: margin, y1: margin, x2: margin, y2: height - margin, stroke: axis }));
  const xDomainLo = x.invert(margin);
  const xDomainHi = x.invert(width - margin);
  for (const t of niceTicks(xDomainLo, xDomainHi)) {
    const px = x(t);
    svg.appendChild(el('line', { x1: px, y1: height - margin, x2: px, y2: height - margin + 5, stroke: axis }));
    const label = el('text', { x: px, y: height - margin + 18, 'text-anchor': 'middle', class: 'tick' });
    label.textContent = String(Number(t.toPrecision(8)));
    svg.appendChild(label);
  }
  for (const t of niceTicks(0, y.invert(margin))) {
    const py = y(t);
    svg.appendChild(el('line', { x1: margin - 5, y1: py, x2: margin, y2: py, stroke: axis }));
    const label = el('text', { x: margin - 8, y: py + 4, 'text-anchor': 'end', class: 'tick' });
    label.textContent = String(Number(t.toPrecision(8)));
    svg.appendChild(label);
  }
  const xTitle = el('text', { x: width / 2, y: height - margin / 4, 'text-anchor': 'middle', class: 'axis-label' });
  xTitle.textContent = chart.normalized ? 'f_in / f_LO' : 'mixer input (MHz)';
  svg.appendChild(xTitle);
  const yTitle = el('text', {
    x: margin / 3, y: height / 2, 'text-anchor': 'middle', class: 'axis-label',
    transform: `rotate(-90 ${margin / 3} ${height / 2})`,
  });
  yTitle.textContent = chart.normalized ? 'f_out / f_LO' : 'mixer output (MHz)';
  svg.appendChild(yTitle);

  // IF-band rectangle (border red when any violating product intersects)
  const bandTop = y(Math.min((ifCenterHz + ifBwHz / 2) / unit, y.invert(margin)));
  const bandBottom = y(Math.max((ifCenterHz - ifBwHz / 2) / unit, 0));
  const ifBandRect = el('rect', {
    class: `if-band ${admissible ? 'ok' : 'violating'}`,
    x: x(chart.rf_range[0] / unit), y: bandTop,
    width: x(chart.rf_range[1] / unit) - x(chart.rf_range[0] / unit),
    height: Math.max(bandBottom - bandTop, 2),
    fill: admissible ? '#2ca02c' : '#d62728', 'fill-opacity': 0.18,
    stroke: admissible ? '#1a7a1a' : '#b00000', 'stroke-width': 1.5,
  });
  svg.appendChild(ifBandRect);

  const lineElements: SVGPolylineElement[] = [];
  chart.lines.forEach((line: ChartLineJson, index: number) => {
    const points = geometry.screenLines[index]!
      .map(([px, py]) => `${px.toFixed(2)},${py.toFixed(2)}`).join(' ');
    const poly = el('polyline', {
      points,
      fill: 'none',
      stroke: CLASS_COLORS[line.class] ?? '#888888',
      'stroke-width': line.class === 'Desired' ? 2.5 : 1.5,
      'data-index': index,
    });
    svg.appendChild(poly);
    lineElements.push(poly);
  });

  return { svg, geometry, lineElements, ifBandRect };
}
