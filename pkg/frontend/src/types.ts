/** Wire types of the spurplan HTTP API. */

export type SpurSign = 'difference' | 'sum';
export type SpurClass = 'Desired' | 'Critical' | 'Moderate' | 'NonImpact';
export type Injection = 'high' | 'low';

export interface ChartLineJson {
  m: number;
  n: number;
  sign: SpurSign;
  class: SpurClass;
  vertices: [number, number][];
  /** dB below the desired product; null for unspecified cells and for
   * products sharing the desired cell (both as strong as the signal). */
  suppression_db: number | null;
}

export interface ChartJson {
  lo_hz: number;
  rf_range: [number, number];
  normalized: boolean;
  lines: ChartLineJson[];
}

export interface RegionJson {
  low_hz: number;
  high_hz: number;
  binding: [number, number, string][];
}

export interface RegionsJson {
  regions: RegionJson[];
  violations: unknown[];
}

export interface TableInfoJson {
  id: string;
  mixer_id: string;
  max_rf_order: number;
  max_lo_order: number;
}
