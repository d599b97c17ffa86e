/** Tooltip content: exactly the fetched JSON values for a line. */
import type { ChartLineJson } from './types.js';

export interface TooltipData {
  m: number;
  n: number;
  sign: string;
  suppression_db: number | null;
  class: string;
}

export function tooltipData(line: ChartLineJson): TooltipData {
  return {
    m: line.m,
    n: line.n,
    sign: line.sign,
    suppression_db: line.suppression_db,
    class: line.class,
  };
}

export function tooltipText(line: ChartLineJson): string {
  const data = tooltipData(line);
  const level = data.suppression_db === null
    ? 'level unspecified'
    : `${data.suppression_db} dB below desired`;
  return `(m=${data.m}, n=${data.n}, ${data.sign}) ${data.class}, ${level}`;
}
