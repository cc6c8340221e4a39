/**
 * Minimal deterministic SVG assembly: no timestamps, no random ids,
 * numbers printed through one fixed formatter, so identical inputs
 * always give identical bytes.
 */

export const WIDTH = 640;
export const HEIGHT = 420;
export const MARGIN = { left: 64, right: 18, top: 26, bottom: 48 };

export interface Scale {
  (value: number): number;
  ticks: number[];
  label: (tick: number) => string;
}

/** Fixed coordinate formatting: two decimals, no negative zero. */
export function fmt(value: number): string {
  const rounded = Math.round(value * 100) / 100;
  return (Object.is(rounded, -0) ? 0 : rounded).toString();
}

function niceStep(span: number, target: number): number {
  const raw = span / target;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  for (const m of [1, 2, 5, 10]) {
    if (raw <= m * mag) return m * mag;
  }
  return 10 * mag;
}

export function linearScale(
  lo: number,
  hi: number,
  outLo: number,
  outHi: number,
): Scale {
  if (hi <= lo) hi = lo + 1; // degenerate data still gets a frame
  const step = niceStep(hi - lo, 5);
  const ticks: number[] = [];
  for (let t = Math.ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step) {
    ticks.push(Math.round(t / step) * step);
  }
  const scale = ((value: number) =>
    outLo + ((value - lo) / (hi - lo)) * (outHi - outLo)) as Scale;
  scale.ticks = ticks;
  scale.label = (tick) => {
    const text = tick.toPrecision(10);
    return String(Number(text));
  };
  return scale;
}

export function logScale(
  lo: number,
  hi: number,
  outLo: number,
  outHi: number,
): Scale {
  const llo = Math.log10(lo);
  const lhi = Math.log10(hi <= lo ? lo * 10 : hi);
  const ticks: number[] = [];
  for (let d = Math.ceil(llo - 1e-9); d <= lhi + 1e-9; d += 1) {
    ticks.push(Math.pow(10, d));
  }
  const scale = ((value: number) =>
    outLo + ((Math.log10(value) - llo) / (lhi - llo)) * (outHi - outLo)) as Scale;
  scale.ticks = ticks;
  scale.label = (tick) => {
    const exp = Math.round(Math.log10(tick));
    return exp >= -2 && exp <= 3 ? String(Number(tick.toPrecision(6))) : `1e${exp}`;
  };
  return scale;
}

export function polyline(xs: number[], ys: number[], x: Scale, y: Scale): string {
  const parts: string[] = [];
  for (let i = 0; i < xs.length; i++) {
    parts.push(`${i === 0 ? "M" : "L"}${fmt(x(xs[i]!))},${fmt(y(ys[i]!))}`);
  }
  return parts.join(" ");
}

export interface AxisOptions {
  xLabel: string;
  yLabel: string;
  title?: string;
}

/** Frame, tick marks, tick labels and axis titles for one panel. */
export function axes(x: Scale, y: Scale, opts: AxisOptions): string {
  const { left, right, top, bottom } = MARGIN;
  const x0 = left;
  const x1 = WIDTH - right;
  const y0 = HEIGHT - bottom;
  const y1 = top;
  const parts: string[] = [];
  parts.push(
    `<rect x="${x0}" y="${y1}" width="${x1 - x0}" height="${y0 - y1}" fill="none" stroke="#333" stroke-width="1"/>`,
  );
  for (const t of x.ticks) {
    const px = fmt(x(t));
    parts.push(`<line x1="${px}" y1="${y0}" x2="${px}" y2="${y0 + 5}" stroke="#333"/>`);
    parts.push(
      `<text x="${px}" y="${y0 + 19}" font-size="11" text-anchor="middle" fill="#333">${x.label(t)}</text>`,
    );
  }
  for (const t of y.ticks) {
    const py = fmt(y(t));
    parts.push(`<line x1="${x0 - 5}" y1="${py}" x2="${x0}" y2="${py}" stroke="#333"/>`);
    parts.push(
      `<text x="${x0 - 8}" y="${py}" font-size="11" text-anchor="end" dominant-baseline="middle" fill="#333">${y.label(t)}</text>`,
    );
  }
  parts.push(
    `<text x="${(x0 + x1) / 2}" y="${HEIGHT - 10}" font-size="13" text-anchor="middle" fill="#111">${opts.xLabel}</text>`,
  );
  parts.push(
    `<text x="17" y="${(y0 + y1) / 2}" font-size="13" text-anchor="middle" fill="#111" transform="rotate(-90 17 ${(y0 + y1) / 2})">${opts.yLabel}</text>`,
  );
  if (opts.title) {
    parts.push(
      `<text x="${(x0 + x1) / 2}" y="16" font-size="14" text-anchor="middle" fill="#111">${opts.title}</text>`,
    );
  }
  return parts.join("\n");
}

export function document(body: string): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
    `viewBox="0 0 ${WIDTH} ${HEIGHT}">\n<rect width="${WIDTH}" height="${HEIGHT}" fill="#ffffff"/>\n` +
    body +
    "\n</svg>\n"
  );
}

export const PLOT_AREA = {
  x0: MARGIN.left,
  x1: WIDTH - MARGIN.right,
  y0: HEIGHT - MARGIN.bottom,
  y1: MARGIN.top,
};
