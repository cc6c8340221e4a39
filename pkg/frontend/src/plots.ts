/**
 * The three plot kinds. Each renderer takes raw CSV text (already read
 * from disk by the caller), validates the published column layout, and
 * returns a complete SVG document as a string. Renderers never touch
 * the filesystem and never modify their inputs.
 */

import { SchemaError } from "./errors.js";
import { parseCsv, columnIndex, matchingColumns, column, Table } from "./csv.js";
import {
  Scale,
  axes,
  document,
  fmt,
  linearScale,
  logScale,
  polyline,
  PLOT_AREA,
} from "./svg.js";

const SERIES_COLORS = [
  "#1f4e9c",
  "#c23b22",
  "#2e7d32",
  "#7b1fa2",
  "#ef6c00",
  "#00838f",
  "#5d4037",
  "#c2185b",
];

function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  return [lo, hi];
}

function makeScales(
  xlo: number,
  xhi: number,
  ylo: number,
  yhi: number,
): { x: Scale; y: Scale } {
  const pad = (yhi - ylo || 1) * 0.05;
  return {
    x: linearScale(xlo, xhi, PLOT_AREA.x0, PLOT_AREA.x1),
    y: linearScale(Math.min(ylo, 0), yhi + pad, PLOT_AREA.y0, PLOT_AREA.y1),
  };
}

function legend(entries: { label: string; color: string; dashed?: boolean }[]): string {
  const parts: string[] = [];
  let y = PLOT_AREA.y1 + 14;
  for (const e of entries) {
    const x = PLOT_AREA.x1 - 150;
    parts.push(
      `<line x1="${x}" y1="${y - 4}" x2="${x + 24}" y2="${y - 4}" stroke="${e.color}" stroke-width="2"${e.dashed ? ' stroke-dasharray="6,3"' : ""}/>`,
    );
    parts.push(
      `<text x="${x + 30}" y="${y}" font-size="11" fill="#333">${e.label}</text>`,
    );
    y += 16;
  }
  return parts.join("\n");
}

/**
 * Spectral-density overlay: target curve (dashed) vs fitted curve
 * (solid), plus a vertical bar at each oscillator transition energy
 * when an oscillator table is supplied.
 */
export function renderSdOverlay(curveCsv: string, oscillatorsCsv?: string): string {
  const curve = parseCsv(curveCsv, "sd_curve");
  const omega = column(curve, columnIndex(curve, "omega_cm1", "sd_curve"));
  const target = column(curve, columnIndex(curve, "target_c_cm1", "sd_curve"));
  const fit = column(curve, columnIndex(curve, "fit_c_cm1", "sd_curve"));

  let bars: number[] = [];
  if (oscillatorsCsv !== undefined) {
    const osc = parseCsv(oscillatorsCsv, "oscillators");
    bars = column(osc, columnIndex(osc, "omega0_cm1", "oscillators"));
  }

  const [xlo, xhi] = extent(omega);
  const [tlo, thi] = extent(target);
  const [flo, fhi] = extent(fit);
  const { x, y } = makeScales(xlo, xhi, Math.min(tlo, flo), Math.max(thi, fhi));

  const body: string[] = [];
  body.push(axes(x, y, { xLabel: "frequency (cm^-1)", yLabel: "C(omega) (cm^-1)", title: "spectral density: target vs fit" }));
  for (const b of bars) {
    if (b < xlo || b > xhi) continue;
    const px = fmt(x(b));
    body.push(
      `<line x1="${px}" y1="${PLOT_AREA.y0}" x2="${px}" y2="${PLOT_AREA.y1}" stroke="#999" stroke-width="1" stroke-dasharray="2,4"/>`,
    );
  }
  body.push(
    `<path d="${polyline(omega, target, x, y)}" fill="none" stroke="${SERIES_COLORS[0]}" stroke-width="2" stroke-dasharray="6,3"/>`,
  );
  body.push(
    `<path d="${polyline(omega, fit, x, y)}" fill="none" stroke="${SERIES_COLORS[1]}" stroke-width="2"/>`,
  );
  body.push(
    legend([
      { label: "target", color: SERIES_COLORS[0]!, dashed: true },
      { label: "fit", color: SERIES_COLORS[1]! },
    ]),
  );
  return document(body.join("\n"));
}

/**
 * Site populations over time: one trace per pop_site_* column, plus the
 * cumulative sink population when present.
 */
export function renderPopulations(populationsCsv: string): string {
  const table = parseCsv(populationsCsv, "populations");
  const time = column(table, columnIndex(table, "time_ps", "populations"));
  const siteCols = matchingColumns(table, /^pop_site_\d+$/);
  if (siteCols.length === 0) {
    throw new SchemaError('populations: missing column "pop_site_*"');
  }
  const sinkIdx = table.header.indexOf("sink");

  const series: { name: string; values: number[] }[] = siteCols.map((idx) => ({
    name: table.header[idx]!,
    values: column(table, idx),
  }));
  if (sinkIdx >= 0) {
    series.push({ name: "sink", values: column(table, sinkIdx) });
  }

  const [xlo, xhi] = extent(time);
  let yhi = 0;
  for (const s of series) {
    const [, hi] = extent(s.values);
    if (hi > yhi) yhi = hi;
  }
  const { x, y } = makeScales(xlo, xhi, 0, Math.max(yhi, 1));

  const body: string[] = [];
  body.push(axes(x, y, { xLabel: "time (ps)", yLabel: "population", title: "site populations" }));
  const entries: { label: string; color: string; dashed?: boolean }[] = [];
  series.forEach((s, i) => {
    const color = s.name === "sink" ? "#555555" : SERIES_COLORS[i % SERIES_COLORS.length]!;
    const dashed = s.name === "sink";
    body.push(
      `<path d="${polyline(time, s.values, x, y)}" fill="none" stroke="${color}" stroke-width="1.5"${dashed ? ' stroke-dasharray="5,3"' : ""}/>`,
    );
    entries.push({ label: s.name, color, dashed });
  });
  body.push(legend(entries));
  return document(body.join("\n"));
}

/**
 * Transport efficiency against dephasing rate on a log axis, with
 * +/- one-standard-error bars at each point.
 */
export function renderEnaqt(sweepCsv: string): string {
  const table = parseCsv(sweepCsv, "enaqt");
  const gamma = column(table, columnIndex(table, "gamma_cm1", "enaqt"));
  const eff = column(table, columnIndex(table, "efficiency", "enaqt"));
  const err = column(table, columnIndex(table, "stderr", "enaqt"));
  for (let i = 0; i < gamma.length; i++) {
    if (gamma[i]! <= 0) {
      throw new SchemaError(
        `enaqt: column "gamma_cm1" must be positive for a log axis (row ${i + 1} has ${gamma[i]})`,
      );
    }
  }

  const [glo, ghi] = extent(gamma);
  let yhi = 0;
  for (let i = 0; i < eff.length; i++) {
    const top = eff[i]! + err[i]!;
    if (top > yhi) yhi = top;
  }
  const x = logScale(glo, ghi, PLOT_AREA.x0, PLOT_AREA.x1);
  const y = linearScale(0, yhi * 1.08 || 1, PLOT_AREA.y0, PLOT_AREA.y1);

  const body: string[] = [];
  body.push(
    axes(x, y, { xLabel: "dephasing rate (cm^-1)", yLabel: "transfer efficiency", title: "noise-assisted transport" }),
  );
  body.push(
    `<path d="${polyline(gamma, eff, x, y)}" fill="none" stroke="${SERIES_COLORS[0]}" stroke-width="2"/>`,
  );
  for (let i = 0; i < gamma.length; i++) {
    const px = fmt(x(gamma[i]!));
    const yLo = fmt(y(eff[i]! - err[i]!));
    const yHi = fmt(y(eff[i]! + err[i]!));
    body.push(`<line x1="${px}" y1="${yLo}" x2="${px}" y2="${yHi}" stroke="${SERIES_COLORS[0]}" stroke-width="1"/>`);
    body.push(
      `<circle cx="${px}" cy="${fmt(y(eff[i]!))}" r="3" fill="${SERIES_COLORS[0]}"/>`,
    );
  }
  return document(body.join("\n"));
}

export type PlotKind = "sd_overlay" | "populations" | "enaqt";

export const PLOT_KINDS: PlotKind[] = ["sd_overlay", "populations", "enaqt"];

/** Dispatch a kind name to its renderer given the raw input texts in order. */
export function render(kind: PlotKind, inputs: string[]): string {
  switch (kind) {
    case "sd_overlay": {
      if (inputs.length < 1 || inputs.length > 2) {
        throw new SchemaError("sd_overlay takes one or two inputs: sd_curve.csv [oscillators.csv]");
      }
      return renderSdOverlay(inputs[0]!, inputs[1]);
    }
    case "populations": {
      if (inputs.length !== 1) {
        throw new SchemaError("populations takes exactly one input: populations.csv");
      }
      return renderPopulations(inputs[0]!);
    }
    case "enaqt": {
      if (inputs.length !== 1) {
        throw new SchemaError("enaqt takes exactly one input: the sweep csv");
      }
      return renderEnaqt(inputs[0]!);
    }
  }
}

export type { Table };
