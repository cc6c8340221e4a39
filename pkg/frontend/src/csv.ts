/**
 * Strict reader for the simulator's CSV artifacts.
 *
 * The emission contract is narrow on purpose: one header line, comma
 * separation, every body cell numeric.  Anything else is a SchemaError
 * naming the offending column, so a mismatched file fails loudly
 * instead of producing an empty plot.
 */

import { SchemaError } from "./errors.js";

export interface Table {
  header: string[];
  rows: number[][];
}

export function parseCsv(text: string, label: string): Table {
  const lines = text
    .split(/\r?\n/)
    .filter((line) => line.trim().length > 0);
  if (lines.length < 2) {
    throw new SchemaError(`${label}: expected a header line and at least one data row`);
  }
  const header = lines[0]!.split(",").map((name) => name.trim());
  const rows: number[][] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i]!.split(",");
    if (cells.length !== header.length) {
      throw new SchemaError(
        `${label}: row ${i} has ${cells.length} cells, header has ${header.length}`,
      );
    }
    const row: number[] = [];
    for (let c = 0; c < cells.length; c++) {
      const value = Number(cells[c]);
      if (cells[c]!.trim() === "" || Number.isNaN(value)) {
        throw new SchemaError(
          `${label}: column "${header[c]}" has non-numeric value ${JSON.stringify(
            cells[c]!.trim(),
          )} at row ${i}`,
        );
      }
      row.push(value);
    }
    rows.push(row);
  }
  return { header, rows };
}

/** Index of a required column, or a SchemaError naming it. */
export function columnIndex(table: Table, name: string, label: string): number {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new SchemaError(`${label}: missing column "${name}"`);
  }
  return idx;
}

/** Every column whose name matches the pattern, in header order. */
export function matchingColumns(table: Table, pattern: RegExp): number[] {
  const out: number[] = [];
  table.header.forEach((name, idx) => {
    if (pattern.test(name)) out.push(idx);
  });
  return out;
}

export function column(table: Table, idx: number): number[] {
  return table.rows.map((row) => row[idx]!);
}
