export { SchemaError } from "./errors.js";
export { parseCsv, columnIndex, matchingColumns, column } from "./csv.js";
export type { Table } from "./csv.js";
export {
  render,
  renderSdOverlay,
  renderPopulations,
  renderEnaqt,
  PLOT_KINDS,
} from "./plots.js";
export type { PlotKind } from "./plots.js";
export { run, parseArgs } from "./cli.js";
