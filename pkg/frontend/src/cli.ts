#!/usr/bin/env node
/**
 * excisim-plot <kind> --in <path...> --out <image>
 *
 * Renders one figure from CSV artifacts produced by the simulation CLI.
 * Exit codes: 0 on success, 2 on usage or schema errors.
 */

import { readFileSync, realpathSync, writeFileSync } from "node:fs";
import { pathToFileURL } from "node:url";
import { SchemaError } from "./errors.js";
import { PLOT_KINDS, PlotKind, render } from "./plots.js";

const USAGE = `usage: excisim-plot <kind> --in <path...> --out <image>

kinds:
  sd_overlay    sd_curve.csv [oscillators.csv] -> target vs fit overlay
  populations   populations.csv -> site population traces
  enaqt         sweep csv -> efficiency vs dephasing rate (log axis)

The output image is written as SVG; identical inputs give identical bytes.`;

interface Args {
  kind: PlotKind;
  inputs: string[];
  output: string;
}

export function parseArgs(argv: string[]): Args {
  if (argv.length === 0 || argv[0] === "--help" || argv[0] === "-h") {
    throw new SchemaError(USAGE);
  }
  const kind = argv[0]!;
  if (!(PLOT_KINDS as string[]).includes(kind)) {
    throw new SchemaError(`unknown plot kind "${kind}" (expected one of: ${PLOT_KINDS.join(", ")})`);
  }
  const inputs: string[] = [];
  let output: string | undefined;
  let i = 1;
  while (i < argv.length) {
    const arg = argv[i]!;
    if (arg === "--in") {
      i += 1;
      const start = i;
      while (i < argv.length && !argv[i]!.startsWith("--")) {
        inputs.push(argv[i]!);
        i += 1;
      }
      if (i === start) throw new SchemaError("--in requires at least one path");
    } else if (arg === "--out") {
      i += 1;
      if (i >= argv.length || argv[i]!.startsWith("--")) {
        throw new SchemaError("--out requires a path");
      }
      output = argv[i]!;
      i += 1;
    } else {
      throw new SchemaError(`unknown argument "${arg}"`);
    }
  }
  if (inputs.length === 0) throw new SchemaError("--in is required");
  if (output === undefined) throw new SchemaError("--out is required");
  return { kind: kind as PlotKind, inputs, output };
}

/** Run the CLI against an argv slice; returns the process exit code. */
export function run(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    if (err instanceof SchemaError) {
      process.stderr.write(`error: ${err.message}\n`);
      return 2;
    }
    throw err;
  }
  try {
    const texts = args.inputs.map((path) => readFileSync(path, "utf8"));
    const svg = render(args.kind, texts);
    writeFileSync(args.output, svg, "utf8");
  } catch (err) {
    if (err instanceof SchemaError) {
      process.stderr.write(`error: ${err.message}\n`);
      return 2;
    }
    if (err instanceof Error && "code" in err) {
      process.stderr.write(`error: ${err.message}\n`);
      return 2;
    }
    throw err;
  }
  return 0;
}

const entry = process.argv[1];
if (entry !== undefined) {
  let invokedAs: string;
  try {
    invokedAs = pathToFileURL(realpathSync(entry)).href;
  } catch {
    invokedAs = "";
  }
  if (invokedAs === import.meta.url) {
    process.exit(run(process.argv.slice(2)));
  }
}
