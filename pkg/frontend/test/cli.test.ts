import { mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";
import { run } from "../src/cli.js";

const FIXTURES = join(fileURLToPath(new URL(".", import.meta.url)), "fixtures");
const fx = (name: string) => join(FIXTURES, name);

let workDir: string;
let stderrText: string;

beforeEach(() => {
  workDir = mkdtempSync(join(tmpdir(), "excisim-plot-"));
  stderrText = "";
  vi.spyOn(process.stderr, "write").mockImplementation((chunk: unknown) => {
    stderrText += String(chunk);
    return true;
  });
});

afterEach(() => {
  vi.restoreAllMocks();
  rmSync(workDir, { recursive: true, force: true });
});

describe("successful runs", () => {
  it("renders each shipped kind to a file and exits 0", () => {
    const cases: [string, string[]][] = [
      ["sd_overlay", [fx("sd_curve.csv"), fx("oscillators.csv")]],
      ["populations", [fx("populations.csv")]],
      ["enaqt", [fx("enaqt.csv")]],
    ];
    for (const [kind, inputs] of cases) {
      const out = join(workDir, `${kind}.svg`);
      expect(run([kind, "--in", ...inputs, "--out", out])).toBe(0);
      const svg = readFileSync(out, "utf8");
      expect(svg.startsWith("<svg ")).toBe(true);
    }
    expect(stderrText).toBe("");
  });

  it("is idempotent: re-rendering overwrites with identical bytes", () => {
    const out = join(workDir, "enaqt.svg");
    expect(run(["enaqt", "--in", fx("enaqt.csv"), "--out", out])).toBe(0);
    const first = readFileSync(out);
    expect(run(["enaqt", "--in", fx("enaqt.csv"), "--out", out])).toBe(0);
    const second = readFileSync(out);
    expect(second.equals(first)).toBe(true);
  });

  it("never mutates its input files", () => {
    const input = join(workDir, "populations.csv");
    writeFileSync(input, readFileSync(fx("populations.csv")));
    const before = readFileSync(input);
    expect(run(["populations", "--in", input, "--out", join(workDir, "p.svg")])).toBe(0);
    const after = readFileSync(input);
    expect(after.equals(before)).toBe(true);
  });
});

describe("usage errors exit 2", () => {
  it("rejects an unknown kind", () => {
    expect(run(["histogram", "--in", fx("enaqt.csv"), "--out", "x.svg"])).toBe(2);
    expect(stderrText).toContain('unknown plot kind "histogram"');
  });

  it("requires --in and --out", () => {
    expect(run(["enaqt", "--out", join(workDir, "x.svg")])).toBe(2);
    expect(stderrText).toContain("--in is required");
    stderrText = "";
    expect(run(["enaqt", "--in", fx("enaqt.csv")])).toBe(2);
    expect(stderrText).toContain("--out is required");
  });

  it("prints usage on --help", () => {
    expect(run(["--help"])).toBe(2);
    expect(stderrText).toContain("usage: excisim-plot");
  });

  it("rejects extra positional arguments", () => {
    expect(run(["enaqt", "stray", "--in", fx("enaqt.csv"), "--out", "x.svg"])).toBe(2);
    expect(stderrText).toContain('unknown argument "stray"');
  });
});

describe("schema errors exit 2", () => {
  it("reports a missing input file", () => {
    expect(
      run(["enaqt", "--in", join(workDir, "nope.csv"), "--out", join(workDir, "x.svg")]),
    ).toBe(2);
    expect(stderrText).toContain("error:");
  });

  it("names the offending column for a bad header", () => {
    const input = join(workDir, "bad.csv");
    writeFileSync(input, "gamma_cm1,eff,stderr\n1,0.5,0.01\n");
    expect(run(["enaqt", "--in", input, "--out", join(workDir, "x.svg")])).toBe(2);
    expect(stderrText).toContain('missing column "efficiency"');
  });

  it("names the offending column for a non-numeric cell", () => {
    const input = join(workDir, "bad.csv");
    writeFileSync(input, "time_ps,pop_site_0\n0,NaN-ish\n");
    expect(run(["populations", "--in", input, "--out", join(workDir, "x.svg")])).toBe(2);
    expect(stderrText).toContain('column "pop_site_0"');
  });

  it("does not write the output file when validation fails", () => {
    const input = join(workDir, "bad.csv");
    const out = join(workDir, "x.svg");
    writeFileSync(input, "gamma_cm1,efficiency\n1,0.5\n");
    expect(run(["enaqt", "--in", input, "--out", out])).toBe(2);
    expect(() => readFileSync(out)).toThrow();
  });
});
