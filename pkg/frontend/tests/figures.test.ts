import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import { SchemaError, parseCsv } from "../src/csv.js";
import { render } from "../src/figures.js";
import { leastSquares } from "../src/slope.js";

const SCALING_HEADER = "axis,value,runtime_seconds,memory_bytes,d,kappa,zeta,seed";
const PAIRWISE_HEADER = "hurst,method_a,method_b,mae,std,n_paths,seed";

function tmp(): string {
  return mkdtempSync(join(tmpdir(), "sdkernel-figs-"));
}

function scalingCsv(values: number[], runtimes: number[], axis = "grid"): string {
  const rows = values.map(
    (v, i) => `${axis},${v},${runtimes[i]},${(1 << (2 * v)) * 24},1,2,0,0`,
  );
  return ['# spec: {"seed": 0}', SCALING_HEADER, ...rows].join("\n") + "\n";
}

describe("csv parsing", () => {
  it("skips provenance comments and keeps the spec", () => {
    const table = parseCsv(scalingCsv([3, 4], [1.0, 8.0]));
    expect(table.spec).toEqual({ seed: 0 });
    expect(table.rows).toHaveLength(2);
    expect(table.rows[0].value).toBe("3");
  });

  it("names the missing column", () => {
    const dir = tmp();
    const csv = join(dir, "bad.csv");
    writeFileSync(csv, "axis,value,memory_bytes\ngrid,3,10\n");
    expect(() =>
      render({ inputCsv: csv, kind: "grid-scaling", outputPath: join(dir, "o.svg") }),
    ).toThrowError(/missing column "runtime_seconds"/);
  });
});

describe("slope fits", () => {
  it("recovers an exact line", () => {
    const fit = leastSquares([1, 2, 3, 4], [3, 5, 7, 9]);
    expect(fit.slope).toBeCloseTo(2, 12);
    expect(fit.intercept).toBeCloseTo(1, 12);
  });

  it("grid-scaling slope is 3.00 +- 0.01 on exact 2^(3N) data", () => {
    const dir = tmp();
    const values = [4, 5, 6, 7, 8];
    const runtimes = values.map((n) => 1e-6 * Math.pow(2, 3 * n));
    const csv = join(dir, "grid.csv");
    writeFileSync(csv, scalingCsv(values, runtimes));
    const result = render({
      inputCsv: csv,
      kind: "grid-scaling",
      outputPath: join(dir, "grid.svg"),
    });
    expect(result.slope).toBeDefined();
    expect(Math.abs(result.slope! - 3.0)).toBeLessThan(0.01);
    expect(readFileSync(join(dir, "grid.svg"), "utf-8")).toContain("fitted slope 3.00");
  });

  it("dimension-scaling log-log slope matches an exact power law", () => {
    const dir = tmp();
    const values = [1, 2, 3, 4];
    const runtimes = values.map((d) => 0.003 * Math.pow(d, 2.5));
    const csv = join(dir, "dim.csv");
    writeFileSync(csv, scalingCsv(values, runtimes, "dimension"));
    const result = render({
      inputCsv: csv,
      kind: "dimension-scaling",
      outputPath: join(dir, "dim.svg"),
    });
    expect(Math.abs(result.slope! - 2.5)).toBeLessThan(0.01);
  });

  it("block-scaling slope is 1.00 on exactly linear data", () => {
    const dir = tmp();
    const values = [2, 4, 8, 16, 32];
    const runtimes = values.map((b) => 0.01 * b);
    const csv = join(dir, "block.csv");
    writeFileSync(csv, scalingCsv(values, runtimes, "block"));
    const result = render({
      inputCsv: csv,
      kind: "block-scaling",
      outputPath: join(dir, "block.svg"),
    });
    expect(Math.abs(result.slope! - 1.0)).toBeLessThan(0.01);
  });
});

describe("pairwise table report", () => {
  const csvText =
    [
      '# spec: {"n_paths": 20}',
      PAIRWISE_HEADER,
      "0.85,SDK1,SDK1,0,0,20,7",
      "0.85,SDK2,SDK3,2.02e-11,1.76e-11,20,7",
      "0.85,SDK1,SDK2,5.95e-06,1.21e-06,20,7",
      "0.5,SDK2,SDK3,2.68e-09,5.97e-10,20,7",
      "0.5,SDK1,SDK2,1.84e-04,1.22e-05,20,7",
    ].join("\n") + "\n";

  it("groups rows by Hurst index with MAE and STD columns", () => {
    const dir = tmp();
    const csv = join(dir, "pairwise.csv");
    writeFileSync(csv, csvText);
    render({ inputCsv: csv, kind: "pairwise-table", outputPath: join(dir, "t.md") });
    const md = readFileSync(join(dir, "t.md"), "utf-8");
    const lines = md.trimEnd().split("\n");
    expect(lines[0]).toBe("| $H$ | Method pair | MAE | STD |");
    expect(lines[1]).toBe("| --- | --- | --- | --- |");
    // self-pairs are dropped; the H label appears once per group
    expect(lines[2]).toBe("| 0.85 | SDK2 vs SDK3 | 2.02e-11 | 1.76e-11 |");
    expect(lines[3]).toBe("|  | SDK1 vs SDK2 | 5.95e-6 | 1.21e-6 |");
    expect(lines[4]).toBe("| 0.5 | SDK2 vs SDK3 | 2.68e-9 | 5.97e-10 |");
    expect(md).not.toContain("SDK1 vs SDK1");
  });

  it("is byte-identical across reruns", () => {
    const dir = tmp();
    const csv = join(dir, "pairwise.csv");
    writeFileSync(csv, csvText);
    render({ inputCsv: csv, kind: "pairwise-table", outputPath: join(dir, "a.md") });
    render({ inputCsv: csv, kind: "pairwise-table", outputPath: join(dir, "b.md") });
    expect(readFileSync(join(dir, "a.md"))).toEqual(readFileSync(join(dir, "b.md")));
  });
});

describe("degenerate inputs", () => {
  it("renders an empty-but-valid figure with a warning on header-only CSV", () => {
    const dir = tmp();
    const csv = join(dir, "empty.csv");
    writeFileSync(csv, SCALING_HEADER + "\n");
    const result = render({
      inputCsv: csv,
      kind: "grid-scaling",
      outputPath: join(dir, "empty.svg"),
    });
    expect(result.warnings).toHaveLength(1);
    const svg = readFileSync(join(dir, "empty.svg"), "utf-8");
    expect(svg).toContain("<svg");
    expect(svg).toContain("no data rows");
  });

  it("renders an empty pairwise report with a warning", () => {
    const dir = tmp();
    const csv = join(dir, "empty.csv");
    writeFileSync(csv, PAIRWISE_HEADER + "\n");
    const result = render({
      inputCsv: csv,
      kind: "pairwise-table",
      outputPath: join(dir, "empty.md"),
    });
    expect(result.warnings).toHaveLength(1);
    expect(readFileSync(join(dir, "empty.md"), "utf-8")).toContain("| $H$ |");
  });

  it("svg reruns are byte-identical", () => {
    const dir = tmp();
    const csv = join(dir, "grid.csv");
    writeFileSync(csv, scalingCsv([4, 5, 6], [0.01, 0.08, 0.64]));
    render({ inputCsv: csv, kind: "grid-scaling", outputPath: join(dir, "a.svg") });
    render({ inputCsv: csv, kind: "grid-scaling", outputPath: join(dir, "b.svg") });
    expect(readFileSync(join(dir, "a.svg"))).toEqual(readFileSync(join(dir, "b.svg")));
  });
});
