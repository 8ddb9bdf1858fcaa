/**
 * Figure dispatch: one FigureSpec in, one deterministic SVG or Markdown file
 * out.  Scaling figures carry the fitted slope in their annotation:
 *
 * - grid-scaling:      log2(runtime) against the grid exponent N (the CSV
 *                      `value` column already is the exponent);
 * - block-scaling:     runtime against the block size 2^(M-N), annotated with
 *                      the log-log slope (1.0 for the expected linear growth);
 * - dimension-scaling: log-log slope of runtime against the dimension d.
 */

import { readFileSync, writeFileSync } from "node:fs";

import {
  CsvTable,
  PAIRWISE_COLUMNS,
  SCALING_COLUMNS,
  SchemaError,
  numericColumn,
  parseCsv,
  requireColumns,
} from "./csv.js";
import { pairwiseMarkdown } from "./report.js";
import { LineFit, exponentSlope, log2, logLogSlope } from "./slope.js";
import { renderSvg } from "./svg.js";

export type FigureKind =
  | "grid-scaling"
  | "block-scaling"
  | "dimension-scaling"
  | "pairwise-table";

export interface FigureSpec {
  inputCsv: string;
  kind: FigureKind;
  outputPath: string;
  logX?: boolean;
  logY?: boolean;
}

export interface RenderResult {
  outputPath: string;
  /** fitted slope for the scaling kinds, absent for the table report */
  slope?: number;
  warnings: string[];
}

export function fitScaling(kind: FigureKind, value: number[], runtime: number[]): LineFit {
  if (kind === "grid-scaling") return exponentSlope(value, runtime);
  return logLogSlope(value, runtime);
}

export function renderText(kind: FigureKind, table: CsvTable, spec: FigureSpec): RenderResult {
  const warnings: string[] = [];
  if (kind === "pairwise-table") {
    requireColumns(table, PAIRWISE_COLUMNS);
    const report = pairwiseMarkdown(table);
    warnings.push(...report.warnings);
    writeFileSync(spec.outputPath, report.markdown);
    return { outputPath: spec.outputPath, warnings };
  }

  requireColumns(table, SCALING_COLUMNS);
  const value = numericColumn(table, "value");
  const runtime = numericColumn(table, "runtime_seconds");
  let slope: number | undefined;
  let fitLine: LineFit | undefined;
  let series = { x: value, y: runtime };
  let xLabel = "value";
  let yLabel = "runtime [s]";

  if (value.length >= 2) {
    const fit = fitScaling(kind, value, runtime);
    slope = fit.slope;
    if (kind === "grid-scaling") {
      series = { x: value, y: runtime.map(log2) };
      xLabel = "grid exponent N";
      yLabel = "log2 runtime";
      fitLine = fit;
    } else {
      series = { x: value.map(log2), y: runtime.map(log2) };
      xLabel = kind === "block-scaling" ? "log2 block size" : "log2 dimension";
      yLabel = "log2 runtime";
      fitLine = fit;
    }
  } else if (value.length === 0) {
    warnings.push("no data rows: emitting an empty figure");
  }

  if (spec.logX === false || spec.logY === false) {
    // explicit linear axes requested: plot the raw columns, keep the slope
    series = { x: value, y: runtime };
    xLabel = "value";
    yLabel = "runtime [s]";
    fitLine = undefined;
  }

  const svg = renderSvg(series, {
    title: kind,
    xLabel,
    yLabel,
    annotation: slope === undefined ? undefined : `fitted slope ${slope.toFixed(2)}`,
    fit: fitLine,
    warning: warnings[0],
  });
  writeFileSync(spec.outputPath, svg);
  return { outputPath: spec.outputPath, slope, warnings };
}

export function render(spec: FigureSpec): RenderResult {
  const text = readFileSync(spec.inputCsv, "utf-8");
  const table = parseCsv(text);
  const result = renderText(spec.kind, table, spec);
  for (const warning of result.warnings) {
    console.warn(`warning: ${warning}`);
  }
  return result;
}

export { SchemaError };
