/**
 * Markdown rendering of the pairwise-agreement table, mirroring the layout of
 * the reference comparison table: rows grouped by Hurst index, one line per
 * method pair with MAE and STD columns.
 */

import { CsvTable } from "./csv.js";

const sci = (v: number): string => v.toExponential(2);

export interface PairwiseReport {
  markdown: string;
  warnings: string[];
}

export function pairwiseMarkdown(table: CsvTable): PairwiseReport {
  const warnings: string[] = [];
  const rows = table.rows.filter((r) => r.method_a !== r.method_b);
  const lines: string[] = [];
  lines.push("| $H$ | Method pair | MAE | STD |");
  lines.push("| --- | --- | --- | --- |");
  if (rows.length === 0) {
    warnings.push("no data rows: emitting an empty table");
  }
  // group by hurst in file order (the harness writes H descending)
  const seen: string[] = [];
  for (const row of rows) {
    if (!seen.includes(row.hurst)) seen.push(row.hurst);
  }
  for (const hurst of seen) {
    const group = rows.filter((r) => r.hurst === hurst);
    group.forEach((row, i) => {
      const label = i === 0 ? hurst : "";
      lines.push(
        `| ${label} | ${row.method_a} vs ${row.method_b} | ` +
          `${sci(Number(row.mae))} | ${sci(Number(row.std))} |`,
      );
    });
  }
  return { markdown: lines.join("\n") + "\n", warnings };
}
