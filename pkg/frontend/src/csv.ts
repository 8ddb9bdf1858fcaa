/**
 * Reader for the sdkernel benchmark CSVs.
 *
 * Files start with `# spec: {...}` provenance comments, then a header row,
 * then data rows. Column sets are fixed per kind and validated here; a
 * missing column raises a SchemaError naming it.
 */

export class SchemaError extends Error {}

export interface CsvTable {
  columns: string[];
  rows: Record<string, string>[];
  /** parsed `# spec:` provenance header, when present */
  spec: unknown | null;
}

export const SCALING_COLUMNS = [
  "axis",
  "value",
  "runtime_seconds",
  "memory_bytes",
  "d",
  "kappa",
  "zeta",
  "seed",
] as const;

export const PAIRWISE_COLUMNS = [
  "hurst",
  "method_a",
  "method_b",
  "mae",
  "std",
  "n_paths",
  "seed",
] as const;

export function parseCsv(text: string): CsvTable {
  const lines = text.split(/\r?\n/);
  let spec: unknown | null = null;
  let header: string[] | null = null;
  const rows: Record<string, string>[] = [];
  for (const line of lines) {
    if (line.trim() === "") continue;
    if (line.startsWith("#")) {
      const m = line.match(/^#\s*spec:\s*(\{.*\})\s*$/);
      if (m) spec = JSON.parse(m[1]);
      continue;
    }
    const fields = line.split(",").map((f) => f.trim());
    if (header === null) {
      header = fields;
      continue;
    }
    if (fields.length !== header.length) {
      throw new SchemaError(
        `row has ${fields.length} fields, header has ${header.length}: ${line}`,
      );
    }
    const row: Record<string, string> = {};
    header.forEach((name, i) => (row[name] = fields[i]));
    rows.push(row);
  }
  if (header === null) throw new SchemaError("no header row found");
  return { columns: header, rows, spec };
}

export function requireColumns(table: CsvTable, expected: readonly string[]): void {
  for (const name of expected) {
    if (!table.columns.includes(name)) {
      throw new SchemaError(`missing column "${name}" (have: ${table.columns.join(",")})`);
    }
  }
}

export function numericColumn(table: CsvTable, name: string): number[] {
  requireColumns(table, [name]);
  return table.rows.map((row, i) => {
    const v = Number(row[name]);
    if (!Number.isFinite(v)) {
      throw new SchemaError(`column "${name}" row ${i + 1}: not a number: ${row[name]}`);
    }
    return v;
  });
}
