/**
 * Usage:
 *   node dist/cli.js --input scaling_grid.csv --kind grid-scaling --out fig.svg
 *   node dist/cli.js --input pairwise.csv --kind pairwise-table --out table.md
 *
 * Optional: --linear-x / --linear-y to force raw axes on scaling figures.
 */

import { FigureKind, FigureSpec, render } from "./figures.js";

const KINDS: FigureKind[] = [
  "grid-scaling",
  "block-scaling",
  "dimension-scaling",
  "pairwise-table",
];

function parseArgs(argv: string[]): FigureSpec {
  let input: string | undefined;
  let kind: FigureKind | undefined;
  let out: string | undefined;
  let logX: boolean | undefined;
  let logY: boolean | undefined;
  for (let i = 0; i < argv.length; i++) {
    switch (argv[i]) {
      case "--input":
        input = argv[++i];
        break;
      case "--kind": {
        const value = argv[++i] as FigureKind;
        if (!KINDS.includes(value)) {
          throw new Error(`unknown kind ${value}; expected one of ${KINDS.join(", ")}`);
        }
        kind = value;
        break;
      }
      case "--out":
        out = argv[++i];
        break;
      case "--linear-x":
        logX = false;
        break;
      case "--linear-y":
        logY = false;
        break;
      default:
        throw new Error(`unknown flag ${argv[i]}`);
    }
  }
  if (!input || !kind || !out) {
    throw new Error("required: --input <csv> --kind <kind> --out <file>");
  }
  return { inputCsv: input, kind, outputPath: out, logX, logY };
}

try {
  const spec = parseArgs(process.argv.slice(2));
  const result = render(spec);
  const slope = result.slope === undefined ? "" : ` (slope ${result.slope.toFixed(3)})`;
  console.log(`${result.outputPath}${slope}`);
} catch (err) {
  console.error(String(err instanceof Error ? err.message : err));
  process.exit(1);
}
