/** Least-squares line fits used for the scaling-figure annotations. */

export interface LineFit {
  slope: number;
  intercept: number;
}

export function leastSquares(x: number[], y: number[]): LineFit {
  if (x.length !== y.length || x.length < 2) {
    throw new Error(`need two matched samples or more, got ${x.length}/${y.length}`);
  }
  const n = x.length;
  const mx = x.reduce((a, b) => a + b, 0) / n;
  const my = y.reduce((a, b) => a + b, 0) / n;
  let sxx = 0;
  let sxy = 0;
  for (let i = 0; i < n; i++) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx === 0) throw new Error("degenerate fit: all x equal");
  const slope = sxy / sxx;
  return { slope, intercept: my - slope * mx };
}

const LOG2 = Math.log(2);

export const log2 = (v: number): number => Math.log(v) / LOG2;

/** Slope of log2(y) against x (x already an exponent, e.g. the grid axis N). */
export function exponentSlope(x: number[], y: number[]): LineFit {
  return leastSquares(x, y.map(log2));
}

/** Slope of log2(y) against log2(x): polynomial order on a log-log plot. */
export function logLogSlope(x: number[], y: number[]): LineFit {
  return leastSquares(x.map(log2), y.map(log2));
}
