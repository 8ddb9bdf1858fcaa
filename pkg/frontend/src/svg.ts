/**
 * Minimal deterministic SVG scatter/line figures: fixed canvas, fixed number
 * formatting, no timestamps, so identical input yields identical bytes.
 */

export interface Series {
  x: number[];
  y: number[];
}

export interface SvgOptions {
  title: string;
  xLabel: string;
  yLabel: string;
  annotation?: string;
  fit?: { slope: number; intercept: number };
  warning?: string;
}

const WIDTH = 640;
const HEIGHT = 420;
const MARGIN = { left: 64, right: 24, top: 40, bottom: 48 };

const fmt = (v: number): string => Number(v.toPrecision(6)).toString();

function scale(values: number[], lo: number, hi: number): (v: number) => number {
  let min = Math.min(...values);
  let max = Math.max(...values);
  if (min === max) {
    min -= 0.5;
    max += 0.5;
  }
  return (v) => lo + ((v - min) / (max - min)) * (hi - lo);
}

export function renderSvg(series: Series, opts: SvgOptions): string {
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="monospace" font-size="12">`,
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  parts.push(`<text x="${WIDTH / 2}" y="20" text-anchor="middle" font-size="14">${opts.title}</text>`);

  const x0 = MARGIN.left;
  const x1 = WIDTH - MARGIN.right;
  const y0 = HEIGHT - MARGIN.bottom;
  const y1 = MARGIN.top;
  parts.push(`<line x1="${x0}" y1="${y0}" x2="${x1}" y2="${y0}" stroke="black"/>`);
  parts.push(`<line x1="${x0}" y1="${y0}" x2="${x0}" y2="${y1}" stroke="black"/>`);
  parts.push(
    `<text x="${(x0 + x1) / 2}" y="${HEIGHT - 12}" text-anchor="middle">${opts.xLabel}</text>`,
  );
  parts.push(
    `<text x="16" y="${(y0 + y1) / 2}" text-anchor="middle" ` +
      `transform="rotate(-90 16 ${(y0 + y1) / 2})">${opts.yLabel}</text>`,
  );

  if (series.x.length === 0) {
    parts.push(
      `<text x="${(x0 + x1) / 2}" y="${(y0 + y1) / 2}" text-anchor="middle" fill="gray">` +
        `${opts.warning ?? "no data rows"}</text>`,
    );
  } else {
    const sx = scale(series.x, x0 + 12, x1 - 12);
    const sy = scale(series.y, y0 - 12, y1 + 12);
    for (let i = 0; i < series.x.length; i++) {
      parts.push(
        `<circle cx="${fmt(sx(series.x[i]))}" cy="${fmt(sy(series.y[i]))}" r="4" fill="steelblue"/>`,
      );
    }
    if (opts.fit && series.x.length >= 2) {
      const xs = [Math.min(...series.x), Math.max(...series.x)];
      const line = xs.map(
        (v) => `${fmt(sx(v))},${fmt(sy(opts.fit!.slope * v + opts.fit!.intercept))}`,
      );
      parts.push(
        `<polyline points="${line.join(" ")}" stroke="firebrick" fill="none" stroke-dasharray="5 3"/>`,
      );
    }
    // tick labels at the extremes keep the scales readable without a full axis
    parts.push(
      `<text x="${x0 + 12}" y="${y0 + 16}" text-anchor="middle">${fmt(Math.min(...series.x))}</text>`,
    );
    parts.push(
      `<text x="${x1 - 12}" y="${y0 + 16}" text-anchor="middle">${fmt(Math.max(...series.x))}</text>`,
    );
    parts.push(
      `<text x="${x0 - 6}" y="${y0 - 12}" text-anchor="end">${fmt(Math.min(...series.y))}</text>`,
    );
    parts.push(
      `<text x="${x0 - 6}" y="${y1 + 12}" text-anchor="end">${fmt(Math.max(...series.y))}</text>`,
    );
  }
  if (opts.annotation) {
    parts.push(
      `<text x="${x1 - 8}" y="${y1 + 16}" text-anchor="end" fill="firebrick">${opts.annotation}</text>`,
    );
  }
  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
