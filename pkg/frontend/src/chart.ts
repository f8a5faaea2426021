/**
 * SVG line chart for sweep tables: one line per scheme, value on the x axis,
 * decibels on the y axis. The continuous-phase scheme is drawn dashed — in a
 * codebook sweep it is constant, giving the flat reference line the discrete
 * curves converge to.
 *
 * Pure string assembly, no drawing dependency; every coordinate is checked
 * finite before it is written.
 */

import { Series } from "./table";

export interface ChartOptions {
  width?: number;
  height?: number;
  title?: string;
  xLabel?: string;
  yLabel?: string;
}

const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
  "#17becf",
  "#7f7f7f",
];

const DASHED_SCHEME = "continuous";

/** Round 1-2-5 tick spacing covering [lo, hi] with about `count` steps. */
export function niceTicks(lo: number, hi: number, count = 6): number[] {
  if (lo === hi) {
    lo -= 1;
    hi += 1;
  }
  const span = hi - lo;
  const rawStep = span / Math.max(count, 1);
  const power = Math.pow(10, Math.floor(Math.log10(rawStep)));
  let step = power;
  for (const mult of [1, 2, 5, 10]) {
    step = mult * power;
    if (step >= rawStep) {
      break;
    }
  }
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return ticks;
}

/** Shortest clean decimal for a tick value (no float noise). */
export function formatTick(v: number): string {
  return String(Number(v.toPrecision(10)));
}

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function assertFinite(v: number, what: string): number {
  if (!Number.isFinite(v)) {
    throw new Error(`internal error: non-finite ${what} coordinate`);
  }
  return v;
}

export function renderChart(series: Series[], options: ChartOptions = {}): string {
  const width = options.width ?? 640;
  const height = options.height ?? 420;
  const margin = { left: 64, right: 16, top: options.title ? 40 : 20, bottom: 48 };
  const plotW = width - margin.left - margin.right;
  const plotH = height - margin.top - margin.bottom;
  const drawn = series.filter((s) => s.x.length > 0);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`,
  );
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  if (options.title) {
    parts.push(
      `<text x="${width / 2}" y="22" text-anchor="middle" font-size="15">` +
        `${escapeXml(options.title)}</text>`,
    );
  }
  parts.push(
    `<rect x="${margin.left}" y="${margin.top}" width="${plotW}" height="${plotH}" ` +
      `fill="none" stroke="#333" stroke-width="1"/>`,
  );

  if (drawn.length === 0) {
    parts.push(
      `<text x="${margin.left + plotW / 2}" y="${margin.top + plotH / 2}" ` +
        `text-anchor="middle" font-size="14" fill="#666">no data</text>`,
    );
    parts.push("</svg>");
    return parts.join("\n");
  }

  const xs = drawn.flatMap((s) => s.x);
  const ys = drawn.flatMap((s) => s.y);
  let xLo = Math.min(...xs);
  let xHi = Math.max(...xs);
  let yLo = Math.min(...ys);
  let yHi = Math.max(...ys);
  if (xLo === xHi) {
    xLo -= 1;
    xHi += 1;
  }
  const yPad = yLo === yHi ? 1 : 0.05 * (yHi - yLo);
  yLo -= yPad;
  yHi += yPad;

  const sx = (v: number): number =>
    assertFinite(margin.left + ((v - xLo) / (xHi - xLo)) * plotW, "x");
  const sy = (v: number): number =>
    assertFinite(margin.top + plotH - ((v - yLo) / (yHi - yLo)) * plotH, "y");
  const coord = (v: number): string => v.toFixed(2);

  for (const t of niceTicks(xLo, xHi)) {
    const x = coord(sx(t));
    parts.push(
      `<line x1="${x}" y1="${margin.top}" x2="${x}" y2="${margin.top + plotH}" ` +
        `stroke="#ddd" stroke-width="0.5"/>`,
    );
    parts.push(
      `<text x="${x}" y="${margin.top + plotH + 18}" text-anchor="middle" ` +
        `font-size="12">${formatTick(t)}</text>`,
    );
  }
  for (const t of niceTicks(yLo, yHi)) {
    const y = coord(sy(t));
    parts.push(
      `<line x1="${margin.left}" y1="${y}" x2="${margin.left + plotW}" y2="${y}" ` +
        `stroke="#ddd" stroke-width="0.5"/>`,
    );
    parts.push(
      `<text x="${margin.left - 8}" y="${y}" text-anchor="end" dominant-baseline="middle" ` +
        `font-size="12">${formatTick(t)}</text>`,
    );
  }
  parts.push(
    `<text x="${margin.left + plotW / 2}" y="${height - 10}" text-anchor="middle" ` +
      `font-size="13">${escapeXml(options.xLabel ?? "value")}</text>`,
  );
  parts.push(
    `<text x="16" y="${margin.top + plotH / 2}" text-anchor="middle" font-size="13" ` +
      `transform="rotate(-90 16 ${margin.top + plotH / 2})">` +
      `${escapeXml(options.yLabel ?? "gain (dB)")}</text>`,
  );

  drawn.forEach((s, k) => {
    const color = PALETTE[k % PALETTE.length];
    const dash = s.scheme === DASHED_SCHEME ? ' stroke-dasharray="7 5"' : "";
    const points = s.x.map((x, i) => `${coord(sx(x))},${coord(sy(s.y[i]))}`).join(" ");
    parts.push(
      `<polyline fill="none" stroke="${color}" stroke-width="1.8"${dash} ` +
        `points="${points}"/>`,
    );
    s.x.forEach((x, i) => {
      parts.push(
        `<circle cx="${coord(sx(x))}" cy="${coord(sy(s.y[i]))}" r="3" ` +
          `fill="${color}"/>`,
      );
    });
  });

  const legendX = margin.left + plotW - 150;
  drawn.forEach((s, k) => {
    const color = PALETTE[k % PALETTE.length];
    const y = margin.top + 14 + 18 * k;
    const dash = s.scheme === DASHED_SCHEME ? ' stroke-dasharray="7 5"' : "";
    parts.push(
      `<line x1="${legendX}" y1="${y}" x2="${legendX + 26}" y2="${y}" ` +
        `stroke="${color}" stroke-width="1.8"${dash}/>`,
    );
    parts.push(
      `<text x="${legendX + 32}" y="${y + 4}" font-size="12">` +
        `${escapeXml(s.scheme)}</text>`,
    );
  });

  parts.push("</svg>");
  return parts.join("\n");
}
