/**
 * Minimal deterministic SVG chart assembly: linear/log scales, nice ticks,
 * polylines with error bars, a legend, and a provenance footer.  Pure string
 * building; identical inputs give identical bytes.
 */

import { XY } from "./data.js";

export type AxisScale = "linear" | "log";

export interface ChartSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  xScale?: AxisScale;
  yScale?: AxisScale;
  series: XY[];
  footer?: string;
  width?: number;
  height?: number;
  markers?: boolean;
}

const MARGIN = { top: 34, right: 16, bottom: 46, left: 64 };

/** Two-point color gradient from light to dark, indexed by curve rank. */
export function gradientColor(rank: number, count: number): string {
  const t = count <= 1 ? 1.0 : rank / (count - 1);
  const from = [140, 190, 235];
  const to = [8, 48, 107];
  const rgb = from.map((f, i) => Math.round(f + (to[i] - f) * t));
  return `rgb(${rgb[0]},${rgb[1]},${rgb[2]})`;
}

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function niceTicks(min: number, max: number, count = 6): number[] {
  if (!(max > min)) return [min];
  const rough = (max - min) / count;
  const mag = Math.pow(10, Math.floor(Math.log10(rough)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => s >= rough) ?? rough;
  const ticks: number[] = [];
  for (let v = Math.ceil(min / step) * step; v <= max + 1e-9 * step; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return ticks;
}

function logTicks(min: number, max: number): number[] {
  const ticks: number[] = [];
  for (let p = Math.floor(Math.log10(min)); p <= Math.ceil(Math.log10(max)); p++) {
    const v = Math.pow(10, p);
    if (v >= min / 1.0001 && v <= max * 1.0001) ticks.push(v);
  }
  return ticks.length >= 2 ? ticks : [min, max];
}

function fmtTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(0);
  return String(Number(v.toPrecision(6)));
}

interface Scale {
  (v: number): number;
}

function makeScale(domain: [number, number], range: [number, number], kind: AxisScale): Scale {
  const [d0, d1] = kind === "log" ? [Math.log10(domain[0]), Math.log10(domain[1])] : domain;
  const span = d1 - d0 || 1;
  return (v: number) => {
    const t = kind === "log" ? Math.log10(v) : v;
    return range[0] + ((t - d0) / span) * (range[1] - range[0]);
  };
}

function extent(series: XY[], pick: (s: XY) => number[], scale: AxisScale): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const s of series) {
    for (const v of pick(s)) {
      if (scale === "log" && v <= 0) continue;
      if (Number.isFinite(v)) {
        lo = Math.min(lo, v);
        hi = Math.max(hi, v);
      }
    }
  }
  if (!Number.isFinite(lo)) throw new Error("no finite data to plot");
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  return [lo, hi];
}

function round2(x: number): string {
  return (Math.round(x * 100) / 100).toString();
}

export function renderChart(spec: ChartSpec): string {
  const width = spec.width ?? 640;
  const height = spec.height ?? 420;
  const xScaleKind = spec.xScale ?? "linear";
  const yScaleKind = spec.yScale ?? "linear";
  const inner = {
    x0: MARGIN.left,
    x1: width - MARGIN.right,
    y0: height - MARGIN.bottom,
    y1: MARGIN.top,
  };

  let [xLo, xHi] = extent(spec.series, (s) => s.x, xScaleKind);
  let [yLo, yHi] = extent(
    spec.series,
    (s) => (s.yerr ? s.y.flatMap((v, i) => [v - s.yerr![i], v + s.yerr![i]]) : s.y),
    yScaleKind,
  );
  if (yScaleKind === "linear") {
    const pad = 0.05 * (yHi - yLo);
    yLo = Math.min(yLo, 0) === 0 && yLo >= 0 ? 0 : yLo - pad;
    yHi += pad;
  }
  const sx = makeScale([xLo, xHi], [inner.x0, inner.x1], xScaleKind);
  const sy = makeScale([yLo, yHi], [inner.y0, inner.y1], yScaleKind);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}" font-family="Helvetica,Arial,sans-serif">`,
  );
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  parts.push(
    `<text x="${width / 2}" y="20" text-anchor="middle" font-size="14" font-weight="bold">${esc(spec.title)}</text>`,
  );

  const xTicks = xScaleKind === "log" ? logTicks(xLo, xHi) : niceTicks(xLo, xHi);
  const yTicks = yScaleKind === "log" ? logTicks(yLo, yHi) : niceTicks(yLo, yHi);
  for (const t of xTicks) {
    const px = sx(t);
    parts.push(
      `<line x1="${round2(px)}" y1="${inner.y0}" x2="${round2(px)}" y2="${inner.y1}" stroke="#eee"/>`,
      `<text x="${round2(px)}" y="${inner.y0 + 18}" text-anchor="middle" font-size="11">${fmtTick(t)}</text>`,
    );
  }
  for (const t of yTicks) {
    const py = sy(t);
    parts.push(
      `<line x1="${inner.x0}" y1="${round2(py)}" x2="${inner.x1}" y2="${round2(py)}" stroke="#eee"/>`,
      `<text x="${inner.x0 - 6}" y="${round2(py + 4)}" text-anchor="end" font-size="11">${fmtTick(t)}</text>`,
    );
  }
  parts.push(
    `<rect x="${inner.x0}" y="${inner.y1}" width="${inner.x1 - inner.x0}" height="${inner.y0 - inner.y1}" fill="none" stroke="#333"/>`,
    `<text x="${(inner.x0 + inner.x1) / 2}" y="${height - 10}" text-anchor="middle" font-size="12">${esc(spec.xLabel)}</text>`,
    `<text x="16" y="${(inner.y0 + inner.y1) / 2}" text-anchor="middle" font-size="12" transform="rotate(-90 16 ${(inner.y0 + inner.y1) / 2})">${esc(spec.yLabel)}</text>`,
  );

  const count = spec.series.length;
  spec.series.forEach((s) => {
    const color = gradientColor(s.rank, count);
    const pts: string[] = [];
    for (let i = 0; i < s.x.length; i++) {
      if (yScaleKind === "log" && s.y[i] <= 0) continue;
      if (xScaleKind === "log" && s.x[i] <= 0) continue;
      pts.push(`${round2(sx(s.x[i]))},${round2(sy(s.y[i]))}`);
    }
    parts.push(
      `<polyline fill="none" stroke="${color}" stroke-width="1.6" points="${pts.join(" ")}"/>`,
    );
    if (s.yerr) {
      for (let i = 0; i < s.x.length; i++) {
        const lo = s.y[i] - s.yerr[i];
        const hi = s.y[i] + s.yerr[i];
        if (yScaleKind === "log" && lo <= 0) continue;
        const px = round2(sx(s.x[i]));
        parts.push(
          `<line x1="${px}" y1="${round2(sy(lo))}" x2="${px}" y2="${round2(sy(hi))}" stroke="${color}" stroke-width="1"/>`,
        );
      }
    }
    if (spec.markers ?? true) {
      for (let i = 0; i < s.x.length; i++) {
        if (yScaleKind === "log" && s.y[i] <= 0) continue;
        parts.push(
          `<circle cx="${round2(sx(s.x[i]))}" cy="${round2(sy(s.y[i]))}" r="2.4" fill="${color}"/>`,
        );
      }
    }
  });

  spec.series.forEach((s, i) => {
    const color = gradientColor(s.rank, count);
    const lx = inner.x1 - 110;
    const ly = inner.y1 + 14 + 14 * i;
    parts.push(
      `<line x1="${lx}" y1="${ly - 4}" x2="${lx + 18}" y2="${ly - 4}" stroke="${color}" stroke-width="2"/>`,
      `<text x="${lx + 24}" y="${ly}" font-size="11">${esc(s.label)}</text>`,
    );
  });

  if (spec.footer) {
    parts.push(
      `<text x="${width - 8}" y="${height - 4}" text-anchor="end" font-size="8" fill="#999">${esc(spec.footer)}</text>`,
    );
  }
  parts.push("</svg>");
  return parts.join("\n");
}
