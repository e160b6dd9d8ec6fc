/**
 * Figure data extraction: turns parsed CSV rows into plottable series.
 *
 * No physics is computed here; every y value is copied (or divided by the
 * explicit N or ln N normalization the figure kind calls for) straight from
 * the CSV columns.
 */

import { BifurcationRow, EnsembleRow, SchemaError } from "./csv.js";

export interface XY {
  label: string;
  rank: number; // position in the size/exponent gradient, 0-based
  x: number[];
  y: number[];
  yerr?: number[];
}

const byNumber = (a: number, b: number) => a - b;

function uniqueSorted(values: number[]): number[] {
  return [...new Set(values)].sort(byNumber);
}

/** S versus N, one curve per alpha (size-scaling panel). */
export function entropyVsSize(rows: EnsembleRow[]): XY[] {
  if (rows.length === 0) throw new SchemaError("no ensemble rows");
  const alphas = uniqueSorted(rows.map((r) => r.alpha));
  return alphas.map((alpha, idx) => {
    const pts = rows.filter((r) => r.alpha === alpha).sort((a, b) => a.N - b.N);
    return {
      label: `alpha=${alpha}`,
      rank: idx,
      x: pts.map((p) => p.N),
      y: pts.map((p) => p.S_mean),
      yerr: pts.map((p) => p.S_err),
    };
  });
}

/** S/N versus alpha, one curve per size (volume-law collapse panel). */
export function entropyPerSite(rows: EnsembleRow[]): XY[] {
  return perSizeCurves(rows, (r) => r.S_mean / r.N, (r) => r.S_err / r.N);
}

/** S/ln N versus alpha, one curve per size (crossing panel). */
export function entropyLogNormalized(rows: EnsembleRow[]): XY[] {
  return perSizeCurves(
    rows,
    (r) => r.S_mean / Math.log(r.N),
    (r) => r.S_err / Math.log(r.N),
  );
}

function perSizeCurves(
  rows: EnsembleRow[],
  value: (r: EnsembleRow) => number,
  err: (r: EnsembleRow) => number,
): XY[] {
  if (rows.length === 0) throw new SchemaError("no ensemble rows");
  const sizes = uniqueSorted(rows.map((r) => r.N));
  return sizes.map((n, idx) => {
    const pts = rows.filter((r) => r.N === n).sort((a, b) => a.alpha - b.alpha);
    return {
      label: `N=${n}`,
      rank: idx,
      x: pts.map((p) => p.alpha),
      y: pts.map(value),
      yerr: pts.map(err),
    };
  });
}

/** Histogram overlays; one curve per input file, ranked by its size label. */
export function histogramOverlays(
  inputs: { label: string; sizeOrder: number; rows: { bin_center: number; density: number }[] }[],
): XY[] {
  if (inputs.length === 0) throw new SchemaError("no histogram files");
  return inputs
    .slice()
    .sort((a, b) => a.sizeOrder - b.sizeOrder)
    .map((h, idx) => ({
      label: h.label,
      rank: idx,
      x: h.rows.map((r) => r.bin_center),
      y: h.rows.map((r) => r.density),
    }));
}

export type BifurcationQuantity = "abs_peak_pos" | "variance" | "peak_value";

/** One bifurcation diagnostic versus alpha, one curve per size. */
export function bifurcationCurves(
  rows: BifurcationRow[],
  quantity: BifurcationQuantity,
): XY[] {
  if (rows.length === 0) throw new SchemaError("no bifurcation rows");
  const sizes = uniqueSorted(rows.map((r) => r.N));
  return sizes.map((n, idx) => {
    const pts = rows.filter((r) => r.N === n).sort((a, b) => a.alpha - b.alpha);
    return {
      label: `N=${n}`,
      rank: idx,
      x: pts.map((p) => p.alpha),
      y: pts.map((p) => p[quantity]),
    };
  });
}

/** S(t) convergence curves, one per size, from per-point series files. */
export function entropyVsTime(
  inputs: { label: string; sizeOrder: number; rows: { time: number; S_mean: number }[] }[],
): XY[] {
  if (inputs.length === 0) throw new SchemaError("no series files");
  return inputs
    .slice()
    .sort((a, b) => a.sizeOrder - b.sizeOrder)
    .map((s, idx) => ({
      label: s.label,
      rank: idx,
      x: s.rows.map((r) => r.time),
      y: s.rows.map((r) => r.S_mean),
    }));
}
