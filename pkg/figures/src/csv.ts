/**
 * Strict CSV ingestion for the simulator's output schemas.
 *
 * Every reader validates the header exactly and parses numeric columns with
 * full precision; any mismatch throws a SchemaError rather than guessing.
 */

export class SchemaError extends Error {}

export interface EnsembleRow {
  N: number;
  alpha: number;
  gamma: number; // Infinity for measurement-only rows
  mode: string;
  l: number;
  S_mean: number;
  S_err: number;
  t_star: number;
  N_r: number;
  seed: number;
}

export interface SeriesRow {
  time: number;
  S_mean: number;
  S_sem: number;
}

export interface HistRow {
  bin_center: number;
  density: number;
}

export interface BifurcationRow {
  alpha: number;
  gamma: number;
  N: number;
  abs_peak_pos: number;
  peak_value: number;
  variance: number;
  modality: string;
}

function splitRows(text: string, path: string): string[][] {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new SchemaError(`${path}: empty CSV`);
  }
  return lines.map((l) => l.split(","));
}

function checkHeader(got: string[], want: string[], path: string): void {
  if (got.length !== want.length || want.some((w, i) => got[i] !== w)) {
    throw new SchemaError(
      `${path}: header mismatch; expected "${want.join(",")}" got "${got.join(",")}"`,
    );
  }
}

function num(field: string, path: string): number {
  if (field === "inf") return Infinity;
  const v = Number(field);
  if (!Number.isFinite(v)) {
    throw new SchemaError(`${path}: non-numeric field "${field}"`);
  }
  return v;
}

export function parseEnsembleCsv(text: string, path = "ensemble.csv"): EnsembleRow[] {
  const rows = splitRows(text, path);
  checkHeader(rows[0], ["N", "alpha", "gamma", "mode", "l", "S_mean", "S_err", "t_star", "N_r", "seed"], path);
  return rows.slice(1).map((r) => ({
    N: num(r[0], path),
    alpha: num(r[1], path),
    gamma: num(r[2], path),
    mode: r[3],
    l: num(r[4], path),
    S_mean: num(r[5], path),
    S_err: num(r[6], path),
    t_star: num(r[7], path),
    N_r: num(r[8], path),
    seed: num(r[9], path),
  }));
}

export function parseSeriesCsv(text: string, path = "series.csv"): SeriesRow[] {
  const rows = splitRows(text, path);
  checkHeader(rows[0], ["time", "S_mean", "S_sem"], path);
  return rows.slice(1).map((r) => ({
    time: num(r[0], path),
    S_mean: num(r[1], path),
    S_sem: num(r[2], path),
  }));
}

export function parseHistCsv(text: string, path = "hist.csv"): HistRow[] {
  const rows = splitRows(text, path);
  checkHeader(rows[0], ["bin_center", "density"], path);
  return rows.slice(1).map((r) => ({
    bin_center: num(r[0], path),
    density: num(r[1], path),
  }));
}

export function parseBifurcationCsv(text: string, path = "bifurcation.csv"): BifurcationRow[] {
  const rows = splitRows(text, path);
  checkHeader(rows[0], ["alpha", "gamma", "N", "abs_peak_pos", "peak_value", "variance", "modality"], path);
  return rows.slice(1).map((r) => ({
    alpha: num(r[0], path),
    gamma: num(r[1], path),
    N: num(r[2], path),
    abs_peak_pos: num(r[3], path),
    peak_value: num(r[4], path),
    variance: num(r[5], path),
    modality: r[6],
  }));
}
