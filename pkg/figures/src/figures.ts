/**
 * The six figure kinds, each a pure function of CSV inputs in one run
 * directory.  File discovery follows the simulator's naming scheme
 * (series_<tag>.csv, hist_<tag>.csv); the run manifest's hash is embedded in
 * every figure footer for provenance.
 */

import { readFileSync, readdirSync } from "fs";
import { join } from "path";

import {
  parseBifurcationCsv,
  parseEnsembleCsv,
  parseHistCsv,
  parseSeriesCsv,
  SchemaError,
} from "./csv.js";
import {
  bifurcationCurves,
  entropyLogNormalized,
  entropyPerSite,
  entropyVsSize,
  entropyVsTime,
  histogramOverlays,
} from "./data.js";
import { renderChart } from "./svg.js";

export const FIGURE_KINDS = [
  "entropy-vs-size",
  "entropy-per-site",
  "entropy-log",
  "histograms",
  "bifurcation",
  "entropy-vs-time",
] as const;

export type FigureKind = (typeof FIGURE_KINDS)[number];

export interface RenderedFigure {
  name: string; // output file name
  svg: string;
}

function readEnsemble(inDir: string) {
  return parseEnsembleCsv(readFileSync(join(inDir, "ensemble.csv"), "utf-8"), "ensemble.csv");
}

/** tag format: N<size>_a<alpha>_g<gamma>_<mode>; returns the size. */
export function sizeFromTag(tag: string): number {
  const m = tag.match(/^N(\d+)_/);
  if (!m) throw new SchemaError(`cannot read system size from tag "${tag}"`);
  return Number(m[1]);
}

function taggedFiles(inDir: string, prefix: string): { tag: string; path: string }[] {
  return readdirSync(inDir)
    .filter((f) => f.startsWith(prefix) && f.endsWith(".csv"))
    .sort()
    .map((f) => ({ tag: f.slice(prefix.length, -4), path: join(inDir, f) }));
}

export function renderFigure(kind: FigureKind, inDir: string, footer: string): RenderedFigure[] {
  switch (kind) {
    case "entropy-vs-size": {
      const series = entropyVsSize(readEnsemble(inDir));
      return [{
        name: "entropy_vs_size.svg",
        svg: renderChart({
          title: "Asymptotic half-chain entropy vs system size",
          xLabel: "N",
          yLabel: "S(N/2)",
          series,
          footer,
        }),
      }];
    }
    case "entropy-per-site": {
      const series = entropyPerSite(readEnsemble(inDir));
      return [{
        name: "entropy_per_site.svg",
        svg: renderChart({
          title: "Entropy density vs decay exponent",
          xLabel: "alpha",
          yLabel: "S(N/2) / N",
          series,
          footer,
        }),
      }];
    }
    case "entropy-log": {
      const series = entropyLogNormalized(readEnsemble(inDir));
      return [{
        name: "entropy_log_normalized.svg",
        svg: renderChart({
          title: "Log-normalized entropy vs decay exponent",
          xLabel: "alpha",
          yLabel: "S(N/2) / ln N",
          series,
          footer,
        }),
      }];
    }
    case "histograms": {
      const files = taggedFiles(inDir, "hist_");
      if (files.length === 0) throw new SchemaError("no hist_*.csv files found");
      // one overlay figure per (alpha, gamma) group, curves ranked by size
      const groups = new Map<string, { label: string; sizeOrder: number; rows: ReturnType<typeof parseHistCsv> }[]>();
      for (const f of files) {
        const group = f.tag.replace(/^N\d+_/, "");
        const entry = {
          label: `N=${sizeFromTag(f.tag)}`,
          sizeOrder: sizeFromTag(f.tag),
          rows: parseHistCsv(readFileSync(f.path, "utf-8"), f.path),
        };
        groups.set(group, [...(groups.get(group) ?? []), entry]);
      }
      return [...groups.entries()].sort().map(([group, inputs]) => ({
        name: `histogram_${group}.svg`,
        svg: renderChart({
          title: `Expectation distribution (${group.replace(/_/g, " ")})`,
          xLabel: "expectation of monitored operator",
          yLabel: "P",
          series: histogramOverlays(inputs),
          footer,
          markers: false,
        }),
      }));
    }
    case "bifurcation": {
      const rows = parseBifurcationCsv(readFileSync(join(inDir, "bifurcation.csv"), "utf-8"), "bifurcation.csv");
      return [
        {
          name: "bifurcation_peak_position.svg",
          svg: renderChart({
            title: "Position of the distribution maximum",
            xLabel: "alpha",
            yLabel: "|peak position|",
            series: bifurcationCurves(rows, "abs_peak_pos"),
            footer,
          }),
        },
        {
          name: "bifurcation_variance.svg",
          svg: renderChart({
            title: "Variance of the distribution",
            xLabel: "alpha",
            yLabel: "variance",
            yScale: "log",
            series: bifurcationCurves(rows, "variance"),
            footer,
          }),
        },
        {
          name: "bifurcation_peak_value.svg",
          svg: renderChart({
            title: "Absolute maximum of the distribution",
            xLabel: "alpha",
            yLabel: "max P",
            yScale: "log",
            series: bifurcationCurves(rows, "peak_value"),
            footer,
          }),
        },
      ];
    }
    case "entropy-vs-time": {
      const files = taggedFiles(inDir, "series_");
      if (files.length === 0) throw new SchemaError("no series_*.csv files found");
      const inputs = files.map((f) => ({
        label: `N=${sizeFromTag(f.tag)}`,
        sizeOrder: sizeFromTag(f.tag),
        rows: parseSeriesCsv(readFileSync(f.path, "utf-8"), f.path),
      }));
      return [{
        name: "entropy_vs_time.svg",
        svg: renderChart({
          title: "Entropy convergence in time",
          xLabel: "t",
          yLabel: "mean S(N/2)",
          series: entropyVsTime(inputs),
          footer,
          markers: false,
        }),
      }];
    }
  }
}
