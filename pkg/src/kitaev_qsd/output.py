"""Deterministic CSV and manifest writers.

All floats are written with 17 significant digits so reruns with the same
seed diff byte-for-byte; every run directory carries exactly one manifest
describing the resolved configuration that produced it.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import asdict
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .ensemble import MEASUREMENT_ONLY, EnsembleStats, GridPoint
from .stats import ExpectationHistogram, PeakDiagnostics
from .trajectory import TrajectoryRecord

MANIFEST_NAME = "manifest.json"


def fmt(x: float) -> str:
    return f"{float(x):.17g}"


def ensure_out_dir(out_dir: str | Path, force: bool) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest = out / MANIFEST_NAME
    if manifest.exists() and not force:
        raise FileExistsError(
            f"{manifest} already exists; pass --force to overwrite the run")
    return out


def point_gamma(point: GridPoint) -> float:
    """Reported coupling: measurement-only rows carry infinity."""
    return math.inf if point.mode == MEASUREMENT_ONLY else point.gamma


def write_ensemble_csv(path: Path,
                       rows: Sequence[tuple[GridPoint, EnsembleStats]],
                       master_seed: int) -> None:
    lines = ["N,alpha,gamma,mode,l,S_mean,S_err,t_star,N_r,seed"]
    for point, stats in rows:
        lines.append(",".join([
            str(point.n), fmt(point.alpha), fmt(point_gamma(point)),
            point.mode, str(stats.config.l), fmt(stats.s_asymptotic),
            fmt(stats.delta_s), fmt(stats.t_star),
            str(stats.n_realizations), str(master_seed)]))
    path.write_text("\n".join(lines) + "\n")


def write_series_csv(path: Path, stats: EnsembleStats) -> None:
    lines = ["time,S_mean,S_sem"]
    for t, s, sem in zip(stats.times, stats.mean_entropy_t, stats.sem_t):
        lines.append(f"{fmt(t)},{fmt(s)},{fmt(sem)}")
    path.write_text("\n".join(lines) + "\n")


def write_hist_csv(path: Path, hist: ExpectationHistogram) -> None:
    lines = ["bin_center,density"]
    for center, dens in zip(hist.bin_centers, hist.density()):
        lines.append(f"{fmt(center)},{fmt(dens)}")
    path.write_text("\n".join(lines) + "\n")


def write_bifurcation_csv(path: Path,
                          rows: Sequence[tuple[GridPoint, PeakDiagnostics]]) -> None:
    lines = ["alpha,gamma,N,abs_peak_pos,peak_value,variance,modality"]
    for point, diag in rows:
        lines.append(",".join([
            fmt(point.alpha), fmt(point_gamma(point)), str(point.n),
            fmt(diag.abs_peak_position), fmt(diag.peak_value),
            fmt(diag.variance), diag.modality]))
    path.write_text("\n".join(lines) + "\n")


def write_trajectory_csv(path: Path, record: TrajectoryRecord) -> None:
    if record.entropy is None or record.expectations is None:
        raise ValueError("trajectory record is missing entropy or expectations")
    n = record.expectations.shape[1]
    header = "time,entropy," + ",".join(f"l{i + 1}" for i in range(n))
    lines = [header]
    for t, s, row in zip(record.times, record.entropy, record.expectations):
        lines.append(",".join([fmt(t), fmt(s)] + [fmt(x) for x in row]))
    path.write_text("\n".join(lines) + "\n")


def write_manifest(out: Path, *, command: str, config: dict, grid: list,
                   master_seed: int, outputs: list[str],
                   wall_time_s: float, extra: dict | None = None) -> Path:
    manifest = {
        "command": command,
        "version": __version__,
        "master_seed": master_seed,
        "config": config,
        "grid": grid,
        "outputs": sorted(outputs),
        "wall_time_s": wall_time_s,
        "written_at": time.strftime("%Y-%m-%dT%H:%M:%S", time.gmtime()),
    }
    if extra:
        manifest.update(extra)
    path = out / MANIFEST_NAME
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True,
                               default=_json_default) + "\n")
    return path


def _json_default(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if hasattr(obj, "__dataclass_fields__"):
        return asdict(obj)
    if isinstance(obj, float) and math.isinf(obj):
        return "inf"
    raise TypeError(f"cannot serialize {type(obj)}")
