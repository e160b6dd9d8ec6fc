"""Trajectory ensembles: averaging, error bars, and parameter sweeps.

The asymptotic entanglement entropy is the time average of the
trajectory-averaged series past a transient cutoff t*, and its error bar is
the windowed ensemble spread

    delta_S = sqrt( < mean_r S_r(t)^2 - (mean_r S_r(t))^2 >_t ) / sqrt(N_r),

which coincides with time-averaging the second moment first whenever the
mean series is flat over the window (the converged regime the average is
taken in), and vanishes identically for noiseless dynamics where every
realization coincides.  Aggregation keeps only
running sums of S and S^2 per time bin, so memory stays O(samples) no matter
how many realizations run.  Per-trajectory noise streams are derived from
(master_seed, index), and the reduction is done in index order, which makes
every result bit-identical for any worker count.
"""

from __future__ import annotations

import multiprocessing
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np

from .trajectory import TrajectoryConfig, TrajectoryRecord, run_trajectory

HAMILTONIAN = "hamiltonian"
MEASUREMENT_ONLY = "measurement-only"

# Plateau consistency: third- vs fourth-quarter means must agree within this
# many combined block-standard errors before the window is trusted.
PLATEAU_SIGMA = 3.0
_PLATEAU_BLOCKS = 8


@dataclass(frozen=True)
class EnsembleStats:
    """Aggregated entropy statistics of one ensemble."""

    times: np.ndarray
    mean_entropy_t: np.ndarray
    m2_entropy_t: np.ndarray          # trajectory average of S^2 per time bin
    s_asymptotic: float
    delta_s: float
    n_realizations: int
    t_star: float
    plateau_ok: bool
    config: TrajectoryConfig

    @property
    def sem_t(self) -> np.ndarray:
        """Per-time-bin standard error of the trajectory mean."""
        n = self.n_realizations
        if n < 2:
            return np.zeros_like(self.mean_entropy_t)
        var = np.clip(self.m2_entropy_t - self.mean_entropy_t ** 2, 0.0, None)
        return np.sqrt(var * n / (n - 1)) / np.sqrt(n)


def time_average(series: np.ndarray, times: np.ndarray, t_star: float) -> float:
    """Arithmetic mean of the samples with t >= t_star."""
    series = np.asarray(series, dtype=float)
    times = np.asarray(times, dtype=float)
    if t_star >= times.max():
        raise ValueError(f"t_star={t_star} leaves an empty window "
                         f"(last sample at t={times.max()})")
    mask = times >= t_star
    return float(series[mask].mean())


def plateau_check(series: np.ndarray, times: np.ndarray,
                  t_star: float) -> tuple[bool, float]:
    """Compare the means of the two halves of the averaging window.

    With the default t_star = T/2 this is the third- versus fourth-quarter
    consistency check.  Returns (consistent, z) where z is the difference in
    units of the combined block standard errors; blocks tame the
    autocorrelation of the series.  Windows too short to split into blocks
    count as consistent.
    """
    mask = np.asarray(times, dtype=float) >= t_star
    s = np.asarray(series, dtype=float)[mask]
    quarter = len(s) // 2
    q3, q4 = s[:quarter], s[quarter:]
    if min(len(q3), len(q4)) < 2 * _PLATEAU_BLOCKS:
        return True, 0.0

    def block_sem(x: np.ndarray) -> float:
        blocks = np.array_split(x, _PLATEAU_BLOCKS)
        means = np.array([b.mean() for b in blocks])
        return float(means.std(ddof=1) / np.sqrt(len(means)))

    sem = np.hypot(block_sem(q3), block_sem(q4))
    if sem == 0.0:
        return bool(np.isclose(q3.mean(), q4.mean())), 0.0
    z = abs(q4.mean() - q3.mean()) / sem
    return bool(z <= PLATEAU_SIGMA), float(z)


def _aggregate(series: Iterable[np.ndarray]) -> tuple[np.ndarray, np.ndarray, int]:
    """Per-time-bin mean and population variance via a vectorized Welford
    pass in fixed order; exactly zero variance for identical realizations."""
    mean = None
    m2 = None
    count = 0
    for s in series:
        count += 1
        if mean is None:
            mean = s.astype(float).copy()
            m2 = np.zeros_like(mean)
        else:
            delta = s - mean
            mean += delta / count
            m2 += delta * (s - mean)
    if mean is None:
        raise ValueError("no realizations to aggregate")
    return mean, m2 / count, count


def _window_stats(times: np.ndarray, mean_t: np.ndarray, var_t: np.ndarray,
                  n_r: int, t_star: float) -> tuple[float, float]:
    s_inf = time_average(mean_t, times, t_star)
    if n_r < 2:      # a single realization carries no ensemble spread
        return s_inf, 0.0
    var = time_average(var_t, times, t_star)
    return s_inf, float(np.sqrt(max(var, 0.0)) / np.sqrt(n_r))


def error_bar(records: Sequence[TrajectoryRecord], t_star: float) -> float:
    """Error bar of the asymptotic entropy from explicit trajectory records.

    By convention a single realization has a zero error bar.
    """
    mean_t, var_t, n_r = _aggregate(r.entropy for r in records)
    _, delta = _window_stats(records[0].times, mean_t, var_t, n_r, t_star)
    return delta


def _entropy_worker(cfg: TrajectoryConfig) -> tuple[np.ndarray, np.ndarray]:
    rec = run_trajectory(cfg, keep_expectations=False)
    return rec.times, rec.entropy


def run_ensemble(cfg: TrajectoryConfig, n_r: int, master_seed: int, *,
                 t_star: float | None = None, workers: int = 1) -> EnsembleStats:
    """Average n_r independent trajectories of the given configuration.

    ``t_star = None`` uses half the simulated horizon.  Any trajectory
    failure aborts the whole ensemble; partial averages are never returned.
    """
    if n_r < 1:
        raise ValueError(f"need at least one realization, got {n_r}")
    configs = [replace(cfg, seed=master_seed, trajectory_index=i)
               for i in range(n_r)]
    if workers > 1 and n_r > 1:
        with multiprocessing.Pool(workers) as pool:
            results = pool.map(_entropy_worker, configs, chunksize=1)
    else:
        results = [_entropy_worker(c) for c in configs]

    times = results[0][0]
    mean_t, var_t, _ = _aggregate(entropy for _, entropy in results)

    horizon = cfg.n_steps * cfg.time_unit
    if t_star is None:
        t_star = 0.5 * horizon
    s_inf, delta = _window_stats(times, mean_t, var_t, n_r, t_star)
    ok, _ = plateau_check(mean_t, times, t_star)
    return EnsembleStats(times=times, mean_entropy_t=mean_t,
                         m2_entropy_t=var_t + mean_t ** 2,
                         s_asymptotic=s_inf, delta_s=delta,
                         n_realizations=n_r, t_star=t_star, plateau_ok=ok,
                         config=cfg)


@dataclass(frozen=True)
class GridPoint:
    """One sweep coordinate: size, exponent, coupling, dynamics mode."""

    n: int
    alpha: float
    gamma: float
    mode: str = HAMILTONIAN

    def __post_init__(self):
        if self.mode not in (HAMILTONIAN, MEASUREMENT_ONLY):
            raise ValueError(f"unknown mode {self.mode!r}")

    @property
    def tag(self) -> str:
        g = "inf" if self.mode == MEASUREMENT_ONLY else f"{self.gamma:g}"
        m = "MO" if self.mode == MEASUREMENT_ONLY else "H"
        return f"N{self.n}_a{self.alpha:g}_g{g}_{m}"


def point_config(point: GridPoint, base: TrajectoryConfig, *,
                 mo_gamma_dt: float = 5e-4) -> TrajectoryConfig:
    """Specialize the base configuration to one grid point.

    Measurement-only points run with gamma = 1 and dt = mo_gamma_dt, since
    only the product gamma * dt enters that dynamics; recorded times are
    then in units of gamma * t.
    """
    if point.mode == MEASUREMENT_ONLY:
        return replace(base, n_sites=point.n, alpha=point.alpha, gamma=1.0,
                       dt=mo_gamma_dt, measurement_only=True, subsystem_l=None)
    return replace(base, n_sites=point.n, alpha=point.alpha,
                   gamma=point.gamma, measurement_only=False, subsystem_l=None)


def _point_master(master_seed: int, index: int) -> int:
    ss = np.random.SeedSequence(master_seed, spawn_key=(77, index))
    return int(ss.generate_state(1, np.uint64)[0])


def sweep(grid: Iterable[GridPoint], base_cfg: TrajectoryConfig, n_r: int,
          master_seed: int, *, t_star: float | None = None, workers: int = 1,
          mo_gamma_dt: float = 5e-4) -> list[tuple[GridPoint, EnsembleStats]]:
    """Run one ensemble per grid point; failures carry their coordinates."""
    grid = list(grid)
    if not grid:
        raise ValueError("empty sweep grid")
    out = []
    for index, point in enumerate(grid):
        cfg = point_config(point, base_cfg, mo_gamma_dt=mo_gamma_dt)
        try:
            stats = run_ensemble(cfg, n_r, _point_master(master_seed, index),
                                 t_star=t_star, workers=workers)
        except Exception as err:
            raise RuntimeError(f"sweep point {point.tag} failed: {err}") from err
        out.append((point, stats))
    return out


def crossing_estimate(alphas: Sequence[float], r_small: Sequence[float],
                      r_large: Sequence[float]) -> float | None:
    """Crossing of two size-curves versus alpha, by linear interpolation.

    The curves are log-normalized entropies of a smaller and a larger size;
    the larger-size curve starts above (faster-than-log growth) and ends
    below (slower-than-log).  Returns None when no sign change exists.
    """
    alphas = np.asarray(alphas, dtype=float)
    diff = np.asarray(r_large, dtype=float) - np.asarray(r_small, dtype=float)
    order = np.argsort(alphas)
    alphas, diff = alphas[order], diff[order]
    for k in range(len(diff) - 1):
        if diff[k] >= 0.0 > diff[k + 1]:
            frac = diff[k] / (diff[k] - diff[k + 1])
            return float(alphas[k] + frac * (alphas[k + 1] - alphas[k]))
    return None
