"""Expectation distribution of the monitored operators and its shape change.

A single long trajectory produces one sample per site per recorded step;
binned over a symmetric range [-B, B] with B the coupling row-sum bound,
which no expectation can exceed.  As the decay exponent grows the density
changes from a single central peak to two symmetric peaks; the classifier
smooths the density with a short moving average and demands that competing
maxima rise above their connecting saddle by a fixed fraction of the peak
height, since raw histogram argmax flips between noise spikes.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.signal import find_peaks

from .lattice import build_couplings
from .trajectory import (TrajectoryConfig, expectations_ell, initial_state,
                         step)

DEFAULT_BINS = 201
SMOOTH_WINDOW = 5
PROMINENCE_FRACTION = 0.02

UNIMODAL = "unimodal"
BIMODAL = "bimodal"


@dataclass
class ExpectationHistogram:
    """Streaming histogram over [-B, B] with mergeable moment accumulators."""

    bin_edges: np.ndarray
    counts: np.ndarray
    total: int
    b_range: float
    n_bins: int
    _mean: float = 0.0
    _m2: float = 0.0       # sum of squared deviations from the running mean

    @classmethod
    def empty(cls, b_range: float, n_bins: int = DEFAULT_BINS) -> "ExpectationHistogram":
        if b_range <= 0:
            raise ValueError(f"histogram range must be positive, got {b_range}")
        if n_bins < 3:
            raise ValueError(f"need at least 3 bins, got {n_bins}")
        edges = np.linspace(-b_range, b_range, n_bins + 1)
        return cls(bin_edges=edges, counts=np.zeros(n_bins, dtype=np.int64),
                   total=0, b_range=float(b_range), n_bins=n_bins)

    @property
    def bin_centers(self) -> np.ndarray:
        return 0.5 * (self.bin_edges[:-1] + self.bin_edges[1:])

    @property
    def bin_width(self) -> float:
        return 2.0 * self.b_range / self.n_bins

    @property
    def moments(self) -> tuple[float, float]:
        """(mean, population variance) of all accumulated samples."""
        if self.total == 0:
            return 0.0, 0.0
        return self._mean, self._m2 / self.total

    def density(self) -> np.ndarray:
        if self.total == 0:
            raise ValueError("empty histogram has no density")
        return self.counts / (self.total * self.bin_width)


def accumulate(hist: ExpectationHistogram,
               expectations: np.ndarray) -> ExpectationHistogram:
    """Add one batch of samples in place; single pass, numerically stable."""
    x = np.asarray(expectations, dtype=float).ravel()
    if x.size == 0:
        return hist
    b = hist.b_range
    if np.abs(x).max() > b * (1.0 + 1e-12):
        raise ValueError(
            f"sample outside [-{b}, {b}]: the coupling norm bound was violated "
            f"upstream (max |sample| = {np.abs(x).max()})")
    idx = np.floor((x + b) / (2.0 * b) * hist.n_bins).astype(np.int64)
    np.clip(idx, 0, hist.n_bins - 1, out=idx)
    np.add.at(hist.counts, idx, 1)
    # Chan update, merging the batch moments into the running ones
    m = x.size
    batch_mean = float(x.mean())
    batch_m2 = float(((x - batch_mean) ** 2).sum())
    if hist.total == 0:
        hist._mean, hist._m2 = batch_mean, batch_m2
    else:
        delta = batch_mean - hist._mean
        tot = hist.total + m
        hist._mean += delta * m / tot
        hist._m2 += batch_m2 + delta * delta * hist.total * m / tot
    hist.total += m
    return hist


def merge(a: ExpectationHistogram,
          b: ExpectationHistogram) -> ExpectationHistogram:
    """Combine two partial histograms over the same bins (associative)."""
    if a.n_bins != b.n_bins or a.b_range != b.b_range:
        raise ValueError("histograms have different binning")
    if b.total == 0:
        return replace(a, counts=a.counts.copy())
    if a.total == 0:
        return replace(b, counts=b.counts.copy())
    delta = b._mean - a._mean
    tot = a.total + b.total
    return ExpectationHistogram(
        bin_edges=a.bin_edges, counts=a.counts + b.counts, total=tot,
        b_range=a.b_range, n_bins=a.n_bins,
        _mean=a._mean + delta * b.total / tot,
        _m2=a._m2 + b._m2 + delta * delta * a.total * b.total / tot)


def smoothed_density(hist: ExpectationHistogram,
                     window: int = SMOOTH_WINDOW) -> np.ndarray:
    kernel = np.full(window, 1.0 / window)
    return np.convolve(hist.density(), kernel, mode="same")


@dataclass(frozen=True)
class PeakDiagnostics:
    abs_peak_position: float
    peak_value: float
    variance: float
    modality: str
    n_peaks: int


def peak_diagnostics(hist: ExpectationHistogram, *,
                     smooth_window: int = SMOOTH_WINDOW,
                     prominence_fraction: float = PROMINENCE_FRACTION,
                     ) -> PeakDiagnostics:
    """Locate the density maximum and classify the distribution shape.

    The position is the |bin center| of the smoothed density's global
    maximum; the reported height is the raw normalized density maximum.
    Bimodal means at least two smoothed local maxima whose prominence over
    the connecting saddle exceeds ``prominence_fraction`` of the peak height.
    """
    if hist.total == 0:
        raise ValueError("empty histogram")
    smooth = smoothed_density(hist, smooth_window)
    # pad so maxima sitting on the range boundary still count as peaks
    padded = np.concatenate(([-1.0], smooth, [-1.0]))
    peaks, _ = find_peaks(padded, prominence=prominence_fraction * smooth.max())
    centers = hist.bin_centers
    _, variance = hist.moments
    return PeakDiagnostics(
        abs_peak_position=float(abs(centers[int(np.argmax(smooth))])),
        peak_value=float(hist.density().max()),
        variance=variance,
        modality=BIMODAL if len(peaks) >= 2 else UNIMODAL,
        n_peaks=int(len(peaks)))


def accumulate_trajectory(cfg: TrajectoryConfig, *, t_star: float | None = None,
                          n_bins: int = DEFAULT_BINS,
                          hist: ExpectationHistogram | None = None,
                          ) -> ExpectationHistogram:
    """Stream one trajectory's per-site expectations into a histogram.

    Samples every step after the burn-in t* (default: half the horizon), over
    all sites, without materializing the full time series.  An existing
    histogram may be passed to pool several trajectories.
    """
    c = build_couplings(cfg.n_sites, cfg.alpha)
    if hist is None:
        hist = ExpectationHistogram.empty(c.norm_bound, n_bins)
    horizon = cfg.n_steps * cfg.time_unit
    if t_star is None:
        t_star = 0.5 * horizon

    from .generators import build_propagator, hamiltonian_generator
    from .trajectory import make_rng

    state = initial_state(cfg)
    unitary = None
    if not cfg.measurement_only:
        gen = hamiltonian_generator(cfg.n_sites, cfg.j_coupling, cfg.h_final)
        unitary = build_propagator(gen, cfg.dt)
    rng = make_rng(cfg.seed, cfg.trajectory_index)
    for k in range(cfg.n_steps):
        step(state, unitary, c, cfg.gamma, cfg.dt, rng,
             step_index=k, seed=cfg.seed_label)
        if (k + 1) * cfg.time_unit >= t_star:
            accumulate(hist, expectations_ell(state, c))
    return hist
