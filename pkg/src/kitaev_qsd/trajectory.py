"""One quantum trajectory: alternating unitary and stochastic measurement steps.

Each step applies the cached real-time propagator, evaluates the measurement
expectations on the post-unitary state, draws Wiener increments, and applies
the imaginary-time measurement factor exp(sum_i A_i ell_i) with

    A_i = sqrt(gamma) dW_i + 2 gamma <ell_i> dt,    dW_i ~ N(0, dt),

followed by a QR renormalization.  The expectation entering A_i is taken
after the unitary sub-step, i.e. on the state the measurement acts on; both
orderings converge to the same continuum limit, and this choice is locked by
the oracle cross-validation tests.

Noise streams are derived from (seed, trajectory_index) through a
counter-based Philox generator, so ensembles reproduce bit-for-bit no matter
how trajectories are scheduled across workers.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .errors import NumericalInstabilityError
from .gaussian import (GaussianState, block_entropy, correlations,
                       ground_state, renormalize)
from .generators import (Propagator, apply_propagator, build_propagator,
                         hamiltonian_generator, measurement_generator)
from .lattice import CouplingMatrix, build_couplings

# Unitary-only evolution preserves the isometry analytically; re-orthonormalize
# this often anyway to keep roundoff drift bounded on long runs.
UNITARY_QR_STRIDE = 100

DEFAULT_DT = 5e-3
DEFAULT_MEASUREMENT_ONLY_GAMMA_DT = 5e-4


@dataclass(frozen=True)
class TrajectoryConfig:
    """Full specification of one stochastic trajectory.

    ``measurement_only`` switches off the Hamiltonian (J = h = 0 during the
    evolution) while keeping the same initial state as the quench runs; in
    that mode recorded times are in units of gamma * t and the product
    gamma * dt is the only physical step parameter.
    """

    n_sites: int
    n_steps: int
    gamma: float = 0.1
    alpha: float = 0.0
    j_coupling: float = 1.0
    h_initial: float = 100.0
    h_final: float = 0.5
    dt: float = DEFAULT_DT
    record_stride: int = 10
    seed: int = 0
    trajectory_index: int = 0
    measurement_only: bool = False
    subsystem_l: int | None = None

    def __post_init__(self):
        if self.n_sites < 2:
            raise ValueError(f"need at least 2 sites, got {self.n_sites}")
        if self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.n_steps < 0:
            raise ValueError(f"n_steps must be nonnegative, got {self.n_steps}")
        if self.gamma < 0:
            raise ValueError(f"gamma must be nonnegative, got {self.gamma}")
        if self.alpha < 0:
            raise ValueError(f"alpha must be nonnegative, got {self.alpha}")
        if self.record_stride < 1:
            raise ValueError(f"record_stride must be >= 1, got {self.record_stride}")

    @property
    def l(self) -> int:
        return self.n_sites // 2 if self.subsystem_l is None else self.subsystem_l

    @property
    def time_unit(self) -> float:
        """Recorded time per step: gamma * dt in measurement-only mode, dt otherwise."""
        return self.gamma * self.dt if self.measurement_only else self.dt

    @property
    def seed_label(self) -> str:
        return f"m{self.seed}t{self.trajectory_index}"


@dataclass
class TrajectoryRecord:
    """Recorded time series of one noise realization."""

    times: np.ndarray
    entropy: np.ndarray | None
    expectations: np.ndarray | None   # (n_samples, n_sites)
    seed: int
    trajectory_index: int
    final_state_checksum: str

    @property
    def seed_label(self) -> str:
        return f"m{self.seed}t{self.trajectory_index}"


def make_rng(master_seed: int, trajectory_index: int = 0) -> np.random.Generator:
    """Independent, scheduling-order-free noise stream for one trajectory."""
    ss = np.random.SeedSequence(master_seed, spawn_key=(trajectory_index,))
    return np.random.Generator(np.random.Philox(ss))


def noise_increments(rng: np.random.Generator, n: int, dt: float) -> np.ndarray:
    """n independent Wiener increments: zero mean, variance dt."""
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    return rng.normal(0.0, np.sqrt(dt), size=n)


def expectations_ell(state: GaussianState, c: CouplingMatrix) -> np.ndarray:
    """Expectations of the monitored operators by Wick contraction.

    <ell_i> = sum_j f[i,j] ( F[j,i] + delta_ij - G[i,j] - G[j,i] - conj(F[i,j]) )

    which is real whenever (U, V) is an isometry; a residual imaginary part
    above 1e-8 means the state lost Hermiticity and raises.
    """
    pair = correlations(state)
    g, f = pair.g, pair.f
    corr = f.T - f.conj() - g - g.T
    ell = (c.f * corr).sum(axis=1) + np.diagonal(c.f)
    if np.iscomplexobj(ell):
        residue = float(np.abs(ell.imag).max())
        if residue > 1e-8:
            raise NumericalInstabilityError(
                f"monitored expectations grew an imaginary part ({residue:.2e})")
        ell = ell.real
    return np.ascontiguousarray(ell)


def step(state: GaussianState, unitary_prop: Propagator | None,
         c: CouplingMatrix, gamma: float, dt: float,
         rng: np.random.Generator, *, noise: np.ndarray | None = None,
         step_index: int = 0, seed=None) -> GaussianState:
    """Advance one Trotterized step: unitary, then stochastic measurement.

    ``unitary_prop = None`` runs measurement-only dynamics (the measurement
    factor is applied even for gamma = 0, where it degenerates to the
    identity).  With a unitary propagator and gamma = 0 the measurement is
    skipped entirely and the isometry is refreshed every UNITARY_QR_STRIDE
    steps.  Passing ``noise`` overrides the Wiener draw (used by the dense
    cross-validation, which must consume the identical increments).
    """
    try:
        if unitary_prop is not None:
            apply_propagator(state, unitary_prop)
            if gamma == 0.0:
                if (step_index + 1) % UNITARY_QR_STRIDE == 0:
                    renormalize(state, step_index, seed=seed)
                return state
        ell = expectations_ell(state, c)
        if noise is None:
            noise = noise_increments(rng, c.n_sites, dt)
        a = np.sqrt(gamma) * noise + (2.0 * gamma * dt) * ell
        prop = build_propagator(measurement_generator(a, c), 1.0)
        apply_propagator(state, prop)
        renormalize(state, step_index, seed=seed)
    except NumericalInstabilityError as err:
        if err.seed is None and err.step is None:
            raise NumericalInstabilityError(str(err), seed=seed,
                                            step=step_index) from err
        raise
    return state


def initial_state(cfg: TrajectoryConfig) -> GaussianState:
    """Quench initial condition: Kitaev ground state at the pre-quench field.

    Measurement-only runs start from the same state as the Hamiltonian runs.
    """
    return ground_state(cfg.n_sites, cfg.j_coupling, cfg.h_initial)


def run_trajectory(cfg: TrajectoryConfig, *, on_sample=None,
                   keep_entropy: bool = True,
                   keep_expectations: bool = True) -> TrajectoryRecord:
    """Run one noise realization, recording every ``record_stride`` steps.

    Samples (including the initial one at t = 0) hold the entropy of the
    leading ``cfg.l`` sites and the monitored expectations of the state at
    the recorded time.  ``on_sample(step_index, time, state, ell)`` is
    invoked at each recorded sample when provided; ``ell`` is None unless
    expectations are being computed.
    """
    c = build_couplings(cfg.n_sites, cfg.alpha)
    state = initial_state(cfg)
    unitary_prop = None
    if not cfg.measurement_only:
        gen = hamiltonian_generator(cfg.n_sites, cfg.j_coupling, cfg.h_final)
        unitary_prop = build_propagator(gen, cfg.dt)
    rng = make_rng(cfg.seed, cfg.trajectory_index)

    times: list[float] = []
    entropies: list[float] | None = [] if keep_entropy else None
    expect_rows: list[np.ndarray] | None = [] if keep_expectations else None
    want_ell = keep_expectations or on_sample is not None

    def sample(k: int) -> None:
        t = k * cfg.time_unit
        times.append(t)
        ell = expectations_ell(state, c) if want_ell else None
        if entropies is not None:
            entropies.append(block_entropy(state, np.arange(cfg.l),
                                           seed=cfg.seed_label, step=k))
        if expect_rows is not None:
            expect_rows.append(ell)
        if on_sample is not None:
            on_sample(k, t, state, ell)

    sample(0)
    for k in range(cfg.n_steps):
        step(state, unitary_prop, c, cfg.gamma, cfg.dt, rng,
             step_index=k, seed=cfg.seed_label)
        if (k + 1) % cfg.record_stride == 0:
            sample(k + 1)

    checksum = hashlib.sha256()
    checksum.update(np.ascontiguousarray(state.u).tobytes())
    checksum.update(np.ascontiguousarray(state.v).tobytes())
    return TrajectoryRecord(
        times=np.asarray(times),
        entropy=None if entropies is None else np.asarray(entropies),
        expectations=None if expect_rows is None else np.asarray(expect_rows),
        seed=cfg.seed,
        trajectory_index=cfg.trajectory_index,
        final_state_checksum=checksum.hexdigest()[:16],
    )
