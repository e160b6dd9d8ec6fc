"""Exact dense simulator in the full 2^n Fock space.

Every convention of the Gaussian engine (index placement of the two-point
functions, propagator prefactors, Trotter ordering) is pinned by running the
identical update here with the identical injected noise and comparing
entropies and monitored expectations step by step.  Annihilation operators
are built as Kronecker products with parity strings, with site 1 stored in
the least significant bit of the basis index.  Single-threaded, test-only:
sizes are capped at 12 sites.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gaussian import CorrelationPair
from .lattice import CouplingMatrix

MAX_SITES = 12


@dataclass
class DenseState:
    """Normalized amplitude vector over occupation-number basis states."""

    amplitudes: np.ndarray
    n_sites: int


def _check_size(n: int) -> None:
    if n > MAX_SITES:
        raise ValueError(f"dense oracle capped at {MAX_SITES} sites, got {n}")
    if n < 2:
        raise ValueError(f"need at least 2 sites, got {n}")


def annihilation_operators(n: int) -> list[np.ndarray]:
    """Dense matrices c_1..c_n with fermionic anticommutation relations."""
    _check_size(n)
    lower = np.array([[0.0, 1.0], [0.0, 0.0]])
    parity = np.array([[1.0, 0.0], [0.0, -1.0]])
    eye2 = np.eye(2)
    ops = []
    for i in range(n):
        mat = np.eye(1)
        for bit in reversed(range(n)):   # most significant bit outermost
            if bit > i:
                factor = eye2
            elif bit == i:
                factor = lower
            else:
                factor = parity
            mat = np.kron(mat, factor)
        ops.append(mat)
    return ops


def build_operators(n: int, j_coupling: float, h_field: float,
                    c: CouplingMatrix) -> tuple[np.ndarray, list[np.ndarray]]:
    """Dense Kitaev Hamiltonian and the monitored operators ell_1..ell_n.

    Each ell_i is Hermitian and squares to (sum_j f[i,j]^2) times the
    identity, which the identity-suite tests verify to 1e-12.
    """
    _check_size(n)
    if c.n_sites != n:
        raise ValueError("coupling matrix size mismatch")
    ann = annihilation_operators(n)
    dim = 2 ** n
    minus = [a - a.conj().T for a in ann]   # c_i - c_i^dag
    plus = [a + a.conj().T for a in ann]    # c_i + c_i^dag
    ham = np.zeros((dim, dim))
    for i in range(n):
        ip = (i + 1) % n
        ham += j_coupling * (minus[i] @ plus[ip])
        ham += 2.0 * h_field * (ann[i].conj().T @ ann[i])
    ells = []
    for i in range(n):
        weighted = np.zeros((dim, dim))
        for j in range(n):
            weighted += c.f[i, j] * plus[j]
        ells.append(minus[i] @ weighted)
    return ham, ells


def dense_ground_state(ham: np.ndarray, n: int) -> DenseState:
    """Lowest eigenvector of the dense Hamiltonian."""
    _, vecs = np.linalg.eigh(ham)
    return DenseState(amplitudes=vecs[:, 0].astype(complex), n_sites=n)


def hamiltonian_propagator(ham: np.ndarray, dt: float) -> np.ndarray:
    """exp(-i H dt) via one eigendecomposition of the fixed Hamiltonian."""
    evals, vecs = np.linalg.eigh(ham)
    return (vecs * np.exp(-1j * evals * dt)) @ vecs.conj().T


def dense_expectations(psi: DenseState, ells: list[np.ndarray]) -> np.ndarray:
    """<ell_i> for each monitored operator; imaginary parts are pure noise."""
    out = np.empty(len(ells))
    for i, op in enumerate(ells):
        val = np.vdot(psi.amplitudes, op @ psi.amplitudes)
        out[i] = val.real
    return out


def oracle_step(psi: DenseState, h_prop: np.ndarray | None,
                ells: list[np.ndarray], gamma: float, dt: float,
                noise: np.ndarray) -> DenseState:
    """One Trotterized step on the dense state with injected Wiener increments.

    Applies exp(-iH dt) (when a propagator is given), then
    exp(sum_i A_i ell_i) with A_i built from the dense state's own
    expectations and the shared noise vector, then normalizes.
    """
    amp = psi.amplitudes
    if h_prop is not None:
        amp = h_prop @ amp
        amp = amp / np.linalg.norm(amp)
    ell_now = np.empty(len(ells))
    for i, op in enumerate(ells):
        ell_now[i] = np.vdot(amp, op @ amp).real
    a = np.sqrt(gamma) * noise + (2.0 * gamma * dt) * ell_now
    kick = np.zeros_like(ells[0])
    for i, op in enumerate(ells):
        kick += a[i] * op
    evals, vecs = np.linalg.eigh(kick)
    amp = (vecs * np.exp(evals)) @ (vecs.conj().T @ amp)
    amp = amp / np.linalg.norm(amp)
    return DenseState(amplitudes=amp, n_sites=psi.n_sites)


def dense_entropy(psi: DenseState, l: int) -> float:
    """Von Neumann entropy (nats) of sites 1..l by Schmidt decomposition."""
    n = psi.n_sites
    if not (1 <= l < n):
        raise ValueError(f"subsystem length {l} outside 1..{n - 1}")
    mat = psi.amplitudes.reshape(2 ** (n - l), 2 ** l)
    lam = np.linalg.svd(mat, compute_uv=False) ** 2
    lam = lam[lam > 1e-16]
    return float(-np.sum(lam * np.log(lam)))


def dense_correlations(psi: DenseState) -> CorrelationPair:
    """Two-point functions with g[j, l] = <c_l^dag c_j>, f[j, l] = <c_l c_j>."""
    ann = annihilation_operators(psi.n_sites)
    amp = psi.amplitudes
    lowered = np.stack([op @ amp for op in ann], axis=1)
    raised = np.stack([op.conj().T @ amp for op in ann], axis=1)
    g = (lowered.conj().T @ lowered).T
    f = (raised.conj().T @ lowered).T
    return CorrelationPair(g=g, f=f)


@dataclass(frozen=True)
class CrossValidationReport:
    """Maximum deviations between the Gaussian engine and the dense oracle."""

    n_sites: int
    n_steps: int
    gamma: float
    alpha: float
    seed: int
    max_entropy_dev: float
    max_expectation_dev: float

    def passes(self, tol: float = 1e-6) -> bool:
        return (self.max_entropy_dev < tol
                and self.max_expectation_dev < tol)


def cross_validate(n: int = 6, n_steps: int = 200, gamma: float = 0.1,
                   alpha: float = 2.0, seed: int = 7, dt: float = 5e-3,
                   j_coupling: float = 1.0, h_initial: float = 100.0,
                   h_final: float = 0.5,
                   measurement_prefactor_override: float | None = None,
                   ) -> CrossValidationReport:
    """Run both engines with a shared noise stream and report deviations.

    The optional prefactor override exists as a negative control: corrupting
    the measurement sign must make the comparison fail loudly.
    """
    from . import generators
    from .gaussian import block_entropy, ground_state
    from .lattice import build_couplings
    from .trajectory import expectations_ell, make_rng, noise_increments, step

    _check_size(n)
    c = build_couplings(n, alpha)
    ham, ells = build_operators(n, j_coupling, h_final, c)
    ham_init, _ = build_operators(n, j_coupling, h_initial, c)
    psi = dense_ground_state(ham_init, n)
    h_prop = hamiltonian_propagator(ham, dt)

    state = ground_state(n, j_coupling, h_initial)
    gen = generators.hamiltonian_generator(n, j_coupling, h_final)
    unitary = generators.build_propagator(gen, dt)
    rng = make_rng(seed)
    l = n // 2

    sites = np.arange(l)
    max_s = abs(block_entropy(state, sites) - dense_entropy(psi, l))
    max_ell = float(np.abs(expectations_ell(state, c)
                           - dense_expectations(psi, ells)).max())

    original = generators.MEASUREMENT_PREFACTOR
    if measurement_prefactor_override is not None:
        generators.MEASUREMENT_PREFACTOR = measurement_prefactor_override
    try:
        for k in range(n_steps):
            noise = noise_increments(rng, n, dt)
            step(state, unitary, c, gamma, dt, rng, noise=noise,
                 step_index=k, seed=seed)
            psi = oracle_step(psi, h_prop, ells, gamma, dt, noise)
            max_s = max(max_s, abs(block_entropy(state, sites)
                                   - dense_entropy(psi, l)))
            max_ell = max(max_ell, float(np.abs(
                expectations_ell(state, c)
                - dense_expectations(psi, ells)).max()))
    finally:
        generators.MEASUREMENT_PREFACTOR = original

    return CrossValidationReport(
        n_sites=n, n_steps=n_steps, gamma=gamma, alpha=alpha, seed=seed,
        max_entropy_dev=float(max_s), max_expectation_dev=float(max_ell))
