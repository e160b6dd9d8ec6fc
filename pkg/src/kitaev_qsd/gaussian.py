"""Pure fermionic Gaussian states in the Bogoliubov (U, V) frame.

A state is stored as the n x n pair (U, V) whose columns define the
quasiparticle annihilators

    d_k = sum_j ( conj(U[j, k]) c_j + conj(V[j, k]) c_j^dag ),

all of which kill the state.  After renormalization the stacked 2n x n
matrix [U; V] is an isometry, U^dag U + V^dag V = 1, and the two-point
functions follow directly:

    G[j, l] = <c_l^dag c_j> = (1 - U U^dag)[j, l],
    F[j, l] = <c_l c_j>     = (-U V^dag)[j, l].

The pairing matrix Z with U^dag Z = -V^dag is derived only as a diagnostic:
states reachable by the dynamics can have singular U (for instance the
Kitaev ground state with an occupied zero-momentum mode), which (U, V)
represents without trouble while Z does not exist.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ContractViolationError, NumericalInstabilityError

# Eigenvalues of correlation blocks may leave [0, 1] by roundoff up to this
# much; anything worse indicates a propagation bug and raises.
EIGENVALUE_TOLERANCE = 1e-6

_DEGENERACY_SHIFT = 1e-9


@dataclass
class GaussianState:
    """Mutable (U, V) pair owned by a single trajectory worker."""

    n_sites: int
    u: np.ndarray
    v: np.ndarray
    last_qr_step: int = -1
    is_normalized: bool = True

    def copy(self) -> "GaussianState":
        return GaussianState(self.n_sites, self.u.copy(), self.v.copy(),
                             self.last_qr_step, self.is_normalized)


@dataclass(frozen=True)
class CorrelationPair:
    """Two-point functions g[j, l] = <c_l^dag c_j>, f[j, l] = <c_l c_j>."""

    g: np.ndarray
    f: np.ndarray


def vacuum(n: int) -> GaussianState:
    """The state with every site empty: U = 1, V = 0."""
    if n < 2:
        raise ValueError(f"need at least 2 sites, got {n}")
    return GaussianState(n_sites=n, u=np.eye(n), v=np.zeros((n, n)))


def ground_state(n: int, j_coupling: float, h_field: float) -> GaussianState:
    """Bogoliubov ground state of the Kitaev chain on a periodic ring.

    Diagonalizes the 2n x 2n single-particle matrix M = [[D, O], [-O, -D]]
    and fills (U, V) from its positive-energy eigenvectors, whose negative-
    energy partners are the filled quasiparticle levels; the total energy is
    the sum of the negative eigenvalues plus tr D.  Exact zero modes (for
    example h = J at a gap closing) are reported with a warning and resolved
    deterministically by an infinitesimal chemical-potential bias.
    """
    from .generators import hamiltonian_generator

    if j_coupling == 0.0 and h_field == 0.0:
        raise ValueError("ground state undefined for J = h = 0")
    gen = hamiltonian_generator(n, j_coupling, h_field)
    m = np.block([[gen.d, gen.o], [-gen.o, -gen.d]])
    evals, evecs = np.linalg.eigh(m)
    scale = max(1.0, float(np.abs(evals).max()))
    if np.abs(evals).min() <= 1e-12 * scale:
        warnings.warn(
            f"degenerate zero mode at (n={n}, J={j_coupling}, h={h_field}); "
            "resolving with an infinitesimal chemical-potential bias",
            RuntimeWarning,
            stacklevel=2,
        )
        gen = hamiltonian_generator(n, j_coupling, h_field + _DEGENERACY_SHIFT)
        m = np.block([[gen.d, gen.o], [-gen.o, -gen.d]])
        evals, evecs = np.linalg.eigh(m)
    top = evecs[:, n:]          # eigh sorts ascending; columns n.. are positive
    return GaussianState(n_sites=n, u=np.ascontiguousarray(top[:n]),
                         v=np.ascontiguousarray(top[n:]))


def renormalize(state: GaussianState, step: int | None = None, *,
                seed=None) -> GaussianState:
    """Restore the isometry condition by a thin QR of the stacked pair.

    The triangular factor only rescales the quasiparticle basis, so the
    physical state (and its pairing matrix Z) is unchanged; it absorbs the
    norm growth of the imaginary-time measurement factor.  On the hot path
    the stack is one small measurement kick away from an isometry, where the
    Cholesky form of the QR step is stable and markedly cheaper; anything
    not provably well conditioned falls back to Householder QR.
    """
    n = state.n_sites
    stack = np.vstack((state.u, state.v))
    if not np.isfinite(stack).all():
        raise NumericalInstabilityError(
            "non-finite (U; V) stack in renormalization", seed=seed, step=step)
    gram = stack.conj().T @ stack
    off = float(np.abs(gram - np.eye(n)).max())
    try:
        if off < 0.25:
            # near-isometric: gram = R^dag R with cond(R) ~ 1, single Cholesky
            # pass reaches orthogonality at the eps * cond^2 level << 1e-10
            r = scipy.linalg.cholesky(gram, lower=False, check_finite=False)
            q = scipy.linalg.solve_triangular(
                r, stack.T, trans="T", lower=False, check_finite=False).T
        else:
            q, r = np.linalg.qr(stack)
            diag = np.abs(np.diagonal(r))
            if diag.min() <= 1e-13 * max(diag.max(), 1e-300):
                raise NumericalInstabilityError(
                    "rank-deficient (U; V) stack in renormalization",
                    seed=seed, step=step)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as err:
        raise NumericalInstabilityError(
            f"renormalization factorization failed: {err}",
            seed=seed, step=step) from err
    state.u = np.ascontiguousarray(q[:n])
    state.v = np.ascontiguousarray(q[n:])
    state.is_normalized = True
    if step is not None:
        state.last_qr_step = step
    return state


def normalization_residual(state: GaussianState) -> float:
    """Frobenius deviation of U^dag U + V^dag V from the identity."""
    n = state.n_sites
    gram = state.u.conj().T @ state.u + state.v.conj().T @ state.v
    return float(np.linalg.norm(gram - np.eye(n)))


def correlations(state: GaussianState) -> CorrelationPair:
    """Two-point functions of a renormalized state."""
    if not state.is_normalized:
        raise ContractViolationError(
            "correlations need a renormalized state; call renormalize() first")
    n = state.n_sites
    g = np.eye(n) - state.u @ state.u.conj().T
    f = -state.u @ state.v.conj().T
    return CorrelationPair(g=g, f=f)


def symmetry_residuals(state: GaussianState) -> tuple[float, float]:
    """Diagnostic: (max |G - G^T|, max |F + F^T|).

    F antisymmetry holds for every isometric frame.  G symmetry (equivalently
    G real) additionally needs a real Z Z^dag; it holds for real frames such
    as measurement-only dynamics and equilibrium states, but monitored
    evolution under a Hamiltonian breaks it, so it is reported rather than
    enforced.
    """
    pair = correlations(state)
    return (float(np.abs(pair.g - pair.g.T).max()),
            float(np.abs(pair.f + pair.f.T).max()))


def z_matrix(state: GaussianState, cond_limit: float = 1e8) -> np.ndarray | None:
    """Pairing matrix Z = -(U^dag)^{-1} V^dag, or None when U is too
    ill-conditioned for Z to be meaningful (diagnostic use only)."""
    if np.linalg.cond(state.u) > cond_limit:
        return None
    return -np.linalg.solve(state.u.conj().T, state.v.conj().T)


def _block_matrix(g: np.ndarray, f: np.ndarray, sites: np.ndarray) -> np.ndarray:
    ga = g[np.ix_(sites, sites)]
    fa = f[np.ix_(sites, sites)]
    eye = np.eye(len(sites))
    return np.block([[ga, fa], [fa.conj().T, eye - ga.T]])


def _mode_entropy(nu: np.ndarray, *, seed=None, step=None) -> float:
    low, high = nu.min(), nu.max()
    if low < -EIGENVALUE_TOLERANCE or high > 1.0 + EIGENVALUE_TOLERANCE:
        raise NumericalInstabilityError(
            f"correlation eigenvalue outside [0, 1]: range [{low}, {high}]",
            seed=seed, step=step)
    nu = np.clip(nu, 0.0, 1.0)
    mask = nu > 0.0
    return float(-np.sum(nu[mask] * np.log(nu[mask])))


def block_entropy(state: GaussianState, sites: np.ndarray, *,
                  seed=None, step=None) -> float:
    """Von Neumann entropy (nats) of an arbitrary set of sites.

    Builds the 2l x 2l block [[G_A, F_A], [F_A^dag, 1 - G_A^T]] and sums
    -nu ln nu over its eigenvalues, with 0 ln 0 = 0.  The spectrum comes in
    (nu, 1 - nu) pairs, so each Bogoliubov mode contributes its full binary
    entropy once.
    """
    pair = correlations(state)
    nu = np.linalg.eigvalsh(_block_matrix(pair.g, pair.f, np.asarray(sites)))
    return _mode_entropy(nu, seed=seed, step=step)


def entanglement_entropy(state: GaussianState, l: int, *,
                         seed=None, step=None) -> float:
    """Entanglement entropy (nats) of the leading block of l sites.

    ``l = n`` evaluates the full-system block, which must give zero for a
    pure state and serves as a purity check.
    """
    if not (1 <= l <= state.n_sites):
        raise ValueError(f"subsystem length {l} outside 1..{state.n_sites}")
    return block_entropy(state, np.arange(l), seed=seed, step=step)


def purity_spectrum(state: GaussianState) -> np.ndarray:
    """Eigenvalues of the full-system block matrix; within tolerance of
    {0, 1} exactly when the state is pure and normalized."""
    pair = correlations(state)
    return np.linalg.eigvalsh(_block_matrix(pair.g, pair.f,
                                            np.arange(state.n_sites)))


def quadratic_expectation(state: GaussianState, d: np.ndarray,
                          o: np.ndarray) -> float:
    """Expectation of sum_ij (D_ij c_i^dag c_j + O_ij c_i^dag c_j^dag + h.c.)."""
    pair = correlations(state)
    hop = 2.0 * np.einsum("ij,ji->", d, pair.g)
    pairing = np.einsum("ij,ij->", o, pair.f.conj()) - np.einsum(
        "ij,ji->", o, pair.f)
    return float((hop + pairing).real)
