import numpy as np
import pytest

from kitaev_qsd.gaussian import GaussianState, renormalize
from kitaev_qsd.lattice import build_couplings
from kitaev_qsd.oracle import build_operators


@pytest.fixture(scope="session")
def dense_n4():
    """Dense Kitaev operators at n=4, J=1, h=0.5, alpha=2."""
    c = build_couplings(4, 2.0)
    ham, ells = build_operators(4, 1.0, 0.5, c)
    return c, ham, ells


@pytest.fixture(scope="session")
def dense_n8():
    """Dense Kitaev operators at n=8, J=1, h=0.5, alpha=2."""
    c = build_couplings(8, 2.0)
    ham, ells = build_operators(8, 1.0, 0.5, c)
    return c, ham, ells


def random_antisymmetric(n: int, seed: int, real: bool = False) -> np.ndarray:
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n, n))
    if not real:
        a = a + 1j * rng.standard_normal((n, n))
    return a - a.T


def random_gaussian_state(n: int, seed: int, real: bool = False) -> GaussianState:
    """A valid normalized Gaussian state built from a random pairing matrix.

    Using U = 1, V = conj(Z) before renormalization guarantees the
    quasiparticle anticommutation closure that an arbitrary isometry lacks.
    """
    z = random_antisymmetric(n, seed, real)
    state = GaussianState(n_sites=n, u=np.eye(n, dtype=z.dtype), v=z.conj(),
                          is_normalized=False)
    return renormalize(state)


def bell_pair_state() -> GaussianState:
    """Two sites in the equal superposition of empty and doubly occupied."""
    z = np.array([[0.0, 1.0], [-1.0, 0.0]])
    u = np.eye(2) / np.sqrt(2.0)
    v = z / np.sqrt(2.0)
    return GaussianState(n_sites=2, u=u, v=v)
