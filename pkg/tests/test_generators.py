import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_gaussian_state
from kitaev_qsd.gaussian import (block_entropy, correlations, ground_state,
                                 normalization_residual, renormalize)
from kitaev_qsd.generators import (IMAGINARY_TIME, MEASUREMENT_FRESH,
                                   MEASUREMENT_PREFACTOR, REAL_TIME,
                                   REAL_TIME_PREFACTOR, UNITARY_CACHED,
                                   _measurement_exponential, apply_propagator,
                                   build_propagator, hamiltonian_generator,
                                   measurement_generator)
from kitaev_qsd.lattice import build_couplings
from kitaev_qsd.oracle import (annihilation_operators, build_operators,
                               dense_correlations, dense_ground_state)


def block_matrix(gen):
    return np.block([[gen.d, gen.o], [-gen.o, -gen.d]])


# ------------------------------------------------------------- generators

def test_hamiltonian_generator_entries():
    gen = hamiltonian_generator(4, 1.0, 0.5)
    assert gen.xi == REAL_TIME
    assert np.allclose(np.diag(gen.d), 0.5)
    for i in range(4):
        assert gen.d[i, (i + 1) % 4] == pytest.approx(-0.5)
        assert gen.d[i, (i - 1) % 4] == pytest.approx(-0.5)
        assert gen.o[i, (i + 1) % 4] == pytest.approx(-0.5)
        assert gen.o[(i + 1) % 4, i] == pytest.approx(0.5)
    assert np.abs(gen.d - gen.d.T).max() < 1e-12
    assert np.abs(gen.o + gen.o.T).max() < 1e-12


def test_hamiltonian_generator_free_field_limit():
    gen = hamiltonian_generator(6, 0.0, 0.7)
    assert np.allclose(gen.o, 0.0)
    assert np.allclose(gen.d, 0.7 * np.eye(6))
    zero_mu = hamiltonian_generator(4, 1.0, 0.0)
    assert np.allclose(np.diag(zero_mu.d), 0.0)


def test_measurement_generator_limits():
    c = build_couplings(5, 1.5)
    gen = measurement_generator(np.zeros(5), c)
    assert gen.xi == IMAGINARY_TIME and gen.delta == 1.0
    assert np.allclose(gen.d, 0.0) and np.allclose(gen.o, 0.0)

    uniform = measurement_generator(np.full(5, 0.3), c)
    assert np.allclose(uniform.o, 0.0)
    assert np.allclose(uniform.d, -0.3 * c.f)


def test_measurement_generator_two_site_example():
    c = build_couplings(2, 3.0)
    gen = measurement_generator(np.array([1.0, -1.0]), c)
    assert np.allclose(gen.d, np.diag([-c.f[0, 0], c.f[1, 1]]))
    assert gen.o[0, 1] == pytest.approx(-c.f[0, 1])
    assert gen.o[1, 0] == pytest.approx(c.f[0, 1])


def test_measurement_generator_shape_check():
    c = build_couplings(4, 1.0)
    with pytest.raises(ValueError):
        measurement_generator(np.zeros(3), c)


# ------------------------------------------------------------ propagators

def test_zero_generator_gives_identity():
    c = build_couplings(4, 2.0)
    gen = measurement_generator(np.zeros(4), c)
    prop = build_propagator(gen, 1.0)
    assert prop.kind == MEASUREMENT_FRESH
    assert np.abs(prop.m - np.eye(8)).max() < 1e-14


def test_propagator_step_validation():
    gen = hamiltonian_generator(4, 1.0, 0.5)
    with pytest.raises(ValueError):
        build_propagator(gen, 0.0)
    c = build_couplings(4, 1.0)
    mgen = measurement_generator(np.ones(4), c)
    with pytest.raises(ValueError):
        build_propagator(mgen, 0.5)


def test_unitary_propagator_preserves_isometry():
    gen = hamiltonian_generator(6, 1.0, 0.5)
    prop = build_propagator(gen, 5e-3)
    assert prop.kind == UNITARY_CACHED
    state = random_gaussian_state(6, seed=21)
    apply_propagator(state, prop)
    assert normalization_residual(state) < 1e-10


def test_real_time_prefactor_locked():
    # regression lock for the calibrated constants
    assert REAL_TIME_PREFACTOR == -2.0j
    assert MEASUREMENT_PREFACTOR == -2.0
    gen = hamiltonian_generator(4, 1.2, 0.3)
    prop = build_propagator(gen, 0.01)
    expected = scipy.linalg.expm(-2.0j * 0.01 * block_matrix(gen))
    assert np.abs(prop.m - expected).max() < 1e-13


def test_eigenstate_invariance_under_own_hamiltonian():
    st8 = ground_state(8, 1.0, 0.5)
    s_before = block_entropy(st8, np.arange(4))
    prop = build_propagator(hamiltonian_generator(8, 1.0, 0.5), 5e-3)
    for _ in range(50):
        apply_propagator(st8, prop)
    assert block_entropy(st8, np.arange(4)) == pytest.approx(s_before, abs=1e-8)


def test_measurement_propagator_first_order_expansion():
    c = build_couplings(6, 1.0)
    rng = np.random.default_rng(3)
    a = 1e-3 * rng.standard_normal(6)
    gen = measurement_generator(a, c)
    x = MEASUREMENT_PREFACTOR * block_matrix(gen)
    prop = build_propagator(gen, 1.0)
    remainder = np.abs(prop.m - np.eye(12) - x).max()
    assert remainder < 5.0 * np.linalg.norm(x, 2) ** 2


def test_measurement_propagators_of_opposite_sign_are_inverse():
    c = build_couplings(5, 2.0)
    rng = np.random.default_rng(4)
    a = 0.05 * rng.standard_normal(5)
    forward = build_propagator(measurement_generator(a, c), 1.0)
    backward = build_propagator(measurement_generator(-a, c), 1.0)
    assert np.abs(forward.m @ backward.m - np.eye(10)).max() < 1e-8


def test_half_step_squares_to_full_step():
    # exponential accuracy on random generators of unit scale
    rng = np.random.default_rng(5)
    for trial in range(5):
        d = rng.standard_normal((5, 5))
        d = 0.05 * (d + d.T)
        o = rng.standard_normal((5, 5))
        o = 0.05 * (o - o.T)
        m = np.block([[d, o], [-o, -d]])
        full = scipy.linalg.expm(m)
        half = scipy.linalg.expm(0.5 * m)
        assert np.abs(half @ half - full).max() < 1e-10


@given(seed=st.integers(0, 2**31), scale=st.floats(1e-4, 0.3))
@settings(max_examples=30, deadline=None)
def test_structured_exponential_matches_scipy(seed, scale):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 12))
    c = build_couplings(n, float(rng.uniform(0, 4)))
    a = scale * rng.standard_normal(n)
    gen = measurement_generator(a, c)
    fast = _measurement_exponential(gen, MEASUREMENT_PREFACTOR)
    ref = scipy.linalg.expm(MEASUREMENT_PREFACTOR * block_matrix(gen))
    assert np.abs(fast - ref).max() < 1e-12


def test_structured_exponential_large_norm_fallback():
    c = build_couplings(4, 0.0)
    gen = measurement_generator(np.array([9.0, -7.0, 8.0, -6.0]), c)
    fast = _measurement_exponential(gen, MEASUREMENT_PREFACTOR)
    ref = scipy.linalg.expm(MEASUREMENT_PREFACTOR * block_matrix(gen))
    assert np.abs(fast - ref).max() < 1e-9 * np.abs(ref).max()


# ----------------------------------------------- oracle-pinned conventions

def test_measurement_step_matches_dense_oracle(dense_n4):
    c, ham, ells = dense_n4
    st4 = ground_state(4, 1.0, 0.5)
    psi = dense_ground_state(ham, 4)

    a = np.array([0.31, -0.17, 0.06, 0.22])
    kick = scipy.linalg.expm(sum(a[i] * ells[i] for i in range(4)))
    amp = kick @ psi.amplitudes
    psi.amplitudes = amp / np.linalg.norm(amp)

    prop = build_propagator(measurement_generator(a, c), 1.0)
    apply_propagator(st4, prop)
    renormalize(st4)

    dense_pair = dense_correlations(psi)
    pair = correlations(st4)
    assert np.abs(dense_pair.g - pair.g).max() < 1e-8
    assert np.abs(dense_pair.f - pair.f).max() < 1e-8


def test_two_site_opposite_kick_matches_dense_oracle():
    n = 2
    c = build_couplings(n, 3.0)
    ham, ells = build_operators(n, 1.0, 0.5, c)
    st2 = ground_state(n, 1.0, 0.5)
    psi = dense_ground_state(ham, n)
    a = np.array([1.0, -1.0])
    kick = scipy.linalg.expm(a[0] * ells[0] + a[1] * ells[1])
    amp = kick @ psi.amplitudes
    psi.amplitudes = amp / np.linalg.norm(amp)
    prop = build_propagator(measurement_generator(a, c), 1.0)
    apply_propagator(st2, prop)
    renormalize(st2)
    dense_pair = dense_correlations(psi)
    pair = correlations(st2)
    assert np.abs(dense_pair.g - pair.g).max() < 1e-8
    assert np.abs(dense_pair.f - pair.f).max() < 1e-8


def test_apply_propagator_dimension_check():
    c = build_couplings(4, 1.0)
    prop = build_propagator(measurement_generator(np.zeros(4), c), 1.0)
    with pytest.raises(ValueError):
        apply_propagator(random_gaussian_state(5, seed=1), prop)
