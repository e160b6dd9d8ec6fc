"""Quadratic evolution generators and their matrix-exponential propagators.

Both the Hamiltonian step and the stochastic measurement step act on a
Gaussian state through an operator ``exp(-xi * T * Delta)`` with ``T`` a
Hermitian quadratic form

    T = sum_ij ( D[i,j] c_i^dag c_j + O[i,j] c_i^dag c_j^dag + h.c. ),

``D`` real symmetric and ``O`` real antisymmetric.  In the Bogoliubov frame
the (U, V) pair then evolves linearly,

    (U'; V') = exp(prefactor * Delta * M) (U; V),
    M = [[D, O], [-O, -D]],

with ``prefactor = -2i`` in real time and ``prefactor = -2`` for the
imaginary-time measurement factor.  Both constants were calibrated against a
dense Fock-space computation (eigenstate stationarity for the real-time sign,
two-point-function agreement for the measurement sign) and are locked by
regression tests; do not change them without re-running those tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
import scipy.linalg

from .lattice import CouplingMatrix

if TYPE_CHECKING:  # pragma: no cover
    from .gaussian import GaussianState

REAL_TIME_PREFACTOR = -2.0j
MEASUREMENT_PREFACTOR = -2.0

REAL_TIME = "real_time"
IMAGINARY_TIME = "imaginary_time"

UNITARY_CACHED = "unitary_cached"
MEASUREMENT_FRESH = "measurement_fresh"

# The structured series for the measurement exponential truncates at this
# many terms; below _SERIES_NORM_CUTOFF the truncation error is < 1e-15.
_SERIES_TERMS = 10
_SERIES_NORM_CUTOFF = 4.0
_FACT = [math.factorial(k) for k in range(2 * _SERIES_TERMS + 2)]


@dataclass(frozen=True)
class QuadraticGenerator:
    """One quadratic evolution step: (D, O) blocks, time kind, step length."""

    d: np.ndarray
    o: np.ndarray
    xi: str            # REAL_TIME or IMAGINARY_TIME
    delta: float       # step length; 1 for the measurement factor

    def __post_init__(self):
        if self.xi not in (REAL_TIME, IMAGINARY_TIME):
            raise ValueError(f"unknown evolution kind {self.xi!r}")


@dataclass(frozen=True)
class Propagator:
    """Dense 2n x 2n exponential acting on the stacked (U; V) pair."""

    m: np.ndarray
    kind: str          # UNITARY_CACHED or MEASUREMENT_FRESH


def hamiltonian_generator(n: int, j_coupling: float, h_field: float) -> QuadraticGenerator:
    """Blocks of the Kitaev chain: nearest-neighbor hopping and pairing plus
    a chemical potential, with periodic wrap.

    The wrap contributions are additive, so at n = 2 the doubled bond gets
    hopping -J while the pairing amplitudes cancel by antisymmetry.
    """
    if n < 2:
        raise ValueError(f"need at least 2 sites, got {n}")
    d = np.zeros((n, n))
    o = np.zeros((n, n))
    half = 0.5 * j_coupling
    for i in range(n):
        ip, im = (i + 1) % n, (i - 1) % n
        d[i, i] = h_field
        d[i, ip] += -half
        d[i, im] += -half
        o[i, ip] += -half
        o[i, im] += +half
    return QuadraticGenerator(d=d, o=o, xi=REAL_TIME, delta=0.0)


def measurement_generator(a: np.ndarray, c: CouplingMatrix) -> QuadraticGenerator:
    """Blocks of ``sum_i a[i] * ell_i`` for the monitored two-point operators.

    D[i,j] = -(a[i] + a[j]) f[i,j] / 2  (symmetric),
    O[i,j] = -(a[i] - a[j]) f[i,j] / 2  (antisymmetric).
    """
    a = np.asarray(a, dtype=float)
    if a.shape != (c.n_sites,):
        raise ValueError(f"coefficient vector has shape {a.shape}, expected ({c.n_sites},)")
    d = -0.5 * (a[:, None] + a[None, :]) * c.f
    o = -0.5 * (a[:, None] - a[None, :]) * c.f
    return QuadraticGenerator(d=d, o=o, xi=IMAGINARY_TIME, delta=1.0)


def _series_terms(norm: float) -> int:
    # smallest m with norm^(m+1) / (2m+2)! below roundoff
    for m in range(1, _SERIES_TERMS):
        if norm ** (m + 1) / _FACT[2 * m + 2] < 1e-17:
            return m
    return _SERIES_TERMS


def _phi_psi(cmat: np.ndarray, terms: int) -> tuple[np.ndarray, np.ndarray]:
    # phi(C) = sum_m C^m / (2m)!  = cosh(sqrt(C)),
    # psi(C) = sum_m C^m / (2m+1)! = sinh(sqrt(C))/sqrt(C), as entire series.
    n = cmat.shape[0]
    eye = np.eye(n)
    phi = eye + cmat / _FACT[2]
    psi = eye + cmat / _FACT[3]
    power = cmat
    for m in range(2, terms + 1):
        power = power @ cmat
        phi += power / _FACT[2 * m]
        psi += power / _FACT[2 * m + 1]
    return phi, psi


def _measurement_exponential(gen: QuadraticGenerator, scale: float) -> np.ndarray:
    """exp(scale * M) for M = [[D, O], [-O, -D]] built from a measurement step.

    M is orthogonally similar, via the half-sum butterfly P = [[1,1],[1,-1]]/sqrt2,
    to K = [[0, D-O], [D+O, 0]], whose exponential splits into even/odd series
    in the n x n products (D-O)(D+O) and (D+O)(D-O).  That costs a handful of
    n x n multiplies instead of a 2n x 2n Pade evaluation; the result is exact
    to series truncation and is regression-tested against scipy.linalg.expm.
    """
    b1 = scale * (gen.d - gen.o)   # top-right block of the rotated generator
    b2 = scale * (gen.d + gen.o)   # bottom-left block; equals b1.T exactly
    c1 = b1 @ b2
    c2 = b2 @ b1
    # series truncation error bounded by ||C||^(terms+1) / (2 terms + 2)!
    norm = max(np.abs(c1).sum(axis=1).max(), np.abs(c2).sum(axis=1).max())
    if norm > _SERIES_NORM_CUTOFF:
        m = np.block([[gen.d, gen.o], [-gen.o, -gen.d]])
        return scipy.linalg.expm(scale * m)
    terms = _series_terms(norm)
    phi1, psi1 = _phi_psi(c1, terms)
    phi2, psi2 = _phi_psi(c2, terms)
    q12 = b1 @ psi2
    q21 = b2 @ psi1
    # conjugate exp(K') = [[phi1, q12], [q21, phi2]] back with the butterfly:
    # exp(M') = 0.5 * [[phi1+q12+q21+phi2, phi1-q12+q21-phi2],
    #                  [phi1+q12-q21-phi2, phi1-q12-q21+phi2]]
    n = gen.d.shape[0]
    out = np.empty((2 * n, 2 * n))
    sum_phi = phi1 + phi2
    dif_phi = phi1 - phi2
    sum_q = q12 + q21
    dif_q = q12 - q21
    out[:n, :n] = 0.5 * (sum_phi + sum_q)
    out[:n, n:] = 0.5 * (dif_phi - dif_q)
    out[n:, :n] = 0.5 * (dif_phi + dif_q)
    out[n:, n:] = 0.5 * (sum_phi - sum_q)
    return out


def build_propagator(gen: QuadraticGenerator, step: float) -> Propagator:
    """Exponentiate a generator into a dense propagator.

    Real-time generators give the unitary factor exp(-2i * step * M); these are
    built once per run and reused.  Imaginary-time (measurement) generators
    require ``step = 1`` and give the positive factor exp(-2 * M), rebuilt
    every step because the stochastic coefficients change.
    """
    if gen.xi == REAL_TIME:
        if step <= 0:
            raise ValueError(f"real-time step must be positive, got {step}")
        m = np.block([[gen.d, gen.o], [-gen.o, -gen.d]])
        return Propagator(m=scipy.linalg.expm(REAL_TIME_PREFACTOR * step * m),
                          kind=UNITARY_CACHED)
    if step != 1.0:
        raise ValueError(f"measurement step length is fixed to 1, got {step}")
    return Propagator(m=_measurement_exponential(gen, MEASUREMENT_PREFACTOR),
                      kind=MEASUREMENT_FRESH)


def _left_multiply(m: np.ndarray, stack: np.ndarray) -> np.ndarray:
    # real propagator times complex stack: multiply the interleaved re/im
    # column view so BLAS runs in real arithmetic (half the flops of zgemm).
    if m.dtype == np.float64 and stack.dtype == np.complex128:
        stack = np.ascontiguousarray(stack)
        return (m @ stack.view(np.float64)).view(np.complex128)
    return m @ stack


def apply_propagator(state: "GaussianState", p: Propagator) -> "GaussianState":
    """Left-multiply the stacked (U; V) pair by the propagator, in place.

    The caller renormalizes after a measurement application; a unitary
    application preserves the Bogoliubov constraint analytically.
    """
    n = state.n_sites
    if p.m.shape != (2 * n, 2 * n):
        raise ValueError(f"propagator is {p.m.shape}, state needs {(2 * n, 2 * n)}")
    out = _left_multiply(p.m, np.vstack((state.u, state.v)))
    state.u = out[:n]
    state.v = out[n:]
    if p.kind == MEASUREMENT_FRESH:
        state.is_normalized = False
    return state
