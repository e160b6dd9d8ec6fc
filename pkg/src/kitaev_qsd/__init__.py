"""Quantum-state-diffusion trajectories of a monitored Kitaev chain.

Gaussian fermionic states under a quench of the Kitaev Hamiltonian and
continuous monitoring by Kac-normalized power-law two-point operators:
trajectory engine, dense Fock-space oracle, ensemble statistics, and the
expectation-distribution diagnostics.
"""

__version__ = "0.1.0"

from .ensemble import (EnsembleStats, GridPoint, crossing_estimate, error_bar,
                       run_ensemble, sweep, time_average)
from .errors import (ContractViolationError, NumericalInstabilityError,
                     SimulationError)
from .gaussian import (CorrelationPair, GaussianState, block_entropy,
                       correlations, entanglement_entropy, ground_state,
                       renormalize, vacuum)
from .generators import (Propagator, QuadraticGenerator, apply_propagator,
                         build_propagator, hamiltonian_generator,
                         measurement_generator)
from .lattice import CouplingMatrix, build_couplings, ring_distance
from .stats import (ExpectationHistogram, PeakDiagnostics, accumulate,
                    accumulate_trajectory, merge, peak_diagnostics)
from .trajectory import (TrajectoryConfig, TrajectoryRecord, expectations_ell,
                         noise_increments, run_trajectory, step)

__all__ = [
    "__version__",
    "ContractViolationError", "NumericalInstabilityError", "SimulationError",
    "CouplingMatrix", "build_couplings", "ring_distance",
    "GaussianState", "CorrelationPair", "vacuum", "ground_state",
    "renormalize", "correlations", "entanglement_entropy", "block_entropy",
    "QuadraticGenerator", "Propagator", "hamiltonian_generator",
    "measurement_generator", "build_propagator", "apply_propagator",
    "TrajectoryConfig", "TrajectoryRecord", "expectations_ell",
    "noise_increments", "step", "run_trajectory",
    "EnsembleStats", "GridPoint", "run_ensemble", "time_average", "error_bar",
    "sweep", "crossing_estimate",
    "ExpectationHistogram", "PeakDiagnostics", "accumulate", "merge",
    "peak_diagnostics", "accumulate_trajectory",
]
