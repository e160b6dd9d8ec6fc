"""Exception types shared across the simulation engine."""


class SimulationError(Exception):
    """Base class for failures raised by the simulation engine."""


class NumericalInstabilityError(SimulationError):
    """A numerical contract broke down (spectrum drift, rank loss, divergence).

    Carries the trajectory seed and step index when raised inside a run, so
    ensemble drivers can report which realization failed and the run can be
    replayed deterministically.
    """

    def __init__(self, message: str, *, seed=None, step: int | None = None):
        if seed is not None or step is not None:
            message = f"{message} [seed={seed}, step={step}]"
        super().__init__(message)
        self.seed = seed
        self.step = step


class ContractViolationError(SimulationError):
    """An operation was called on inputs that violate its precondition."""
