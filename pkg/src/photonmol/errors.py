"""Exception types shared across the simulator."""


class SimulationError(Exception):
    """Base class for all errors raised by this package."""


class BasisMismatch(SimulationError):
    """Operators built over different Fock bases were combined."""


class SingularSystem(SimulationError):
    """The Liouvillian kernel is not one-dimensional at the requested tolerance."""


class ConvergenceFailure(SimulationError):
    """A solver could not reach the configured residual/drift tolerance."""


class StepSizeTooLarge(SimulationError):
    """The fixed-step integrator's local error estimate persistently exceeds rtol."""


class VacuumOccupation(SimulationError):
    """g2 is undefined: the mode occupation is below the occupation floor."""


class SingularAmplitudeSystem(SimulationError):
    """The two-photon amplitude system is singular (parameters sit on a pole)."""


class DegenerateCoupling(SimulationError):
    """The intermode coupling is zero; the optimal conditions diverge."""
