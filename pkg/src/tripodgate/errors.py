"""Exception hierarchy.

The CLI maps the three families onto exit codes: configuration problems
exit with 2, physics-domain problems with 3, numerical failures with 4.
"""


class TripodError(Exception):
    """Base class for all package errors."""

    exit_code = 1
    kind = "error"


class ConfigError(TripodError, ValueError):
    """Malformed or out-of-range configuration or parameters."""

    exit_code = 2
    kind = "config"


class PhysicsDomainError(TripodError):
    """The requested quantity does not exist at these parameters."""

    exit_code = 3
    kind = "physics-domain"


class PoleProximityError(PhysicsDomainError):
    """A susceptibility denominator is too close to zero."""


class DegenerateDetuningError(PhysicsDomainError):
    """Raman detuning Δ13 vanishes, so the Kerr lineshape is singular."""


class DegenerateInputError(PhysicsDomainError):
    """Field configuration for which a closed form is undefined."""


class DegenerateSteadyStateError(PhysicsDomainError):
    """The Liouvillian has more than one stationary state."""


class NumericalError(TripodError):
    """An integrator or solver failed."""

    exit_code = 4
    kind = "numerical"


class StepSizeUnderflowError(NumericalError):
    pass


class InstabilityError(NumericalError):
    pass
