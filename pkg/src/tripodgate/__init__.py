"""Cross-Kerr polarization phase gate in a tripod EIT medium."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConfigError,
    NumericalError,
    PhysicsDomainError,
    TripodError,
)
from .params import (  # noqa: E402
    AtomParams,
    Beam,
    Convention,
    FieldParams,
    MediumParams,
    PulseSpec,
    Pulses,
    SystemParams,
)

__all__ = [
    "AtomParams", "Beam", "ConfigError", "Convention", "FieldParams", "MediumParams",
    "NumericalError", "PhysicsDomainError", "PulseSpec", "Pulses", "SystemParams", "TripodError",
]
