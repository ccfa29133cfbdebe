"""Physical parameters, constants and unit conventions.

Internally every frequency is measured in units of the optical coherence
decay rate γ (so γ = 1), times in 1/γ and lengths in metres.  SI constants
only enter through the susceptibility and phase prefactors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace
from enum import Enum

from scipy import constants as _sc

from .errors import ConfigError

HBAR = _sc.hbar
EPSILON_0 = _sc.epsilon_0
C_LIGHT = _sc.c

# CGS conversion factors for the Gaussian convention
STATC_CM_PER_C_M = 10.0 * _sc.c * 100.0  # 1 C·m in statC·cm (2.998e11)
ERG_S_PER_J_S = 1.0e7
PER_CM3_PER_PER_M3 = 1.0e-6
CM_PER_M = 100.0

# Assumed ground-state populations behind the closed-form susceptibilities
POP_SYMMETRIC = 0.5


class Convention(str, Enum):
    """Unit system behind susceptibility prefactors and refractive index.

    SI uses χ = 𝒩|μ|²/(ħε₀)·L and n = 1 + χ/2.  GAUSSIAN uses the
    4π𝒩|μ|²/ħ prefactor with n = 1 + 2πχ.
    """

    SI = "si"
    GAUSSIAN = "gaussian"

    @classmethod
    def parse(cls, value: "Convention | str") -> "Convention":
        if isinstance(value, Convention):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ConfigError(f"unknown convention {value!r}; expected 'si' or 'gaussian'") from None


# Multiplier m in n = 1 + m·χ.  Shared by the linear phase and absorption.
INDEX_MULTIPLIER = {Convention.SI: 0.5, Convention.GAUSSIAN: 2.0 * math.pi}


class Beam(str, Enum):
    P = "P"
    T = "T"

    @classmethod
    def parse(cls, value: "Beam | str") -> "Beam":
        if isinstance(value, Beam):
            return value
        v = str(value).upper()
        if v in ("P", "PROBE"):
            return cls.P
        if v in ("T", "TRIGGER"):
            return cls.T
        raise ConfigError(f"unknown beam {value!r}")

    @property
    def other(self) -> "Beam":
        return Beam.T if self is Beam.P else Beam.P


class Polarization(str, Enum):
    SIGMA_PLUS = "sigma+"
    SIGMA_MINUS = "sigma-"

    @classmethod
    def parse(cls, value: "Polarization | str") -> "Polarization":
        if isinstance(value, Polarization):
            return value
        v = str(value).strip().lower().replace("σ", "sigma").replace("⁺", "+").replace("⁻", "-")
        try:
            return cls(v)
        except ValueError:
            raise ConfigError(f"unknown polarization {value!r}") from None


def _finite(name: str, value: float) -> None:
    if not math.isfinite(value):
        raise ConfigError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class AtomParams:
    """Detunings (γ units), γ in rad/s and ground-state dephasing (γ units)."""

    delta1: float = 0.0
    delta2: float = 0.0
    delta3: float = 0.0
    gamma: float = 2.0 * math.pi * 6.07e6
    gamma_d: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            _finite(f.name, float(getattr(self, f.name)))
        if self.gamma <= 0:
            raise ConfigError("gamma must be positive")
        if self.gamma_d < 0:
            raise ConfigError("gamma_d must be nonnegative")

    @property
    def deltas(self) -> tuple[float, float, float]:
        return (self.delta1, self.delta2, self.delta3)


@dataclass(frozen=True)
class FieldParams:
    """Rabi frequencies Ω_P, Ω_T and pump Ω in γ units, plus polarizations.

    Rabi frequencies are stored as nonnegative magnitudes; only |Ω|² and
    ratios enter the physics.
    """

    omega_p: float = 1.0
    omega_t: float = 1.0
    omega_pump: float = 4.5
    pol_p: Polarization = Polarization.SIGMA_PLUS
    pol_t: Polarization = Polarization.SIGMA_MINUS

    def __post_init__(self):
        for name in ("omega_p", "omega_t", "omega_pump"):
            v = float(getattr(self, name))
            _finite(name, v)
            if v < 0:
                raise ConfigError(f"{name} must be nonnegative")
        object.__setattr__(self, "pol_p", Polarization.parse(self.pol_p))
        object.__setattr__(self, "pol_t", Polarization.parse(self.pol_t))

    def rabi(self, beam: Beam | str) -> float:
        return self.omega_p if Beam.parse(beam) is Beam.P else self.omega_t


@dataclass(frozen=True)
class MediumParams:
    """Sample description in SI units.

    ``g_p``, ``g_t`` (rad/s) and ``n_atoms`` feed the quantized-field
    coefficients.  When left as None they follow from the dipole moments
    and a mode volume ``beam_area * length``.
    """

    density: float = 3.0e18
    length: float = 0.007
    lambda_p: float = 795e-9
    lambda_t: float = 795e-9
    dipole_p: float = 1.0e-29
    dipole_t: float = 1.0e-29
    g_p: float | None = None
    g_t: float | None = None
    n_atoms: float | None = None
    beam_area: float = math.pi * (50e-6) ** 2

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if v is None:
                continue
            _finite(f.name, float(v))
            if v <= 0:
                raise ConfigError(f"{f.name} must be strictly positive")

    @property
    def k_p(self) -> float:
        return 2.0 * math.pi / self.lambda_p

    @property
    def k_t(self) -> float:
        return 2.0 * math.pi / self.lambda_t

    def k(self, beam: Beam | str) -> float:
        return self.k_p if Beam.parse(beam) is Beam.P else self.k_t

    def dipole(self, beam: Beam | str) -> float:
        return self.dipole_p if Beam.parse(beam) is Beam.P else self.dipole_t

    def angular_frequency(self, beam: Beam | str) -> float:
        return C_LIGHT * self.k(beam)

    @property
    def mode_volume(self) -> float:
        return self.beam_area * self.length

    def atom_number(self) -> float:
        if self.n_atoms is not None:
            return float(self.n_atoms)
        return self.density * self.mode_volume

    def coupling(self, beam: Beam | str) -> float:
        """Single-atom vacuum coupling g (rad/s)."""
        beam = Beam.parse(beam)
        given = self.g_p if beam is Beam.P else self.g_t
        if given is not None:
            return float(given)
        mu = self.dipole(beam)
        omega = self.angular_frequency(beam)
        return mu * math.sqrt(omega / (2.0 * HBAR * EPSILON_0 * self.mode_volume))


@dataclass(frozen=True)
class ComplexDetunings:
    """Δ_j0 = δ_j + iγ and Δ_kj = δ_j − δ_k − iγ_d, in γ units."""

    d10: complex
    d20: complex
    d30: complex
    d12: complex
    d13: complex
    d23: complex


def complex_detunings(atom: AtomParams) -> ComplexDetunings:
    d1, d2, d3 = atom.deltas
    gd = atom.gamma_d
    return ComplexDetunings(
        d10=complex(d1, 1.0),
        d20=complex(d2, 1.0),
        d30=complex(d3, 1.0),
        d12=complex(d2 - d1, -gd),
        d13=complex(d3 - d1, -gd),
        d23=complex(d3 - d2, -gd),
    )


def to_si(value, gamma_si: float, power: int = 1):
    """Convert from γ units to SI.  ``power`` is the exponent of γ carried
    by the quantity: 1 for frequencies, −1 for times, 2 for γ², ..."""
    if gamma_si <= 0:
        raise ConfigError("gamma_si must be positive")
    return value * gamma_si**power


def from_si(value, gamma_si: float, power: int = 1):
    if gamma_si <= 0:
        raise ConfigError("gamma_si must be positive")
    return value / gamma_si**power


@dataclass(frozen=True)
class PulseSpec:
    """Gaussian pulse: peak Rabi frequency (γ units) and duration τ (s)."""

    beam: Beam
    peak_rabi: float
    tau: float
    shape: str = "gaussian"

    def __post_init__(self):
        object.__setattr__(self, "beam", Beam.parse(self.beam))
        if not (self.tau > 0 and math.isfinite(self.tau)):
            raise ConfigError("pulse duration tau must be positive")
        if self.peak_rabi < 0:
            raise ConfigError("peak_rabi must be nonnegative")
        if self.shape != "gaussian":
            raise ConfigError("only gaussian pulses are supported")


@dataclass(frozen=True)
class Pulses:
    probe: PulseSpec
    trigger: PulseSpec

    def __getitem__(self, beam: Beam | str) -> PulseSpec:
        return self.probe if Beam.parse(beam) is Beam.P else self.trigger

    @classmethod
    def from_fields(cls, fields_: FieldParams, tau_p: float, tau_t: float) -> "Pulses":
        return cls(PulseSpec(Beam.P, fields_.omega_p, tau_p), PulseSpec(Beam.T, fields_.omega_t, tau_t))


@dataclass(frozen=True)
class SystemParams:
    """Everything a calculation needs, as loaded from a config file."""

    atom: AtomParams = field(default_factory=AtomParams)
    fields: FieldParams = field(default_factory=FieldParams)
    medium: MediumParams = field(default_factory=MediumParams)
    tau_p: float = 5.0e-7
    tau_t: float = 5.0e-7
    convention: Convention = Convention.GAUSSIAN
    seed: int = 0

    @property
    def pulses(self) -> Pulses:
        return Pulses.from_fields(self.fields, self.tau_p, self.tau_t)

    def with_fields(self, **kw) -> "SystemParams":
        return replace(self, fields=replace(self.fields, **kw))
