"""Quantum phase shifts Φ and field expectation values for multimode
coherent-state inputs.

The ratio |α|²/Δω is treated as one dimensionless group: Δω is passed in
rad/s and converted to γ units before it enters the exponent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .params import C_LIGHT, AtomParams, FieldParams, MediumParams
from .propagation import PropagationCoeffs, coefficients


@dataclass(frozen=True)
class CoherentInput:
    alpha_p: complex
    alpha_t: complex
    delta_omega: float  # rad/s

    def __post_init__(self):
        if not (self.delta_omega > 0 and math.isfinite(self.delta_omega)):
            raise ConfigError("delta_omega must be positive")


@dataclass(frozen=True)
class QuantumPhaseResult:
    phi_p: float
    phi_t: float
    mean_e_p: complex
    mean_e_t: complex
    damping_p: float
    damping_t: float
    absorption_p: float = 0.0  # c·Im η·Δω, reported separately
    absorption_t: float = 0.0
    delta_omega: float = float("nan")

    def as_dict(self) -> dict:
        out = {}
        for k, v in self.__dict__.items():
            out[k] = {"re": v.real, "im": v.imag} if isinstance(v, complex) else v
        return out


def default_bandwidth(coeffs: PropagationCoeffs) -> float:
    """The narrower of the two transparency windows (rad/s)."""
    return float(min(coeffs.dwtr_p, coeffs.dwtr_t))


def phase_from_eta(eta, delta_omega: float, gamma_si: float):
    """Φ = c·η·Δω with c, Δω expressed in γ units and η in 1/m."""
    return (C_LIGHT / gamma_si) * np.asarray(eta) * (delta_omega / gamma_si)


def quantum_phase(atom: AtomParams, fields: FieldParams, medium: MediumParams,
                  delta_omega: float | None = None, form: str = "derived") -> tuple[float, float]:
    """(Φ_P, Φ_T) from the real parts of the anharmonic coefficients."""
    co = coefficients(atom, fields, medium, form)
    dw = default_bandwidth(co) if delta_omega is None else delta_omega
    if not dw > 0:
        raise ConfigError("delta_omega must be positive")
    phi = phase_from_eta(np.array([co.eta_p, co.eta_t]), dw, atom.gamma)
    return float(phi[0].real), float(phi[1].real)


def _factor(phi, n_other, dw_gamma):
    expo = (-2.0 * np.sin(phi / 2.0) ** 2 + 1j * np.sin(phi)) * n_other / dw_gamma
    return np.exp(expo), 2.0 * np.sin(phi / 2.0) ** 2 * n_other / dw_gamma


def coherent_expectation(inp: CoherentInput, phi_p: float, phi_t: float,
                         gamma_si: float = 1.0) -> tuple[complex, complex]:
    """⟨Ê_P⟩ = α_P·exp{[−2sin²(Φ_P/2) + i·sinΦ_P]|α_T|²/Δω}, and P ↔ T.

    ``gamma_si`` sets the unit of Δω; the default 1 takes Δω as given.
    """
    dw = inp.delta_omega / gamma_si
    fp, _ = _factor(phi_p, abs(inp.alpha_t) ** 2, dw)
    ft, _ = _factor(phi_t, abs(inp.alpha_p) ** 2, dw)
    return complex(inp.alpha_p * fp), complex(inp.alpha_t * ft)


def evaluate(atom: AtomParams, fields: FieldParams, medium: MediumParams, alpha_p: complex,
             alpha_t: complex, delta_omega: float | None = None, form: str = "derived") -> QuantumPhaseResult:
    co = coefficients(atom, fields, medium, form)
    dw = default_bandwidth(co) if delta_omega is None else float(delta_omega)
    inp = CoherentInput(alpha_p, alpha_t, dw)
    phi = phase_from_eta(np.array([co.eta_p, co.eta_t]), dw, atom.gamma)
    phi_p, phi_t = float(phi[0].real), float(phi[1].real)
    ep, et = coherent_expectation(inp, phi_p, phi_t, atom.gamma)
    dwg = dw / atom.gamma
    _, dp = _factor(phi_p, abs(alpha_t) ** 2, dwg)
    _, dt = _factor(phi_t, abs(alpha_p) ** 2, dwg)
    return QuantumPhaseResult(phi_p, phi_t, ep, et, float(dp), float(dt),
                              float(phi[0].imag), float(phi[1].imag), dw)
