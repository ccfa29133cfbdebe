"""Linear and cross-Kerr susceptibilities of probe and trigger.

Everything is built on dimensionless lineshape cores L (γ units) that are
multiplied by a convention-dependent prefactor.  Two forms are available:

``"derived"`` (default)
    The weak-field expansion of the Lindblad model in :mod:`tripodgate.bloch`
    at ρ11 = ρ33 = ½.  The probe and trigger expressions are exact mirror
    images under 1 ↔ 3.  The Kerr core contains the Raman (ρ13) path and the
    pump-mediated path through the excited-state coherence ρ20.

``"printed"``
    An alternative published transcription of the closed forms, with
    different conjugate placements and a Raman-only Kerr term.

Sign convention: with Δ_j0 = δ_j + iγ an absorbing medium has Im χ < 0,
and :func:`absorption` returns a positive exponent for it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DegenerateDetuningError, PoleProximityError
from .params import (
    EPSILON_0,
    ERG_S_PER_J_S,
    HBAR,
    INDEX_MULTIPLIER,
    PER_CM3_PER_PER_M3,
    POP_SYMMETRIC,
    STATC_CM_PER_C_M,
    AtomParams,
    Beam,
    Convention,
    FieldParams,
    MediumParams,
)

FORMS = ("derived", "printed")
POLE_TOL = 1e-9
RAMAN_TOL = 1e-12


def _check_form(form: str) -> str:
    if form not in FORMS:
        raise ConfigError(f"unknown lineshape form {form!r}; expected one of {FORMS}")
    return form


def _guard(value, what: str, tol: float = POLE_TOL, exc=PoleProximityError):
    if np.any(np.abs(value) < tol):
        raise exc(f"{what} is within {tol:g} of zero")
    return value


# --- shared lineshape cores -------------------------------------------------
#
# The arguments are arrays (or scalars) so that Monte Carlo and sweeps can
# evaluate many parameter sets at once.  ``w2`` is |Ω|² in γ² units.


def _parts(d1, d2, d3, gd):
    d1, d2, d3, gd = (np.asarray(x, dtype=float) for x in (d1, d2, d3, gd))
    return dict(
        d10=d1 + 1j, d20=d2 + 1j, d30=d3 + 1j,
        d12=(d2 - d1) - 1j * gd, d13=(d3 - d1) - 1j * gd, d23=(d3 - d2) - 1j * gd,
    )


def eit_denominators(d1, d2, d3, gd, w2, form: str = "derived"):
    """EIT denominators (D_P, D_T) shared by χ⁽¹⁾, χ⁽³⁾ and the group index."""
    p = _parts(d1, d2, d3, gd)
    if _check_form(form) == "derived":
        a_p = -p["d12"]
    else:
        a_p = p["d12"]
    a_t = np.conj(p["d23"])
    return p["d10"] * a_p - w2, p["d30"] * a_t - w2


def linear_core(beam, d1, d2, d3, gd, w2, form: str = "derived"):
    """½·a/D for the requested beam (γ⁻¹ units)."""
    beam = Beam.parse(beam)
    p = _parts(d1, d2, d3, gd)
    dp, dt = eit_denominators(d1, d2, d3, gd, w2, form)
    if beam is Beam.P:
        _guard(dp, "probe EIT denominator")
        a = -p["d12"] if form == "derived" else p["d12"]
        return POP_SYMMETRIC * a / dp
    _guard(dt, "trigger EIT denominator")
    return POP_SYMMETRIC * np.conj(p["d23"]) / dt


def kerr_core(beam, d1, d2, d3, gd, w2, form: str = "derived"):
    """Cross-Kerr lineshape (γ⁻³ units) for the requested beam."""
    beam = Beam.parse(beam)
    _check_form(form)
    p = _parts(d1, d2, d3, gd)
    c = np.conj
    d12, d13, d23, d10, d30, d20 = p["d12"], p["d13"], p["d23"], p["d10"], p["d30"], p["d20"]
    _guard(d13, "Raman detuning Δ13", RAMAN_TOL, DegenerateDetuningError)
    if form == "printed":
        if beam is Beam.P:
            den = _guard(d10 * d12 - w2, "probe EIT denominator")
            other = _guard(c(d30) * d23 - w2, "conjugate trigger denominator")
            return POP_SYMMETRIC * (d12 / d13) / den * (d12 / den + d23 / other)
        den = _guard(d30 * c(d23) - w2, "trigger EIT denominator")
        other = _guard(c(d10) * c(d12) - w2, "conjugate probe denominator")
        return POP_SYMMETRIC * (c(d23) / c(d13)) / den * (d12 / other + c(d23) / den)
    # derived: mirror-symmetric weak-field expansion at ρ11 = ρ33 = ½
    a_p, a_t = -d12, c(d23)
    dp = _guard(d10 * a_p - w2, "probe EIT denominator")
    dt = _guard(d30 * a_t - w2, "trigger EIT denominator")
    pump_path = POP_SYMMETRIC * w2 / (dp * dt * (1j - np.real(d20)))
    if beam is Beam.P:
        r = -d13
        return POP_SYMMETRIC * (a_p / dp) / r * (a_p / dp - c(a_t / dt)) + pump_path
    r = c(d13)
    return POP_SYMMETRIC * (a_t / dt) / r * (a_t / dt - c(a_p / dp)) + pump_path


def anharmonic_core(beam, d1, d2, d3, gd, w2, form: str = "derived"):
    """Lineshape entering the XPM coefficient η.

    Identical to :func:`kerr_core` except under the printed form, where the
    η_T expression differs from χ_T⁽³⁾ by a conjugated Δ12 numerator.
    """
    beam = Beam.parse(beam)
    if form != "printed" or beam is Beam.P:
        return kerr_core(beam, d1, d2, d3, gd, w2, form)
    p = _parts(d1, d2, d3, gd)
    c = np.conj
    d12, d13, d23, d10, d30 = p["d12"], p["d13"], p["d23"], p["d10"], p["d30"]
    _guard(d13, "Raman detuning Δ13", RAMAN_TOL, DegenerateDetuningError)
    den = _guard(d30 * c(d23) - w2, "trigger EIT denominator")
    other = _guard(c(d10) * c(d12) - w2, "conjugate probe denominator")
    return POP_SYMMETRIC * (c(d23) / c(d13)) / den * (c(d12) / other + c(d23) / den)


# --- prefactors ---------------------------------------------------------------


def linear_prefactor(medium: MediumParams, beam, convention, gamma_si: float) -> float:
    """Dimensionless factor X/γ multiplying the linear core.

    SI: 𝒩|μ|²/(ħε₀γ).  GAUSSIAN: 4π𝒩|μ|²/(ħγ) in CGS.  The two agree
    numerically; they differ only in the refractive-index multiplier.
    """
    mu = medium.dipole(beam)
    if Convention.parse(convention) is Convention.SI:
        return medium.density * mu**2 / (HBAR * EPSILON_0 * gamma_si)
    n_cgs = medium.density * PER_CM3_PER_PER_M3
    mu_cgs = mu * STATC_CM_PER_C_M
    return 4.0 * np.pi * n_cgs * mu_cgs**2 / (HBAR * ERG_S_PER_J_S * gamma_si)


def kerr_prefactor(medium: MediumParams, convention, gamma_si: float) -> float:
    """Factor multiplying the Kerr core.

    SI: 𝒩|μ_P|²|μ_T|²/(ħ³ε₀γ³) in m²/V².  GAUSSIAN: 4π𝒩|μ_P|²|μ_T|²/(ħ³γ³)
    in cm²/statV².
    """
    mp, mt = medium.dipole_p, medium.dipole_t
    if Convention.parse(convention) is Convention.SI:
        return medium.density * mp**2 * mt**2 / (HBAR**3 * EPSILON_0 * gamma_si**3)
    n_cgs = medium.density * PER_CM3_PER_PER_M3
    s = STATC_CM_PER_C_M
    hb = HBAR * ERG_S_PER_J_S
    return 4.0 * np.pi * n_cgs * (mp * s) ** 2 * (mt * s) ** 2 / (hb**3 * gamma_si**3)


def field_intensity(rabi, dipole: float, convention, gamma_si: float):
    """|E|² = ħ²|Ω|²/|μ|² with Ω given in γ units.

    SI result in V²/m², GAUSSIAN in statV²/cm².
    """
    omega = np.asarray(rabi) * gamma_si
    if Convention.parse(convention) is Convention.SI:
        return (HBAR * omega / dipole) ** 2
    return (HBAR * ERG_S_PER_J_S * omega / (dipole * STATC_CM_PER_C_M)) ** 2


# --- public API ---------------------------------------------------------------


def _args(atom: AtomParams, fields: FieldParams):
    return atom.delta1, atom.delta2, atom.delta3, atom.gamma_d, fields.omega_pump**2


def chi1(beam, atom: AtomParams, fields: FieldParams, medium: MediumParams,
         convention=Convention.SI, form: str = "derived") -> complex:
    """Linear susceptibility of probe (P) or trigger (T)."""
    core = linear_core(beam, *_args(atom, fields), form=form)
    return complex(linear_prefactor(medium, beam, convention, atom.gamma) * core)


def chi3(beam, atom: AtomParams, fields: FieldParams, medium: MediumParams,
         convention=Convention.SI, form: str = "derived") -> complex:
    """Cross-Kerr susceptibility (m²/V² under SI, cm²/statV² under GAUSSIAN)."""
    core = kerr_core(beam, *_args(atom, fields), form=form)
    return complex(kerr_prefactor(medium, convention, atom.gamma) * core)


def chi_total(beam, atom, fields, medium, convention=Convention.SI, form="derived") -> complex:
    """χ⁽¹⁾ + χ⁽³⁾|E_other|² with the other beam's field from its Rabi frequency."""
    beam = Beam.parse(beam)
    other = beam.other
    e2 = field_intensity(fields.rabi(other), medium.dipole(other), convention, atom.gamma)
    return chi1(beam, atom, fields, medium, convention, form) + chi3(
        beam, atom, fields, medium, convention, form) * float(e2)


def absorption(chi, k: float, length: float, convention=Convention.SI):
    """Intensity attenuation exponent α·l = −2·m·k·l·Im χ, where n = 1 + m·χ."""
    m = INDEX_MULTIPLIER[Convention.parse(convention)]
    return -2.0 * m * k * length * np.imag(chi)


@dataclass(frozen=True)
class Susceptibilities:
    chi1_p: complex
    chi1_t: complex
    chi3_p: complex
    chi3_t: complex
    convention: Convention
    form: str
    core1_p: complex
    core1_t: complex
    core3_p: complex
    core3_t: complex

    def as_dict(self) -> dict:
        out = {"convention": self.convention.value, "form": self.form}
        for name in ("chi1_p", "chi1_t", "chi3_p", "chi3_t", "core1_p", "core1_t", "core3_p", "core3_t"):
            v = getattr(self, name)
            out[name] = {"re": v.real, "im": v.imag}
        return out


def susceptibilities(atom, fields, medium, convention=Convention.SI, form="derived") -> Susceptibilities:
    convention = Convention.parse(convention)
    a = _args(atom, fields)
    c1p = complex(linear_core(Beam.P, *a, form=form))
    c1t = complex(linear_core(Beam.T, *a, form=form))
    c3p = complex(kerr_core(Beam.P, *a, form=form))
    c3t = complex(kerr_core(Beam.T, *a, form=form))
    g = atom.gamma
    k3 = kerr_prefactor(medium, convention, g)
    return Susceptibilities(
        chi1_p=linear_prefactor(medium, Beam.P, convention, g) * c1p,
        chi1_t=linear_prefactor(medium, Beam.T, convention, g) * c1t,
        chi3_p=k3 * c3p, chi3_t=k3 * c3t,
        convention=convention, form=form,
        core1_p=c1p, core1_t=c1t, core3_p=c3p, core3_t=c3t,
    )


def group_index_from_core(beam, atom, fields, medium, form="derived"):
    """Leading-order EIT group index −½·g²N/D from the shared denominator.

    g²N is expressed through the dipole moment, g²N = ω𝒩|μ|²/(2ħε₀), so
    this is a pure function of the susceptibility prefactor.
    """
    beam = Beam.parse(beam)
    dp, dt = eit_denominators(*_args(atom, fields), form=form)
    den = dp if beam is Beam.P else dt
    x = linear_prefactor(medium, beam, Convention.SI, atom.gamma)
    omega_over_gamma = medium.angular_frequency(beam) / atom.gamma
    return -0.5 * (0.5 * omega_over_gamma * x) / den


__all__ = [
    "FORMS", "Susceptibilities", "absorption", "anharmonic_core", "chi1", "chi3", "chi_total",
    "eit_denominators", "field_intensity", "group_index_from_core", "kerr_core", "kerr_prefactor",
    "linear_core", "linear_prefactor", "susceptibilities",
]
