"""Slow-light propagation coefficients, envelope propagation and the
Gaussian-pulse nonlinear phase shifts.

Coefficient units: group indices are dimensionless, velocities m/s,
transparency windows rad/s, β in s²/m, κ in 1/m.  The XPM coefficient η is
a per-length rate in 1/m, computed with every frequency in units of γ and
c replaced by c/γ (the distance light travels in 1/γ); envelope moduli
squared are then dimensionless.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.special import erf

from .errors import ConfigError, InstabilityError
from .params import (
    C_LIGHT,
    AtomParams,
    Beam,
    Convention,
    FieldParams,
    MediumParams,
    Pulses,
)
from .susceptibility import (
    anharmonic_core,
    eit_denominators,
    field_intensity,
    kerr_core,
    kerr_prefactor,
    _check_form,
    _guard,
)

ERF_SERIES_CUTOFF = 1e-4


@dataclass(frozen=True)
class PropagationCoeffs:
    ng_p: complex
    ng_t: complex
    vg_p: float
    vg_t: float
    dwtr_p: float
    dwtr_t: float
    beta_p: complex
    beta_t: complex
    kappa_p: complex
    kappa_t: complex
    eta_p: complex
    eta_t: complex
    length: float
    form: str = "derived"

    def beam(self, beam):
        b = Beam.parse(beam).value.lower()
        return {k: getattr(self, f"{k}_{b}") for k in ("ng", "vg", "dwtr", "beta", "kappa", "eta")}

    def as_dict(self) -> dict:
        out = {"form": self.form, "length_m": self.length}
        for name in ("ng_p", "ng_t", "beta_p", "beta_t", "kappa_p", "kappa_t", "eta_p", "eta_t"):
            v = getattr(self, name)
            out[name] = {"re": v.real, "im": v.imag}
        for name in ("vg_p", "vg_t", "dwtr_p", "dwtr_t"):
            out[name] = getattr(self, name)
        out["units"] = {
            "vg": "m/s", "dwtr": "rad/s", "beta": "s^2/m", "kappa": "1/m",
            "eta": "1/m (gamma-scaled; |E|^2 dimensionless)",
        }
        return out


def collective_coupling_sq(medium: MediumParams, beam) -> float:
    """g²N in rad²/s²."""
    return medium.coupling(beam) ** 2 * medium.atom_number()


def group_index(g2n_over_gamma2, denominator):
    """n_g = −½·g²N/D with both quantities in γ² units.

    The sign is chosen so that an EIT medium (D ≈ −|Ω|²) slows light.
    """
    return -0.5 * g2n_over_gamma2 / denominator


def transparency_window(ng_real, rabi_si, gamma_si, length):
    """Δω_tr = √(c|Ω|²/(γ l n_g)) in rad/s; infinite for n_g ≤ 0."""
    ng_real = np.asarray(ng_real, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.sqrt(C_LIGHT * rabi_si**2 / (gamma_si * length * ng_real))
    return np.where(ng_real > 0, out, np.inf)


def _coeff_arrays(d1, d2, d3, gd, w, gamma, medium: MediumParams, form: str,
                  gamma_p: float | None = None, gamma_t: float | None = None):
    """Vectorized core of :func:`coefficients`; ``w`` is the pump Rabi (γ units)."""
    w2 = np.asarray(w, dtype=float) ** 2
    dp, dt = eit_denominators(d1, d2, d3, gd, w2, form)
    _guard(dp, "probe EIT denominator")
    _guard(dt, "trigger EIT denominator")
    g2 = gamma**2
    ng_p = group_index(collective_coupling_sq(medium, Beam.P) / g2, dp)
    ng_t = group_index(collective_coupling_sq(medium, Beam.T) / g2, dt)
    vg_p = C_LIGHT / (1.0 + ng_p.real)
    vg_t = C_LIGHT / (1.0 + ng_t.real)
    l = medium.length
    w_si2 = w2 * g2
    dwtr_p = transparency_window(ng_p.real, np.sqrt(w_si2), gamma * (gamma_p or 1.0), l)
    dwtr_t = transparency_window(ng_t.real, np.sqrt(w_si2), gamma * (gamma_t or 1.0), l)
    d10 = (np.asarray(d1) + 1j) * gamma
    d30 = (np.asarray(d3) + 1j) * gamma
    d12 = (np.asarray(d2) - d1 - 1j * np.asarray(gd)) * gamma
    d23 = (np.asarray(d3) - d2 - 1j * np.asarray(gd)) * gamma
    if form == "printed":
        beta_p = np.conj(d10) * ng_p / (C_LIGHT * w_si2)
        beta_t = d30 * ng_t / (C_LIGHT * w_si2)
        kappa_p = 1j * d12 * ng_p / C_LIGHT
        kappa_t = 1j * np.conj(d23) * ng_t / C_LIGHT
    else:
        # κ = i·k·χ⁽¹⁾/2 and β from the ω² term of the same lineshape
        beta_p = -1j * d10 * ng_p / (C_LIGHT * w_si2)
        beta_t = -1j * d30 * ng_t / (C_LIGHT * w_si2)
        kappa_p = 1j * d12 * ng_p / C_LIGHT
        kappa_t = -1j * np.conj(d23) * ng_t / C_LIGHT
    c_gamma = C_LIGHT / gamma
    pref = (l * (medium.coupling(Beam.P) / gamma) ** 2 * (medium.coupling(Beam.T) / gamma) ** 2
            * medium.atom_number() / (2.0 * math.pi * c_gamma**2))
    eta_p = pref * anharmonic_core(Beam.P, d1, d2, d3, gd, w2, form)
    eta_t = pref * anharmonic_core(Beam.T, d1, d2, d3, gd, w2, form)
    return dict(ng_p=ng_p, ng_t=ng_t, vg_p=vg_p, vg_t=vg_t, dwtr_p=dwtr_p, dwtr_t=dwtr_t,
                beta_p=beta_p, beta_t=beta_t, kappa_p=kappa_p, kappa_t=kappa_t,
                eta_p=eta_p, eta_t=eta_t)


def coefficients(atom: AtomParams, fields: FieldParams, medium: MediumParams, form: str = "derived",
                 gamma_p: float | None = None, gamma_t: float | None = None) -> PropagationCoeffs:
    """Group indices, velocities, windows, dispersion, loss and XPM rates.

    ``gamma_p``/``gamma_t`` (γ units) replace γ in the transparency window of
    the respective beam when the two optical decay rates differ.
    """
    _check_form(form)
    if fields.omega_pump <= 0:
        raise ConfigError("EIT coefficients require omega_pump > 0")
    arr = _coeff_arrays(atom.delta1, atom.delta2, atom.delta3, atom.gamma_d, fields.omega_pump,
                        atom.gamma, medium, form, gamma_p, gamma_t)
    for b in ("p", "t"):
        if arr[f"ng_{b}"].real <= 0:
            warnings.warn(f"Re n_g for beam {b.upper()} is not positive (anomalous dispersion)",
                          RuntimeWarning, stacklevel=2)
    conv = {k: (complex(v) if np.iscomplexobj(v) else float(v)) for k, v in arr.items()}
    return PropagationCoeffs(length=medium.length, form=form, **conv)


def zeta(length, vg_self, vg_other, tau_other):
    """ζ = (1 − v_self/v_other)·√2·l/(v_self·τ_other)."""
    return (1.0 - vg_self / vg_other) * math.sqrt(2.0) * length / (vg_self * tau_other)


def erf_factor(z):
    """erf(ζ)/ζ, using its Taylor series near the removable singularity."""
    z = np.asarray(z, dtype=float)
    small = np.abs(z) < ERF_SERIES_CUTOFF
    safe = np.where(small, 1.0, z)
    z2 = z * z
    series = (2.0 / math.sqrt(math.pi)) * (1.0 - z2 / 3.0 + z2 * z2 / 10.0)
    out = np.where(small, series, erf(safe) / safe)
    return float(out) if out.ndim == 0 else out


def _nonlinear_phase_arrays(beam, d1, d2, d3, gd, w, rabi_other, gamma, medium: MediumParams,
                            tau_other, convention, form, vg_self, vg_other):
    beam = Beam.parse(beam)
    other = beam.other
    core = kerr_core(beam, d1, d2, d3, gd, np.asarray(w, dtype=float) ** 2, form)
    chi3 = kerr_prefactor(medium, convention, gamma) * core
    e2 = field_intensity(rabi_other, medium.dipole(other), convention, gamma)
    z = zeta(medium.length, vg_self, vg_other, tau_other)
    return (medium.k(beam) * medium.length * (math.pi**1.5 / 4.0) * e2 * erf_factor(z)
            * np.real(chi3))


def nonlinear_phase(beam, atom: AtomParams, fields: FieldParams, medium: MediumParams,
                    pulses: Pulses, convention=Convention.GAUSSIAN, form: str = "derived") -> float:
    """Nonlinear phase of a Gaussian pulse from the peak Rabi frequency of the
    other pulse, its duration and the group-velocity walk-off.

    ħ²|Ω|²/|μ|² and χ⁽³⁾ are both evaluated in the selected unit system, so
    the result does not depend on the convention.
    """
    beam = Beam.parse(beam)
    co = coefficients(atom, fields, medium, form)
    vs, vo = (co.vg_p, co.vg_t) if beam is Beam.P else (co.vg_t, co.vg_p)
    other = pulses[beam.other]
    return float(_nonlinear_phase_arrays(
        beam, atom.delta1, atom.delta2, atom.delta3, atom.gamma_d, fields.omega_pump,
        other.peak_rabi, atom.gamma, medium, other.tau, Convention.parse(convention), form, vs, vo))


# --- envelope propagation -------------------------------------------------------


@dataclass
class EnvelopeGrid:
    z: np.ndarray
    t: np.ndarray
    e_p: np.ndarray
    e_t: np.ndarray
    reference_velocity: float
    step_bounds: dict = field(default_factory=dict)

    def phases(self):
        """Accumulated phases relative to the input envelopes."""
        return (np.angle(self.e_p[-1] * np.conj(self.e_p[0])),
                np.angle(self.e_t[-1] * np.conj(self.e_t[0])))


def gaussian_envelope(t, amplitude, tau, t0=0.0):
    """Amplitude A·exp(−(t−t0)²/(2τ²)), so that |E|² has 1/e half-width τ."""
    return amplitude * np.exp(-((t - t0) ** 2) / (2.0 * tau**2))


def propagate(coeffs: PropagationCoeffs, pulses: Pulses, n_t: int = 512, t_window: float | None = None,
              n_z: int = 200, include_loss: bool = True, include_dispersion: bool = True,
              amplitudes: tuple[float, float] | None = None, eta: tuple[complex, complex] | None = None,
              snapshots: int = 2) -> EnvelopeGrid:
    """Strang split-step integration of the coupled envelope equations.

    The frame moves with the probe group velocity.  Each step applies half
    of the linear part (walk-off, loss, dispersion) in the frequency domain,
    the full XPM step, and the second linear half.  The XPM step is exact
    for real η; for complex η it is split symmetrically.
    """
    if n_t < 8 or n_z < 1:
        raise ConfigError("need n_t >= 8 and n_z >= 1")
    tau = max(pulses.probe.tau, pulses.trigger.tau)
    if t_window is None:
        t_window = 16.0 * tau
    dt = t_window / n_t
    t = (np.arange(n_t) - n_t // 2) * dt
    amp_p, amp_t = amplitudes if amplitudes is not None else (pulses.probe.peak_rabi, pulses.trigger.peak_rabi)
    e_p = gaussian_envelope(t, amp_p, pulses.probe.tau).astype(complex)
    e_t = gaussian_envelope(t, amp_t, pulses.trigger.tau).astype(complex)
    eta_p, eta_t = eta if eta is not None else (coeffs.eta_p, coeffs.eta_t)
    dz = coeffs.length / n_z
    omega = 2.0 * math.pi * np.fft.fftfreq(n_t, dt)
    walk = 1.0 / coeffs.vg_t - 1.0 / coeffs.vg_p

    def symbol(kappa, beta, s):
        out = -1j * omega * s
        if include_loss:
            out = out - kappa
        if include_dispersion:
            out = out - beta * omega**2
        return out

    half_p = np.exp(symbol(coeffs.kappa_p, coeffs.beta_p, 0.0) * dz / 2)
    half_t = np.exp(symbol(coeffs.kappa_t, coeffs.beta_t, walk) * dz / 2)

    def xpm(ep, et, h):
        if np.imag(eta_p) == 0 and np.imag(eta_t) == 0:
            ip, it = np.abs(et) ** 2, np.abs(ep) ** 2
            return ep * np.exp(1j * eta_p * ip * h), et * np.exp(1j * eta_t * it * h)
        et = et * np.exp(1j * eta_t * np.abs(ep) ** 2 * h / 2)
        ep = ep * np.exp(1j * eta_p * np.abs(et) ** 2 * h)
        et = et * np.exp(1j * eta_t * np.abs(ep) ** 2 * h / 2)
        return ep, et

    peak0 = max(np.max(np.abs(e_p)), np.max(np.abs(e_t)), 1e-300)
    keep = np.unique(np.linspace(0, n_z, max(snapshots, 2)).round().astype(int))
    zs, ps, ts = [0.0], [e_p.copy()], [e_t.copy()]
    for step in range(1, n_z + 1):
        e_p = np.fft.ifft(half_p * np.fft.fft(e_p))
        e_t = np.fft.ifft(half_t * np.fft.fft(e_t))
        e_p, e_t = xpm(e_p, e_t, dz)
        e_p = np.fft.ifft(half_p * np.fft.fft(e_p))
        e_t = np.fft.ifft(half_t * np.fft.fft(e_t))
        peak = max(np.max(np.abs(e_p)), np.max(np.abs(e_t)))
        if not np.isfinite(peak) or peak > 10.0 * peak0:
            raise InstabilityError(f"envelope norm grew by {peak / peak0:.3g} at step {step}")
        if step in keep:
            zs.append(step * dz)
            ps.append(e_p.copy())
            ts.append(e_t.copy())
    bounds = {
        "dz": dz,
        "dt": dt,
        "xpm_phase_per_step": float(max(abs(eta_p) * amp_t**2, abs(eta_t) * amp_p**2) * dz),
        "dispersion_number": float(max(abs(coeffs.beta_p), abs(coeffs.beta_t)) * dz / dt**2),
    }
    return EnvelopeGrid(np.array(zs), t, np.array(ps), np.array(ts), coeffs.vg_p, bounds)


def closed_form_xpm(t, z, eta_p, eta_t, amp_p, amp_t, tau_p, tau_t, walk):
    """Lossless, dispersionless solution for Gaussian inputs in the probe frame.

    ``walk`` is 1/v_T − 1/v_P.  Returns (E_P, E_T) at distance z.  For
    ``walk = 0`` the phases reduce to η·z·|E_other(t′)|².
    """
    t = np.asarray(t, dtype=float)
    t_src = t - walk * z  # trigger retarded time at z = 0
    if walk == 0.0:
        th_p = eta_p * amp_t**2 * z * np.exp(-(t**2) / tau_t**2)
        th_t = eta_t * amp_p**2 * z * np.exp(-(t**2) / tau_p**2)
    else:
        c_p = tau_t * math.sqrt(math.pi) / (2.0 * walk)
        th_p = eta_p * amp_t**2 * c_p * (erf(t / tau_t) - erf(t_src / tau_t))
        c_t = tau_p * math.sqrt(math.pi) / (2.0 * walk)
        th_t = eta_t * amp_p**2 * c_t * (erf(t / tau_p) - erf(t_src / tau_p))
    e_p = gaussian_envelope(t, amp_p, tau_p) * np.exp(1j * th_p)
    e_t = gaussian_envelope(t_src, amp_t, tau_t) * np.exp(1j * th_t)
    return e_p, e_t, th_p, th_t
