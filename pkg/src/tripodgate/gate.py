"""Polarization phase gate: truth table, conditional phase, the dephasing
absorption scan and Monte Carlo gate error under intensity noise.

Phases are unwrapped radians.  A basis state picks up the factor
exp(−i·phase).  Linear phases are split into the vacuum part k·l and the
excess k·l·m·Re χ⁽¹⁾, where n = 1 + m·χ; the excess is computed directly so
that it is not lost next to k·l ~ 10⁵ rad.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, PhysicsDomainError
from .params import (
    INDEX_MULTIPLIER,
    AtomParams,
    Beam,
    Convention,
    FieldParams,
    MediumParams,
    Polarization,
    Pulses,
)
from .propagation import _coeff_arrays, _nonlinear_phase_arrays
from .susceptibility import absorption, linear_core, linear_prefactor

SP, SM = Polarization.SIGMA_PLUS, Polarization.SIGMA_MINUS
# (probe polarization, trigger polarization) in table order
BASIS = ((SM, SM), (SM, SP), (SP, SP), (SP, SM))


@dataclass(frozen=True)
class PhaseShifts:
    phi0_p: float
    phi0_t: float
    lin_excess_p: float
    lin_excess_t: float
    phi_nlin_p: float
    phi_nlin_t: float
    convention: Convention
    lin_excess_si_p: float = 0.0
    lin_excess_si_t: float = 0.0

    @property
    def phi_lin_p(self) -> float:
        return self.phi0_p + self.lin_excess_p

    @property
    def phi_lin_t(self) -> float:
        return self.phi0_t + self.lin_excess_t


@dataclass(frozen=True)
class TableEntry:
    """Per-beam phase parts (vacuum, linear excess, nonlinear)."""

    probe: tuple[float, float, float]
    trigger: tuple[float, float, float]

    @property
    def vacuum(self) -> float:
        return self.probe[0] + self.trigger[0]

    @property
    def linear(self) -> float:
        return self.probe[1] + self.trigger[1]

    @property
    def nonlinear(self) -> float:
        return self.probe[2] + self.trigger[2]

    @property
    def total(self) -> float:
        return sum(self.probe) + sum(self.trigger)


@dataclass(frozen=True)
class GateTruthTable:
    entries: dict
    shifts: PhaseShifts

    def __getitem__(self, key) -> TableEntry:
        p, t = key
        return self.entries[(Polarization.parse(p), Polarization.parse(t))]

    def unitary(self) -> np.ndarray:
        return np.diag([np.exp(-1j * self[k].total) for k in BASIS])

    def as_dict(self) -> dict:
        rows = []
        for p, t in BASIS:
            e = self[(p, t)]
            rows.append({"pol_p": p.value, "pol_t": t.value, "total": e.total, "vacuum": e.vacuum,
                         "linear_excess": e.linear, "nonlinear": e.nonlinear})
        return {"convention": self.shifts.convention.value, "entries": rows,
                "conditional_phase": conditional_phase(self),
                "index_multiplier": INDEX_MULTIPLIER[self.shifts.convention]}


def phase_shifts(atom: AtomParams, fields: FieldParams, medium: MediumParams, pulses: Pulses,
                 convention=Convention.GAUSSIAN, form: str = "derived") -> PhaseShifts:
    convention = Convention.parse(convention)
    a = (atom.delta1, atom.delta2, atom.delta3, atom.gamma_d)
    w = fields.omega_pump
    kl_p, kl_t = medium.k_p * medium.length, medium.k_t * medium.length
    core_p = linear_core(Beam.P, *a, w**2, form=form)
    core_t = linear_core(Beam.T, *a, w**2, form=form)

    def excess(conv):
        m = INDEX_MULTIPLIER[conv]
        return (float(kl_p * m * np.real(linear_prefactor(medium, Beam.P, conv, atom.gamma) * core_p)),
                float(kl_t * m * np.real(linear_prefactor(medium, Beam.T, conv, atom.gamma) * core_t)))

    ex = excess(convention)
    ex_si = excess(Convention.SI)
    co = _coeff_arrays(*a, w, atom.gamma, medium, form)
    nl_p = _nonlinear_phase_arrays(Beam.P, *a, w, pulses.trigger.peak_rabi, atom.gamma, medium,
                                   pulses.trigger.tau, convention, form, co["vg_p"], co["vg_t"])
    nl_t = _nonlinear_phase_arrays(Beam.T, *a, w, pulses.probe.peak_rabi, atom.gamma, medium,
                                   pulses.probe.tau, convention, form, co["vg_t"], co["vg_p"])
    return PhaseShifts(kl_p, kl_t, ex[0], ex[1], float(nl_p), float(nl_t), convention, ex_si[0], ex_si[1])


def table_from_shifts(s: PhaseShifts) -> GateTruthTable:
    vac_p, vac_t = (s.phi0_p, 0.0, 0.0), (s.phi0_t, 0.0, 0.0)
    lin_p, lin_t = (s.phi0_p, s.lin_excess_p, 0.0), (s.phi0_t, s.lin_excess_t, 0.0)
    plus_p = (s.phi0_p, s.lin_excess_p, s.phi_nlin_p)
    minus_t = (s.phi0_t, s.lin_excess_t, s.phi_nlin_t)
    entries = {
        (SM, SM): TableEntry(vac_p, lin_t),
        (SM, SP): TableEntry(vac_p, vac_t),
        (SP, SP): TableEntry(lin_p, vac_t),
        (SP, SM): TableEntry(plus_p, minus_t),
    }
    return GateTruthTable(entries, s)


def truth_table(atom: AtomParams, fields: FieldParams, medium: MediumParams, pulses: Pulses,
                convention=Convention.GAUSSIAN, form: str = "derived") -> GateTruthTable:
    return table_from_shifts(phase_shifts(atom, fields, medium, pulses, convention, form))


def conditional_phase(table: GateTruthTable) -> float:
    """φ₊^P + φ₋^T − φ_lin^P − φ_lin^T, combined part by part so the vacuum
    and linear contributions cancel exactly."""
    plus = table[(SP, SM)]
    lin_p = table[(SP, SP)].probe
    lin_t = table[(SM, SM)].trigger
    return sum(plus.probe[i] - lin_p[i] for i in range(3)) + sum(
        plus.trigger[i] - lin_t[i] for i in range(3))


def absorption_scan(gamma_d_values, atom: AtomParams | None = None, fields: FieldParams | None = None,
                    medium: MediumParams | None = None, convention=Convention.SI) -> np.ndarray:
    """Probe absorption exponent at the window centre against γ_d.

    Uses the linear susceptibility: the Kerr lineshape is singular at the
    Raman resonance δ1 = δ3 with γ_d = 0, and a weak probe is linear anyway.
    Returns rows (γ_d, scaled absorption, raw exponent); scaled is
    normalized to the largest value in the scan.
    """
    atom = atom or AtomParams()
    fields = fields or FieldParams()
    medium = medium or MediumParams()
    gd = np.asarray(gamma_d_values, dtype=float)
    if gd.ndim != 1 or gd.size == 0 or np.any(gd < 0):
        raise ConfigError("gamma_d values must be a nonempty list of nonnegative numbers")
    core = linear_core(Beam.P, atom.delta1, atom.delta2, atom.delta3, gd, fields.omega_pump**2)
    chi = linear_prefactor(medium, Beam.P, convention, atom.gamma) * core
    raw = absorption(chi, medium.k_p, medium.length, convention) + 0.0  # no negative zero
    peak = np.max(np.abs(raw))
    scaled = raw / peak if peak > 0 else np.zeros_like(raw)
    return np.column_stack([gd, scaled, raw])


# --- Monte Carlo ------------------------------------------------------------------

FLUCTUATING = ("omega_p", "omega_t", "omega_pump")


@dataclass(frozen=True)
class NoiseModel:
    level: float = 0.01
    samples: int = 10_000
    seed: int = 0
    fluctuate: tuple = FLUCTUATING

    def __post_init__(self):
        if not (self.level >= 0 and math.isfinite(self.level)):
            raise ConfigError("noise level must be nonnegative")
        if int(self.samples) < 1:
            raise ConfigError("samples must be >= 1")
        bad = set(self.fluctuate) - set(FLUCTUATING)
        if bad:
            raise ConfigError(f"unknown fluctuating fields {sorted(bad)}")


@dataclass
class MCResult:
    mean_error: float
    sem: float
    ci95: tuple[float, float]
    n_ok: int
    n_failed: int
    dphi_std: float
    dphi_quantiles: dict
    uncorrected_error: float
    average_gate_error: float
    nominal_phase: float
    error_vs_pi: float
    dphi: np.ndarray = field(repr=False, default_factory=lambda: np.zeros(0))

    def as_dict(self) -> dict:
        out = {k: v for k, v in self.__dict__.items() if k != "dphi"}
        out["ci95"] = list(self.ci95)
        return out

    def histogram(self, bins: int = 40):
        if self.dphi.size == 0:
            return np.zeros(0), np.zeros(1)
        return np.histogram(self.dphi, bins=bins)


def draw_normals(seed: int, samples: int) -> np.ndarray:
    """Three standard normals per sample; row i depends only on (seed, i)."""
    out = np.empty((samples, 3))
    for i in range(samples):
        out[i] = np.random.default_rng(np.random.SeedSequence([seed, i])).standard_normal(3)
    return out


def _phase_arrays(atom, medium, pulses, convention, form, wp, wt, w):
    """Linear excesses and nonlinear phases for arrays of Rabi frequencies."""
    a = (atom.delta1, atom.delta2, atom.delta3, atom.gamma_d)
    m = INDEX_MULTIPLIER[convention]
    ex_p = medium.k_p * medium.length * m * np.real(
        linear_prefactor(medium, Beam.P, convention, atom.gamma) * linear_core(Beam.P, *a, w**2, form=form))
    ex_t = medium.k_t * medium.length * m * np.real(
        linear_prefactor(medium, Beam.T, convention, atom.gamma) * linear_core(Beam.T, *a, w**2, form=form))
    co = _coeff_arrays(*a, w, atom.gamma, medium, form)
    nl_p = _nonlinear_phase_arrays(Beam.P, *a, w, wt, atom.gamma, medium, pulses.trigger.tau,
                                   convention, form, co["vg_p"], co["vg_t"])
    nl_t = _nonlinear_phase_arrays(Beam.T, *a, w, wp, atom.gamma, medium, pulses.probe.tau,
                                   convention, form, co["vg_t"], co["vg_p"])
    return ex_p, ex_t, nl_p, nl_t


def _safe_phase_arrays(atom, medium, pulses, convention, form, wp, wt, w):
    try:
        return _phase_arrays(atom, medium, pulses, convention, form, wp, wt, w), np.ones(wp.shape, bool)
    except PhysicsDomainError:
        pass
    res = np.full((4, wp.size), np.nan)
    ok = np.zeros(wp.size, bool)
    for i in range(wp.size):
        try:
            res[:, i] = _phase_arrays(atom, medium, pulses, convention, form, wp[i:i + 1], wt[i:i + 1],
                                      w[i:i + 1])
            ok[i] = True
        except PhysicsDomainError:
            continue
    return tuple(res), ok


def _wrap(x):
    return (np.asarray(x) + np.pi) % (2.0 * np.pi) - np.pi


def gate_error_mc(noise: NoiseModel, atom: AtomParams, fields: FieldParams, medium: MediumParams,
                  pulses: Pulses, convention=Convention.GAUSSIAN, form: str = "derived",
                  normals: np.ndarray | None = None) -> MCResult:
    """Gate error 1 − ⟨cos²(Δφ/2)⟩ under relative intensity noise.

    Each sample scales |Ω_P|², |Ω_T|², |Ω|² by independent factors 1 + level·z.
    Δφ is the deviation of the conditional phase from its noiseless value;
    local (single-qubit) phases are treated as correctable.  Samples that
    hit a pole or a nonpositive intensity are counted as failures.
    """
    convention = Convention.parse(convention)
    n = int(noise.samples)
    z = draw_normals(noise.seed, n) if normals is None else np.asarray(normals, dtype=float)[:n]
    mask = np.array([name in noise.fluctuate for name in FLUCTUATING], dtype=float)
    mult = 1.0 + noise.level * z * mask
    positive = np.all(mult > 0, axis=1)
    base = np.array([pulses.probe.peak_rabi, pulses.trigger.peak_rabi, fields.omega_pump])
    rabi = base * np.sqrt(np.clip(mult, 0.0, None))

    nom = _phase_arrays(atom, medium, pulses, convention, form, base[:1], base[1:2], base[2:3])
    ex_p, ex_t, nl_p, nl_t = (np.full(n, np.nan) for _ in range(4))
    ok = np.zeros(n, bool)
    if positive.any():
        r = rabi[positive]
        (ep, et, npp, ntt), good = _safe_phase_arrays(
            atom, medium, pulses, convention, form, r[:, 0], r[:, 1], r[:, 2])
        ex_p[positive], ex_t[positive], nl_p[positive], nl_t[positive] = ep, et, npp, ntt
        ok[positive] = good
    ok &= np.isfinite(nl_p) & np.isfinite(nl_t)
    nominal_phase = float(nom[2][0] + nom[3][0])
    dphi = (nl_p + nl_t - nominal_phase)[ok]
    err = np.sin(dphi / 2.0) ** 2
    n_ok = int(ok.sum())
    if n_ok == 0:
        raise PhysicsDomainError("every Monte Carlo sample failed")
    mean = float(err.mean())
    sem = float(err.std(ddof=1) / math.sqrt(n_ok)) if n_ok > 1 else 0.0

    # deviations of all four table phases (vacuum parts cancel)
    dev = np.stack([
        ex_t - nom[1][0],
        np.zeros_like(ex_p),
        ex_p - nom[0][0],
        ex_p + ex_t + nl_p + nl_t - (nom[0][0] + nom[1][0] + nominal_phase),
    ])[:, ok]
    f_pro = np.abs(np.mean(np.exp(-1j * dev), axis=0)) ** 2
    quant = np.quantile(dphi, [0.05, 0.25, 0.5, 0.75, 0.95]) if dphi.size else np.zeros(5)
    vs_pi = np.sin(_wrap(nl_p[ok] + nl_t[ok] - np.pi) / 2.0) ** 2
    return MCResult(
        mean_error=mean, sem=sem, ci95=(mean - 1.96 * sem, mean + 1.96 * sem),
        n_ok=n_ok, n_failed=n - n_ok,
        dphi_std=float(dphi.std(ddof=1)) if n_ok > 1 else 0.0,
        dphi_quantiles={str(q): float(v) for q, v in zip((0.05, 0.25, 0.5, 0.75, 0.95), quant)},
        uncorrected_error=float(1.0 - f_pro.mean()),
        average_gate_error=float(1.0 - ((4.0 * f_pro + 1.0) / 5.0).mean()),
        nominal_phase=nominal_phase, error_vs_pi=float(vs_pi.mean()), dphi=dphi,
    )
