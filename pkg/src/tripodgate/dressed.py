"""Tripod RWA Hamiltonian and its dressed states.

Basis ordering is (|0⟩, |1⟩, |2⟩, |3⟩) with |0⟩ the excited state, |1⟩ the
probe ground state, |2⟩ the pump ground state and |3⟩ the trigger ground
state.  Energies are in γ units with ħ = 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DegenerateInputError
from .params import AtomParams, FieldParams

DARK_TOL = 1e-10


@dataclass(frozen=True)
class DressedState:
    energy: float
    amplitudes: np.ndarray

    @property
    def is_dark(self) -> bool:
        return bool(abs(self.amplitudes[0]) < DARK_TOL)


def interaction_hamiltonian(fields: FieldParams, atom: AtomParams | None = None) -> np.ndarray:
    """Single-atom, c-number-field Hamiltonian of the tripod."""
    d1, d2, d3 = atom.deltas if atom is not None else (0.0, 0.0, 0.0)
    wp, wt, w = fields.omega_p, fields.omega_t, fields.omega_pump
    h = np.zeros((4, 4), dtype=complex)
    h[0, 0] = d1
    h[2, 2] = d1 - d2
    h[3, 3] = d1 - d3
    h[0, 1] = h[1, 0] = wp
    h[0, 3] = h[3, 0] = wt
    h[0, 2] = h[2, 0] = w
    return -h


def _fix_phase(v: np.ndarray) -> np.ndarray:
    """Make the first non-negligible amplitude real and positive."""
    idx = np.flatnonzero(np.abs(v) > 1e-12)
    if idx.size == 0:
        return v
    a = v[idx[0]]
    return v * (abs(a) / a)


def dark_states(fields: FieldParams) -> tuple[DressedState, DressedState]:
    """Closed-form dark states for δ_j = 0.

    e1 ∝ Ω_T|1⟩ − Ω_P|3⟩ and e2 ∝ ΩΩ_P|1⟩ + ΩΩ_T|3⟩ − (Ω_P²+Ω_T²)|2⟩.
    """
    wp, wt, w = fields.omega_p, fields.omega_t, fields.omega_pump
    s2 = wp**2 + wt**2
    if s2 == 0.0:
        raise DegenerateInputError("dark states undefined for Ω_P = Ω_T = 0")
    e1 = np.array([0.0, wt, 0.0, -wp], dtype=complex) / np.sqrt(s2)
    e2 = np.array([0.0, w * wp, -s2, w * wt], dtype=complex)
    e2 /= np.linalg.norm(e2)
    return DressedState(0.0, _fix_phase(e1)), DressedState(0.0, _fix_phase(e2))


def bright_states(fields: FieldParams) -> tuple[DressedState, DressedState]:
    """The two states with a |0⟩ component, energies ∓R for δ_j = 0.

    The |0⟩ amplitude carries the factor R = √(Ω_P²+Ω²+Ω_T²) needed for
    these to be exact eigenvectors.
    """
    wp, wt, w = fields.omega_p, fields.omega_t, fields.omega_pump
    r = np.sqrt(wp**2 + wt**2 + w**2)
    if r == 0.0:
        raise DegenerateInputError("bright states undefined when all Rabi frequencies vanish")
    out = []
    for sign in (+1.0, -1.0):
        v = np.array([sign * r, wp, w, wt], dtype=complex) / (np.sqrt(2.0) * r)
        # H = −H0 and H0 v = sign·R v
        out.append(DressedState(-sign * r, _fix_phase(v)))
    return out[0], out[1]


def _check_hermitian(h: np.ndarray) -> np.ndarray:
    h = np.asarray(h, dtype=complex)
    if h.shape != (4, 4):
        raise ConfigError("Hamiltonian must be 4x4")
    scale = max(1.0, float(np.max(np.abs(h))))
    if np.max(np.abs(h - h.conj().T)) > 1e-12 * scale:
        raise ConfigError("Hamiltonian is not Hermitian")
    return h


def eigensystem(h: np.ndarray, reference: list[np.ndarray] | None = None) -> list[DressedState]:
    """Eigenstates sorted by energy.

    Within a degenerate eigenspace the basis is arbitrary.  If ``reference``
    vectors are given, each degenerate block is rotated to best overlap
    them (via an orthogonal Procrustes fit).
    """
    h = _check_hermitian(h)
    evals, evecs = np.linalg.eigh(h)
    if reference is not None:
        evecs = _align_degenerate(evals, evecs, np.array(reference, dtype=complex))
    return [DressedState(float(e), _fix_phase(evecs[:, k])) for k, e in enumerate(evals)]


def _align_degenerate(evals, evecs, ref, tol=1e-9):
    evecs = evecs.copy()
    scale = max(1.0, float(np.max(np.abs(evals))))
    k = 0
    while k < len(evals):
        j = k + 1
        while j < len(evals) and abs(evals[j] - evals[k]) < tol * scale:
            j += 1
        if j - k > 1:
            block = evecs[:, k:j]
            # references that live (mostly) in this block
            proj = block.conj().T @ ref.T
            weight = np.linalg.norm(proj, axis=0)
            picks = np.argsort(weight)[::-1][: j - k]
            m = proj[:, picks]
            u, _, vh = np.linalg.svd(m)
            evecs[:, k:j] = block @ (u @ vh)
        k = j
    return evecs


def residual(h: np.ndarray, state: DressedState) -> float:
    v = state.amplitudes
    return float(np.linalg.norm(h @ v - state.energy * v))
