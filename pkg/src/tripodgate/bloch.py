"""Lindblad model of the tripod atom.

Density matrices are vectorized row-major (``rho.ravel()``), so that
vec(A X B) = kron(A, Bᵀ) vec(X).

Decay model: spontaneous emission from |0⟩ at total rate Γ with branching
ratios ``branching`` into |1⟩, |2⟩, |3⟩, plus dephasing operators √γ_d·|j⟩⟨j|
on the ground states.  These give every ground coherence a decay rate γ_d
and add γ_d/2 to the optical coherences, so Γ = 2γ − γ_d keeps the optical
coherences at exactly γ.

The matrix element ``rho[0, j]`` equals ⟨σ_j0⟩ = Tr(ρ|j⟩⟨0|), the coherence
that enters the susceptibility.
"""

from __future__ import annotations

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import expm

from .dressed import interaction_hamiltonian
from .errors import ConfigError, DegenerateSteadyStateError, NumericalError, StepSizeUnderflowError
from .params import AtomParams, Beam, Convention, FieldParams, MediumParams, POP_SYMMETRIC
from .susceptibility import linear_prefactor

EQUAL_BRANCHING = (1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0)
POPULATION_INDEX = (0, 5, 10, 15)
COHERENCE_INDEX = tuple(i for i in range(16) if i not in POPULATION_INDEX)
NULL_TOL = 1e-12

_I4 = np.eye(4)


def _proj(i: int, j: int) -> np.ndarray:
    m = np.zeros((4, 4), dtype=complex)
    m[i, j] = 1.0
    return m


def total_decay_rate(gamma_d: float) -> float:
    """Γ (γ units) such that every optical coherence decays at exactly γ."""
    return 2.0 - gamma_d


def collapse_operators(atom: AtomParams, branching=EQUAL_BRANCHING) -> list[np.ndarray]:
    if len(branching) != 3 or abs(sum(branching) - 1.0) > 1e-12 or min(branching) < 0:
        raise ConfigError("branching ratios must be three nonnegative numbers summing to 1")
    if atom.gamma_d > 2.0:
        raise ConfigError("gamma_d > 2γ cannot be represented with optical decay γ")
    big_gamma = total_decay_rate(atom.gamma_d)
    ops = [np.sqrt(big_gamma * b) * _proj(j, 0) for j, b in zip((1, 2, 3), branching) if b > 0]
    if atom.gamma_d > 0:
        ops += [np.sqrt(atom.gamma_d) * _proj(j, j) for j in (1, 2, 3)]
    return ops


def liouvillian_from(h: np.ndarray, c_ops) -> np.ndarray:
    L = -1j * (np.kron(h, _I4) - np.kron(_I4, h.T))
    for c in c_ops:
        cdc = c.conj().T @ c
        L += np.kron(c, c.conj()) - 0.5 * np.kron(cdc, _I4) - 0.5 * np.kron(_I4, cdc.T)
    return L


def build_liouvillian(atom: AtomParams, fields: FieldParams, branching=EQUAL_BRANCHING) -> np.ndarray:
    """16×16 generator of dρ/dt in γ units."""
    h = interaction_hamiltonian(fields, atom)
    return liouvillian_from(h, collapse_operators(atom, branching))


def _null_spaces(L: np.ndarray, tol: float = NULL_TOL):
    u, s, vh = np.linalg.svd(L)
    scale = max(s[0], 1.0)
    k = int(np.sum(s < tol * scale))
    right = vh[-k:].conj().T if k else np.zeros((16, 0))
    left = u[:, -k:] if k else np.zeros((16, 0))
    return right, left, s


def steady_state(atom: AtomParams, fields: FieldParams, rho0: np.ndarray | None = None,
                 branching=EQUAL_BRANCHING, tol: float = NULL_TOL) -> np.ndarray:
    """Stationary density matrix.

    When the zero eigenvalue is simple the trace-bordered linear system is
    solved directly.  When it is degenerate (for example exact two-photon
    resonance with γ_d = 0) the stationary state depends on the initial
    condition; pass ``rho0`` to obtain the t → ∞ limit starting from it, or
    a :class:`DegenerateSteadyStateError` is raised.
    """
    L = build_liouvillian(atom, fields, branching)
    right, left, _ = _null_spaces(L, tol)
    if right.shape[1] > 1:
        if rho0 is None:
            raise DegenerateSteadyStateError(
                f"stationary state not unique (null space dimension {right.shape[1]}); supply rho0")
        # spectral projector onto ker L along ran L
        proj = right @ np.linalg.solve(left.conj().T @ right, left.conj().T)
        vec = proj @ np.asarray(rho0, dtype=complex).ravel()
    else:
        A = L.copy()
        A[0, :] = _I4.ravel()
        b = np.zeros(16, dtype=complex)
        b[0] = 1.0
        vec = np.linalg.solve(A, b)
    rho = vec.reshape(4, 4)
    rho = 0.5 * (rho + rho.conj().T)
    rho /= np.trace(rho).real
    res = np.linalg.norm(L @ rho.ravel())
    if res > 1e-10 * max(1.0, np.linalg.norm(L, 2)):
        raise NumericalError(f"steady-state residual {res:.3e} too large")
    return rho


def clamped_steady_state(atom: AtomParams, fields: FieldParams,
                         populations=(0.0, POP_SYMMETRIC, 0.0, POP_SYMMETRIC),
                         branching=EQUAL_BRANCHING) -> np.ndarray:
    """Stationary coherences with the populations held fixed.

    This is the exact (non-perturbative) solution of the coherence equations
    under the population assumption behind the closed-form susceptibilities.
    """
    pops = np.asarray(populations, dtype=float)
    if pops.shape != (4,) or np.any(pops < 0) or abs(pops.sum() - 1.0) > 1e-12:
        raise ConfigError("populations must be four nonnegative numbers summing to 1")
    L = build_liouvillian(atom, fields, branching)
    ci, pi = list(COHERENCE_INDEX), list(POPULATION_INDEX)
    q = -np.linalg.solve(L[np.ix_(ci, ci)], L[np.ix_(ci, pi)] @ pops.astype(complex))
    vec = np.zeros(16, dtype=complex)
    vec[pi] = pops
    vec[ci] = q
    return vec.reshape(4, 4)


def time_evolve(atom: AtomParams, fields: FieldParams, rho0: np.ndarray, t_final: float, dt: float,
                method: str = "DOP853", branching=EQUAL_BRANCHING, rtol: float = 1e-10,
                atol: float = 1e-12) -> tuple[np.ndarray, np.ndarray]:
    """Integrate dρ/dt = Lρ and sample every ``dt`` up to ``t_final`` (1/γ units).

    ``method="expm"`` propagates exactly with the matrix exponential; any
    other value is passed to :func:`scipy.integrate.solve_ivp`.
    """
    if dt <= 0 or t_final < 0:
        raise ConfigError("need dt > 0 and t_final >= 0")
    rho0 = np.asarray(rho0, dtype=complex)
    L = build_liouvillian(atom, fields, branching)
    n = int(np.floor(t_final / dt + 1e-9)) + 1
    times = np.arange(n) * dt
    if method == "expm":
        step = expm(L * dt)
        out = np.empty((n, 16), dtype=complex)
        out[0] = rho0.ravel()
        for k in range(1, n):
            out[k] = step @ out[k - 1]
        return times, out.reshape(n, 4, 4)
    sol = solve_ivp(lambda t, y: L @ y, (0.0, times[-1]), rho0.ravel(), method=method,
                    t_eval=times, rtol=rtol, atol=atol)
    if sol.status != 0:
        raise StepSizeUnderflowError(f"integration failed: {sol.message}")
    return sol.t, sol.y.T.reshape(-1, 4, 4)


def coherence(rho: np.ndarray, beam) -> complex:
    """⟨σ_10⟩ for the probe, ⟨σ_30⟩ for the trigger."""
    return complex(rho[0, 1] if Beam.parse(beam) is Beam.P else rho[0, 3])


def chi_from_bloch(atom: AtomParams, fields: FieldParams, medium: MediumParams, beam,
                   convention=Convention.SI, populations=None, rho0=None,
                   branching=EQUAL_BRANCHING) -> complex:
    """Susceptibility from the exact stationary state, χ = −(X/γ)·⟨σ_j0⟩/Ω_j.

    ``populations=None`` uses the full steady state.  A 4-tuple holds the
    populations fixed (see :func:`clamped_steady_state`); with (0, ½, 0, ½)
    the weak-field limit reproduces the closed-form cores exactly.
    """
    beam = Beam.parse(beam)
    rabi = fields.rabi(beam)
    if rabi <= 0:
        raise ConfigError(f"Rabi frequency of beam {beam.value} must be positive")
    if populations is None:
        rho = steady_state(atom, fields, rho0=rho0, branching=branching)
    else:
        rho = clamped_steady_state(atom, fields, populations, branching)
    return complex(-linear_prefactor(medium, beam, convention, atom.gamma) * coherence(rho, beam) / rabi)


def check_density_matrix(rho: np.ndarray, tol: float = 1e-10, psd_tol: float = 1e-9) -> None:
    """Raise ``NumericalError`` unless ρ is Hermitian, unit trace and PSD."""
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise NumericalError("density matrix not Hermitian")
    if abs(np.trace(rho) - 1.0) > tol:
        raise NumericalError("density matrix trace differs from 1")
    if np.min(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))) < -psd_tol:
        raise NumericalError("density matrix not positive semidefinite")
