import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tripodgate.bloch import (
    build_liouvillian,
    check_density_matrix,
    chi_from_bloch,
    clamped_steady_state,
    coherence,
    steady_state,
    time_evolve,
)
from tripodgate.dressed import dark_states
from tripodgate.errors import ConfigError, DegenerateSteadyStateError
from tripodgate.params import AtomParams, Beam, FieldParams, MediumParams
from tripodgate.susceptibility import linear_core, linear_prefactor

PROBE_ONLY = (1.0, 0.0, 0.0)


def ket_dm(k):
    rho = np.zeros((4, 4), complex)
    rho[k, k] = 1.0
    return rho


@pytest.mark.parametrize("delta,w", [(0.0, 0.3), (1.5, 0.7), (-2.0, 2.0)])
def test_two_level_limit_matches_closed_form(delta, w):
    # Only the probe is on and |0> decays only to |1>: a driven two-level atom
    atom = AtomParams(delta, 0.0, 0.0)
    fields = FieldParams(w, 0.0, 0.0)
    rho = steady_state(atom, fields, rho0=ket_dm(1), branching=PROBE_ONLY)
    expected = w**2 / (delta**2 + 1.0 + 2.0 * w**2)
    assert rho[0, 0].real == pytest.approx(expected, rel=1e-10)
    # stationarity of ρ01 for the |0>,|1> pair
    sigma = 1j * w * (rho[1, 1] - rho[0, 0]) / (1.0 - 1j * delta)
    assert coherence(rho, Beam.P) == pytest.approx(sigma, rel=1e-9)


def test_free_decay_of_excited_state():
    for gd in (0.0, 0.2):
        atom = AtomParams(gamma_d=gd)
        t, rhos = time_evolve(atom, FieldParams(0, 0, 0), ket_dm(0), 3.0, 0.5)
        np.testing.assert_allclose(rhos[:, 0, 0].real, np.exp(-(2.0 - gd) * t), rtol=1e-8)


def test_coherence_decay_rates():
    rho = np.diag([0.25, 0.25, 0.25, 0.25]).astype(complex)
    rho[0, 1] = rho[1, 0] = 0.1
    rho[1, 3] = rho[3, 1] = 0.1
    atom = AtomParams(gamma_d=0.3)
    t, rhos = time_evolve(atom, FieldParams(0, 0, 0), rho, 2.0, 0.5, method="expm")
    np.testing.assert_allclose(np.abs(rhos[:, 0, 1]), 0.1 * np.exp(-t), rtol=1e-10)
    np.testing.assert_allclose(np.abs(rhos[:, 1, 3]), 0.1 * np.exp(-0.3 * t), rtol=1e-10)


def test_dark_state_is_stationary():
    fields = FieldParams(0.4, 0.9, 4.5)
    L = build_liouvillian(AtomParams(), fields)
    for e in dark_states(fields):
        v = e.amplitudes
        assert np.linalg.norm(L @ np.outer(v, v.conj()).ravel()) < 1e-12


def test_time_evolution_reaches_steady_state(ref_atom):
    fields = FieldParams(0.5, 0.5, 4.5)
    rho_ss = steady_state(ref_atom, fields)
    _, rhos = time_evolve(ref_atom, fields, ket_dm(1), 1e5, 1e5, method="expm")
    np.testing.assert_allclose(rhos[-1], rho_ss, atol=1e-8)


def test_integrators_agree(ref_atom):
    fields = FieldParams(1.0, 1.0, 4.5)
    rho0 = np.diag([0, 0.5, 0, 0.5]).astype(complex)
    _, a = time_evolve(ref_atom, fields, rho0, 5.0, 0.25)
    _, b = time_evolve(ref_atom, fields, rho0, 5.0, 0.25, method="expm")
    np.testing.assert_allclose(a, b, atol=1e-8)


def test_degenerate_steady_state_needs_initial_state():
    atom, fields = AtomParams(), FieldParams(0.2, 0.2, 4.5)
    with pytest.raises(DegenerateSteadyStateError):
        steady_state(atom, fields)
    rho0 = np.diag([0, 1 / 3, 1 / 3, 1 / 3]).astype(complex)
    rho = steady_state(atom, fields, rho0=rho0)
    _, rhos = time_evolve(atom, fields, rho0, 3000.0, 3000.0, method="expm")
    np.testing.assert_allclose(rho, rhos[-1], atol=1e-8)


def test_clamped_state_keeps_populations(ref_atom, default_fields):
    rho = clamped_steady_state(ref_atom, default_fields)
    np.testing.assert_allclose(np.diag(rho).real, [0, 0.5, 0, 0.5])
    with pytest.raises(ConfigError):
        clamped_steady_state(ref_atom, default_fields, populations=(0, 1, 1, 0))


def test_weak_field_chi_reduces_to_linear_core(ref_atom):
    medium = MediumParams()
    fields = FieldParams(1e-4, 1e-4, 4.5)
    chi = chi_from_bloch(ref_atom, fields, medium, "T", populations=(0, 0.5, 0, 0.5))
    core = linear_core(Beam.T, *ref_atom.deltas, ref_atom.gamma_d, 4.5**2)
    ref = linear_prefactor(medium, Beam.T, "si", ref_atom.gamma) * core
    assert abs(chi - ref) / abs(ref) < 1e-6


def test_lambda_limit_matches_linear_core_with_probe_population_one():
    # Trigger off, all population in |1>: the probe sees a Λ system
    atom = AtomParams(0.3, 0.1, -0.4, gamma_d=0.02)
    fields = FieldParams(1e-4, 1e-9, 2.0)
    rho = clamped_steady_state(atom, fields, populations=(0, 1, 0, 0))
    core = 2 * linear_core(Beam.P, *atom.deltas, atom.gamma_d, 4.0)
    assert -coherence(rho, Beam.P) / fields.omega_p == pytest.approx(complex(core), rel=1e-6)


def test_invalid_branching():
    with pytest.raises(ConfigError):
        build_liouvillian(AtomParams(), FieldParams(), branching=(0.5, 0.5, 0.5))


@settings(max_examples=40, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3), st.floats(0.001, 0.5),
       st.floats(0.05, 2), st.floats(0.05, 2), st.floats(0.5, 5))
def test_steady_state_is_a_density_matrix(d1, d2, d3, gd, wp, wt, w):
    rho = steady_state(AtomParams(d1, d2, d3, gamma_d=gd), FieldParams(wp, wt, w))
    check_density_matrix(rho, tol=1e-9, psd_tol=1e-9)
